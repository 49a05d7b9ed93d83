#include "andbench/io.hpp"

#include <zlib.h>

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <streambuf>

namespace andbench {

namespace {

class GzipStreambuf : public std::streambuf {
 public:
  explicit GzipStreambuf(const std::filesystem::path& path)
      : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) {
      throw std::runtime_error("cannot open " + path.string());
    }
    gzbuffer(file_, 1 << 17);
  }
  ~GzipStreambuf() override { gzclose(file_); }

  GzipStreambuf(const GzipStreambuf&) = delete;
  GzipStreambuf& operator=(const GzipStreambuf&) = delete;

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    int n = gzread(file_, buffer_.data(), static_cast<unsigned>(buffer_.size()));
    if (n < 0) {
      int err = 0;
      throw std::runtime_error(std::string("gzip read error: ") + gzerror(file_, &err));
    }
    if (n == 0) return traits_type::eof();
    setg(buffer_.data(), buffer_.data(), buffer_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  gzFile file_;
  std::array<char, 1 << 16> buffer_{};
};

class GzipIstream : public std::istream {
 public:
  explicit GzipIstream(const std::filesystem::path& path)
      : std::istream(nullptr), buf_(path) {
    rdbuf(&buf_);
  }

 private:
  GzipStreambuf buf_;
};

bool has_gzip_magic(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open " + path.string());
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  return probe.gcount() == 2 && magic[0] == 0x1F && magic[1] == 0x8B;
}

}  // namespace

std::unique_ptr<std::istream> open_input(const std::filesystem::path& path) {
  if (has_gzip_magic(path)) return std::make_unique<GzipIstream>(path);
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

}  // namespace andbench
