#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "andbench/labeling.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace andbench;

namespace {

LabeledSourceDataset dataset_of(const std::string& tsv) {
  std::istringstream in(tsv);
  return load_labeled_dataset(in);
}

CorpusStore match_corpus() {
  CorpusStore::Builder b;
  b.add({.key = "a/1", .element = "article", .pub_type = PubType::journal_article, .year = 2016,
         .title = "Distortive Effects of Initial-Based Name Disambiguation.", .venue = "JASIST",
         .authors = {"Jinseok Kim", "Jana Diesner"}});
  // Two records colliding on normalized title and year, both with a
  // compatible "Wei Wang".
  b.add({.key = "c/1", .element = "inproceedings", .pub_type = PubType::conference_paper,
         .year = 2011, .title = "ADANA: Active Name Disambiguation", .venue = "ICDM",
         .authors = {"Wei Wang", "Jie Tang"}});
  b.add({.key = "c/2", .element = "inproceedings", .pub_type = PubType::conference_paper,
         .year = 2011, .title = "ADANA - active name disambiguation!", .venue = "ICDM",
         .authors = {"W. Wang"}});
  b.add({.key = "a/2", .element = "article", .pub_type = PubType::journal_article, .year = 2001,
         .title = "Collaboration networks", .venue = "PNAS", .authors = {"Mark E. J. Newman"}});
  return std::move(b).build();
}

}  // namespace

TEST(Matching, UniqueRecordIsMatched) {
  auto corpus = match_corpus();
  auto ds = dataset_of(
      "author_id\tname\ttitle\tyear\tvenue\n"
      "k1\tJ. Kim\tDistortive effects of initial-based name disambiguation\t2016\tjasist\n");
  auto result = match_labeled_records(ds, corpus, "T");
  ASSERT_EQ(result.labels.truth.size(), 1u);
  EXPECT_EQ(result.labels.truth.begin()->first, 0u);
  EXPECT_EQ(result.labels.truth.begin()->second, "k1");
  EXPECT_EQ(result.labels.match_stats.entries_matched, 1u);
  EXPECT_DOUBLE_EQ(result.labels.match_stats.match_ratio(), 1.0);
  EXPECT_EQ(result.labels.source_tag, "T");
}

TEST(Matching, CollidingRecordsProduceAmbiguityItem) {
  auto corpus = match_corpus();
  auto ds = dataset_of("author_id\tname\ttitle\tyear\nw\tWei Wang\tADANA: Active Name Disambiguation.\t2011\n");
  auto result = match_labeled_records(ds, corpus, "T");
  EXPECT_TRUE(result.labels.truth.empty());
  ASSERT_EQ(result.ambiguity.items.size(), 1u);
  const auto& item = result.ambiguity.items[0];
  ASSERT_EQ(item.candidates.size(), 2u);
  // Exhaustive scan: every record whose normalized title and year agree and
  // that carries a compatible author.
  std::set<std::string> expected;
  for (std::uint32_t r = 0; r < corpus.records().size(); ++r) {
    const auto& rec = corpus.records()[r];
    if (normalize_title(rec.title) != normalize_title(item.entry.title) || rec.year != 2011) continue;
    for (const auto& a : rec.authors) {
      if (names_compatible(parse_name(a), parse_name("Wei Wang"))) expected.insert(rec.key);
    }
  }
  std::set<std::string> got;
  for (const auto& c : item.candidates) got.insert(c.record_key);
  EXPECT_EQ(got, expected);
  EXPECT_EQ(result.labels.match_stats.ambiguous_count, 1u);

  std::ostringstream jsonl;
  write_ambiguity_jsonl(result.ambiguity, jsonl);
  auto j = nlohmann::json::parse(jsonl.str());
  EXPECT_EQ(j["candidates"].size(), 2u);
}

TEST(Matching, AutoResolvePicksMostAgreeingCandidate) {
  auto corpus = match_corpus();
  auto ds = dataset_of("author_id\tname\ttitle\tyear\nw\tWei Wang\tADANA: Active Name Disambiguation.\t2011\n");
  auto result = match_labeled_records(ds, corpus, "T", MatchOptions{.auto_resolve = true});
  ASSERT_EQ(result.labels.truth.size(), 1u);
  EXPECT_EQ(corpus.mention(result.labels.truth.begin()->first).raw_name, "Wei Wang");

  // Tied candidates stay ambiguous.
  auto tied = dataset_of("author_id\tname\ttitle\tyear\nw\tWang\tADANA: Active Name Disambiguation.\t2011\n");
  auto r2 = match_labeled_records(tied, corpus, "T", MatchOptions{.auto_resolve = true});
  EXPECT_TRUE(r2.labels.truth.empty());
  EXPECT_EQ(r2.ambiguity.items.size(), 1u);
}

TEST(Matching, PositionVenueAndYearFilters) {
  auto corpus = match_corpus();
  auto ds = dataset_of(
      "author_id\tname\ttitle\tyear\tvenue\tposition\n"
      "w\tWei Wang\tADANA: Active Name Disambiguation\t2011\tICDM\t1\n"   // c/2's W. Wang is also at 1
      "x\tJana Diesner\tDistortive effects of initial-based name disambiguation\t2016\t\t1\n"  // wrong position
      "y\tMark Newman\tCollaboration networks\t1999\t\t\n"                // wrong year
      "z\tMark Newman\tCollaboration networks\t\tNature\t\n"              // wrong venue
      "n\tM. Newman\tCollaboration networks\t\t\t\n"                      // matches
      "q\tJane Smith\tNo such title\t\t\t\n");
  auto result = match_labeled_records(ds, corpus, "T");
  const auto& s = result.labels.match_stats;
  EXPECT_EQ(s.entries_in, 6u);
  EXPECT_EQ(s.entries_matched, 1u);
  EXPECT_EQ(s.ambiguous_count, 1u);
  EXPECT_EQ(s.entries_unmatched, 4u);
  EXPECT_EQ(s.entries_matched + s.entries_unmatched + s.ambiguous_count, s.entries_in);
  EXPECT_EQ(result.labels.truth.at(5), "n");
}

TEST(Matching, ConflictingClaimsAreCounted) {
  auto corpus = match_corpus();
  auto ds = dataset_of(
      "author_id\tname\ttitle\n"
      "n1\tM. Newman\tCollaboration networks\n"
      "n1\tMark Newman\tCollaboration networks\n"
      "n2\tMark E. Newman\tCollaboration networks\n");
  auto result = match_labeled_records(ds, corpus, "T");
  EXPECT_EQ(result.labels.truth.size(), 1u);
  EXPECT_EQ(result.labels.truth.at(5), "n1");
  EXPECT_EQ(result.labels.match_stats.entries_matched, 2u);
  EXPECT_EQ(result.labels.match_stats.conflicts, 1u);
}

TEST(OrcidLabels, LinkedMentionsShareTruth) {
  CorpusStore::Builder b;
  b.add({.key = "p1", .authors = {"Ana Lee", "Bo Ng"}});
  b.add({.key = "p2", .authors = {"A. Lee"}});
  auto corpus = std::move(b).build();
  OrcidLinkage links;
  links.links = {{0, "0000-0002-1825-0097"}, {2, "0000-0002-1825-0097"}};
  auto labels = build_orcid_labels(corpus, links);
  EXPECT_EQ(labels.truth.size(), 2u);
  EXPECT_EQ(labels.truth.at(0), labels.truth.at(2));
  EXPECT_EQ(labels.distinct_authors(), 1u);
  EXPECT_EQ(labels.source_tag, "orcid");
  EXPECT_TRUE(build_orcid_labels(corpus, OrcidLinkage{}).truth.empty());
}

namespace {

struct SubsetFixture {
  CorpusStore corpus;
  MatchedLabels labels;
  BlockIndex blocks;
};

SubsetFixture subset_fixture(const std::vector<std::pair<std::string, std::string>>& named) {
  SubsetFixture fx;
  CorpusStore::Builder b;
  for (std::size_t i = 0; i < named.size(); ++i) {
    b.add({.key = "r" + std::to_string(i), .authors = {named[i].first}});
  }
  fx.corpus = std::move(b).build();
  for (std::size_t i = 0; i < named.size(); ++i) {
    fx.labels.truth.emplace(static_cast<MentionId>(i), named[i].second);
  }
  fx.labels.source_tag = "orcid";
  auto ids = fx.labels.mention_ids();
  auto refs = mention_refs(fx.corpus, ids);
  fx.blocks = build_blocks(refs);
  return fx;
}

}  // namespace

TEST(Subsets, WeiWangHomonymFixture) {
  auto fx = subset_fixture({{"Wei Wang", "X"}, {"Wei Wang", "X"}, {"Wei Wang 0002", "Y"}});
  auto homonym = extract_orcid_homonym_subset(fx.labels, fx.corpus, fx.blocks);
  EXPECT_EQ(homonym.truth.size(), 3u);
  EXPECT_EQ(homonym.truth, fx.labels.truth);
  EXPECT_TRUE(extract_orcid_synonym_subset(fx.labels, fx.corpus, fx.blocks).truth.empty());
}

TEST(Subsets, SingleAuthorBlockIsNeverHomonymous) {
  auto fx = subset_fixture({{"Wei Wang", "X"}, {"Wei Wang", "X"}});
  EXPECT_TRUE(extract_orcid_homonym_subset(fx.labels, fx.corpus, fx.blocks).truth.empty());
  // Identical strings also fail the synonym condition.
  EXPECT_TRUE(extract_orcid_synonym_subset(fx.labels, fx.corpus, fx.blocks).truth.empty());
}

TEST(Subsets, KimSynonymFixture) {
  auto fx = subset_fixture({{"J. Kim", "K"}, {"Jinseok Kim", "K"}, {"Jane Lee", "L"}});
  auto synonym = extract_orcid_synonym_subset(fx.labels, fx.corpus, fx.blocks);
  EXPECT_EQ(synonym.truth, (std::map<MentionId, std::string>{{0, "K"}, {1, "K"}}));
  SubsetOptions all_names;
  all_names.synonym_only = false;
  auto loose = extract_orcid_synonym_subset(fx.labels, fx.corpus, fx.blocks, all_names);
  EXPECT_EQ(loose.truth.size(), 3u);
}

TEST(Subsets, BlockKeyRuleTreatsWholeBlockAsMatching) {
  auto fx = subset_fixture({{"Wei Wang", "X"}, {"W. Wang", "Y"}});
  EXPECT_TRUE(extract_orcid_homonym_subset(fx.labels, fx.corpus, fx.blocks).truth.empty());
  SubsetOptions by_key;
  by_key.rule = NameMatchRule::block_key;
  EXPECT_EQ(extract_orcid_homonym_subset(fx.labels, fx.corpus, fx.blocks, by_key).truth.size(), 2u);
}

// Predicate oracle over random labeled blocks: subsets are disjoint
// projections satisfying their defining conditions.
TEST(Subsets, RandomLabelsSatisfyPredicates) {
  std::mt19937 rng(42);
  std::vector<std::pair<std::string, std::string>> named;
  std::uniform_int_distribution<int> author(0, 40);
  for (int i = 0; i < 600; ++i) {
    named.emplace_back(andbench::testing::random_name(rng), "o" + std::to_string(author(rng)));
  }
  auto fx = subset_fixture(named);
  auto homonym = extract_orcid_homonym_subset(fx.labels, fx.corpus, fx.blocks);
  SubsetOptions loose;
  loose.synonym_only = false;
  auto synonym = extract_orcid_synonym_subset(fx.labels, fx.corpus, fx.blocks, loose);
  for (const auto& [id, truth] : fx.labels.truth) {
    const auto& key = *fx.blocks.key_of(id);
    const auto& block = fx.blocks.blocks().at(key);
    std::set<std::string> authors;
    std::size_t same_name = 0;
    auto name = parse_name(fx.corpus.mention(id).raw_name).display_name;
    for (auto other : block) {
      authors.insert(fx.labels.truth.at(other));
      if (other != id && parse_name(fx.corpus.mention(other).raw_name).display_name == name) ++same_name;
    }
    bool in_h = homonym.truth.count(id) > 0, in_s = synonym.truth.count(id) > 0;
    EXPECT_EQ(in_h, authors.size() >= 2 && same_name >= 1);
    EXPECT_EQ(in_s, authors.size() == 1 && same_name == 0);
    EXPECT_FALSE(in_h && in_s);
    if (in_h) EXPECT_EQ(homonym.truth.at(id), truth);
    if (in_s) EXPECT_EQ(synonym.truth.at(id), truth);
  }
}

TEST(SelfCitation, SpecExamples) {
  CorpusStore::Builder b;
  b.add({.key = "P", .authors = {"John Smith"}});
  b.add({.key = "Q", .authors = {"J. Smith"}});
  b.add({.key = "R", .authors = {"J. Smith"}});
  b.add({.key = "S", .authors = {"John Smith", "Jane Smith"}});
  auto corpus = std::move(b).build();
  std::istringstream edges("P\tQ\nR\tS\nP\tQ\nQ\tP\nP\tnowhere\n");
  auto graph = load_citation_graph(edges, CitationFormat::edge_list);
  auto pairs = extract_self_citation_pairs(corpus, graph);
  EXPECT_EQ(pairs.pairs, (std::vector<MentionPair>{{0, 1}}));
  EXPECT_EQ(pairs.edges_unresolved, 1u);
  EXPECT_EQ(pairs.edges_used, 3u);

  std::ostringstream csv;
  write_pairs_csv(pairs, csv);
  EXPECT_EQ(csv.str(), "mention_id_a,mention_id_b\n0,1\n");
}

TEST(SelfCitation, MatchesExhaustiveOracleAndIsDirectionSymmetric) {
  std::mt19937 rng(100);
  for (int trial = 0; trial < 5; ++trial) {
    auto fx = andbench::testing::self_citation_fixture(rng);
    auto pairs = extract_self_citation_pairs(fx.corpus, fx.graph);
    auto oracle = andbench::testing::self_citation_oracle(fx.corpus, fx.graph);
    std::set<std::pair<MentionId, MentionId>> got;
    for (const auto& p : pairs.pairs) {
      ASSERT_LT(p.a, p.b);
      got.insert({p.a, p.b});
      EXPECT_EQ(blocking_key(parse_name(fx.corpus.mention(p.a).raw_name)),
                blocking_key(parse_name(fx.corpus.mention(p.b).raw_name)));
      EXPECT_NE(fx.corpus.mention(p.a).record, fx.corpus.mention(p.b).record);
    }
    EXPECT_EQ(got, oracle);
    auto back = extract_self_citation_pairs(fx.corpus, andbench::testing::reversed(fx.graph));
    EXPECT_EQ(back.pairs, pairs.pairs);
  }
}

TEST(LabelExport, CsvLayout) {
  MatchedLabels labels;
  labels.source_tag = "PENN";
  labels.truth = {{3, "a,1"}, {1, "b"}};
  std::ostringstream out;
  write_labels_csv(labels, out);
  EXPECT_EQ(out.str(), "mention_id,truth_author_id,source_tag\n1,b,PENN\n3,\"a,1\",PENN\n");
}
