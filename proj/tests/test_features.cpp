#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "lmotif/error.hpp"
#include "lmotif/features.hpp"
#include "oracle.hpp"

using lmotif::Ratio;
using lmotif::Tokens;
using lmotif::WordSet;

namespace {

lmotif::Document doc(Tokens tokens, std::string label = "x") {
  return {std::move(tokens), std::move(label), {}, {}};
}

std::size_t v2_index(int motif, int orbit) {
  return static_cast<std::size_t>(lmotif::motif(motif).orbit_offset + orbit);
}

}  // namespace

TEST_CASE("select_top_words") {
  const std::vector<lmotif::Document> docs{doc(fixtures::hard_times_tokens())};
  CHECK(lmotif::select_top_words(docs, 1).words == std::vector<std::string>{"facts"});
  // ties broken by ascending word
  const std::vector<lmotif::Document> ab{doc({"b", "a", "b", "a"})};
  CHECK(lmotif::select_top_words(ab, 2).words == std::vector<std::string>{"a", "b"});
  CHECK(lmotif::select_top_words(ab, 1).words == std::vector<std::string>{"a"});

  try {
    lmotif::select_top_words(docs, 100);
    FAIL("expected insufficient vocabulary");
  } catch (const lmotif::Error& e) {
    CHECK(e.code() == lmotif::ErrorCode::kInsufficientVocabulary);
  }
  CHECK_THROWS_AS(lmotif::select_top_words(docs, 0), lmotif::Error);
  CHECK_THROWS_AS(lmotif::select_top_words(std::span<const lmotif::Document>{}, 1),
                  lmotif::Error);

  // frequency pooled over the selected rows only
  const std::vector<lmotif::Document> two{doc({"a", "a", "b"}), doc({"b", "b", "b"})};
  const std::vector<std::size_t> first{0};
  CHECK(lmotif::select_top_words(two, first, 1).words == std::vector<std::string>{"a"});
  CHECK(lmotif::select_top_words(two, 1).words == std::vector<std::string>{"b"});
}

TEST_CASE("V1, V2 and MFW on the Hard Times extract") {
  const auto& tokens = fixtures::hard_times_tokens();
  const auto census = lmotif::labelled_census(lmotif::build_network(tokens), nullptr);
  const WordSet facts{{"facts"}, {}};

  const auto v1 = lmotif::features_v1_exact(census, facts);
  REQUIRE(v1.size() == 13);
  CHECK(v1[1] == Ratio{5, 13});
  CHECK(v1[2] == Ratio{1, 1});
  CHECK(v1[8] == Ratio{0, 0});
  CHECK(v1[8].value() == 0.0);
  CHECK(lmotif::features_v1(census, facts)[1] == doctest::Approx(5.0 / 13.0));

  const auto v2 = lmotif::features_v2_exact(census, facts);
  REQUIRE(v2.size() == 30);
  CHECK(v2[v2_index(2, 1)] == Ratio{2, 13});  // central
  CHECK(v2[v2_index(2, 0)] == Ratio{1, 13});  // source
  CHECK(v2[v2_index(2, 2)] == Ratio{2, 13});  // sink

  CHECK(lmotif::features_mfw_exact(tokens, facts)[0] == Ratio{2, 14});
  CHECK(lmotif::features_mfw(tokens, WordSet{{"absent"}, {}})[0] == 0.0);
  CHECK(lmotif::features_mfw(Tokens{"a"}, WordSet{{"a"}, {}})[0] == 1.0);
  CHECK_THROWS_AS(lmotif::features_mfw(Tokens{}, facts), lmotif::Error);
}

TEST_CASE("toy network: V1 5/7, V2 central 3/7 and source 2/7") {
  const auto net = lmotif::WordNetwork::from_word_arcs(
      std::vector<std::pair<std::string, std::string>>{
          {"a", "the"}, {"the", "b"}, {"the", "c"}, {"the", "d"},
          {"b", "x"},   {"c", "y"},   {"p", "q"},   {"q", "r"}, {"r", "s"}});
  const auto census = lmotif::labelled_census(net, nullptr);
  const WordSet the{{"the"}, {}};
  CHECK(lmotif::features_v1_exact(census, the)[1] == Ratio{5, 7});
  const auto v2 = lmotif::features_v2_exact(census, the);
  CHECK(v2[v2_index(2, 1)] == Ratio{3, 7});
  CHECK(v2[v2_index(2, 0)] == Ratio{2, 7});
  CHECK(v2[v2_index(2, 2)] == Ratio{0, 7});
}

TEST_CASE("feature identities on random networks") {
  lmotif::Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = oracle::random_network(rng, 4 + static_cast<int>(rng.below(20)), 0.2);
    const auto census = lmotif::labelled_census(net, nullptr);
    const WordSet all{net.words(), {}};
    const auto v1 = lmotif::features_v1_exact(census, all);
    const auto v2 = lmotif::features_v2_exact(census, all);
    for (std::size_t w = 0; w < all.words.size(); ++w) {
      for (const auto& info : lmotif::motif_catalog()) {
        std::uint64_t sum = 0;
        for (int o = 0; o < info.orbit_count(); ++o) {
          sum += v2[w * 30 + v2_index(info.id, o)].num;
          CHECK(v2[w * 30 + v2_index(info.id, o)].den == census.motif_count(info.id));
        }
        CHECK(sum == v1[w * 13 + static_cast<std::size_t>(info.id - 1)].num);
      }
    }
    // summed over the whole vocabulary, V1 is 3 per present motif, V2 is the
    // orbit size
    for (const auto& info : lmotif::motif_catalog()) {
      if (census.motif_count(info.id) == 0) continue;
      std::uint64_t total = 0;
      for (std::size_t w = 0; w < all.words.size(); ++w) {
        total += v1[w * 13 + static_cast<std::size_t>(info.id - 1)].num;
      }
      CHECK(total == 3 * census.motif_count(info.id));
      const auto orbits = lmotif::orbits_of(info.id);
      for (int o = 0; o < info.orbit_count(); ++o) {
        std::uint64_t per = 0;
        for (std::size_t w = 0; w < all.words.size(); ++w) {
          per += v2[w * 30 + v2_index(info.id, o)].num;
        }
        CHECK(per == orbits[static_cast<std::size_t>(o)].size() *
                         census.motif_count(info.id));
      }
    }
  }
}

TEST_CASE("feature names and matrix CSV") {
  const WordSet ws{{"facts", "but"}, {}};
  const auto v1 = lmotif::feature_names(lmotif::FeatureVersion::kV1, ws);
  REQUIRE(v1.size() == 26);
  CHECK(v1[0] == "facts|m1");
  CHECK(v1[13] == "but|m1");
  const auto v2 = lmotif::feature_names(lmotif::FeatureVersion::kV2, ws);
  REQUIRE(v2.size() == 60);
  CHECK(v2[0] == "facts|m1|o1");
  CHECK(v2[v2_index(2, 1)] == "facts|m2|o2");
  CHECK(v2[29] == "facts|m13|o1");
  CHECK(lmotif::feature_names(lmotif::FeatureVersion::kMfw, ws) == ws.words);

  CHECK(lmotif::parse_version("lmv2") == lmotif::FeatureVersion::kV2);
  CHECK(lmotif::parse_version("mfw") == lmotif::FeatureVersion::kMfw);
  CHECK_THROWS_AS(lmotif::parse_version("v3"), lmotif::Error);

  const std::vector<lmotif::Document> docs{doc(fixtures::hard_times_tokens(), "dickens"),
                                           doc({"a", "b"}, "other")};
  const auto m = lmotif::extract_features(docs, WordSet{{"facts"}, {}},
                                          lmotif::FeatureVersion::kMfw);
  CHECK(lmotif::feature_matrix_csv(m) == "label,facts\ndickens,0.14285714285714285\nother,0\n");
  CHECK(m.column("facts") == 0);
  try {
    m.column("nope");
    FAIL("expected schema error");
  } catch (const lmotif::Error& e) {
    CHECK(e.code() == lmotif::ErrorCode::kSchema);
    CHECK(std::string(e.what()).find("facts") != std::string::npos);
  }
}

TEST_CASE("profiles reproduce direct extraction") {
  const std::vector<lmotif::Document> docs{doc(fixtures::hard_times_tokens()),
                                           doc({"facts", "but", "is", "facts", "now"})};
  const WordSet ws{{"facts", "is", "zebra"}, {}};
  for (auto v : {lmotif::FeatureVersion::kV1, lmotif::FeatureVersion::kV2,
                 lmotif::FeatureVersion::kMfw}) {
    const auto one = lmotif::extract_features(docs, ws, v, 1);
    const auto many = lmotif::extract_features(docs, ws, v, 3);
    CHECK(one.rows == many.rows);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const auto census = lmotif::labelled_census(lmotif::build_network(docs[d].tokens), nullptr);
      const auto direct = v == lmotif::FeatureVersion::kV1   ? lmotif::features_v1(census, ws)
                          : v == lmotif::FeatureVersion::kV2 ? lmotif::features_v2(census, ws)
                                                             : lmotif::features_mfw(docs[d].tokens, ws);
      CHECK(one.rows[d] == direct);
    }
  }
}
