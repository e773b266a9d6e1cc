#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dbtag/similarity.hpp"
#include "oracles.hpp"

using namespace dbtag;

TEST_CASE("jaccard3 frozen values") {
  // {mov, ovi, vie, ies} vs {mov, ovi, vie} -> 3/4
  CHECK(jaccard3("movies", "movie") == 0.75);
  CHECK(jaccard3("titles", "titles") == 1.0);
  // {pop} vs the 8 grams of "popularity" -> 1/8
  CHECK(jaccard3("pop", "popularity") == 0.125);
}

TEST_CASE("jaccard3 edge conventions") {
  CHECK(jaccard3("", "") == 1.0);
  CHECK(jaccard3("", "abc") == 0.0);
  CHECK(jaccard3("abc", "") == 0.0);
  // short strings fall back to a singleton gram
  CHECK(jaccard3("id", "id") == 1.0);
  CHECK(jaccard3("5", "50") == 0.0);
  CHECK(jaccard3("ab", "xab") == 0.0);  // 2-char singleton never equals a 3-gram
}

TEST_CASE("levenshtein_sim frozen values") {
  CHECK_THAT(levenshtein_sim("movie", "movies"), Catch::Matchers::WithinAbs(5.0 / 6.0, 1e-12));
  CHECK(levenshtein_sim("x", "x") == 1.0);
  CHECK_THAT(levenshtein_sim("pop", "popularity"), Catch::Matchers::WithinAbs(0.3, 1e-12));
  CHECK(levenshtein_sim("", "") == 1.0);
  CHECK(levenshtein_sim("", "ab") == 0.0);
}

TEST_CASE("similarity measures agree with independent oracles") {
  std::mt19937 rng(123);
  const std::string alphabet = "abcde _19";
  std::uniform_int_distribution<size_t> len_dist(0, 12);
  std::uniform_int_distribution<size_t> chr_dist(0, alphabet.size() - 1);
  auto random_string = [&] {
    std::string s;
    size_t len = len_dist(rng);
    for (size_t i = 0; i < len; ++i) s += alphabet[chr_dist(rng)];
    return s;
  };
  for (int iter = 0; iter < 400; ++iter) {
    std::string a = random_string(), b = random_string();
    CHECK(jaccard3(a, b) == oracles::naive_jaccard3(a, b));
    CHECK(levenshtein_sim(a, b) == oracles::naive_levenshtein_sim(a, b));
  }
}

TEST_CASE("similarity properties") {
  std::mt19937 rng(321);
  const std::string alphabet = "abcXYZ 12'";
  std::uniform_int_distribution<size_t> len_dist(0, 10);
  std::uniform_int_distribution<size_t> chr_dist(0, alphabet.size() - 1);
  auto random_string = [&] {
    std::string s;
    size_t len = len_dist(rng);
    for (size_t i = 0; i < len; ++i) s += alphabet[chr_dist(rng)];
    return s;
  };
  auto upper = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  };
  for (int iter = 0; iter < 500; ++iter) {
    std::string a = random_string(), b = random_string();
    for (SimilarityMeasure m : {SimilarityMeasure::Jaccard3, SimilarityMeasure::Levenshtein}) {
      double ab = similarity(m, a, b);
      CHECK(similarity(m, b, a) == ab);            // symmetry
      CHECK((ab >= 0.0 && ab <= 1.0));             // range
      CHECK(similarity(m, upper(a), b) == ab);     // case invariance
      if (!a.empty()) CHECK(similarity(m, a, a) == 1.0);
    }
    // Identity characterizations.
    std::string fa = fold_case(a), fb = fold_case(b);
    if (levenshtein_sim(a, b) == 1.0) CHECK(fa == fb);
    if (fa == fb) CHECK(levenshtein_sim(a, b) == 1.0);
    bool gram_equal = !fa.empty() && !fb.empty() &&
                      detail::gram3_set(fa) == detail::gram3_set(fb);
    if (!fa.empty() && !fb.empty()) {
      CHECK((jaccard3(a, b) == 1.0) == gram_equal);
    }
  }
}

TEST_CASE("similarity config validation") {
  CHECK_NOTHROW(validate_config(SimilarityConfig{SimilarityMeasure::Jaccard3, 1.0}));
  CHECK_NOTHROW(validate_config(SimilarityConfig{SimilarityMeasure::Jaccard3, 0.1}));
  CHECK_THROWS_AS(validate_config(SimilarityConfig{SimilarityMeasure::Jaccard3, 0.0}),
                  InvariantError);
  CHECK_THROWS_AS(validate_config(SimilarityConfig{SimilarityMeasure::Jaccard3, 1.5}),
                  InvariantError);
  CHECK(parse_measure("jaccard3") == SimilarityMeasure::Jaccard3);
  CHECK(parse_measure("levenshtein") == SimilarityMeasure::Levenshtein);
  CHECK_FALSE(parse_measure("cosine").has_value());
}
