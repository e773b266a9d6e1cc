#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include <json.hpp>

#include "dbtag/metrics.hpp"

using namespace dbtag;

namespace {

const ClassMetrics& class_of(const MetricsReport& r, const std::string& name) {
  for (size_t i = 0; i < r.class_names.size(); ++i)
    if (r.class_names[i] == name) return r.per_class[i];
  throw std::runtime_error("no class " + name);
}

std::vector<Label> labels(std::initializer_list<Label> l) { return l; }

constexpr Label T = Label::Table, C = Label::Column, V = Label::Value, O = Label::None;

}  // namespace

TEST_CASE("two-class score on the hand-counted example") {
  // gold entity tokens {0,1}, predicted {0,3}: TP=1, FP=1, FN=1.
  MetricsReport r = score(labels({T, C, O, O}), labels({T, O, O, V}), ClassGrouping::TwoClass);
  const ClassMetrics& i = class_of(r, "I");
  CHECK(i.tp == 1);
  CHECK(i.fp == 1);
  CHECK(i.fn == 1);
  CHECK(i.precision == 0.5);
  CHECK(i.recall == 0.5);
  CHECK(i.f1 == 0.5);
}

TEST_CASE("perfect prediction scores one everywhere") {
  auto gold = labels({T, C, V, O, T});
  for (ClassGrouping g :
       {ClassGrouping::FourClass, ClassGrouping::ThreeClass, ClassGrouping::TwoClass}) {
    MetricsReport r = score(gold, gold, g);
    for (size_t c = 0; c < r.per_class.size(); ++c) {
      if (r.per_class[c].support == 0) continue;
      CHECK(r.per_class[c].precision == 1.0);
      CHECK(r.per_class[c].recall == 1.0);
      CHECK(r.per_class[c].f1 == 1.0);
    }
    CHECK(r.micro.f1 == 1.0);
    CHECK(r.macro.f1 == 1.0);
  }
}

TEST_CASE("all-O prediction confusion counts") {
  MetricsReport r = score(labels({T, C, V, O}), labels({O, O, O, O}), ClassGrouping::FourClass);
  for (const char* name : {"T", "C", "V"}) {
    const ClassMetrics& m = class_of(r, name);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(m.precision == 0.0);  // zero denominator convention
    CHECK(m.support == 1);
  }
  const ClassMetrics& o = class_of(r, "O");
  CHECK(o.tp == 1);
  CHECK(o.fp == 3);
  CHECK(o.precision == 0.25);
  CHECK(o.recall == 1.0);
  CHECK(r.micro.f1 == 0.0);
}

TEST_CASE("supports sum to the token count") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<Label> gold, pred;
    std::uniform_int_distribution<size_t> n_dist(0, 40);
    size_t n = n_dist(rng);
    for (size_t i = 0; i < n; ++i) {
      gold.push_back(static_cast<Label>(lab(rng)));
      pred.push_back(static_cast<Label>(lab(rng)));
    }
    for (ClassGrouping g :
         {ClassGrouping::FourClass, ClassGrouping::ThreeClass, ClassGrouping::TwoClass}) {
      MetricsReport r = score(gold, pred, g);
      long total = 0;
      for (const ClassMetrics& m : r.per_class) {
        total += m.support;
        CHECK((m.precision >= 0.0 && m.precision <= 1.0));
        CHECK((m.recall >= 0.0 && m.recall <= 1.0));
        CHECK((m.f1 >= 0.0 && m.f1 <= 1.0));
      }
      CHECK(total == static_cast<long>(n));
      CHECK((r.micro.f1 >= 0.0 && r.micro.f1 <= 1.0));
      CHECK((r.macro.f1 >= 0.0 && r.macro.f1 <= 1.0));
    }
  }
}

TEST_CASE("score rejects length mismatches") {
  CHECK_THROWS_AS(score(labels({T}), labels({T, O}), ClassGrouping::FourClass), InputError);
}

TEST_CASE("score_corpus pools counts") {
  SECTION("singleton corpus equals score") {
    auto gold = labels({T, C, O});
    auto pred = labels({T, O, V});
    MetricsReport single = score(gold, pred, ClassGrouping::FourClass);
    MetricsReport corpus = score_corpus({{"a", gold, pred}}, ClassGrouping::FourClass);
    CHECK(single.confusion == corpus.confusion);
    CHECK(single.micro.f1 == corpus.micro.f1);
  }
  SECTION("duplicated pair leaves rates unchanged") {
    auto gold = labels({T, C, O});
    auto pred = labels({T, O, V});
    MetricsReport once = score_corpus({{"a", gold, pred}}, ClassGrouping::FourClass);
    MetricsReport twice =
        score_corpus({{"a", gold, pred}, {"b", gold, pred}}, ClassGrouping::FourClass);
    CHECK(once.micro.precision == twice.micro.precision);
    CHECK(once.micro.recall == twice.micro.recall);
    CHECK(once.micro.f1 == twice.micro.f1);
  }
  SECTION("pooled counts across two pairs") {
    MetricsReport r = score_corpus({{"a", labels({T}), labels({T})},
                                    {"b", labels({T}), labels({O})}},
                                   ClassGrouping::FourClass);
    const ClassMetrics& t = class_of(r, "T");
    CHECK(t.tp == 1);
    CHECK(t.fp == 0);
    CHECK(t.fn == 1);
    CHECK(t.precision == 1.0);
    CHECK(t.recall == 0.5);
    CHECK_THAT(t.f1, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-15));
  }
  SECTION("mismatch names the offending id") {
    try {
      score_corpus({{"good", labels({T}), labels({T})}, {"bad", labels({T}), labels({T, O})}},
                   ClassGrouping::FourClass);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("bad") != std::string::npos);
    }
  }
}

TEST_CASE("two-class counts equal pooled four-class confusion cells") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<LabelPair> pairs;
    std::uniform_int_distribution<size_t> pair_dist(1, 5), n_dist(0, 25);
    size_t n_pairs = pair_dist(rng);
    for (size_t p = 0; p < n_pairs; ++p) {
      LabelPair pair;
      pair.id = std::to_string(p);
      size_t n = n_dist(rng);
      for (size_t i = 0; i < n; ++i) {
        pair.gold.push_back(static_cast<Label>(lab(rng)));
        pair.pred.push_back(static_cast<Label>(lab(rng)));
      }
      pairs.push_back(std::move(pair));
    }
    MetricsReport four = score_corpus(pairs, ClassGrouping::FourClass);
    MetricsReport two = score_corpus(pairs, ClassGrouping::TwoClass);
    // Sum the 4-class confusion over entity/background blocks.
    long tp = 0, fp = 0, fn = 0;
    for (size_t g = 0; g < 4; ++g)
      for (size_t p = 0; p < 4; ++p) {
        bool g_ent = g < 3, p_ent = p < 3;
        long count = four.confusion[g][p];
        if (g_ent && p_ent) tp += count;
        else if (!g_ent && p_ent) fp += count;
        else if (g_ent && !p_ent) fn += count;
      }
    const ClassMetrics& i = class_of(two, "I");
    CHECK(i.tp == tp);
    CHECK(i.fp == fp);
    CHECK(i.fn == fn);
  }
}

TEST_CASE("score is invariant under consistent reordering") {
  std::mt19937 rng(88);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<Label> gold, pred;
    for (size_t i = 0; i < 20; ++i) {
      gold.push_back(static_cast<Label>(lab(rng)));
      pred.push_back(static_cast<Label>(lab(rng)));
    }
    std::vector<size_t> perm(20);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Label> gold2, pred2;
    for (size_t i : perm) {
      gold2.push_back(gold[i]);
      pred2.push_back(pred[i]);
    }
    MetricsReport a = score(gold, pred, ClassGrouping::ThreeClass);
    MetricsReport b = score(gold2, pred2, ClassGrouping::ThreeClass);
    CHECK(a.confusion == b.confusion);
  }
}

TEST_CASE("metrics JSON has fixed four-digit rates and parses back") {
  MetricsReport r = score(labels({T, C, O, O}), labels({T, O, O, V}), ClassGrouping::TwoClass);
  std::string json_text = metrics_to_json(r);
  CHECK(json_text.find("\"precision\": 0.5000") != std::string::npos);
  auto parsed = nlohmann::json::parse(json_text);
  REQUIRE(parsed.contains("2-class"));
  CHECK(parsed["2-class"]["I"]["support"] == 2);
  CHECK(parsed["2-class"]["micro"]["f1"] == 0.5);
  CHECK(parsed["2-class"].contains("macro"));
}

TEST_CASE("three-class projection merges tables and columns") {
  MetricsReport r = score(labels({T, C, V, O}), labels({C, T, V, O}), ClassGrouping::ThreeClass);
  const ClassMetrics& s = class_of(r, "S");
  CHECK(s.tp == 2);  // T/C confusions vanish inside S
  CHECK(s.fp == 0);
  CHECK(s.fn == 0);
  CHECK(r.micro.f1 == 1.0);
}
