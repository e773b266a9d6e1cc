#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "dbtag/pipeline.hpp"

using namespace dbtag;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("dbtag-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::string file(const std::string& name, const std::string& content) const {
    fs::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
};

AnnotatedRecord movie_record() {
  RawPair pair{"m0", "Name movie titles released in 1945, and order by popularity",
               "SELECT title FROM movies WHERE year = 1945 ORDER BY pop"};
  return to_record(pair.id, annotate(pair, {SimilarityMeasure::Jaccard3, 0.1}));
}

}  // namespace

TEST_CASE("load_pairs reads the three dataset layouts") {
  TempDir dir;
  SECTION("spider array") {
    auto path = dir.file("spider.json", R"([{"question":"Q","query":"SELECT 1"}])");
    auto pairs = load_pairs(path, DatasetFormat::SpiderJson);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].id == "0");
    CHECK(pairs[0].question == "Q");
    CHECK(pairs[0].sql == "SELECT 1");
  }
  SECTION("bird array with SQL key and question_id") {
    auto path = dir.file(
        "bird.json", R"([{"question_id": 42, "question":"Q", "SQL":"SELECT 1"}])");
    auto pairs = load_pairs(path, DatasetFormat::BirdJson);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].id == "42");
    CHECK(pairs[0].sql == "SELECT 1");
  }
  SECTION("generic jsonl") {
    auto path = dir.file("generic.jsonl",
                         "{\"id\":\"a\",\"question\":\"Q1\",\"sql\":\"SELECT 1\"}\n"
                         "{\"question\":\"Q2\",\"sql\":\"SELECT 2\"}\n");
    auto pairs = load_pairs(path, DatasetFormat::GenericJsonl);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].id == "a");
    CHECK(pairs[1].id == "1");  // index fallback
  }
}

TEST_CASE("load_pairs rejects malformed input with positions") {
  TempDir dir;
  SECTION("missing sql field names the line") {
    auto path = dir.file("bad.jsonl", "{\"question\":\"Q\"}\n");
    try {
      load_pairs(path, DatasetFormat::GenericJsonl);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      std::string msg = e.what();
      CHECK(msg.find(":1") != std::string::npos);
      CHECK(msg.find("sql") != std::string::npos);
    }
  }
  SECTION("malformed json is fatal") {
    auto path = dir.file("bad.json", "[{\"question\": }]");
    CHECK_THROWS_AS(load_pairs(path, DatasetFormat::SpiderJson), InputError);
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(load_pairs((dir.path / "nope.json").string(), DatasetFormat::SpiderJson),
                    InputError);
  }
  SECTION("spider record missing query names the index") {
    auto path = dir.file("s.json", R"([{"question":"Q","query":"SELECT 1"},{"question":"X"}])");
    try {
      load_pairs(path, DatasetFormat::SpiderJson);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("record 1") != std::string::npos);
    }
  }
}

TEST_CASE("load_gold accepts tokens or a question and validates agreement") {
  TempDir dir;
  SECTION("tokens with labels") {
    auto path = dir.file("gold.jsonl",
                         R"({"id":"g","tokens":["show","year"],"labels":["O","C"],"sql":"SELECT year FROM t"})"
                         "\n");
    auto gold = load_gold(path, true);
    REQUIRE(gold.size() == 1);
    CHECK(gold[0].tokens == std::vector<std::string>{"show", "year"});
    CHECK(gold[0].labels == std::vector<Label>{Label::None, Label::Column});
    CHECK(gold[0].sql == "SELECT year FROM t");
  }
  SECTION("question instead of tokens") {
    auto path = dir.file("gold.jsonl",
                         R"({"question":"show year 1945,","labels":["O","C","V","O"]})" "\n");
    auto gold = load_gold(path, false);
    REQUIRE(gold.size() == 1);
    CHECK(gold[0].tokens == std::vector<std::string>{"show", "year", "1945", ","});
  }
  SECTION("disagreeing tokens and question") {
    auto path = dir.file("gold.jsonl",
                         R"({"question":"show year","tokens":["showyear"],"labels":["O"]})" "\n");
    CHECK_THROWS_AS(load_gold(path, false), InputError);
  }
  SECTION("label/token length mismatch") {
    auto path = dir.file("gold.jsonl", R"({"tokens":["a","b"],"labels":["O"]})" "\n");
    CHECK_THROWS_AS(load_gold(path, false), InputError);
  }
  SECTION("missing sql rejected only when required") {
    auto path = dir.file("gold.jsonl", R"({"tokens":["a"],"labels":["O"]})" "\n");
    CHECK_NOTHROW(load_gold(path, false));
    CHECK_THROWS_AS(load_gold(path, true), InputError);
  }
  SECTION("bad label string") {
    auto path = dir.file("gold.jsonl", R"({"tokens":["a"],"labels":["Q"]})" "\n");
    CHECK_THROWS_AS(load_gold(path, false), InputError);
  }
}

TEST_CASE("the movie record serializes with the expected labels and tags") {
  AnnotatedRecord rec = movie_record();
  std::string line = record_to_json(rec);
  auto parsed = nlohmann::ordered_json::parse(line);
  std::vector<std::string> labels = parsed["labels"].get<std::vector<std::string>>();
  CHECK(labels == std::vector<std::string>{"O", "T", "C", "O", "O", "V", "O", "O", "O", "O",
                                           "C"});
  CHECK(parsed["tag_ids"] ==
        "<id_0> <id_1> <id_2> <id_0> <id_0> <id_3> <id_0> <id_0> <id_0> <id_0> <id_2>");
  // Fixed key order.
  std::vector<std::string> keys;
  for (auto it = parsed.begin(); it != parsed.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"id", "tokens", "labels", "entities", "tag_ids"});
  REQUIRE(parsed["entities"].size() == 4);
  CHECK(parsed["entities"][0]["text"] == "movie");
  CHECK(parsed["entities"][0]["entity"] == "movies");
  CHECK(parsed["entities"][0]["type"] == "T");
  CHECK(parsed["entities"][0]["start"] == 1);
  CHECK(parsed["entities"][0]["end"] == 2);
  CHECK(parsed["entities"][0]["score"] == 0.75);
}

TEST_CASE("tag id strings have one marker per token") {
  CHECK(tag_id_string({}) == "");
  CHECK(tag_id_string({Label::None}) == "<id_0>");
  CHECK(tag_id_string({Label::Table, Label::Value}) == "<id_1> <id_3>");
}

TEST_CASE("write then read annotations preserves every field") {
  TempDir dir;
  std::vector<AnnotatedRecord> records = {movie_record()};
  {
    RawPair pair{"empty", "nothing matches here", "SELECT zz FROM qq"};
    records.push_back(to_record(pair.id, annotate(pair, {SimilarityMeasure::Jaccard3, 0.9})));
  }
  auto path = (dir.path / "out.jsonl").string();
  write_annotations(records, path);
  auto loaded = read_annotations(path);
  REQUIRE(loaded.size() == records.size());
  CHECK(loaded == records);
  // Re-serialization is byte-identical.
  std::ostringstream first, second;
  write_annotations(records, first);
  write_annotations(loaded, second);
  CHECK(first.str() == second.str());

  SECTION("empty write produces an empty file") {
    auto empty_path = (dir.path / "empty.jsonl").string();
    write_annotations({}, empty_path);
    CHECK(detail::read_file(empty_path).empty());
  }
}

TEST_CASE("label stats count and format like the split table") {
  AnnotatedRecord rec;
  rec.id = "s";
  rec.tokens = {"a", "b", "c", "d"};
  rec.labels = {Label::Table, Label::Column, Label::Value, Label::None};
  rec.tag_ids = tag_id_string(rec.labels);
  LabelStats stats = collect_stats({rec});
  CHECK(stats.table == 1);
  CHECK(stats.column == 1);
  CHECK(stats.value == 1);
  CHECK(stats.none == 1);
  CHECK(stats.total() == 4);
  std::string text = format_stats(stats);
  CHECK(text.find("Table") != std::string::npos);
  CHECK(text.find("25.0") != std::string::npos);
  CHECK(text.find("100.0") != std::string::npos);

  // Percentages over a skewed distribution still sum to ~100.
  AnnotatedRecord skew;
  skew.id = "k";
  for (int i = 0; i < 3; ++i) {
    skew.tokens.push_back("t");
    skew.labels.push_back(i == 0 ? Label::Table : Label::None);
  }
  LabelStats s2 = collect_stats({rec, skew});
  double sum = 0;
  for (long n : {s2.table, s2.column, s2.value, s2.none})
    sum += 100.0 * n / s2.total();
  CHECK_THAT(sum, Catch::Matchers::WithinAbs(100.0, 1e-9));
}

TEST_CASE("stats of an empty record set stay finite") {
  LabelStats stats = collect_stats({});
  CHECK(stats.total() == 0);
  std::string text = format_stats(stats);
  CHECK(text.find("Total") != std::string::npos);
}

TEST_CASE("dataset format names parse") {
  CHECK(parse_dataset_format("spider") == DatasetFormat::SpiderJson);
  CHECK(parse_dataset_format("bird") == DatasetFormat::BirdJson);
  CHECK(parse_dataset_format("jsonl") == DatasetFormat::GenericJsonl);
  CHECK_FALSE(parse_dataset_format("csv").has_value());
}
