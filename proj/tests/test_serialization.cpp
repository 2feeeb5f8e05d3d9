#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include "entlab/error.hpp"
#include "entlab/serialization.hpp"
#include "entlab/rng.hpp"
#include "test_support.hpp"

using namespace entlab;

TEST_CASE("decimal round trip") {
  rng::SequentialEngine e(5);
  for (int i = 0; i < 20000; ++i) {
    const double v = std::ldexp(e.open_unit(), -static_cast<int>(e() % 200));
    REQUIRE(parse_decimal(Json(format_decimal(v))) == v);
  }
  CHECK(format_decimal(0.1) == "0.1");
  CHECK(format_decimal(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_decimal(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_decimal(std::nan("")) == "nan");
  CHECK(parse_decimal(Json(0.25)) == 0.25);
  CHECK_THROWS_AS(parse_decimal(Json("0.1x")), ConfigError);
  CHECK_THROWS_AS(parse_decimal(Json(true)), ConfigError);
}

TEST_CASE("pmf and joint round trip") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Pmf p = testing::random_pmf(1 + seed % 30, seed);
    const Pmf q = pmf_from_json(Json::parse(to_json(p).dump()));
    REQUIRE(q.support_size() == p.support_size());
    for (std::size_t x = 0; x < p.support_size(); ++x) {
      REQUIRE(q.prob(x) == p.prob(x));
    }
    const JointPmf j = testing::random_joint(1 + seed % 12, seed);
    const JointPmf k = joint_from_json(Json::parse(to_json(j).dump()));
    REQUIRE(k.table() == j.table());
  }
  CHECK_THROWS_AS(pmf_from_json(Json::parse(R"({"support": 3, "probs": ["0.5", "0.5"]})")), ConfigError);
  CHECK_THROWS_AS(pmf_from_json(Json::parse(R"({"probs": ["0.5", "0.6"]})")), ConfigError);
  CHECK_THROWS_AS(pmf_from_json(Json::parse(R"({"p": []})")), ConfigError);
  CHECK_THROWS_AS(joint_from_json(Json::parse(R"({"table": [["0.5"]]})")), ConfigError);
  CHECK(joint_from_json(Json::parse(R"({"table": [[0.25, 0.25], ["0.5", 0]]})")).prob(1, 0) == 0.5);
}

TEST_CASE("hypothesis round trip") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Hypothesis h = testing::random_hypothesis(40, seed);
    REQUIRE(hypothesis_from_json(Json::parse(to_json(h).dump())) == h);
  }
  const Hypothesis sparse = Hypothesis::from_entries({{Symbol{1} << 50, 0}, {2, 0}}, 1);
  const Json j = to_json(sparse);
  CHECK(j["default"] == 1);
  CHECK(j["exceptions"].size() == 2);
  CHECK(hypothesis_from_json(j) == sparse);
  CHECK_THROWS_AS(hypothesis_from_json(Json::parse(R"({"exceptions": {}, "default": 2})")), ConfigError);
  CHECK_THROWS_AS(hypothesis_from_json(Json::parse(R"({"exceptions": {"a": 1}, "default": 0})")), ConfigError);
  CHECK_THROWS_AS(hypothesis_from_json(Json::parse(R"({"exceptions": {"1": 3}, "default": 0})")), ConfigError);
}

TEST_CASE("encoder round trip") {
  const Encoder e(3, 2, {0.1, 0.2, 0.7, 1.0 / 3.0, 1.0 / 3.0, 1.0 - 2.0 / 3.0}, 2);
  const Encoder back = encoder_from_json(Json::parse(to_json(e).dump()));
  CHECK(back == e);
  const Encoder id = Encoder::identity(5);
  CHECK(encoder_from_json(to_json(id)) == id);
  // Missing rows take the default cell.
  const Encoder partial = encoder_from_json(Json::parse(R"({"k": 2, "rows": {"2": ["0.5", "0.5"]}, "default_cell": 1})"));
  CHECK(partial.x_count() == 3);
  CHECK(partial.prob(0, 1) == 1.0);
  CHECK(partial.prob(2, 0) == 0.5);
  CHECK_THROWS_AS(encoder_from_json(Json::parse(R"({"k": 2, "rows": {"0": ["1"]}})")), ConfigError);
  CHECK_THROWS_AS(encoder_from_json(Json::parse(R"({"k": 2, "rows": {"0": ["0.5", "0.6"]}})")), ConfigError);
  CHECK_THROWS_AS(encoder_from_json(Json::parse(R"({"rows": {}})")), ConfigError);
}

TEST_CASE("spec and stats JSON") {
  const Json s = to_json(build_hteld(2.0, 0.1).spec());
  CHECK(s["gamma"] == 2.0);
  CHECK(s["log2_alpha"].get<double>() == build_hteld(2.0, 0.1).spec().log2_alpha);
  CHECK(s.contains("log2_m"));
  const Json st = to_json(EncoderStats{1.0, 0.5, 2.0});
  CHECK(st.dump() == R"({"i_xxhat":1.0,"i_yxhat":0.5,"h_xhat":2.0})");
}

TEST_CASE("dataset CSV") {
  const JointPmf j = testing::random_joint(9, 4);
  const Dataset s = sample(j, 300, 77, "unit");
  std::ostringstream out;
  write_dataset_csv(s, out);
  CHECK(out.str().rfind("x,y\n", 0) == 0);
  CHECK(out.str().find('\r') == std::string::npos);
  std::istringstream in(out.str());
  const Dataset back = read_dataset_csv(in);
  CHECK(back.pairs == s.pairs);

  for (const char* bad : {"x,z\n0,1\n", "x,y\n0,2\n", "x,y\n0\n", "x,y\n-1,0\n", "x,y\n1,0 \n", "x,y\na,1\n"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(read_dataset_csv(b), ConfigError);
  }

  const auto dir = std::filesystem::temp_directory_path() / "entlab_serialization_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "s.csv").string();
  save_dataset(s, path);
  const Dataset loaded = load_dataset(path);
  CHECK(loaded.pairs == s.pairs);
  CHECK(loaded.seed == 77);
  CHECK(loaded.source_id == "unit");
  CHECK_THROWS_AS(load_dataset((dir / "missing.csv").string()), ConfigError);
  CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), ConfigError);
  std::filesystem::remove_all(dir);
}
