#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "semcomm/experiment.hpp"
#include "semcomm/io.hpp"

using namespace semcomm;
namespace fs = std::filesystem;

namespace {

const char* kStory =
    "# two friends\n"
    "Likes(Alice, Apple)\n"
    "IsFriend(Alice, Bob)\n"
    "Owns(Bob, Car)\n"
    "Likes(Bob, Car)\n"
    "Owns(Alice, Apple)\n"
    "Drives(Bob, Car)\n"
    "Tall(Bob)\n";

fs::path scratch(const std::string& name) {
  fs::path dir = fs::path(SEMCOMM_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

RunConfig config_in(const fs::path& dir) {
  RunConfig cfg;
  cfg.output_dir = dir / "out";
  return cfg;
}

}  // namespace

TEST_CASE("analyze a single story") {
  auto dir = scratch("analyze_one");
  write(dir / "story1.fol", kStory);
  std::ostringstream out, err;
  REQUIRE(cmd_analyze({dir}, config_in(dir), out, err) == 0);
  const std::string table = read_file(dir / "out" / "entropy_table.csv");
  CHECK(table.rfind("source_id,H_cont_normalized,H_cont_min_scaled,H_cont_max_scaled\n", 0) == 0);
  CHECK(table.find("story1.fol,") != std::string::npos);
  auto report = Json::parse(read_file(dir / "out" / "reports" / "story1.json"));
  CHECK(report["H_cont_min_scaled"]["log10_mag"].get<double>() == doctest::Approx(0.0));
  CHECK(report["H_cont_max_scaled"]["log10_mag"].get<double>() == doctest::Approx(0.0));
  CHECK(report["H_cont_raw"]["sign"] == 1);
  auto summary = Json::parse(read_file(dir / "out" / "analysis.json"));
  CHECK(summary["most_informative"] == "story1.fol");
}

TEST_CASE("analyze orders sources and scales against the extremes") {
  auto dir = scratch("analyze_many");
  write(dir / "story2.fol", "Likes(Alice, Apple)\n");
  write(dir / "story10.fol", kStory);
  write(dir / "story1.fol", "Likes(Alice, Apple)\nOwns(Bob, Car)\nTall(Carol)\n");
  std::ostringstream out, err;
  REQUIRE(cmd_analyze({dir}, config_in(dir), out, err) == 0);
  const std::string table = read_file(dir / "out" / "entropy_table.csv");
  CHECK(table.find("story1.fol") < table.find("story2.fol"));
  CHECK(table.find("story2.fol") < table.find("story10.fol"));
}

TEST_CASE("analyze rejects an empty directory") {
  auto dir = scratch("analyze_empty");
  std::ostringstream out, err;
  CHECK(cmd_analyze({dir}, config_in(dir), out, err) == 2);
  CHECK_FALSE(err.str().empty());
}

TEST_CASE("analyze reports parse errors with a nonzero exit") {
  auto dir = scratch("analyze_bad");
  write(dir / "bad.fol", "Likes(Alice Apple)\n");
  std::ostringstream out, err;
  CHECK(cmd_analyze({dir}, config_in(dir), out, err) == 1);
  CHECK(err.str().find("bad.fol") != std::string::npos);
}

TEST_CASE("compress and decompress reproduce the normalized file") {
  auto dir = scratch("roundtrip");
  auto in = write(dir / "s.fol", kStory);
  auto cfg = config_in(dir);
  std::ostringstream out, err;
  REQUIRE(cmd_compress(in, cfg, out, err) == 0);
  REQUIRE(fs::exists(dir / "out" / "s.semc"));
  auto stats = Json::parse(read_file(dir / "out" / "s.compress.json"));
  CHECK(stats.contains("semantic_bits"));
  REQUIRE(cmd_decompress(dir / "out" / "s.semc", dir / "back.fol", cfg, out, err) == 0);
  CHECK(read_file(dir / "back.fol") == load_evidence(in).evidence.normalized_text());

  const std::string bytes = read_file(dir / "out" / "s.semc");
  write(dir / "cut.semc", bytes.substr(0, bytes.size() - 3));
  std::ostringstream err2;
  CHECK(cmd_decompress(dir / "cut.semc", dir / "never.fol", cfg, out, err2) != 0);
  CHECK(err2.str().find("checksum") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "never.fol"));
}

TEST_CASE("compress picks up a sibling text file") {
  auto dir = scratch("sibling");
  auto in = write(dir / "s.fol", kStory);
  write(dir / "s.txt", "Alice likes apples. Bob, her friend, owns a car he likes and drives. Bob is tall.\n");
  std::ostringstream out, err;
  REQUIRE(cmd_compress(in, config_in(dir), out, err) == 0);
  auto stats = Json::parse(read_file(dir / "out" / "s.compress.json"));
  CHECK(stats["baseline_source"].get<std::string>().rfind("text:", 0) == 0);
}

TEST_CASE("lossy with a zero beta grid gives one zero-rate point") {
  auto dir = scratch("lossy_zero");
  auto in = write(dir / "s.fol", kStory);
  auto cfg = config_in(dir);
  cfg.beta_grid = {0.0};
  std::ostringstream out, err;
  REQUIRE(cmd_lossy(in, cfg, out, err) == 0);
  std::istringstream csv(read_file(dir / "out" / "s_rd.csv"));
  std::string header, row, extra;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header == "beta,rate_bits,cont_info_normalized,relative_informativeness,on_frontier");
  CHECK(row.rfind("0,0,", 0) == 0);
  CHECK_FALSE(std::getline(csv, extra));
}

TEST_CASE("lossy reports an infeasible target") {
  auto dir = scratch("lossy_infeasible");
  auto in = write(dir / "s.fol", kStory);
  auto cfg = config_in(dir);
  cfg.d_star = 1.0;
  std::ostringstream out, err;
  CHECK(cmd_lossy(in, cfg, out, err) == 1);
  CHECK(err.str().find("max achievable") != std::string::npos);
}

TEST_CASE("pac command") {
  std::ostringstream out, err;
  CHECK(cmd_pac(2, 0, std::nullopt, 1e-3, out, err) == 0);
  CHECK(out.str().find("\nn_0=10\n") != std::string::npos);
  std::ostringstream o1, e1;
  CHECK(cmd_pac(1, 0, 0.5, std::nullopt, o1, e1) == 0);
  CHECK(o1.str().find("\nn_0=1\n") != std::string::npos);
  std::ostringstream o2, e2;
  CHECK(cmd_pac(2, 0, 1.5, std::nullopt, o2, e2) == 2);
  std::ostringstream o3, e3;
  CHECK(cmd_pac(2, 0, 0.5, 0.5, o3, e3) == 2);
}

TEST_CASE("converge on a synthetic stream") {
  auto dir = scratch("converge");
  auto cfg = config_in(dir);
  cfg.seed = 3;
  std::ostringstream out, err;
  REQUIRE(cmd_converge(std::nullopt, SyntheticSpec{4, 2, 2000}, cfg, out, err) == 0);
  CHECK(out.str().find("eventually_monotone=1") != std::string::npos);
  CHECK(out.str().find("crossing_n(0.99)=0 ") == std::string::npos);
}

TEST_CASE("runs are deterministic") {
  auto dir = scratch("determinism");
  write(dir / "a.fol", kStory);
  auto c1 = config_in(dir);
  auto c2 = c1;
  c2.output_dir = dir / "out2";
  std::ostringstream o1, e1, o2, e2;
  REQUIRE(cmd_analyze({dir / "a.fol"}, c1, o1, e1) == 0);
  REQUIRE(cmd_analyze({dir / "a.fol"}, c2, o2, e2) == 0);
  CHECK(read_file(dir / "out" / "analysis.json") == read_file(dir / "out2" / "analysis.json"));
}

TEST_CASE("json triple loader") {
  std::istringstream in(R"([["Likes", "Alice", "Apple"], ["Tall", "Bob"],
                            {"predicate": "Owns", "subject": "Bob", "object": "Car", "negated": true}])");
  auto loaded = load_evidence(in, "t.json");
  CHECK(loaded.loader == "json-triples");
  CHECK(loaded.evidence.normalized_text() == "Likes(Alice, Apple)\nTall(Bob)\n!Owns(Bob, Car)\n");
  std::istringstream wrapped(R"({"triples": [["is friend of", "Alice", "Bob"]]})");
  auto w = load_evidence(wrapped, "w.json");
  CHECK(w.evidence.size() == 1);
  std::istringstream lines("Likes(Alice, Apple)\n");
  CHECK(load_evidence(lines, "l").loader == "lines");
}

TEST_CASE("invalid configuration is a usage error") {
  RunConfig cfg;
  cfg.beta_grid = {2.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  RunConfig neg;
  neg.d_star = -1.0;
  CHECK_THROWS_AS(neg.validate(), UsageError);
  const auto grid = default_beta_grid();
  CHECK(grid.front() == 0.0);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
}
