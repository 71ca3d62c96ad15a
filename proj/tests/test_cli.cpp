#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcommit/cli.hpp"

using namespace qcommit;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

cli::RunConfig base_config(const std::string& sub, const std::string& out) {
  cli::RunConfig cfg;
  cfg.subcommand = sub;
  cfg.seed = 5;
  cfg.restarts = 8;
  cfg.samples = 500;
  cfg.out = out;
  return cfg;
}

}  // namespace

TEST_CASE("reports are byte-identical for identical configs") {
  auto cfg = base_config("qcd-scheme", "/tmp/qcommit_test_a.json");
  CHECK(cli::run(cfg) == 0);
  const std::string first = slurp(cfg.out);
  cfg.out = "/tmp/qcommit_test_b.json";
  CHECK(cli::run(cfg) == 0);
  CHECK(first == slurp(cfg.out));
  CHECK(!first.empty());

  const json j = json::parse(first);
  CHECK(j.contains("version"));
  CHECK(j.contains("config"));
  CHECK(j.contains("results"));
  CHECK(j.contains("assertions"));
  for (const auto& a : j["assertions"]) {
    CHECK(a.contains("name"));
    CHECK(a.contains("pass"));
    CHECK(a.contains("value"));
    CHECK(a.contains("bound"));
  }
  std::remove("/tmp/qcommit_test_a.json");
  std::remove("/tmp/qcommit_test_b.json");
}

TEST_CASE("usage errors exit with code 2") {
  auto cfg = base_config("no-such-suite", "");
  CHECK(cli::run(cfg) == 2);

  cfg = base_config("repetition", "");
  cfg.k = 7;
  CHECK(cli::run(cfg) == 2);

  cfg = base_config("oracle-scaling", "");
  cfg.mu = 2.0;
  CHECK(cli::run(cfg) == 2);

  cfg = base_config("norms-suite", "");
  cfg.format = "xml";
  CHECK(cli::run(cfg) == 2);
}

TEST_CASE("repetition subcommand honours k and mu") {
  auto cfg = base_config("repetition", "/tmp/qcommit_test_rep.json");
  cfg.k = 2;
  cfg.mu = 1e-6;
  cfg.seed = 7;
  CHECK(cli::run(cfg) == 0);
  const json j = json::parse(slurp(cfg.out));
  bool found = false;
  for (const auto& a : j["assertions"]) {
    if (a["name"] == "repetition_k2_searched_vs_ideal_bound") {
      found = true;
      CHECK(a["value"].get<double>() <= 0.625 + 1e-6);
      CHECK(a["pass"].get<bool>());
    }
  }
  CHECK(found);
  std::remove(cfg.out.c_str());
}

TEST_CASE("oracle scaling emits the csv table") {
  auto cfg = base_config("oracle-scaling", "/tmp/qcommit_test_scaling.csv");
  cfg.format = "csv";
  // the statistical checks are calibrated for n ~ 1e4; a few thousand
  // samples keeps this quick while staying clear of their margins
  cfg.samples = 2500;
  const int rc = cli::run(cfg);
  CHECK(rc == 0);
  std::ifstream f(cfg.out);
  std::string header;
  std::getline(f, header);
  CHECK(header == "d,m,n,estimate,std_error,envelope");
  int rows = 0;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 15);  // d in {2,4,8} x m in {0..4}
  std::remove(cfg.out.c_str());
}

TEST_CASE("config file mirrors flags and flags override") {
  const char* cfg_path = "/tmp/qcommit_test_cfg.json";
  {
    std::ofstream f(cfg_path);
    f << R"({"subcommand": "qcd-scheme", "seed": 5, "restarts": 8,)"
      << R"( "out": "/tmp/qcommit_test_cfgout.json"})";
  }
  const char* argv1[] = {"qcommit", "--config", cfg_path};
  CHECK(cli::main_entry(3, const_cast<char**>(argv1)) == 0);
  const json j1 = json::parse(slurp("/tmp/qcommit_test_cfgout.json"));
  CHECK(j1["config"]["seed"] == 5);

  const char* argv2[] = {"qcommit", "--config", cfg_path, "--seed", "6"};
  CHECK(cli::main_entry(5, const_cast<char**>(argv2)) == 0);
  const json j2 = json::parse(slurp("/tmp/qcommit_test_cfgout.json"));
  CHECK(j2["config"]["seed"] == 6);

  std::remove(cfg_path);
  std::remove("/tmp/qcommit_test_cfgout.json");
}
