#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hetkc/cli.hpp"
#include "hetkc/experiments.hpp"
#include "hetkc/graph.hpp"

using namespace hetkc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

/// Fresh scratch directory under the system temp dir.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hetkc_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& json) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << json;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// K1 column of the threshold table.
std::vector<long> threshold_K1(const std::string& table) {
  std::istringstream is(table);
  std::string line;
  std::getline(is, line);  // header
  std::vector<long> out;
  while (std::getline(is, line)) {
    std::istringstream row(line);
    long k = 0, K1 = 0;
    row >> k >> K1;
    out.push_back(K1);
  }
  return out;
}

std::size_t data_rows(const fs::path& csv) {
  std::ifstream f(csv);
  std::string line;
  std::size_t rows = 0;
  std::getline(f, line);
  while (std::getline(f, line)) rows += !line.empty();
  return rows;
}

}  // namespace

TEST_SUITE("threshold") {
  TEST_CASE("design points at n = 500") {
    const auto dir = scratch("threshold");
    const auto cfg = write_config(dir, R"({"k": [8, 10, 12, 14]})");
    const Run r = run({"threshold", "--config", cfg.string()});
    CHECK(r.code == kExitOk);
    CHECK(threshold_K1(r.out) == std::vector<long>{30, 33, 36, 38});
  }

  TEST_CASE("tiny single-class instance") {
    // Exact rationals: p(6,6,100) = 0.31696... <= log(3)/3 = 0.36620... < p(7,7,100) = 0.40818...
    const auto dir = scratch("tiny");
    const auto cfg = write_config(
        dir, R"({"n": 3, "k": [1], "alpha": 1, "mu": [1], "offsets": [0], "P": 100})");
    const Run r = run({"threshold", "--config", cfg.string()});
    CHECK(r.code == kExitOk);
    CHECK(threshold_K1(r.out) == std::vector<long>{7});
  }

  TEST_CASE("invalid class distribution is a config error naming the field") {
    const auto dir = scratch("badmu");
    const auto cfg = write_config(dir, R"({"mu": [0.5, 0.6]})");
    const Run r = run({"threshold", "--config", cfg.string()});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("mu") != std::string::npos);
    CHECK(r.out.empty());
  }

  TEST_CASE("unsatisfiable query") {
    const auto dir = scratch("unsat");
    const auto cfg = write_config(dir, R"({"P": 1000000, "alpha": 0.01, "k": [40]})");
    CHECK(run({"threshold", "--config", cfg.string()}).code == kExitUnsatisfiable);
  }
}

TEST_SUITE("config") {
  TEST_CASE("round trip through JSON") {
    RunConfig c;
    c.command = "sweep";
    c.name = "trip";
    c.mu = {0.25, 0.75};
    c.K = {3, 9};
    c.K1 = 4;
    c.alpha = 0.1 + 0.2;  // not exactly representable in short decimal
    c.k = {2, 5};
    c.sweep_variable = "alpha";
    c.sweep_values = {0.05, 1.0 / 3.0};
    c.seed = 18446744073709551615ULL;
    c.workers = 3;
    c.plot_script = true;
    CHECK(parse_config(config_to_json(c)) == c);
  }

  TEST_CASE("--print-config output re-parses to the same config") {
    const auto dir = scratch("print");
    const auto cfg = write_config(dir, R"({"n": 77, "K1": 12, "sweep_values": [1, 2]})");
    const Run first = run({"simulate", "--config", cfg.string(), "--seed", "9", "--trials", "5",
                           "--workers", "2", "--print-config"});
    REQUIRE(first.code == kExitOk);
    const RunConfig parsed = parse_config(first.out);
    CHECK(parsed.n == 77);
    CHECK(parsed.K1 == 12);
    CHECK(parsed.seed == 9);
    CHECK(parsed.trials == 5);
    CHECK(parsed.workers == 2);
    CHECK(parsed.command == "simulate");

    const auto again = write_config(scratch("print2"), first.out);
    const Run second = run({"simulate", "--config", again.string(), "--print-config"});
    CHECK(second.out == first.out);
  }

  TEST_CASE("flags override file values") {
    const auto dir = scratch("override");
    const auto cfg = write_config(dir, R"({"seed": 1, "trials": 3, "out": "a"})");
    const Run r = run({"sweep", "--config", cfg.string(), "--seed", "2", "--out", "b",
                       "--print-config"});
    const RunConfig c = parse_config(r.out);
    CHECK(c.seed == 2);
    CHECK(c.trials == 3);
    CHECK(c.out == "b");
  }

  TEST_CASE("bad configs") {
    const auto dir = scratch("badcfg");
    for (const char* text : {R"({"bogus": 1})", R"({"n": "five"})", R"({"n": 2.5})",
                             R"({"k": [0]})", R"({"trials": 0})", R"({"workers": 0})",
                             R"({"sweep_variable": "P"})", R"([1, 2])", "{not json"}) {
      const auto cfg = write_config(dir, text);
      CHECK_MESSAGE(run({"threshold", "--config", cfg.string()}).code == kExitConfig, text);
    }
    CHECK_THROWS_AS(parse_config(R"({"alpha": true})"), ConfigError);
  }

  TEST_CASE("command-line errors") {
    CHECK(run({}).code == kExitConfig);
    CHECK(run({"frobnicate"}).code == kExitConfig);
    CHECK(run({"figure"}).code == kExitConfig);
    CHECK(run({"figure", "5"}).code == kExitConfig);
    CHECK(run({"threshold", "--trials", "x"}).code == kExitConfig);
    CHECK(run({"threshold", "--config", "/nonexistent/config.json"}).code == kExitIo);
    const Run help = run({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("threshold") != std::string::npos);
  }
}

TEST_SUITE("simulate") {
  TEST_CASE("full rings and channels give kappa = n - 1") {
    const auto dir = scratch("complete");
    const auto cfg =
        write_config(dir, R"({"n": 40, "mu": [1], "K": [60], "P": 60, "alpha": 1, "k": [39, 40]})");
    const Run r = run({"simulate", "--config", cfg.string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("kappa: 39\n") != std::string::npos);
    CHECK(r.out.find("39-connected: yes") != std::string::npos);
    CHECK(r.out.find("40-connected: no") != std::string::npos);
  }

  TEST_CASE("same seed, same report; graph dump matches the report") {
    const auto dir = scratch("simulate");
    const auto cfg = write_config(dir, R"({"K1": 20, "name": "g"})");
    const std::vector<std::string> args{"simulate", "--config", cfg.string(), "--seed", "4",
                                        "--dump-graphs", "--out", dir.string()};
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    std::ifstream f(dir / "g.edges");
    const Graph g = read_edge_list(f);
    CHECK(g.size() == 500);
    CHECK(a.out.find("edges: " + std::to_string(g.edge_count()) + "\n") != std::string::npos);
    CHECK(run({"simulate", "--config", cfg.string(), "--seed", "5"}).out != a.out);
  }

  TEST_CASE("ring sizes are required") {
    CHECK(run({"simulate"}).code == kExitConfig);
  }

  TEST_CASE("unwritable output directory is an I/O error") {
    const auto dir = scratch("unwritable");
    const auto cfg = write_config(dir, R"({"K1": 20})");
    std::ofstream(dir / "file") << "x";
    const Run r = run({"simulate", "--config", cfg.string(), "--dump-graphs", "--out",
                       (dir / "file" / "sub").string()});
    CHECK(r.code == kExitIo);
  }
}

TEST_SUITE("sweeps and figures") {
  TEST_CASE("sweep writes CSV, sidecar and plot script") {
    const auto dir = scratch("sweep");
    const auto cfg = write_config(dir, R"({"name": "s", "n": 100, "P": 2000, "k": [1, 2],
                                           "sweep_values": [5, 10, 15], "trials": 8})");
    const Run r = run({"sweep", "--config", cfg.string(), "--out", dir.string(), "--plot-script"});
    REQUIRE(r.code == kExitOk);
    CHECK(data_rows(dir / "s.csv") == 6);
    CHECK(fs::exists(dir / "s.py"));
    const auto meta = nlohmann::json::parse(slurp(dir / "s.json"));
    CHECK(meta["tool"] == kToolName);
    CHECK(meta["version"] == kToolVersion);
    CHECK(meta["config"]["n"] == 100);
    CHECK(meta["curves"][0]["csv"] == "s.csv");
    CHECK(meta["curves"][0]["predicted_K1"].contains("2"));
    CHECK_FALSE(meta.contains("deletion_extension"));
  }

  TEST_CASE("alpha sweep needs ring sizes") {
    const auto dir = scratch("alpha");
    const auto cfg = write_config(dir, R"({"sweep_variable": "alpha", "sweep_values": [0.5]})");
    CHECK(run({"sweep", "--config", cfg.string(), "--out", dir.string()}).code == kExitConfig);
  }

  TEST_CASE("figure presets: one file per curve with the preset row counts") {
    const auto dir = scratch("figures");
    REQUIRE(run({"figure", "1", "--trials", "1", "--out", dir.string()}).code == kExitOk);
    for (const char* a : {"0.2", "0.4", "0.6", "0.8"}) {
      CHECK(data_rows(dir / (std::string("fig1_alpha") + a + ".csv")) == 36);
    }
    REQUIRE(run({"figure", "2", "--trials", "1", "--out", dir.string()}).code == kExitOk);
    for (int k : {4, 6, 8, 10}) {
      CHECK(data_rows(dir / ("fig2_k" + std::to_string(k) + ".csv")) == 26);
    }
    REQUIRE(run({"figure", "3", "--trials", "1", "--out", dir.string()}).code == kExitOk);
    for (const char* K : {"10_70", "20_60", "30_50", "40_40"}) {
      CHECK(data_rows(dir / (std::string("fig3_K") + K + ".csv")) == 20);
    }
    const auto meta = nlohmann::json::parse(slurp(dir / "fig1.json"));
    CHECK(meta["curves"].size() == 4);
    CHECK(meta["curves"][1]["predicted_K1"]["2"].is_number_integer());
  }

  TEST_CASE("reliability preset records its design points and deletion rule") {
    const auto dir = scratch("fig4");
    const Run r = run({"figure", "4", "--trials", "2", "--out", dir.string()});
    REQUIRE(r.code == kExitOk);
    const auto meta = nlohmann::json::parse(slurp(dir / "fig4.json"));
    std::vector<long> K1;
    for (const auto& c : meta["curves"]) K1.push_back(c["K1"].get<long>());
    CHECK(K1 == std::vector<long>{30, 33, 36, 38});
    CHECK(meta["deletion_extension"]["applied"] == true);
    CHECK(data_rows(dir / "fig4_k8.csv") == 21);
  }

  TEST_CASE("reliability subcommand with explicit rings") {
    const auto dir = scratch("reliability");
    const auto cfg = write_config(dir, R"({"name": "r", "n": 60, "K": [8, 14], "P": 600,
                                           "alpha": 0.6, "k": [3], "max_deletions": 6})");
    REQUIRE(run({"reliability", "--config", cfg.string(), "--trials", "5", "--out",
                 dir.string()})
                .code == kExitOk);
    std::ifstream f(dir / "r.csv");
    const auto s = parse_csv(f);
    CHECK(s.kind == SummaryKind::Reliability);
    CHECK(s.rows.size() == 7);
  }
}
