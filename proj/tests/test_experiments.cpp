#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hetkc/experiments.hpp"
#include "hetkc/graphgen.hpp"

using namespace hetkc;

namespace {

ExperimentSpec small_sweep() {
  ExperimentSpec s;
  s.name = "small";
  s.base = NetworkParams{120, {0.5, 0.5}, {}, 2000, 0.5};
  s.sweep = {SweepVariable::K1, {4, 6, 8, 10, 12}, {0, 5}};
  s.ks = {1, 2, 3};
  s.trials = 30;
  s.master_seed = 17;
  return s;
}

std::string csv_text(const SweepSummary& s) {
  std::ostringstream os;
  write_csv(os, s);
  return os.str();
}

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

/// Two K4 blocks {0..3} and {6..9} both joined to the separator {4, 5}.
Graph two_blocks() {
  std::vector<Edge> e;
  for (NodeId base : {0u, 6u}) {
    for (NodeId i = 0; i < 4; ++i) {
      for (NodeId j = i + 1; j < 4; ++j) e.emplace_back(base + i, base + j);
      e.emplace_back(base + i, 4);
      e.emplace_back(base + i, 5);
    }
  }
  return Graph::from_edges(10, e);
}

}  // namespace

TEST_SUITE("experiment definition") {
  TEST_CASE("sweep points and trial seeds") {
    const auto s = small_sweep();
    CHECK(s.points() == 5);
    CHECK(s.params_at(2).K == std::vector<std::int64_t>{8, 13});
    CHECK(s.sweep_value(4) == 12.0);
    CHECK(trial_seed(9, 3, 7) == RngSeed{9, (std::uint64_t{3} << 32) + 7});
  }

  TEST_CASE("validation") {
    auto s = small_sweep();
    s.trials = 0;
    CHECK_THROWS_AS(s.validate(), InvalidParams);
    s = small_sweep();
    s.sweep.values.push_back(2000);  // K2 = 2005 > P
    CHECK_THROWS_AS(s.validate(), InvalidParams);
    s = small_sweep();
    s.sweep.values = {4.5};
    CHECK_THROWS_AS(s.validate(), InvalidParams);
    s = small_sweep();
    s.sweep.offsets = {1, 5};
    CHECK_THROWS_AS(s.validate(), InvalidParams);
    s = small_sweep();
    s.ks = {};
    CHECK_THROWS_AS(s.validate(), InvalidParams);
  }
}

TEST_SUITE("transition sweep") {
  TEST_CASE("full visibility gives certain 2-connectivity") {
    ExperimentSpec s;
    s.name = "full";
    s.base = NetworkParams{20, {1.0}, {50}, 50, 1.0};
    s.sweep = {SweepVariable::Alpha, {1.0}, {}};
    s.trials = 10;
    const auto sum = run_transition_sweep(s);
    REQUIRE(sum.rows.size() == 1);
    CHECK(sum.rows[0].prob() == 1.0);
  }

  TEST_CASE("rows, Whitney checks and agreement with kappa") {
    auto s = small_sweep();
    s.compute_kappa = true;
    std::vector<TrialResult> trials;
    const auto sum = run_transition_sweep(s, {}, &trials);
    CHECK(sum.rows.size() == 5 * 3);
    CHECK(trials.size() == 5 * 30);
    for (const auto& t : trials) {
      REQUIRE(t.kappa.has_value());
      CHECK(*t.kappa <= t.min_degree);
      for (std::size_t q = 0; q < s.ks.size(); ++q) CHECK(t.k_connected[q] == (*t.kappa >= s.ks[q]));
    }
    for (const auto& r : sum.rows) {
      CHECK(r.successes <= r.trials);
      CHECK(r.prob() >= 0.0);
      CHECK(r.prob() <= 1.0);
    }
    CHECK(sum.predicted_K1.size() == 3);
  }

  TEST_CASE("output is independent of the worker count") {
    const auto s = small_sweep();
    std::vector<TrialResult> one, four;
    const auto a = run_transition_sweep(s, {1}, &one);
    const auto b = run_transition_sweep(s, {4}, &four);
    CHECK(csv_text(a) == csv_text(b));
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].k_connected == four[i].k_connected);
  }

  TEST_CASE("different master seeds give different samples") {
    auto s = small_sweep();
    const auto a = csv_text(run_transition_sweep(s));
    s.master_seed = 18;
    CHECK(a != csv_text(run_transition_sweep(s)));
  }

  TEST_CASE("empirical crossing") {
    SweepSummary s;
    s.rows = {{1, 2, 10, 1}, {2, 2, 10, 4}, {3, 2, 10, 5}, {4, 2, 10, 9}, {2, 3, 10, 8}};
    CHECK(empirical_crossing(s, 2) == 3.0);
    CHECK(empirical_crossing(s, 3) == 2.0);
    CHECK_FALSE(empirical_crossing(s, 4).has_value());
  }

  TEST_CASE("Wilson half-width against a reference implementation") {
    // statsmodels proportion_confint(method="wilson"), (upper - lower) / 2.
    CHECK(wilson_half_width(100, 200) == doctest::Approx(0.06863914039610816).epsilon(1e-12));
    CHECK(wilson_half_width(0, 200) == doctest::Approx(0.00942266318863329).epsilon(1e-12));
    CHECK(wilson_half_width(190, 200) == doctest::Approx(0.031097751269006046).epsilon(1e-12));
    CHECK(wilson_half_width(7, 20) == doctest::Approx(0.19297694960684086).epsilon(1e-12));
    CHECK(wilson_half_width(0, 0) == 0.0);
  }
}

TEST_SUITE("reliability") {
  TEST_CASE("deletion curve on a graph with a known separator") {
    const Graph g = two_blocks();
    const CutResult cut = vertex_connectivity(g);
    REQUIRE(cut.kappa == 2);
    REQUIRE(cut.cut_nodes == std::vector<NodeId>{4, 5});
    const auto c = deletion_curve(g, cut, 8);
    CHECK(c == std::vector<bool>{true, true, false, false, false, false, false, false, false});
    CHECK_THROWS_AS(deletion_curve(g, cut, 10), std::invalid_argument);
  }

  TEST_CASE("complete graphs survive every deletion") {
    const Graph g = Graph::complete(6);
    const auto c = deletion_curve(g, vertex_connectivity(g), 5);
    CHECK(std::all_of(c.begin(), c.end(), [](bool b) { return b; }));
  }

  TEST_CASE("disconnected graphs fail at zero deletions") {
    const Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}});
    CHECK(deletion_curve(g, vertex_connectivity(g), 2) == std::vector<bool>{false, false, false});
  }

  TEST_CASE("curves are monotone per trial below n - 1") {
    const NetworkParams p{80, {0.5, 0.5}, {6, 12}, 500, 0.6};
    for (std::uint64_t s = 0; s < 30; ++s) {
      const Graph g = sample_intersection_model(p, {2, s});
      const auto c = deletion_curve(g, vertex_connectivity(g), 40);
      for (std::size_t d = 1; d < c.size(); ++d) CHECK((c[d - 1] || !c[d]));
    }
  }

  TEST_CASE("experiment rows, monotone aggregate and determinism") {
    ExperimentSpec s;
    s.name = "rel";
    s.base = NetworkParams{100, {0.5, 0.5}, {8, 14}, 600, 0.6};
    s.ks = {3};
    s.trials = 40;
    s.master_seed = 5;
    const auto a = run_reliability_experiment(s, 12, {1});
    const auto b = run_reliability_experiment(s, 12, {3});
    CHECK(csv_text(a) == csv_text(b));
    REQUIRE(a.rows.size() == 13);
    for (std::size_t d = 0; d < a.rows.size(); ++d) {
      CHECK(a.rows[d].sweep_value == double(d));
      CHECK(a.rows[d].k == 3);
      if (d > 0) CHECK(a.rows[d].successes <= a.rows[d - 1].successes);
    }
    CHECK(a.warnings.empty());
    CHECK_THROWS_AS(run_reliability_experiment(s, 100), InvalidParams);
  }
}

TEST_SUITE("csv") {
  TEST_CASE("empty summary writes only the header") {
    SweepSummary s;
    s.experiment = "none";
    CHECK(csv_text(s) == "experiment,sweep_value,k,trials,successes,prob\n");
    s.kind = SummaryKind::Reliability;
    CHECK(csv_text(s) == "experiment,deletions,k_design,trials,successes,prob\n");
  }

  TEST_CASE("round trip and fixed column count") {
    const auto sum = run_transition_sweep(small_sweep());
    const std::string text = csv_text(sum);
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) CHECK(count_fields(line) == 6);
    CHECK(text.find('\r') == std::string::npos);

    std::istringstream is(text);
    const auto back = parse_csv(is);
    CHECK(back.experiment == sum.experiment);
    CHECK(back.kind == sum.kind);
    CHECK(back.rows == sum.rows);

    SweepSummary rel;
    rel.experiment = "r";
    rel.kind = SummaryKind::Reliability;
    rel.rows = {{0, 8, 200, 200}, {1, 8, 200, 171}};
    std::istringstream ris(csv_text(rel));
    const auto rback = parse_csv(ris);
    CHECK(rback.kind == SummaryKind::Reliability);
    CHECK(rback.rows == rel.rows);
  }

  TEST_CASE("six significant digits") {
    CHECK(format_real(0.123456789) == "0.123457");
    CHECK(format_real(40) == "40");
    CHECK(format_real(0.05) == "0.05");
  }

  TEST_CASE("malformed input is rejected") {
    auto parse = [](const std::string& text) {
      std::istringstream is(text);
      return parse_csv(is);
    };
    const std::string h = "experiment,sweep_value,k,trials,successes,prob\n";
    CHECK_THROWS(parse(""));
    CHECK_THROWS(parse("a,b\n"));
    CHECK_THROWS(parse(h + "x,1,2,10\n"));
    CHECK_THROWS(parse(h + "x,1,2,10,11,1.1\n"));
    CHECK_THROWS(parse(h + "x,1,2,10,5,0.5\ny,1,2,10,5,0.5\n"));
    CHECK_THROWS(parse(h + "x,1,two,10,5,0.5\n"));
    CHECK_NOTHROW(parse(h + "x,1,2,10,5,0.5\n"));
  }

  TEST_CASE("names that would break the format are refused") {
    SweepSummary s;
    s.experiment = "a,b";
    std::ostringstream os;
    CHECK_THROWS_AS(write_csv(os, s), std::invalid_argument);
  }

  TEST_CASE("file output names the path on failure") {
    SweepSummary s;
    s.experiment = "x";
    const std::filesystem::path bad = "/nonexistent-dir/x.csv";
    try {
      emit_csv(s, bad);
      FAIL("expected an I/O error");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
    }

    const auto path = std::filesystem::temp_directory_path() / "hetkc_emit_test.csv";
    emit_csv(s, path);
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == csv_text(s));
    std::filesystem::remove(path);
  }
}
