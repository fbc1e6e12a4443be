#include <catch_amalgamated.hpp>

#include <sstream>

#include "qxx/results.hpp"

using namespace qxx;

namespace {

std::vector<TrialRecord> sample_trials() {
  TrialRecord a;
  a.trial_index = 0;
  a.params = {9, 9, 1.5, 0.32, 10, 0.8};
  a.per_circuit_ratio = {1.25, std::nullopt};
  a.mean_ratio = 1.25;
  a.timeout_count = 1;
  a.wall_ms = 12.5;
  TrialRecord b;
  b.trial_index = 1;
  b.params = {1, 1, 0, 0, 2, 1};
  b.per_circuit_ratio = {std::nullopt, std::nullopt};
  b.timeout_count = 2;
  return {a, b};
}

std::vector<BenchCircuit> sample_suite() {
  Circuit c1(3), c2(2);
  c1.add_cnot(0, 1);
  c1.add_cnot(1, 2);
  c2.add_cnot(0, 1);
  return {{"first", c1, 7, std::nullopt}, {"second", c2, std::nullopt, std::nullopt}};
}

}  // namespace

TEST_CASE("trial table round trip") {
  const auto trials = sample_trials();
  std::ostringstream out;
  write_trials_csv(out, trials);
  CHECK(out.str() ==
        "trial_index,max_depth,max_children,b,c,movement_factor,edge_cost,mean_ratio,"
        "timeouts,wall_ms\n"
        "0,9,9,1.5,0.32,10,0.8,1.25,1,\n"
        "1,1,1,0,0,2,1,,2,\n");
  std::istringstream in(out.str());
  const auto back = read_trials_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].params == trials[0].params);
  CHECK(back[0].mean_ratio == trials[0].mean_ratio);
  CHECK_FALSE(back[1].mean_ratio);
  CHECK(back[1].timeout_count == 2);

  std::ostringstream timed;
  write_trials_csv(timed, trials, true);
  std::istringstream tin(timed.str());
  CHECK(read_trials_csv(tin)[0].wall_ms == 12.5);
}

TEST_CASE("per-circuit table round trip") {
  const auto rows = circuit_results(sample_trials(), sample_suite());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].benchmark_depth == 7);
  CHECK(rows[1].benchmark_depth == 1);  // no known optimum: the input depth
  CHECK(rows[1].timed_out());
  CHECK(rows[0].graph.edges == 2.0);

  std::ostringstream out;
  write_circuits_csv(out, rows);
  std::istringstream in(out.str());
  const auto back = read_circuits_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].trial_index == rows[i].trial_index);
    CHECK(back[i].circuit == rows[i].circuit);
    CHECK(back[i].params == rows[i].params);
    CHECK(back[i].graph.to_array() == rows[i].graph.to_array());
    CHECK(back[i].ratio == rows[i].ratio);
  }
  const auto suite = sample_suite();
  CHECK_THROWS(circuit_results(sample_trials(), std::span(suite).first(1)));
}

TEST_CASE("malformed tables are rejected") {
  auto parse_trials = [](const std::string& text) {
    std::istringstream in(text);
    return read_trials_csv(in);
  };
  const std::string header =
      "trial_index,max_depth,max_children,b,c,movement_factor,edge_cost,mean_ratio,"
      "timeouts,wall_ms\n";
  CHECK_THROWS_AS(parse_trials("a,b\n"), ResultsFormatError);
  CHECK_THROWS_AS(parse_trials(header + "0,1,1,0,0,2\n"), ResultsFormatError);
  CHECK_THROWS_AS(parse_trials(header + "0,1,1,x,0,2,1,1,0,\n"), ResultsFormatError);
  CHECK_THROWS_AS(parse_trials(header + "0,1.5,1,0,0,2,1,1,0,\n"), ResultsFormatError);
  CHECK(parse_trials(header + "0,1,1,0,0,2,1,1,0,\r\n\n").size() == 1);

  std::ostringstream out;
  write_circuits_csv(out, circuit_results(sample_trials(), sample_suite()));
  auto text = out.str();
  text.replace(text.rfind(",1\n"), 3, ",0\n");  // a timed-out row that claims success
  std::istringstream in(text);
  CHECK_THROWS_AS(read_circuits_csv(in), ResultsFormatError);
}

TEST_CASE("sidecar path") {
  CHECK(circuits_csv_path("out/results.csv") == "out/results.circuits.csv");
  CHECK(circuits_csv_path("results") == "results.circuits.csv");
  CHECK(circuits_csv_path("a.b/results") == "a.b/results.circuits.csv");
}

TEST_CASE("training rows drop timeouts") {
  const auto rows = circuit_results(sample_trials(), sample_suite());
  const auto d = make_dataset(rows);
  CHECK(d.rows() == 1);
  CHECK(d.dims() == 12);
  CHECK(d.y(0) == 1.25);
  CHECK(d.x(0, 6) == 9.0);
  CHECK(d.x(0, 11) == 0.8);
}
