#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "qxx/metrics.hpp"

using namespace qxx;
using Catch::Matchers::WithinAbs;

namespace {

// Synthetic sweep: table3 configurations times a few circuits per depth.
std::vector<CircuitResult> synthetic_rows(std::uint64_t seed, double timeout_rate = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(0.0, 0.3);
  std::bernoulli_distribution timeout(timeout_rate);
  std::vector<CircuitResult> rows;
  const auto configs = ParamSpace::table3().enumerate();
  for (std::size_t t = 0; t < configs.size(); ++t) {
    const auto& p = configs[t];
    for (std::size_t depth : {5u, 25u}) {
      for (int k = 0; k < 3; ++k) {
        CircuitResult r;
        r.trial_index = t;
        r.circuit = "d" + std::to_string(depth) + "_" + std::to_string(k);
        r.benchmark_depth = depth;
        r.params = p;
        if (!timeout(rng)) {
          r.ratio = 1.0 + 0.02 * std::abs(p.b - 6.0) + 0.1 * p.c + noise(rng);
        }
        rows.push_back(r);
      }
    }
  }
  return rows;
}

// Recount from scratch: mean per configuration, sort, keep ties at the cut.
std::size_t recount(const std::vector<CircuitResult>& rows, std::size_t param, double value,
                    std::size_t depth, int max_depth, std::size_t sample) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  std::map<std::string, double> pv;
  for (const auto& r : rows) {
    if (r.benchmark_depth != depth || r.params.max_depth != max_depth || !r.ratio) continue;
    auto& a = acc[r.params.to_string()];
    a.first += *r.ratio;
    ++a.second;
    pv[r.params.to_string()] = r.params.to_array()[param];
  }
  std::vector<std::pair<double, double>> v;
  for (const auto& [k, a] : acc) v.emplace_back(a.first / static_cast<double>(a.second), pv[k]);
  std::sort(v.begin(), v.end());
  std::size_t n = 0;
  const double cut = v[std::min(sample, v.size()) - 1].first;
  for (const auto& [score, x] : v) {
    if (score <= cut && x == value) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("counts over all values of a parameter add up to the sample") {
  const auto rows = synthetic_rows(1);
  const auto space = ParamSpace::table3();
  for (std::size_t param = 1; param < 6; ++param) {
    for (int md : {1, 5, 9}) {
      std::size_t total = 0, sample_size = 0;
      for (double v : space.values[param]) {
        const auto c = count(rows, param, v, 5, md, 100);
        total += c.count;
        sample_size = c.sample_size;
        CHECK(c.configurations == 1485);
        CHECK_FALSE(c.short_slice());
      }
      CHECK(sample_size >= 100);
      CHECK(total == sample_size);
    }
  }
}

TEST_CASE("count agrees with a direct recount") {
  const auto rows = synthetic_rows(2, 0.2);
  for (double b : ParamSpace::table3().values[2]) {
    for (std::size_t sample : {1u, 50u, 100u}) {
      CHECK(count(rows, 2, b, 25, 5, sample).count == recount(rows, 2, b, 25, 5, sample));
    }
  }
}

TEST_CASE("ties at the cut are all kept") {
  std::vector<CircuitResult> rows;
  for (int mc : {1, 5, 9}) {
    CircuitResult r;
    r.benchmark_depth = 5;
    r.params = {1, mc, 0, 0, 2, 1};
    r.ratio = mc == 9 ? 2.0 : 1.5;
    rows.push_back(r);
  }
  const auto c = count(rows, 1, 5, 5, 1, 1);
  CHECK(c.sample_size == 2);
  CHECK(c.count == 1);
  CHECK(count(rows, 1, 9, 5, 1, 1).count == 0);
  CHECK(count(rows, 1, 9, 5, 1, 10).short_slice());
}

TEST_CASE("rank sums the three slices") {
  const auto rows = synthetic_rows(3);
  for (double c : ParamSpace::table3().values[3]) {
    std::size_t sum = 0;
    for (int md : kRankMaxDepths) sum += count(rows, 3, c, 5, md, 100).count;
    const auto r = rank(rows, 3, c, 5, 100);
    CHECK(r == sum);
    CHECK(r <= 300 + 30);  // ties can only push a slice slightly past 100
  }
  std::vector<CircuitResult> missing;
  for (const auto& r : rows) {
    if (r.params.max_depth != 9) missing.push_back(r);
  }
  CHECK_THROWS_AS(rank(missing, 3, 0.5, 5, 100), std::invalid_argument);
}

TEST_CASE("counts ignore monotone transforms of the ratio") {
  auto rows = synthetic_rows(4);
  const auto before = count(rows, 2, 6, 5, 9, 100);
  for (auto& r : rows) {
    if (r.ratio) r.ratio = std::exp(3.0 * *r.ratio) + 7.0;
  }
  const auto after = count(rows, 2, 6, 5, 9, 100);
  CHECK(before.count == after.count);
  CHECK(before.sample_size == after.sample_size);
}

TEST_CASE("report means re-average from the raw rows") {
  const auto rows = synthetic_rows(5, 0.3);
  const auto by_b = report(rows, "b");
  REQUIRE(by_b.size() == 2 * 11);
  for (const auto& g : by_b) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (r.benchmark_depth == g.benchmark_depth && format_double(r.params.b) == g.label &&
          r.ratio) {
        sum += *r.ratio;
        ++n;
      }
    }
    CHECK(n == g.n);
    CHECK_THAT(g.mean_ratio, WithinAbs(sum / static_cast<double>(n), 1e-9));
  }
  const auto configs = report(rows, "config");
  std::set<std::pair<std::size_t, std::size_t>> finished;  // (depth, trial)
  for (const auto& r : rows) {
    if (r.ratio) finished.emplace(r.benchmark_depth, r.trial_index);
  }
  CHECK(configs.size() == finished.size());
  CHECK(finished.size() < 2 * 4455);  // some configurations timed out everywhere
  CHECK(configs.front().label == ParamSpace::table3().at(0).to_string());
  CHECK(report(rows, "all").size() == 2);
  CHECK_THROWS(report(rows, "nonsense"));
}

TEST_CASE("perfect layouts report a flat curve") {
  auto rows = synthetic_rows(6, 0.0);
  for (auto& r : rows) r.ratio = 1.0;
  for (const auto& g : report(rows, "all")) CHECK(g.mean_ratio == 1.0);
}

TEST_CASE("report CSV") {
  std::vector<ReportRow> rows{{5, "1,1,0,0,2,1", 1.25, 3}, {10, "all", 1.0, 1}};
  std::ostringstream out;
  write_report_csv(out, rows);
  CHECK(out.str() ==
        "benchmark_depth,label,mean_ratio,n\n5,\"1,1,0,0,2,1\",1.25,3\n10,all,1,1\n");
}
