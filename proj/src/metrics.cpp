#include "qxx/metrics.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <tuple>

namespace qxx {

namespace {

struct Mean {
  double sum = 0.0;
  std::size_t n = 0;
};

}  // namespace

CountResult count(std::span<const CircuitResult> rows, std::size_t param, double value,
                  std::size_t benchmark_depth, int max_depth, std::size_t sample) {
  if (param >= kParamNames.size()) throw std::out_of_range("count: bad parameter index");
  std::map<std::array<double, 6>, Mean> per_config;
  for (const auto& r : rows) {
    if (r.benchmark_depth != benchmark_depth || r.params.max_depth != max_depth) continue;
    auto& m = per_config[r.params.to_array()];
    if (r.ratio) {
      m.sum += *r.ratio;
      ++m.n;
    }
  }
  std::vector<std::pair<double, double>> scored;  // (mean ratio, param value)
  for (const auto& [config, m] : per_config) {
    if (m.n > 0) scored.emplace_back(m.sum / static_cast<double>(m.n), config[param]);
  }
  CountResult result;
  result.configurations = scored.size();
  result.sample_requested = sample;
  if (scored.empty() || sample == 0) return result;
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t keep = std::min(sample, scored.size());
  const double boundary = scored[keep - 1].first;
  while (keep < scored.size() && scored[keep].first == boundary) ++keep;
  result.sample_size = keep;
  for (std::size_t i = 0; i < keep; ++i) {
    if (scored[i].second == value) ++result.count;
  }
  return result;
}

std::size_t rank(std::span<const CircuitResult> rows, std::size_t param, double value,
                 std::size_t benchmark_depth, std::size_t sample) {
  std::size_t total = 0;
  for (int md : kRankMaxDepths) {
    const auto c = count(rows, param, value, benchmark_depth, md, sample);
    if (c.configurations == 0) {
      throw std::invalid_argument("rank: no results for max_depth " + std::to_string(md) +
                                  " at benchmark depth " +
                                  std::to_string(benchmark_depth));
    }
    total += c.count;
  }
  return total;
}

std::vector<ReportRow> report(std::span<const CircuitResult> rows, std::string_view group_by) {
  const bool by_config = group_by == "config";
  const bool by_all = group_by == "all";
  std::size_t param = 0;
  if (!by_config && !by_all) param = param_index(group_by);

  // Groups order by depth, then by parameter value or first trial index.
  using Key = std::tuple<std::size_t, double, std::string>;
  std::map<Key, Mean> groups;
  std::map<std::string, double> config_order;
  for (const auto& r : rows) {
    std::string label;
    double order = 0.0;
    if (by_config) {
      label = r.params.to_string();
      order = config_order.try_emplace(label, static_cast<double>(r.trial_index))
                  .first->second;
    } else if (by_all) {
      label = "all";
    } else {
      order = r.params.to_array()[param];
      label = format_double(order);
    }
    auto& m = groups[{r.benchmark_depth, order, label}];
    if (r.ratio) {
      m.sum += *r.ratio;
      ++m.n;
    }
  }
  std::vector<ReportRow> out;
  for (const auto& [key, m] : groups) {
    if (m.n == 0) continue;
    out.push_back({std::get<0>(key), std::get<2>(key), m.sum / static_cast<double>(m.n), m.n});
  }
  return out;
}

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << "benchmark_depth,label,mean_ratio,n\n";
  for (const auto& r : rows) {
    const bool quote = r.label.find(',') != std::string::npos;
    out << r.benchmark_depth << ',' << (quote ? "\"" : "") << r.label << (quote ? "\"" : "")
        << ',' << format_double(r.mean_ratio) << ',' << r.n << '\n';
  }
}

}  // namespace qxx
