#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qxx/results.hpp"

namespace qxx {

struct CountResult {
  std::size_t count = 0;           ///< sampled configurations with param == value
  std::size_t sample_size = 0;     ///< configurations in the sample, ties included
  std::size_t configurations = 0;  ///< configurations in the slice
  std::size_t sample_requested = 0;

  /// Fewer configurations than requested; the whole slice was used.
  bool short_slice() const { return configurations < sample_requested; }
};

/**
 * Within the slice (benchmark depth, max_depth), each configuration is scored
 * by its mean ratio over that depth's circuits (timed-out circuits left out,
 * configurations with no result dropped). The `sample` lowest scores are kept,
 * plus any configurations tied with the last one kept, and the count is how
 * many of them set parameter `param` to `value`.
 */
CountResult count(std::span<const CircuitResult> rows, std::size_t param, double value,
                  std::size_t benchmark_depth, int max_depth, std::size_t sample = 100);

inline constexpr int kRankMaxDepths[] = {1, 5, 9};

/// Sum of count() over max_depth 1, 5 and 9. Throws if a slice is empty.
std::size_t rank(std::span<const CircuitResult> rows, std::size_t param, double value,
                 std::size_t benchmark_depth, std::size_t sample = 100);

struct ReportRow {
  std::size_t benchmark_depth = 0;
  std::string label;
  double mean_ratio = 0.0;
  std::size_t n = 0;  ///< non-timed-out circuit results averaged
};

/// Mean ratio per (benchmark depth, group). `group_by` is "config", "all",
/// or a parameter name. Groups with no finished layout are omitted.
std::vector<ReportRow> report(std::span<const CircuitResult> rows, std::string_view group_by);
void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);

}  // namespace qxx
