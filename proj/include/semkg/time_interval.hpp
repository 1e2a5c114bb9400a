#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace semkg {

/// Closed range of frame indices.
struct TimeInterval {
  std::uint64_t start = 0;
  std::uint64_t end = 0;

  friend auto operator<=>(const TimeInterval&, const TimeInterval&) = default;

  std::uint64_t length() const noexcept { return end - start + 1; }
};

std::string to_string(const TimeInterval& span);

/// Inserts `span` into a sorted list of disjoint, non-adjacent intervals,
/// coalescing with any interval it overlaps or touches.
void merge_interval(std::vector<TimeInterval>& intervals, TimeInterval span);

}  // namespace semkg
