#include "semkg/time_interval.hpp"

#include <algorithm>

namespace semkg {

std::string to_string(const TimeInterval& span) {
  return "[" + std::to_string(span.start) + "," + std::to_string(span.end) + "]";
}

void merge_interval(std::vector<TimeInterval>& intervals, TimeInterval span) {
  // First interval that could touch `span`: its end + 1 >= span.start.
  auto first = std::lower_bound(intervals.begin(), intervals.end(), span.start,
                                [](const TimeInterval& iv, std::uint64_t start) {
                                  return iv.end + 1 < start;
                                });
  auto last = first;
  while (last != intervals.end() && last->start <= span.end + 1) {
    span.start = std::min(span.start, last->start);
    span.end = std::max(span.end, last->end);
    ++last;
  }
  first = intervals.erase(first, last);
  intervals.insert(first, span);
}

}  // namespace semkg
