#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace citenet {

using PaperIndex = std::uint32_t;
using JournalIndex = std::uint32_t;
using PublisherIndex = std::uint32_t;

inline constexpr std::uint32_t kNoIndex = std::numeric_limits<std::uint32_t>::max();

/// Inclusive range of publication years.
struct YearWindow {
  int first = std::numeric_limits<int>::min();
  int last = std::numeric_limits<int>::max();

  static YearWindow all() { return {}; }
  static YearWindow single(int year) { return {year, year}; }

  bool contains(int year) const { return year >= first && year <= last; }
  bool operator==(const YearWindow&) const = default;
};

/// Raised for malformed input and violated preconditions that are not
/// expressible as an undefined metric value.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace citenet
