#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "iterseries/core.hpp"

namespace iterseries::eclipse {

/// Century c covers astronomical years 100c-99 .. 100c: index 1 is AD 1-100,
/// index 0 is years -99..0, index -19 is years -1999..-1900.
struct Century {
  int index = 0;
  int count = 0;

  friend bool operator==(const Century&, const Century&) = default;
};

inline constexpr int kFirstCentury = -19;
inline constexpr int kLastCentury = 30;
/// Fitting window of the demo; later centuries are holdout.
inline constexpr int kTrainFirst = -19;
inline constexpr int kTrainLast = 20;
inline constexpr int kMinCount = 222;
inline constexpr int kMaxCount = 256;
/// The demo fits sin(beta * (index + offset)); see README.
inline constexpr double kDemoOffset = 20.0;

inline constexpr int kGroupAStart = -18;
inline constexpr int kGroupBStart = -15;
inline constexpr int kGroupStride = 6;
inline constexpr int kGroupLength = 7;

/// Expects a `century_index,count` header; '#' comment lines allowed.
std::vector<Century> parse_table(std::string_view text);
std::vector<Century> load_table(const std::filesystem::path& path);
std::filesystem::path default_table_path();

/// Unique, contiguous indices covering kFirstCentury..kLastCentury and counts
/// inside [kMinCount, kMaxCount]. Throws ParseError otherwise.
void validate_table(const std::vector<Century>& table);

/// Centuries first..last as (index, count) observations with unit weight.
Dataset to_dataset(const std::vector<Century>& table, int first, int last);

int count_at(const std::vector<Century>& table, int index);
/// Counts at start, start + stride, ... (length values).
std::vector<int> group_counts(const std::vector<Century>& table, int start, int stride = kGroupStride,
                              int length = kGroupLength);
int range_of(const std::vector<int>& values);

}  // namespace iterseries::eclipse
