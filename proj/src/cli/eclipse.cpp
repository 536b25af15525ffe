#include "iterseries/eclipse.hpp"

#include <algorithm>
#include <string>

#include "iterseries/csv.hpp"

#ifndef ITERSERIES_DATA_DIR
#define ITERSERIES_DATA_DIR "data"
#endif

namespace iterseries::eclipse {

std::vector<Century> parse_table(std::string_view text) {
  const auto first_row = text.find("century_index");
  if (first_row == std::string_view::npos) {
    throw Error(ErrorCode::ParseError, "eclipse table lacks the century_index,count header");
  }
  const Dataset d = parse_dataset_csv(text, /*header=*/true);
  std::vector<Century> out;
  out.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double idx = d.x()[i];
    const double cnt = d.y()[i];
    if (idx != double(int(idx)) || cnt != double(int(cnt)) || cnt < 0) {
      throw Error(ErrorCode::ParseError, "eclipse row " + std::to_string(i + 1) + " is not an integer pair");
    }
    out.push_back({int(idx), int(cnt)});
  }
  return out;
}

std::vector<Century> load_table(const std::filesystem::path& path) { return parse_table(read_text_file(path)); }

std::filesystem::path default_table_path() {
  return std::filesystem::path(ITERSERIES_DATA_DIR) / "eclipse_centuries.csv";
}

void validate_table(const std::vector<Century>& table) {
  if (table.size() != std::size_t(kLastCentury - kFirstCentury + 1)) {
    throw Error(ErrorCode::ParseError, "eclipse table must cover centuries " + std::to_string(kFirstCentury) +
                                           ".." + std::to_string(kLastCentury));
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].index != kFirstCentury + int(i)) {
      throw Error(ErrorCode::ParseError, "eclipse table indices are not contiguous at row " + std::to_string(i + 1));
    }
    if (table[i].count < kMinCount || table[i].count > kMaxCount) {
      throw Error(ErrorCode::ParseError, "century " + std::to_string(table[i].index) + " count " +
                                             std::to_string(table[i].count) + " outside [222, 256]");
    }
  }
}

Dataset to_dataset(const std::vector<Century>& table, int first, int last) {
  std::vector<double> x, y;
  for (const auto& c : table) {
    if (c.index < first || c.index > last) continue;
    x.push_back(c.index);
    y.push_back(c.count);
  }
  return Dataset(std::move(x), std::move(y));
}

int count_at(const std::vector<Century>& table, int index) {
  const auto it = std::find_if(table.begin(), table.end(), [&](const Century& c) { return c.index == index; });
  if (it == table.end()) throw Error(ErrorCode::InvalidArgument, "no century " + std::to_string(index));
  return it->count;
}

std::vector<int> group_counts(const std::vector<Century>& table, int start, int stride, int length) {
  std::vector<int> out;
  for (int k = 0; k < length; ++k) out.push_back(count_at(table, start + k * stride));
  return out;
}

int range_of(const std::vector<int>& values) {
  if (values.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

}  // namespace iterseries::eclipse
