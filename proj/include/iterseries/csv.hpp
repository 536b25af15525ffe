#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "iterseries/core.hpp"

namespace iterseries {

/// Rows are `x,y` or `x,y,w` (weight defaults to 1). Blank lines and lines
/// starting with '#' are ignored; with `header` the first remaining row is
/// skipped. Throws ParseError naming the line.
Dataset parse_dataset_csv(std::string_view text, bool header = false);

/// First column of each row; used for prediction inputs.
std::vector<double> parse_x_column(std::string_view text, bool header = false);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace iterseries
