#include "iterseries/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace iterseries {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != last) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": '" + std::string(field) + "' is not a number");
  }
  return v;
}

// Calls row(fields, line_number) for every data row.
template <typename Row>
void for_each_row(std::string_view text, bool header, Row&& row) {
  bool skipped_header = !header;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    row(fields, line_no);
  }
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text, bool header) {
  std::vector<double> x, y, w;
  for_each_row(text, header, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f.size() != 2 && f.size() != 3) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": expected x,y or x,y,w");
    }
    x.push_back(parse_number(f[0], line));
    y.push_back(parse_number(f[1], line));
    w.push_back(f.size() == 3 ? parse_number(f[2], line) : 1.0);
  });
  return Dataset(std::move(x), std::move(y), std::move(w));
}

std::vector<double> parse_x_column(std::string_view text, bool header) {
  std::vector<double> x;
  for_each_row(text, header,
               [&](const std::vector<std::string_view>& f, std::size_t line) { x.push_back(parse_number(f[0], line)); });
  return x;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out.write(contents.data(), std::streamsize(contents.size()));
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace iterseries
