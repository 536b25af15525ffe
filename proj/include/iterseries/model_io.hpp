#pragma once

#include <string>
#include <string_view>

#include "iterseries/fitter.hpp"
#include "iterseries/model.hpp"

namespace iterseries {

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

/// Versioned JSON text. Doubles are written in shortest round-trip form, so
/// deserialize(serialize(m)) restores every parameter bit for bit.
std::string serialize(const SeriesModel& m);
/// Throws ParseError (with a byte offset or JSON pointer) or UnsupportedVersion.
SeriesModel deserialize(std::string_view text);

std::string serialize_report(const FitReport& report);
FitReport deserialize_report(std::string_view text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace iterseries
