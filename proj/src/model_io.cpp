#include "iterseries/model_io.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "json.hpp"

namespace iterseries {

using nlohmann::json;

namespace {

constexpr const char* kModelFormat = "iterseries-model";
constexpr const char* kReportFormat = "iterseries-report";

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, "at " + where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where + "/" + key, "missing field");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) schema_error(where + "/" + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(where + "/" + key, "non-finite number");
  return d;
}

std::size_t count(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_unsigned()) schema_error(where + "/" + key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string text(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) schema_error(where + "/" + key, "expected a string");
  return v.get<std::string>();
}

json parse_versioned(std::string_view input, const char* format, int version) {
  json doc;
  try {
    doc = json::parse(input.begin(), input.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "byte " + std::to_string(e.byte) + ": malformed JSON");
  }
  if (text(doc, "format", "") != format) schema_error("/format", std::string("expected '") + format + "'");
  const json& v = field(doc, "version", "");
  if (!v.is_number_integer() || v.get<long long>() != version) {
    throw Error(ErrorCode::UnsupportedVersion, "version " + v.dump() + " (supported: " + std::to_string(version) + ")");
  }
  return doc;
}

// Translates "parse as X" failures from the name lookups into ParseError with a location.
template <typename F>
auto with_location(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidArgument) throw;
    schema_error(where, e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string serialize(const SeriesModel& m) {
  json base = {{"kind", to_string(m.base.kind)}, {"params", m.base.params}};
  json transform = {{"kind", m.transform.kind == InputTransform::Kind::identity ? "identity" : "affine"},
                    {"scale", m.transform.scale},
                    {"offset", m.transform.offset}};
  json terms = json::array();
  for (const auto& t : m.terms) {
    if (t.kind == FamilyKind::custom) {
      throw Error(ErrorCode::InvalidArgument, "custom basis families cannot be serialised");
    }
    terms.push_back({{"kind", to_string(t.kind)}, {"beta", t.beta}, {"alpha", t.alpha}});
  }
  json doc = {{"format", kModelFormat},
              {"version", kModelFormatVersion},
              {"base", base},
              {"transform", transform},
              {"terms", terms},
              {"metadata", {{"final_ss", m.metadata.final_ss}, {"iterations", m.metadata.iterations}}}};
  return doc.dump(2) + "\n";
}

SeriesModel deserialize(std::string_view input) {
  const json doc = parse_versioned(input, kModelFormat, kModelFormatVersion);
  SeriesModel m;

  const json& base = field(doc, "base", "");
  m.base.kind = with_location("/base/kind", [&] { return base_kind_from_string(text(base, "kind", "/base")); });
  const json& params = field(base, "params", "/base");
  if (!params.is_array()) schema_error("/base/params", "expected an array");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].is_number()) schema_error("/base/params/" + std::to_string(i), "expected a number");
    m.base.params.push_back(params[i].get<double>());
  }
  const std::size_t want = m.base.kind == BaseModel::Kind::zero ? 0 : m.base.kind == BaseModel::Kind::constant ? 1 : 2;
  if (m.base.params.size() != want) schema_error("/base/params", "wrong parameter count for base kind");

  const json& tr = field(doc, "transform", "");
  const std::string tkind = text(tr, "kind", "/transform");
  if (tkind == "identity") {
    m.transform = InputTransform::identity();
  } else if (tkind == "affine") {
    const double scale = number(tr, "scale", "/transform");
    const double offset = number(tr, "offset", "/transform");
    m.transform = with_location("/transform", [&] { return InputTransform::affine(scale, offset); });
  } else {
    schema_error("/transform/kind", "unknown transform '" + tkind + "'");
  }

  const json& terms = field(doc, "terms", "");
  if (!terms.is_array()) schema_error("/terms", "expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string where = "/terms/" + std::to_string(i);
    Term t;
    t.kind = with_location(where + "/kind", [&] { return family_kind_from_string(text(terms[i], "kind", where)); });
    t.beta = number(terms[i], "beta", where);
    t.alpha = number(terms[i], "alpha", where);
    m.terms.push_back(t);
  }

  const json& meta = field(doc, "metadata", "");
  m.metadata.final_ss = number(meta, "final_ss", "/metadata");
  m.metadata.iterations = count(meta, "iterations", "/metadata");
  return m;
}

std::string serialize_report(const FitReport& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    json rec = {{"index", r.index}, {"beta", r.beta}, {"alpha", r.alpha}, {"train_ss", r.train_ss}};
    if (r.validation_ss) rec["validation_ss"] = *r.validation_ss;
    records.push_back(std::move(rec));
  }
  json doc = {{"format", kReportFormat},
              {"version", kReportFormatVersion},
              {"initial_ss", report.initial_ss},
              {"records", records},
              {"stop_reason", to_string(report.stop_reason)},
              {"kept_terms", report.kept_terms},
              {"train_size", report.train_size},
              {"validation_size", report.validation_size}};
  if (report.initial_validation_ss) doc["initial_validation_ss"] = *report.initial_validation_ss;
  return doc.dump(2) + "\n";
}

FitReport deserialize_report(std::string_view input) {
  const json doc = parse_versioned(input, kReportFormat, kReportFormatVersion);
  FitReport report;
  report.initial_ss = number(doc, "initial_ss", "");
  if (doc.contains("initial_validation_ss")) report.initial_validation_ss = number(doc, "initial_validation_ss", "");
  const json& records = field(doc, "records", "");
  if (!records.is_array()) schema_error("/records", "expected an array");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string where = "/records/" + std::to_string(i);
    IterationRecord r;
    r.index = count(records[i], "index", where);
    r.beta = number(records[i], "beta", where);
    r.alpha = number(records[i], "alpha", where);
    r.train_ss = number(records[i], "train_ss", where);
    if (records[i].contains("validation_ss")) r.validation_ss = number(records[i], "validation_ss", where);
    report.records.push_back(r);
  }
  report.stop_reason = with_location("/stop_reason", [&] { return stop_reason_from_string(text(doc, "stop_reason", "")); });
  report.kept_terms = count(doc, "kept_terms", "");
  report.train_size = count(doc, "train_size", "");
  report.validation_size = count(doc, "validation_size", "");
  return report;
}

}  // namespace iterseries
