#pragma once

// Tabular output shared by the command-line tools: CSV and JSON writers, the
// run manifest, and the angle parser.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "geometry.hpp"

namespace buffon {

inline constexpr const char *tool_version = "0.1.0";

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size())
      throw std::logic_error("row width does not match the header");
    rows.push_back(std::move(row));
  }

  std::size_t column(std::string_view name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == name)
        return c;
    throw std::out_of_range("no column " + std::string(name));
  }
};

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const Cell &cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string &s) const {
      if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
      std::string out = "\"";
      for (char c : s) {
        if (c == '"')
          out += '"';
        out += c;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, cell);
}

inline std::string to_csv(const Table &table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out += (c ? "," : "") + csv_field(table.columns[c]);
  out += '\n';
  for (const auto &row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out += (c ? "," : "") + csv_field(row[c]);
    out += '\n';
  }
  return out;
}

// Non-finite doubles become null.
inline std::string json_value(const Cell &cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return std::isfinite(v) ? format_double(v) : "null"; }
    std::string operator()(const std::string &s) const { return nlohmann::json(s).dump(); }
  };
  return std::visit(Visitor{}, cell);
}

struct RunManifest {
  std::string command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed;
  std::string version = tool_version;
  std::string timestamp;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["params"] = params;
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
    j["version"] = version;
    j["timestamp"] = timestamp;
    return j;
  }
};

/// UTC time in ISO 8601. SOURCE_DATE_EPOCH, when set, replaces the clock.
inline std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char *env = std::getenv("SOURCE_DATE_EPOCH")) {
    long long v = 0;
    const std::string_view s(env);
    if (std::from_chars(s.data(), s.data() + s.size(), v).ec == std::errc{})
      t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// {manifest, columns, rows}, plus a summary object when one is given.
inline std::string to_json(const Table &table, const RunManifest &manifest,
                           const nlohmann::ordered_json &summary = nullptr) {
  std::string out = "{\n  \"manifest\": " + manifest.to_json().dump() + ",\n  \"columns\": ";
  out += nlohmann::json(table.columns).dump();
  out += ",\n  \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += r ? ",\n    [" : "\n    [";
    for (std::size_t c = 0; c < table.rows[r].size(); ++c)
      out += (c ? ", " : "") + json_value(table.rows[r][c]);
    out += "]";
  }
  out += table.rows.empty() ? "]" : "\n  ]";
  if (!summary.is_null())
    out += ",\n  \"summary\": " + summary.dump();
  out += "\n}\n";
  return out;
}

class AngleParseError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double parse_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw AngleParseError("cannot parse angle '" + std::string(whole) + "'");
  return v;
}

} // namespace detail

/// Radians as a plain number, or a multiple of pi: "pi", "-pi/4", "3pi/20",
/// "3*pi/20", "0.5*pi". The pi forms evaluate as c * pi / d, the same
/// expression the library uses, so "pi/10" equals pi / 10 bit for bit.
inline double parse_angle(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ')
    text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ')
    text.remove_suffix(1);
  if (text.empty())
    throw AngleParseError("empty angle");

  std::size_t at = text.find("pi");
  std::size_t token = 2;
  if (at == std::string_view::npos) {
    at = text.find("π");
    token = std::string_view("π").size();
  }
  if (at == std::string_view::npos)
    return detail::parse_number(text, whole);

  double sign = 1.0;
  std::string_view coef = text.substr(0, at);
  if (!coef.empty() && (coef.front() == '-' || coef.front() == '+')) {
    sign = coef.front() == '-' ? -1.0 : 1.0;
    coef.remove_prefix(1);
  }
  if (!coef.empty() && coef.back() == '*')
    coef.remove_suffix(1);
  const double c = coef.empty() ? 1.0 : detail::parse_number(coef, whole);

  std::string_view rest = text.substr(at + token);
  double d = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/')
      throw AngleParseError("cannot parse angle '" + std::string(whole) + "'");
    d = detail::parse_number(rest.substr(1), whole);
    if (d == 0.0)
      throw AngleParseError("zero denominator in angle '" + std::string(whole) + "'");
  }
  if (c == 1.0 && d == 1.0)
    return sign * pi;
  if (c == 1.0)
    return sign * (pi / d);
  return sign * (c * pi / d);
}

/// Comma-separated list of angles.
inline std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const std::size_t comma = text.find(',');
    out.push_back(parse_angle(text.substr(0, comma)));
    if (comma == std::string_view::npos)
      break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

} // namespace buffon
