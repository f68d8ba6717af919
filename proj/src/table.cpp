#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sgz/experiment.hpp"

namespace sgz {
namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in output table");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& cell, Format format) {
  struct Visitor {
    Format format;
    std::string operator()(std::monostate) const { return format == Format::csv ? "" : "null"; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      return format == Format::csv ? csv_field(s) : nlohmann::json(s).dump();
    }
  };
  return std::visit(Visitor{format}, cell);
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column named " + std::string(name));
}

void emit(const Table& table, Format format, std::ostream& out) {
  if (table.rows.empty()) throw std::invalid_argument("cannot emit an empty table");
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("row width differs from the header");
    }
  }

  if (format == Format::csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c > 0) out << ',';
      out << csv_field(table.columns[c]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) out << ',';
        out << cell_text(row[c], format);
      }
      out << '\n';
    }
    return;
  }

  for (const auto& row : table.rows) {
    out << '{';
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << nlohmann::json(table.columns[c]).dump() << ':' << cell_text(row[c], format);
    }
    out << "}\n";
  }
}

std::string emit(const Table& table, Format format) {
  std::ostringstream out;
  emit(table, format, out);
  return out.str();
}

}  // namespace sgz
