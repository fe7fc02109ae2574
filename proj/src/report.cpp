#include "bosonlab/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "bosonlab/errors.hpp"

namespace bosonlab {
namespace {

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos || (!s.empty() && (s.front() == ' ' || s.back() == ' '));
}

void append_csv_field(std::string& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out += s;
    return;
  }
  out += '"';
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, std::uint64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
        }
        return v;
      },
      cell);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw ContractViolation("report row has " + std::to_string(row.size()) + " cells, header has " +
                            std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw DomainError("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string render_csv(const Table& table, const nlohmann::ordered_json& config) {
  std::string out;
  if (!config.is_null()) {
    out += "# config=";
    out += config.dump();
    out += '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    append_csv_field(out, table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      append_csv_field(out, cell_text(row[i]));
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json table_to_json(const Table& table, const nlohmann::ordered_json& config,
                                     const nlohmann::ordered_json& extra) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  doc["config"] = config;
  if (extra.is_object()) {
    for (const auto& [key, value] : extra.items()) doc[key] = value;
  }
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[table.columns[i]] = cell_json(row[i]);
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  return doc;
}

void write_text(const std::string& path, std::string_view content, std::ostream& console) {
  if (path == "-") {
    console.write(content.data(), static_cast<std::streamsize>(content.size()));
    console.flush();
    if (!console) throw IoError("failed writing report to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing report to '" + path + "'");
}

void emit_report(const Table& table, ReportFormat format, const std::string& path, std::ostream& console,
                 const nlohmann::ordered_json& config, const nlohmann::ordered_json& extra) {
  if (format == ReportFormat::csv) {
    write_text(path, render_csv(table, config), console);
  } else {
    write_text(path, table_to_json(table, config, extra).dump(2) + "\n", console);
  }
}

}  // namespace bosonlab
