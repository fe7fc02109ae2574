#pragma once

// Tabular reports. Every experiment produces one homogeneous Table, which is
// written either as CSV (header row, RFC 4180 quoting) or as JSON. Doubles
// are printed in the shortest form that parses back to the same binary value.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bosonlab {

using Cell = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws ContractViolation when the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view name);

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double value);

/// Header row plus one line per row. A non-null `config` is echoed first as
/// a single "# config=<json>" comment line.
std::string render_csv(const Table& table, const nlohmann::ordered_json& config = nullptr);

/// {"config": ..., "records": [{column: value, ...}, ...]} with any `extra`
/// object members merged in after "config". Non-finite doubles become null.
nlohmann::ordered_json table_to_json(const Table& table, const nlohmann::ordered_json& config = nullptr,
                                     const nlohmann::ordered_json& extra = nullptr);

/// Writes `content` to `path`, or to `console` when path is "-". Failures
/// raise IoError naming the path.
void write_text(const std::string& path, std::string_view content, std::ostream& console);

void emit_report(const Table& table, ReportFormat format, const std::string& path, std::ostream& console,
                 const nlohmann::ordered_json& config = nullptr, const nlohmann::ordered_json& extra = nullptr);

}  // namespace bosonlab
