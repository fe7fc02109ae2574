#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bosonlab/errors.hpp"
#include "bosonlab/report.hpp"

using namespace bosonlab;
using json = nlohmann::ordered_json;

namespace {

// Minimal RFC 4180 reader for the round-trip checks.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows(1);
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      rows.back().push_back(field);
      field.clear();
    } else if (ch == '\n') {
      rows.back().push_back(field);
      field.clear();
      rows.emplace_back();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (rows.back().empty()) rows.pop_back();
  return rows;
}

Table sample_table() {
  Table t;
  t.columns = {"x", "count", "ok", "label"};
  t.add_row({0.1, std::int64_t{3}, true, std::string("plain")});
  t.add_row({-1e-300, std::int64_t{-7}, false, std::string("with, comma")});
  t.add_row({1.0 / 3.0, std::int64_t{0}, true, std::string("say \"hi\"\nthere")});
  return t;
}

std::string scratch(const std::string& name) { return std::string(BOSONLAB_SCRATCH_DIR) + "/" + name; }

}  // namespace

TEST_CASE("format_double prints the shortest round-trip form") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-8) == "-2.5e-08");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> exponent(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::pow(10.0, exponent(rng)) * (i % 2 ? -1 : 1);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("CSV layout") {
  Table empty;
  empty.columns = {"a", "b"};
  CHECK(render_csv(empty) == "a,b\n");

  Table one;
  one.columns = {"a", "b"};
  one.add_row({1.5, std::int64_t{2}});
  CHECK(render_csv(one) == "a,b\n1.5,2\n");

  const json config = {{"seed", 7}, {"name", "x"}};
  const std::string with_config = render_csv(one, config);
  CHECK(with_config.rfind("# config=", 0) == 0);
  const std::string first_line = with_config.substr(0, with_config.find('\n'));
  CHECK(json::parse(first_line.substr(9)) == config);

  CHECK_THROWS_AS(one.add_row({1.0}), ContractViolation);
}

TEST_CASE("CSV quoting and round trip") {
  const Table t = sample_table();
  const std::string csv = render_csv(t);
  CHECK(csv.find("\"with, comma\"") != std::string::npos);
  CHECK(csv.find("\"say \"\"hi\"\"\nthere\"") != std::string::npos);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"x", "count", "ok", "label"});
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(std::strtod(rows[r + 1][0].c_str(), nullptr) == std::get<double>(t.rows[r][0]));
    CHECK(std::stoll(rows[r + 1][1]) == std::get<std::int64_t>(t.rows[r][1]));
    CHECK((rows[r + 1][2] == "true") == std::get<bool>(t.rows[r][2]));
    CHECK(rows[r + 1][3] == std::get<std::string>(t.rows[r][3]));
  }
}

TEST_CASE("JSON layout and round trip") {
  Table t = sample_table();
  t.add_row({std::numeric_limits<double>::quiet_NaN(), std::int64_t{1}, false, std::string()});
  const json config = {{"seed", 1}};
  const json extra = {{"omega", 1.25}};
  const json doc = table_to_json(t, config, extra);
  const std::vector<std::string> keys = {"config", "omega", "records"};
  std::vector<std::string> got;
  for (auto it = doc.begin(); it != doc.end(); ++it) got.push_back(it.key());
  CHECK(got == keys);

  const json back = json::parse(doc.dump());
  REQUIRE(back["records"].size() == 4);
  for (std::size_t r = 0; r < 3; ++r) {
    const json& rec = back["records"][r];
    CHECK(rec["x"].get<double>() == std::get<double>(t.rows[r][0]));
    CHECK(rec["count"].get<std::int64_t>() == std::get<std::int64_t>(t.rows[r][1]));
    CHECK(rec["ok"].get<bool>() == std::get<bool>(t.rows[r][2]));
    CHECK(rec["label"].get<std::string>() == std::get<std::string>(t.rows[r][3]));
  }
  CHECK(back["records"][3]["x"].is_null());

  Table empty;
  empty.columns = {"a"};
  CHECK(table_to_json(empty)["records"].empty());
}

TEST_CASE("formats and files") {
  CHECK(parse_report_format("csv") == ReportFormat::csv);
  CHECK(parse_report_format("json") == ReportFormat::json);
  CHECK_THROWS_AS(parse_report_format("xml"), DomainError);

  const std::string path = scratch("report_test.csv");
  std::ostringstream unused;
  emit_report(sample_table(), ReportFormat::csv, path, unused);
  CHECK(unused.str().empty());
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == render_csv(sample_table()));

  const std::string bad = scratch("no_such_dir/out.csv");
  try {
    std::ostringstream unused;
    write_text(bad, "x", unused);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(bad) != std::string::npos);
  }
}
