#pragma once

// Experiment runner behind the `bosonlab` executable.
//
// Each subcommand has a fixed table of snake_case parameters. Values come
// from the built-in defaults, then an optional JSON config file (--config),
// then command-line flags (--kebab-case), later sources winning. The
// resolved parameters are echoed at the top of every report, so a report
// file is enough to rerun the experiment.
//
// Exit codes: 0 success, 1 bad input (config, domain, I/O), 2 a run that
// broke an invariant or a proven bound.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bosonlab/report.hpp"

namespace bosonlab::cli {

enum class ParamType { integer, unsigned64, real, boolean, text, real_list, json };

struct ParamSpec {
  std::string key;  // snake_case; the flag is --key with '_' replaced by '-'
  ParamType type;
  nlohmann::ordered_json fallback;  // null: resolved at run time or optional
  std::string help;
};

struct SubcommandSpec {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
};

const std::vector<SubcommandSpec>& subcommands();
const SubcommandSpec& find_subcommand(const std::string& name);

struct ExperimentConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  ReportFormat format = ReportFormat::csv;
  std::string output_path = "-";
  unsigned threads = 1;
  /// Subcommand parameters after merging defaults, file and flags. Entries
  /// whose default is computed at run time are absent until resolved.
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
};

/// Validates `doc` against the subcommand table and returns the recognized
/// members. `source_name` and `source_text` anchor error messages.
nlohmann::ordered_json check_config_object(const SubcommandSpec& spec, const nlohmann::ordered_json& doc,
                                           const std::string& source_name, const std::string& source_text);

/// Reads and strictly validates a JSON config file. Parse errors are reported
/// as "path:line:col: message", unknown keys as "path:line: unknown key".
nlohmann::ordered_json load_config_file(const SubcommandSpec& spec, const std::string& path);

/// Parses argv (argv[0] is the program name). Throws ConfigError for bad
/// input; returns false (after printing) when only help was requested.
bool parse_command_line(int argc, const char* const* argv, ExperimentConfig& out, std::ostream& help_out);

/// Runs one experiment and writes its report to the output path, or to `out`
/// when that path is "-". Library errors propagate.
void run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& diagnostics);

/// Full entry point: parse, run, map errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bosonlab::cli
