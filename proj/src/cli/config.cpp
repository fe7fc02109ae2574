#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bosonlab/cli.hpp"
#include "bosonlab/errors.hpp"

namespace bosonlab::cli {
namespace {

using json = nlohmann::ordered_json;

ParamSpec p(std::string key, ParamType type, json fallback, std::string help) {
  return ParamSpec{std::move(key), type, std::move(fallback), std::move(help)};
}

std::vector<ParamSpec> jj_params(double e_c, double lam, int n_total) {
  return {
      p("e_c", ParamType::real, e_c, "charging energy E_C"),
      p("lam", ParamType::real, lam, "tunneling amplitude lambda"),
      p("n_total", ParamType::integer, n_total, "total Cooper pairs N"),
      p("n_bar1", ParamType::real, nullptr, "background pair number of electrode 1 (default N/2)"),
  };
}

std::vector<SubcommandSpec> build_table() {
  std::vector<SubcommandSpec> t;
  t.push_back({"bound-check",
               "sample random two-beam states and check negativity <= 2 min(n_a, n_b)/<n_a n_b>",
               {p("samples", ParamType::integer, 1000, "number of Haar-random pure states"),
                p("cutoff", ParamType::integer, 2, "per-mode photon cutoff (1-3)"),
                p("mixtures", ParamType::integer, 0, "additional random two-component mixtures")}});
  t.push_back({"neg-sweep",
               "maximum negativity of random k-photons-per-beam states against the 2/k bound",
               {p("k_min", ParamType::integer, 1, "smallest photon number per beam"),
                p("k_max", ParamType::integer, 10, "largest photon number per beam"),
                p("samples", ParamType::integer, 200, "random states per k")}});
  t.push_back({"tomography",
               "push a polarization state through device maps and simulate its tomography",
               {p("omega", ParamType::json, nullptr, "2x2 correlation matrix; entries are numbers or [re, im]"),
                p("stokes", ParamType::real_list, nullptr, "Stokes vector I,M,C,S (alternative to omega)"),
                p("device_maps", ParamType::json, json::array(), "list of maps, each a list of 2x2 Kraus matrices"),
                p("shots", ParamType::integer, 10000, "shots per measurement basis"),
                p("noise", ParamType::boolean, true, "add shot noise")}});
  {
    auto params = jj_params(0.2, 0.1, 200);
    params.push_back(p("model", ParamType::text, "mean-field", "mean-field or exact"));
    params.push_back(p("n0", ParamType::real, nullptr, "initial n of the product state (default n_bar1)"));
    params.push_back(p("phi0", ParamType::real, 3.0, "initial relative phase"));
    params.push_back(p("omega_t", ParamType::real, 10.0, "horizon in units of 1/omega"));
    params.push_back(p("dt", ParamType::real, nullptr, "output step (default 0.01/omega)"));
    params.push_back(p("output_every", ParamType::integer, 1, "record every k-th step"));
    params.push_back(p("fidelity", ParamType::boolean, true, "track best-fit product fidelity"));
    t.push_back({"jj-evolve", "evolve a product state under the exact or mean-field junction model",
                 std::move(params)});
  }
  t.push_back({"pendulum",
               "integrate theta'' = -omega^2 sin(theta)",
               {p("phi0", ParamType::real, 0.0, "initial angle"),
                p("phidot0", ParamType::real, 0.0, "initial angular velocity"),
                p("omega", ParamType::real, 1.0, "small-oscillation frequency"),
                p("omega_t", ParamType::real, 20.0, "horizon in units of 1/omega"),
                p("horizon", ParamType::real, nullptr, "horizon in time units (overrides omega_t)"),
                p("dt", ParamType::real, nullptr, "output step (default 0.01/omega)"),
                p("adaptive", ParamType::boolean, true, "error-controlled steps between outputs")}});
  t.push_back({"fluctuations",
               "number variance and phase width of product states versus n_bar1",
               {p("n_bar1_values", ParamType::real_list, json{25, 100, 400, 1600}, "scan points"),
                p("p", ParamType::real, 0.5, "occupation fraction n_bar1 / N"),
                p("phi", ParamType::real, 0.0, "phase of the product states")}});
  {
    auto params = jj_params(10.0, 1.0, 4);
    params.push_back(p("n0", ParamType::real, nullptr, "initial n (default 0.75 N)"));
    params.push_back(p("phi0", ParamType::real, 0.0, "initial relative phase"));
    params.push_back(p("omega_t", ParamType::real, 20.0, "horizon in units of 1/omega"));
    params.push_back(p("dt", ParamType::real, nullptr, "output step (default 0.01/omega)"));
    t.push_back({"compare", "exact vs mean-field vs pendulum from one product state", std::move(params)});
  }
  return t;
}

const std::vector<ParamSpec>& common_params() {
  static const std::vector<ParamSpec> common = {
      p("seed", ParamType::unsigned64, 0, "master seed"),
      p("format", ParamType::text, "csv", "csv or json"),
      p("output", ParamType::text, "-", "report path, - for stdout"),
      p("threads", ParamType::integer, 1, "worker threads"),
  };
  return common;
}

std::string flag_name(const std::string& key) {
  std::string f = "--" + key;
  for (char& c : f)
    if (c == '_') c = '-';
  return f;
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string::npos) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') return line_of_offset(text, pos);
    pos = after;
  }
  return 0;
}

std::string anchor(const std::string& source, const std::string& text, const std::string& key) {
  const std::size_t line = line_of_key(text, key);
  return line ? source + ":" + std::to_string(line) : source;
}

bool type_matches(ParamType type, const json& v) {
  switch (type) {
    case ParamType::integer:
      return v.is_number_integer();
    case ParamType::unsigned64:
      return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    case ParamType::real:
      return v.is_number();
    case ParamType::boolean:
      return v.is_boolean();
    case ParamType::text:
      return v.is_string();
    case ParamType::real_list:
      if (!v.is_array()) return false;
      for (const auto& x : v)
        if (!x.is_number()) return false;
      return true;
    case ParamType::json:
      return true;
  }
  return false;
}

const char* type_name(ParamType type) {
  switch (type) {
    case ParamType::integer:
      return "an integer";
    case ParamType::unsigned64:
      return "a non-negative integer";
    case ParamType::real:
      return "a number";
    case ParamType::boolean:
      return "true or false";
    case ParamType::text:
      return "a string";
    case ParamType::real_list:
      return "a list of numbers";
    case ParamType::json:
      return "JSON";
  }
  return "?";
}

template <class T>
bool parse_whole(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

json flag_value(const ParamSpec& spec, const std::vector<std::string>& raw) {
  const std::string flag = flag_name(spec.key);
  auto fail = [&](const std::string& got) {
    return ConfigError(flag + ": expected " + type_name(spec.type) + ", got '" + got + "'");
  };
  if (spec.type == ParamType::real_list) {
    json arr = json::array();
    for (const auto& s : raw) {
      double d;
      if (!parse_whole(s, d)) throw fail(s);
      arr.push_back(d);
    }
    return arr;
  }
  const std::string& s = raw.back();
  switch (spec.type) {
    case ParamType::integer: {
      std::int64_t v;
      if (!parse_whole(s, v)) throw fail(s);
      return v;
    }
    case ParamType::unsigned64: {
      std::uint64_t v;
      if (!parse_whole(s, v)) throw fail(s);
      return v;
    }
    case ParamType::real: {
      double v;
      if (!parse_whole(s, v)) throw fail(s);
      return v;
    }
    case ParamType::boolean:
      if (s == "true" || s == "1") return true;
      if (s == "false" || s == "0") return false;
      throw fail(s);
    case ParamType::text:
      return s;
    case ParamType::json:
      try {
        return json::parse(s);
      } catch (const json::parse_error&) {
        throw fail(s);
      }
    case ParamType::real_list:
      break;
  }
  throw fail(s);
}

void apply_common(ExperimentConfig& cfg, const std::string& key, const json& v) {
  if (key == "seed") {
    cfg.seed = v.get<std::uint64_t>();
  } else if (key == "format") {
    cfg.format = parse_report_format(v.get<std::string>());
  } else if (key == "output") {
    cfg.output_path = v.get<std::string>();
  } else if (key == "threads") {
    const auto t = v.get<std::int64_t>();
    if (t < 1) throw ConfigError("threads must be >= 1");
    cfg.threads = static_cast<unsigned>(t);
  }
}

}  // namespace

const std::vector<SubcommandSpec>& subcommands() {
  static const std::vector<SubcommandSpec> table = build_table();
  return table;
}

const SubcommandSpec& find_subcommand(const std::string& name) {
  for (const auto& s : subcommands())
    if (s.name == name) return s;
  throw ConfigError("unknown subcommand '" + name + "'");
}

json check_config_object(const SubcommandSpec& spec, const json& doc, const std::string& source_name,
                         const std::string& source_text) {
  if (!doc.is_object()) throw ConfigError(source_name + ":1: config must be a JSON object");
  json accepted = json::object();
  for (const auto& [key, value] : doc.items()) {
    if (key == "subcommand") {
      if (!value.is_string() || value.get<std::string>() != spec.name)
        throw ConfigError(anchor(source_name, source_text, key) + ": config is for subcommand " + value.dump() +
                          ", not \"" + spec.name + "\"");
      continue;
    }
    const ParamSpec* match = nullptr;
    for (const auto& c : common_params())
      if (c.key == key) match = &c;
    for (const auto& c : spec.params)
      if (c.key == key) match = &c;
    if (!match) {
      std::string allowed;
      for (const auto& c : common_params()) allowed += (allowed.empty() ? "" : ", ") + c.key;
      for (const auto& c : spec.params) allowed += ", " + c.key;
      throw ConfigError(anchor(source_name, source_text, key) + ": unknown key '" + key + "' for " + spec.name +
                        " (allowed: " + allowed + ")");
    }
    if (!type_matches(match->type, value))
      throw ConfigError(anchor(source_name, source_text, key) + ": '" + key + "' must be " +
                        type_name(match->type) + ", got " + value.dump());
    accepted[key] = value;
  }
  return accepted;
}

json load_config_file(const SubcommandSpec& spec, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const std::size_t line = line_of_offset(text, offset);
    const std::size_t line_start = text.rfind('\n', offset == 0 ? 0 : offset - 1);
    const std::size_t col = line_start == std::string::npos ? offset + 1 : offset - line_start;
    std::string what = e.what();
    const auto colon = what.find(": ");
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
  return check_config_object(spec, doc, path, text);
}

bool parse_command_line(int argc, const char* const* argv, ExperimentConfig& out, std::ostream& help_out) {
  CLI::App app{"Two-mode boson toolkit: two-beam entanglement bounds, polarization tomography and "
               "Josephson-junction dynamics"};
  app.name("bosonlab");
  app.require_subcommand(1);

  struct Bound {
    const ParamSpec* spec;
    CLI::Option* option;
  };
  std::map<std::string, std::vector<Bound>> bound;
  std::map<std::string, CLI::Option*> config_flags;
  for (const auto& sub : subcommands()) {
    CLI::App* s = app.add_subcommand(sub.name, sub.summary);
    auto add = [&](const ParamSpec& ps) {
      std::string help = ps.help;
      if (!ps.fallback.is_null()) help += " [" + ps.fallback.dump() + "]";
      CLI::Option* opt = s->add_option(flag_name(ps.key))->description(help);
      if (ps.type == ParamType::real_list) {
        opt->expected(1, CLI::detail::expected_max_vector_size)->delimiter(',');
      } else {
        opt->expected(1);
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      }
      bound[sub.name].push_back({&ps, opt});
    };
    for (const auto& ps : common_params()) add(ps);
    for (const auto& ps : sub.params) add(ps);
    config_flags[sub.name] = s->add_option("--config")->description("JSON config file; flags override its values");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    help_out << app.help();
    (void)e;
    return false;
  } catch (const CLI::CallForAllHelp&) {
    help_out << app.help("", CLI::AppFormatMode::All);
    return false;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->get_help_ptr() && chosen->get_help_ptr()->count()) {
    help_out << chosen->help();
    return false;
  }
  const SubcommandSpec& spec = find_subcommand(chosen->get_name());

  ExperimentConfig cfg;
  cfg.subcommand = spec.name;
  json merged = json::object();
  for (const auto& ps : spec.params)
    if (!ps.fallback.is_null()) merged[ps.key] = ps.fallback;

  if (CLI::Option* c = config_flags[spec.name]; c->count()) {
    const json file = load_config_file(spec, c->as<std::string>());
    for (const auto& [key, value] : file.items()) merged[key] = value;
  }
  for (const auto& b : bound[spec.name]) {
    if (b.option->count()) merged[b.spec->key] = flag_value(*b.spec, b.option->results());
  }
  for (const auto& ps : common_params()) {
    if (merged.contains(ps.key)) {
      apply_common(cfg, ps.key, merged[ps.key]);
      merged.erase(ps.key);
    }
  }
  // Keep the table order so echoed configs are stable.
  for (const auto& ps : spec.params)
    if (merged.contains(ps.key)) cfg.params[ps.key] = merged[ps.key];
  out = std::move(cfg);
  return true;
}

}  // namespace bosonlab::cli
