#include "coopnet/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace coopnet {

namespace {

const std::vector<std::pair<Protocol, std::string>>& protocol_names() {
  static const std::vector<std::pair<Protocol, std::string>> names = {
      {Protocol::GrowNoMutation, "grow"},
      {Protocol::StaticMutation, "static"},
      {Protocol::GrowWithMutation, "grow-mut"},
      {Protocol::Fixation, "fixation"},
      {Protocol::TimeSeries, "timeseries"},
      {Protocol::DegreeProfile, "degree-profile"},
      {Protocol::LearningComparison, "compare-learning"},
  };
  return names;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::string lower = t;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  if (lower == "inf" || lower == "infinity") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || std::isnan(value)) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::map<std::string, std::string> defaults_for(Protocol protocol) {
  const char* env_out = std::getenv(kOutputDirEnv);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return {
      {"model", "ma"},
      {"L", "4"},
      {"rule", "democratic"},
      {"beta", "1"},
      {"alpha", "inf"},
      {"a", "2"},
      {"n", "0.001"},
      {"P_m", protocol == Protocol::GrowNoMutation ? "0" : "0.01"},
      {"r", protocol == Protocol::LearningComparison ? "4" : "2"},
      {"r_grid", "1.5,2,3,4"},
      {"N_i", protocol == Protocol::Fixation ? "8,50,200,800" : "1000"},
      {"N_max", "4000"},
      {"N", "2000"},
      {"window", "0.9"},
      {"generations", "1000"},
      {"transient", "2000"},
      {"measure", "500"},
      {"realizations", "10"},
      {"seed", "1"},
      {"threads", std::to_string(hw)},
      {"out", env_out && *env_out ? env_out : "."},
      {"dump_graph", ""},
  };
}

void check_known(const std::map<std::string, std::string>& values) {
  const auto& keys = config_keys();
  for (const auto& [key, value] : values) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(key, "unknown configuration key");
    }
  }
}

}  // namespace

Protocol parse_protocol(const std::string& name) {
  for (const auto& [protocol, label] : protocol_names()) {
    if (label == name) return protocol;
  }
  throw ConfigError("subcommand", "unknown subcommand '" + name + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "model", "L",     "rule",        "beta",      "alpha",   "a",           "n",
      "P_m",   "r",     "r_grid",      "N_i",       "N_max",   "N",           "window",
      "generations",    "transient",   "measure",   "realizations", "seed",   "threads",
      "out",   "dump_graph"};
  return keys;
}

std::map<std::string, std::string> read_config_file(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(t, "expected key=value");
    values[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }
  check_known(values);
  return values;
}

RunConfig resolve_config(Protocol protocol, const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& flag_values) {
  check_known(file_values);
  check_known(flag_values);
  auto values = defaults_for(protocol);
  for (const auto& [k, v] : file_values) values[k] = v;
  for (const auto& [k, v] : flag_values) values[k] = v;

  RunConfig config;
  config.protocol = protocol;
  config.resolved = values;
  ExperimentSpec& spec = config.spec;

  try {
    spec.growth.model = parse_growth_model(values["model"]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }
  const auto links = parse_unsigned("L", values["L"]);
  if (links < 2 || links > 1'000'000) throw ConfigError("L", "must be >= 2");
  spec.growth.links_per_node = static_cast<int>(links);

  const double beta = parse_double("beta", values["beta"]);
  if (!(beta >= 0.0) || std::isinf(beta)) throw ConfigError("beta", "must be finite and >= 0");
  const double alpha = parse_double("alpha", values["alpha"]);
  if (!(alpha > 0.0)) throw ConfigError("alpha", "must be > 0 or inf");
  const double a = parse_double("a", values["a"]);
  if (!(a > 0.0) || std::isinf(a)) throw ConfigError("a", "must be finite and > 0");
  spec.learning_exponent = a;

  const std::string& rule = values["rule"];
  if (rule == "democratic") {
    spec.rule = UpdateRule::democratic(beta, alpha);
  } else if (rule == "learning") {
    spec.rule = UpdateRule::learning(a, alpha);
  } else {
    throw ConfigError("rule", "expected 'democratic' or 'learning', got '" + rule + "'");
  }
  if (protocol == Protocol::LearningComparison && rule != "democratic") {
    throw ConfigError("rule", "compare-learning always compares democratic against learning");
  }

  spec.growth_fraction = parse_double("n", values["n"]);
  spec.mutation_prob = parse_double("P_m", values["P_m"]);
  if (!(spec.mutation_prob >= 0.0 && spec.mutation_prob <= 1.0)) {
    throw ConfigError("P_m", "must be in [0, 1]");
  }
  if (protocol == Protocol::GrowNoMutation && spec.mutation_prob != 0.0) {
    throw ConfigError("P_m", "grow runs without mutation; use grow-mut");
  }
  spec.r = parse_double("r", values["r"]);

  spec.r_grid.clear();
  for (const auto& item : split_list(values["r_grid"])) {
    spec.r_grid.push_back(parse_double("r_grid", item));
  }

  spec.initial_sizes.clear();
  for (const auto& item : split_list(values["N_i"])) {
    spec.initial_sizes.push_back(parse_unsigned("N_i", item));
  }
  if (spec.initial_sizes.empty()) throw ConfigError("N_i", "missing value");
  if (protocol != Protocol::Fixation && spec.initial_sizes.size() != 1) {
    throw ConfigError("N_i", "only fixation accepts a list of initial sizes");
  }
  spec.initial_size = spec.initial_sizes.front();

  spec.max_size = parse_unsigned("N_max", values["N_max"]);
  spec.static_size = parse_unsigned("N", values["N"]);
  spec.window_fraction = parse_double("window", values["window"]);
  spec.generations = parse_unsigned("generations", values["generations"]);
  spec.transient = parse_unsigned("transient", values["transient"]);
  spec.measure = parse_unsigned("measure", values["measure"]);
  spec.realizations = parse_unsigned("realizations", values["realizations"]);
  spec.seed = parse_unsigned("seed", values["seed"]);
  const auto threads = parse_unsigned("threads", values["threads"]);
  if (threads < 1 || threads > 4096) throw ConfigError("threads", "must be in [1, 4096]");
  spec.threads = static_cast<unsigned>(threads);

  config.out_dir = values["out"].empty() ? std::filesystem::path(".") : std::filesystem::path(values["out"]);
  if (!values["dump_graph"].empty()) {
    if (protocol != Protocol::TimeSeries) {
      throw ConfigError("dump_graph", "only the timeseries subcommand keeps a single network");
    }
    config.dump_graph = values["dump_graph"];
  }

  try {
    spec.validate(protocol);
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw ConfigError(what.substr(0, what.find(':')), what.substr(what.find(':') + 2));
  }
  return config;
}

// ---------------------------------------------------------------------------
// Output

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "r,mean_c,std_c,realizations,extinct_frac\n";
  for (const auto& row : table) {
    out << format_double(row.r) << ',' << format_double(row.mean_c) << ','
        << format_double(row.std_c) << ',' << row.realizations << ','
        << format_double(row.extinct_frac) << '\n';
  }
}

void write_fixation_csv(std::ostream& out, const std::vector<FixationRow>& rows) {
  out << "N_i,P_f,M,M_c\n";
  for (const auto& row : rows) {
    out << row.initial_size << ',' << format_double(row.p_fix) << ',' << row.runs << ','
        << row.cooperative << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << "generation,N,frac_coop\n";
  for (const auto& p : trace) {
    out << p.generation << ',' << p.nodes << ',' << format_double(p.frac_coop) << '\n';
  }
}

void write_profile_csv(std::ostream& out, const DegreeProfile& profile) {
  out << "k_bin_lo,k_bin_hi,frac_defect,sample_count\n";
  for (const auto& bin : profile.bins) {
    out << bin.lo << ',' << bin.hi << ',' << format_double(bin.frac_defect()) << ','
        << bin.samples << '\n';
  }
}

namespace {

template <typename Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer writer) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(file);
  if (!file) throw std::runtime_error("failed writing " + path.string());
  return path;
}

std::uint64_t estimated_work_units(const RunConfig& config) {
  const auto& s = config.spec;
  switch (config.protocol) {
    case Protocol::GrowNoMutation:
    case Protocol::StaticMutation:
    case Protocol::GrowWithMutation:
      return s.r_grid.size() * s.realizations;
    case Protocol::Fixation:
      return s.initial_sizes.size() * s.realizations;
    case Protocol::TimeSeries:
      return 1;
    case Protocol::DegreeProfile:
      return s.realizations;
    case Protocol::LearningComparison:
      return 2 * (s.realizations + s.r_grid.size() * s.realizations);
  }
  return 0;
}

}  // namespace

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string name(to_string(config.protocol));
  if (config.dry_run) {
    for (const auto& key : config_keys()) out << key << '=' << config.resolved.at(key) << '\n';
    out << "subcommand=" << name << '\n';
    out << "work_units=" << estimated_work_units(config) << '\n';
    return 0;
  }

  const auto started = std::chrono::steady_clock::now();
  std::vector<std::filesystem::path> outputs;
  try {
    std::filesystem::create_directories(config.out_dir);
    const auto csv = config.out_dir / (name + ".csv");
    const ExperimentSpec& spec = config.spec;
    switch (config.protocol) {
      case Protocol::GrowNoMutation: {
        const auto table = run_grow_no_mutation(spec);
        outputs.push_back(write_file(csv, [&](std::ostream& o) { write_sweep_csv(o, table); }));
        break;
      }
      case Protocol::StaticMutation: {
        const auto table = run_static_mutation(spec);
        outputs.push_back(write_file(csv, [&](std::ostream& o) { write_sweep_csv(o, table); }));
        break;
      }
      case Protocol::GrowWithMutation: {
        const auto table = run_grow_with_mutation(spec);
        outputs.push_back(write_file(csv, [&](std::ostream& o) { write_sweep_csv(o, table); }));
        break;
      }
      case Protocol::Fixation: {
        const auto rows = run_fixation(spec);
        outputs.push_back(write_file(csv, [&](std::ostream& o) { write_fixation_csv(o, rows); }));
        break;
      }
      case Protocol::TimeSeries: {
        Network final_network;
        const auto trace = run_time_series(spec, &final_network);
        outputs.push_back(write_file(csv, [&](std::ostream& o) { write_trace_csv(o, trace); }));
        if (config.dump_graph) {
          outputs.push_back(write_file(*config.dump_graph, [&](std::ostream& o) {
            write_edge_list(o, final_network, spec.growth, spec.seed);
          }));
        }
        break;
      }
      case Protocol::DegreeProfile: {
        const auto profile = run_degree_profile(spec);
        outputs.push_back(
            write_file(csv, [&](std::ostream& o) { write_profile_csv(o, profile); }));
        break;
      }
      case Protocol::LearningComparison: {
        const auto cmp = run_learning_comparison(spec);
        const auto at = [&](const char* suffix) { return config.out_dir / (name + suffix); };
        outputs.push_back(write_file(at("_profile_democratic.csv"), [&](std::ostream& o) {
          write_profile_csv(o, cmp.democratic);
        }));
        outputs.push_back(write_file(at("_profile_learning.csv"), [&](std::ostream& o) {
          write_profile_csv(o, cmp.learning);
        }));
        outputs.push_back(write_file(at("_sweep_democratic.csv"), [&](std::ostream& o) {
          write_sweep_csv(o, cmp.democratic_sweep);
        }));
        outputs.push_back(write_file(at("_sweep_learning.csv"), [&](std::ostream& o) {
          write_sweep_csv(o, cmp.learning_sweep);
        }));
        break;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << " [subcommand=" << name << " seed=" << config.spec.seed
        << "]\n";
    return 1;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const bool interrupted = config.spec.cancel && config.spec.cancel->load();

  nlohmann::ordered_json manifest;
  manifest["tool"] = "coopnet";
  manifest["version"] = kVersion;
  manifest["subcommand"] = name;
  manifest["seed"] = config.spec.seed;
  nlohmann::ordered_json cfg;
  for (const auto& key : config_keys()) cfg[key] = config.resolved.at(key);
  manifest["config"] = cfg;
  manifest["outputs"] = nlohmann::json::array();
  for (const auto& p : outputs) manifest["outputs"].push_back(p.filename().string());
  manifest["complete"] = !interrupted;
  manifest["wall_time_seconds"] = wall;
  try {
    write_file(config.out_dir / (name + ".manifest.json"),
               [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (interrupted) {
    err << "interrupted: partial results written to " << config.out_dir.string() << '\n';
    return 1;
  }
  for (const auto& p : outputs) out << "wrote " << p.string() << '\n';
  return 0;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* cancel) {
  CLI::App app{"Prisoner's dilemma on growing networks with democratic weighted update"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::map<std::string, std::string> flags;
  std::string config_path;
  bool dry_run = false;
  app.add_option("--config", config_path, "flat key=value file; flags take precedence");
  app.add_flag("--dry-run", dry_run, "print the resolved configuration and exit");

  const std::map<std::string, std::string> help = {
      {"model", "growth model: bam, ma, rnm"},
      {"L", "links per new node (>= 2)"},
      {"rule", "democratic or learning"},
      {"beta", "social influence intensity"},
      {"alpha", "natural selection intensity (inf = hard gate)"},
      {"a", "learning-activity exponent"},
      {"n", "growth fraction per generation"},
      {"P_m", "mutation probability"},
      {"r", "benefit-cost ratio for single-ratio protocols"},
      {"r_grid", "comma separated, strictly increasing benefit-cost ratios"},
      {"N_i", "initial cooperators (comma list for fixation)"},
      {"N_max", "final size of growing runs"},
      {"N", "size of fixed-size runs"},
      {"window", "growing runs average c while N > window * N_max"},
      {"generations", "time series length"},
      {"transient", "generations discarded in fixed-size runs"},
      {"measure", "generations averaged in fixed-size runs"},
      {"realizations", "realizations per grid point (M for fixation)"},
      {"seed", "64-bit seed"},
      {"threads", "worker threads"},
      {"out", std::string("output directory (env ") + kOutputDirEnv + ")"},
      {"dump_graph", "timeseries: write the final network as an edge list"},
  };
  for (const auto& key : config_keys()) {
    app.add_option_function<std::string>(
        "--" + key, [&flags, key](const std::string& v) { flags[key] = v; }, help.at(key));
  }

  std::vector<CLI::App*> subcommands;
  for (const auto& [protocol, label] : protocol_names()) {
    auto* sub = app.add_subcommand(label, "run the " + label + " protocol");
    sub->fallthrough();
    subcommands.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::string chosen;
  for (auto* sub : subcommands) {
    if (sub->parsed()) chosen = sub->get_name();
  }

  RunConfig config;
  try {
    std::map<std::string, std::string> file_values;
    if (!config_path.empty()) {
      std::ifstream file(config_path);
      if (!file) throw ConfigError("config", "cannot read " + config_path);
      file_values = read_config_file(file);
    }
    config = resolve_config(parse_protocol(chosen), file_values, flags);
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return 2;
  }
  config.dry_run = dry_run;
  config.spec.cancel = cancel;
  return dispatch(config, out, err);
}

}  // namespace coopnet
