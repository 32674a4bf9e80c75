#include "coopnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace coopnet {

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::GrowNoMutation: return "grow";
    case Protocol::StaticMutation: return "static";
    case Protocol::GrowWithMutation: return "grow-mut";
    case Protocol::Fixation: return "fixation";
    case Protocol::TimeSeries: return "timeseries";
    case Protocol::DegreeProfile: return "degree-profile";
    case Protocol::LearningComparison: return "compare-learning";
  }
  return "?";
}

namespace {

[[noreturn]] void reject(const std::string& field, const std::string& why) {
  throw std::invalid_argument(field + ": " + why);
}

bool uses_grid(Protocol p) {
  return p == Protocol::GrowNoMutation || p == Protocol::StaticMutation ||
         p == Protocol::GrowWithMutation || p == Protocol::LearningComparison;
}

}  // namespace

void ExperimentSpec::validate(Protocol protocol) const {
  try {
    growth.validate();
  } catch (const std::invalid_argument& e) {
    reject("L", e.what());
  }
  try {
    rule.validate();
  } catch (const std::invalid_argument& e) {
    reject("rule", e.what());
  }
  if (!(learning_exponent > 0.0) || std::isinf(learning_exponent)) reject("a", "must be > 0");
  if (realizations < 1) reject("realizations", "must be >= 1");
  if (!(growth_fraction >= 0.0) || std::isinf(growth_fraction)) reject("n", "must be >= 0");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) reject("P_m", "must be in [0, 1]");
  if (!(window_fraction >= 0.0 && window_fraction < 1.0)) reject("window", "must be in [0, 1)");
  if (!(r > 0.0) || std::isinf(r)) reject("r", "must be > 0");

  const auto links = static_cast<std::size_t>(growth.links_per_node);
  if (uses_grid(protocol)) {
    if (r_grid.empty()) reject("r_grid", "must not be empty");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      if (!(r_grid[i] > 0.0) || std::isinf(r_grid[i])) reject("r_grid", "ratios must be > 0");
      if (i > 0 && !(r_grid[i] > r_grid[i - 1])) reject("r_grid", "must be strictly increasing");
    }
  }
  switch (protocol) {
    case Protocol::GrowNoMutation:
    case Protocol::GrowWithMutation:
    case Protocol::TimeSeries:
      if (initial_size < links) reject("N_i", "must be >= L");
      if (max_size < initial_size && protocol != Protocol::TimeSeries) {
        reject("N_max", "must be >= N_i");
      }
      break;
    case Protocol::Fixation:
      if (initial_sizes.empty()) reject("N_i", "fixation needs at least one initial size");
      for (auto size : initial_sizes) {
        if (size < links) reject("N_i", "must be >= L");
        if (size > max_size) reject("N_max", "must be >= every N_i");
      }
      if (!(growth_fraction > 0.0)) reject("n", "fixation needs n > 0");
      break;
    case Protocol::StaticMutation:
    case Protocol::DegreeProfile:
    case Protocol::LearningComparison:
      if (static_size < links) reject("N", "must be >= L");
      if (measure < 1) reject("measure", "must be >= 1");
      break;
  }
  if (protocol == Protocol::TimeSeries && generations < 1) reject("generations", "must be >= 1");
}

// ---------------------------------------------------------------------------
// Degree binning

namespace {

constexpr std::size_t kExactDegrees = 50;
constexpr double kLogBinRatio = 1.25;

std::size_t next_bin_start(std::size_t start) {
  return std::max(start + 1,
                  static_cast<std::size_t>(std::ceil(static_cast<double>(start) * kLogBinRatio)));
}

}  // namespace

std::size_t degree_bin_index(std::size_t k) {
  if (k <= kExactDegrees) return k;
  std::size_t index = kExactDegrees + 1;
  std::size_t start = kExactDegrees + 1;
  for (;;) {
    const std::size_t next = next_bin_start(start);
    if (k < next) return index;
    start = next;
    ++index;
  }
}

std::pair<std::size_t, std::size_t> degree_bin_range(std::size_t index) {
  if (index <= kExactDegrees) return {index, index};
  std::size_t start = kExactDegrees + 1;
  for (std::size_t i = kExactDegrees + 1; i < index; ++i) start = next_bin_start(start);
  return {start, next_bin_start(start) - 1};
}

double DegreeProfile::top_decile_defect_fraction() const {
  std::uint64_t total = 0;
  for (const auto& bin : bins) total += bin.samples;
  if (total == 0) return 0.0;
  std::uint64_t samples = 0;
  std::uint64_t defectors = 0;
  for (auto it = bins.rbegin(); it != bins.rend(); ++it) {
    samples += it->samples;
    defectors += it->defectors;
    if (samples * 10 >= total) break;
  }
  return static_cast<double>(defectors) / static_cast<double>(samples);
}

namespace {

struct BinCounts {
  std::vector<std::uint64_t> samples;
  std::vector<std::uint64_t> defectors;

  void record(const PopulationState& state) {
    for (NodeId i = 0; i < state.size(); ++i) {
      const std::size_t bin = degree_bin_index(state.network.degree(i));
      if (bin >= samples.size()) {
        samples.resize(bin + 1, 0);
        defectors.resize(bin + 1, 0);
      }
      ++samples[bin];
      defectors[bin] += state.strategies[i] == Strategy::Defector;
    }
  }

  void merge(const BinCounts& other) {
    if (other.samples.size() > samples.size()) {
      samples.resize(other.samples.size(), 0);
      defectors.resize(other.samples.size(), 0);
    }
    for (std::size_t b = 0; b < other.samples.size(); ++b) {
      samples[b] += other.samples[b];
      defectors[b] += other.defectors[b];
    }
  }

  DegreeProfile to_profile() const {
    DegreeProfile profile;
    for (std::size_t b = 0; b < samples.size(); ++b) {
      if (samples[b] == 0) continue;
      const auto [lo, hi] = degree_bin_range(b);
      profile.bins.push_back({lo, hi, samples[b], defectors[b]});
    }
    return profile;
  }
};

// ---------------------------------------------------------------------------
// Single realizations

struct RealizationResult {
  double mean_c = 0.0;
  double last_c = 0.0;
};

RandomStream realization_stream(std::uint64_t seed, std::size_t point, std::size_t realization) {
  return RandomStream(derive_seed(derive_seed(seed, point), realization));
}

Simulation make_simulation(const ExperimentSpec& spec, double r, std::size_t initial_size,
                           double growth_fraction, double mutation_prob, const UpdateRule& rule,
                           RandomStream rng) {
  PopulationState state = build_initial_cooperators(spec.growth, initial_size, rng);
  DynamicsConfig dynamics{growth_fraction, mutation_prob, spec.max_size};
  return Simulation(std::move(state), dynamics, GameParams::from_ratio(r), rule, spec.growth,
                    std::move(rng));
}

RealizationResult fixed_size_realization(const ExperimentSpec& spec, double r, std::size_t size,
                                         const UpdateRule& rule, RandomStream rng,
                                         BinCounts* bins = nullptr) {
  Simulation sim = make_simulation(spec, r, size, 0.0, spec.mutation_prob, rule, std::move(rng));
  for (std::size_t g = 0; g < spec.transient; ++g) sim.step();
  double sum = 0.0;
  double c = 1.0;
  for (std::size_t g = 0; g < spec.measure; ++g) {
    sim.play_and_update();
    c = sim.cooperation();
    sum += c;
    if (bins) bins->record(sim.state());
    sim.mutate_and_grow();
  }
  return {sum / static_cast<double>(spec.measure), c};
}

RealizationResult growing_realization(const ExperimentSpec& spec, double r,
                                      std::size_t initial_size, double mutation_prob,
                                      RandomStream rng) {
  if (spec.growth_fraction <= 0.0) {
    return fixed_size_realization(spec, r, initial_size, spec.rule, std::move(rng));
  }
  Simulation sim = make_simulation(spec, r, initial_size, spec.growth_fraction, mutation_prob,
                                   spec.rule, std::move(rng));
  const double window = spec.window_fraction * static_cast<double>(spec.max_size);
  double sum = 0.0;
  std::size_t samples = 0;
  double c = 1.0;
  for (;;) {
    sim.play_and_update();
    c = sim.cooperation();
    if (static_cast<double>(sim.state().size()) > window) {
      sum += c;
      ++samples;
    }
    if (sim.at_max_size()) break;
    sim.mutate_and_grow();
  }
  return {samples ? sum / static_cast<double>(samples) : c, c};
}

SweepRow aggregate(double r, const std::vector<std::optional<RealizationResult>>& runs) {
  SweepRow row;
  row.r = r;
  double sum = 0.0;
  std::size_t extinct = 0;
  for (const auto& run : runs) {
    if (!run) continue;
    ++row.realizations;
    sum += run->mean_c;
    extinct += run->last_c < 0.5;
  }
  if (row.realizations == 0) return row;
  const auto count = static_cast<double>(row.realizations);
  row.mean_c = sum / count;
  if (row.realizations > 1) {
    double sq = 0.0;
    for (const auto& run : runs) {
      if (run) sq += (run->mean_c - row.mean_c) * (run->mean_c - row.mean_c);
    }
    row.std_c = std::sqrt(sq / (count - 1.0));
  }
  row.extinct_frac = static_cast<double>(extinct) / count;
  return row;
}

template <typename Realization>
SweepTable sweep(const ExperimentSpec& spec, Realization realization) {
  const std::size_t points = spec.r_grid.size();
  const std::size_t per_point = spec.realizations;
  auto runs = detail::parallel_map<RealizationResult>(
      points * per_point, spec.threads,
      [&](std::size_t task) {
        const std::size_t point = task / per_point;
        const std::size_t k = task % per_point;
        return realization(spec.r_grid[point], realization_stream(spec.seed, point, k));
      },
      spec.cancel);

  SweepTable table;
  for (std::size_t point = 0; point < points; ++point) {
    std::vector<std::optional<RealizationResult>> slice(
        runs.begin() + static_cast<std::ptrdiff_t>(point * per_point),
        runs.begin() + static_cast<std::ptrdiff_t>((point + 1) * per_point));
    SweepRow row = aggregate(spec.r_grid[point], slice);
    if (row.realizations > 0) table.push_back(row);
  }
  return table;
}

DegreeProfile profile_for(const ExperimentSpec& spec, const UpdateRule& rule) {
  auto counts = detail::parallel_map<BinCounts>(
      spec.realizations, spec.threads,
      [&](std::size_t k) {
        BinCounts bins;
        fixed_size_realization(spec, spec.r, spec.static_size, rule,
                               realization_stream(spec.seed, 0, k), &bins);
        return bins;
      },
      spec.cancel);
  BinCounts total;
  for (const auto& c : counts) {
    if (c) total.merge(*c);
  }
  return total.to_profile();
}

}  // namespace

// ---------------------------------------------------------------------------
// Protocols

SweepTable run_grow_no_mutation(ExperimentSpec spec) {
  spec.mutation_prob = 0.0;
  spec.validate(Protocol::GrowNoMutation);
  return sweep(spec, [&](double r, RandomStream rng) {
    return growing_realization(spec, r, spec.initial_size, 0.0, std::move(rng));
  });
}

SweepTable run_static_mutation(ExperimentSpec spec) {
  spec.growth_fraction = 0.0;
  spec.validate(Protocol::StaticMutation);
  return sweep(spec, [&](double r, RandomStream rng) {
    return fixed_size_realization(spec, r, spec.static_size, spec.rule, std::move(rng));
  });
}

SweepTable run_grow_with_mutation(ExperimentSpec spec) {
  spec.validate(Protocol::GrowWithMutation);
  return sweep(spec, [&](double r, RandomStream rng) {
    return growing_realization(spec, r, spec.initial_size, spec.mutation_prob, std::move(rng));
  });
}

std::vector<FixationRow> run_fixation(ExperimentSpec spec) {
  spec.validate(Protocol::Fixation);
  const std::size_t points = spec.initial_sizes.size();
  const std::size_t per_point = spec.realizations;
  auto runs = detail::parallel_map<RealizationResult>(
      points * per_point, spec.threads,
      [&](std::size_t task) {
        const std::size_t point = task / per_point;
        return growing_realization(spec, spec.r, spec.initial_sizes[point], spec.mutation_prob,
                                   realization_stream(spec.seed, point, task % per_point));
      },
      spec.cancel);

  std::vector<FixationRow> rows;
  for (std::size_t point = 0; point < points; ++point) {
    FixationRow row;
    row.initial_size = spec.initial_sizes[point];
    for (std::size_t k = 0; k < per_point; ++k) {
      const auto& run = runs[point * per_point + k];
      if (!run) continue;
      ++row.runs;
      row.cooperative += run->last_c > 0.5;
    }
    if (row.runs == 0) continue;
    row.p_fix = static_cast<double>(row.cooperative) / static_cast<double>(row.runs);
    rows.push_back(row);
  }
  return rows;
}

std::vector<TracePoint> run_time_series(ExperimentSpec spec, Network* final_network) {
  spec.validate(Protocol::TimeSeries);
  Simulation sim = make_simulation(spec, spec.r, spec.initial_size, spec.growth_fraction,
                                   spec.mutation_prob, spec.rule,
                                   realization_stream(spec.seed, 0, 0));
  std::vector<TracePoint> trace;
  trace.reserve(spec.generations);
  for (std::size_t g = 0; g < spec.generations; ++g) {
    if (spec.cancel && spec.cancel->load()) break;
    sim.play_and_update();
    trace.push_back({sim.state().generation, sim.state().size(), sim.cooperation()});
    sim.mutate_and_grow();
  }
  if (final_network) *final_network = sim.state().network;
  return trace;
}

DegreeProfile run_degree_profile(ExperimentSpec spec) {
  spec.growth_fraction = 0.0;
  spec.validate(Protocol::DegreeProfile);
  return profile_for(spec, spec.rule);
}

LearningComparison run_learning_comparison(ExperimentSpec spec) {
  spec.growth_fraction = 0.0;
  spec.validate(Protocol::LearningComparison);
  const UpdateRule democratic = spec.rule;
  const UpdateRule learning = UpdateRule::learning(spec.learning_exponent, spec.rule.alpha);

  LearningComparison out;
  out.democratic = profile_for(spec, democratic);
  out.learning = profile_for(spec, learning);

  ExperimentSpec learning_spec = spec;
  learning_spec.rule = learning;
  out.democratic_sweep = run_static_mutation(spec);
  out.learning_sweep = run_static_mutation(learning_spec);
  return out;
}

std::optional<RcEstimate> estimate_rc(const SweepTable& table, double threshold) {
  if (table.size() < 2) throw std::invalid_argument("estimate_rc needs at least two rows");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].mean_c < threshold) continue;
    RcEstimate est{table[i].r, table[i].r};
    if (i > 0) {
      const auto& lo = table[i - 1];
      const auto& hi = table[i];
      const double t = (threshold - lo.mean_c) / (hi.mean_c - lo.mean_c);
      est.interpolated_r = lo.r + t * (hi.r - lo.r);
    }
    return est;
  }
  return std::nullopt;
}

}  // namespace coopnet
