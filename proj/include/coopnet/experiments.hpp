#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "coopnet/engine.hpp"
#include "coopnet/graph.hpp"
#include "coopnet/update.hpp"

namespace coopnet {

enum class Protocol {
  GrowNoMutation,
  StaticMutation,
  GrowWithMutation,
  Fixation,
  TimeSeries,
  DegreeProfile,
  LearningComparison,
};

std::string_view to_string(Protocol protocol);

/// Parameters shared by every protocol runner. Defaults are desk scale.
struct ExperimentSpec {
  GrowthSpec growth{};
  UpdateRule rule = UpdateRule::democratic(1.0);
  double learning_exponent = 2.0;  // a, used by the learning-activity comparison

  std::vector<double> r_grid{1.5, 2.0, 3.0, 4.0};
  double r = 2.0;  // single-ratio protocols
  std::size_t realizations = 10;

  double growth_fraction = 0.001;  // n
  double mutation_prob = 0.01;     // P_m

  std::size_t initial_size = 1000;  // N_i
  std::size_t max_size = 4000;      // N_max
  std::size_t static_size = 2000;   // N for fixed-size protocols
  double window_fraction = 0.9;     // growing runs measure while N > window * N_max
  std::vector<std::size_t> initial_sizes{8, 50, 200, 800};  // fixation grid

  std::size_t transient = 2000;
  std::size_t measure = 500;
  std::size_t generations = 1000;  // time series length

  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Realizations not yet started are skipped once this becomes true.
  const std::atomic<bool>* cancel = nullptr;

  /// Throws std::invalid_argument naming the first offending field.
  void validate(Protocol protocol) const;
};

struct SweepRow {
  double r = 0.0;
  double mean_c = 0.0;
  double std_c = 0.0;
  std::size_t realizations = 0;
  double extinct_frac = 0.0;  // realizations whose last measured c fell below 1/2
};
using SweepTable = std::vector<SweepRow>;

struct FixationRow {
  std::size_t initial_size = 0;
  double p_fix = 0.0;
  std::size_t runs = 0;        // M
  std::size_t cooperative = 0;  // M_c
};

struct TracePoint {
  std::uint64_t generation = 0;
  std::size_t nodes = 0;
  double frac_coop = 0.0;
};

struct DegreeBin {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
  std::uint64_t samples = 0;
  std::uint64_t defectors = 0;

  double frac_defect() const {
    return samples ? static_cast<double>(defectors) / static_cast<double>(samples) : 0.0;
  }
};

/// Exact degrees up to 50, then geometric bins with ratio 1.25. Empty bins
/// are dropped.
struct DegreeProfile {
  std::vector<DegreeBin> bins;

  /// Defector fraction pooled over the highest-degree bins that together
  /// hold at least 10% of all samples.
  double top_decile_defect_fraction() const;
};

/// Index of the bin holding degree k, and its [lo, hi] range.
std::size_t degree_bin_index(std::size_t k);
std::pair<std::size_t, std::size_t> degree_bin_range(std::size_t index);

struct LearningComparison {
  DegreeProfile democratic;
  DegreeProfile learning;
  SweepTable democratic_sweep;
  SweepTable learning_sweep;
};

struct RcEstimate {
  double grid_r = 0.0;
  double interpolated_r = 0.0;
};

/// Growth from N_i cooperators to N_max with P_m forced to 0.
SweepTable run_grow_no_mutation(ExperimentSpec spec);
/// Fixed size N from a fully cooperative start with n forced to 0.
SweepTable run_static_mutation(ExperimentSpec spec);
/// Growth and mutation together. n = 0 falls back to the fixed-size protocol
/// at N = N_i.
SweepTable run_grow_with_mutation(ExperimentSpec spec);
/// P_f = M_c / M per N_i, success meaning N_max is reached with c > 1/2.
std::vector<FixationRow> run_fixation(ExperimentSpec spec);
/// One realization from N_i cooperators, recorded after every update. The
/// final network is copied to `final_network` when given.
std::vector<TracePoint> run_time_series(ExperimentSpec spec, Network* final_network = nullptr);
/// Fixed-size protocol at spec.r, defector fraction per degree bin pooled
/// over measurement generations and realizations.
DegreeProfile run_degree_profile(ExperimentSpec spec);
/// Democratic-weighted (spec.rule) against learning activity with exponent
/// spec.learning_exponent, same alpha, same seeds.
LearningComparison run_learning_comparison(ExperimentSpec spec);

/// Smallest grid r with mean c >= threshold and the linearly interpolated
/// crossing. Empty when the threshold is never reached. Throws
/// std::invalid_argument for fewer than two rows.
std::optional<RcEstimate> estimate_rc(const SweepTable& table, double threshold = 0.5);

}  // namespace coopnet
