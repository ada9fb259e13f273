#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momdec/matrix_lab.hpp"
#include "momdec/moments.hpp"

namespace momdec {

/// Reproducible experiment description. Defaults mirror the reference setup:
/// a 4x4 diagonal signal 2,1,1,0.5 and third-moment estimation.
struct ExperimentConfig {
  std::string experiment = "custom";  // fig1 | fig2 | fig3 | custom
  std::string matrix_file;            // takes precedence over diagonal when set
  std::vector<double> diagonal{2.0, 1.0, 1.0, 0.5};
  int rows = 4;
  int cols = 4;
  int inner = 4;  // mixing inner dimension for the product model
  int order = 3;
  std::vector<int> schedule;  // observation counts L; per-experiment default
  std::vector<std::pair<int, int>> stackings;  // fig2 layouts; empty = all factorizations
  std::vector<int> empirical_rows;             // fig2: block_rows values sampled empirically
  int empirical_total = 50;  // fig2: L at which empirical variances run
  std::optional<int> runs;   // K; defaults per experiment (fig2: 1000, fig3: 50)
  double noise_scale = 1.0;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int weight_cap = kDefaultWeightCap;
};

/// Parse the JSON config format (documented in the README); unknown keys are
/// rejected. Experiment-specific defaults are filled afterwards by the
/// runners.
ExperimentConfig load_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Stable hash over the effective configuration, stamped into every CSV.
std::uint64_t config_hash(const ExperimentConfig& config);

/// The configured signal matrix (rows x cols).
ComplexMatrix config_signal(const ExperimentConfig& config);

/// The configured mixing matrix for the product model (rows x inner).
ComplexMatrix config_mixing(const ExperimentConfig& config);

/// Quadratically stacked estimates against the true moment for a schedule of
/// square observation counts. CSV columns: L,estimate,true_D3.
void run_fig1(const ExperimentConfig& config, std::ostream& out);

/// Exact L*variance across every factorization of each scheduled L, the
/// asymptotic reference lines, and seeded empirical variances at the chosen
/// layouts. CSV columns:
/// L,L1,L2,c,exact_Lv,limit_rect,limit_horiz,limit_avg,empirical_Lv.
void run_fig2(const ExperimentConfig& config, std::ostream& out);

/// Two-stage estimation for the product model, horizontally stacked versus
/// averaged, with empirical variances over the configured runs. CSV columns:
/// L,mode,estimate_mean,empirical_variance,true_moment.
void run_fig3(const ExperimentConfig& config, std::ostream& out);

/// One stacked estimate of the order-p signal moment from freshly sampled
/// observations on streams [stream_base, stream_base + L).
double stacked_moment_estimate(const ComplexMatrix& signal, const ModelDims& dims,
                               const StackingScheme& scheme, int order, std::uint64_t master_seed,
                               std::uint64_t stream_base, int weight_cap = kDefaultWeightCap);

/// Mean of per-observation estimates over the same stream layout.
double averaged_moment_estimate(const ComplexMatrix& signal, const ModelDims& dims, int count,
                                int order, std::uint64_t master_seed, std::uint64_t stream_base,
                                int weight_cap = kDefaultWeightCap);

}  // namespace momdec
