#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptomo/channel.hpp"
#include "ptomo/estimate.hpp"
#include "ptomo/solver.hpp"

namespace ptomo {

enum class Strategy {
  kNonoptimalMinimal,
  kNonoptimalInput,
  kOptimal,
  kQutritNonoptimal,
  kQutritOptimal,
};

std::string_view to_string(Strategy s);
/// Accepts the CLI names "nonoptimal-minimal", "nonoptimal-input",
/// "optimal", "qutrit-nonoptimal" and "qutrit-optimal".
Strategy strategy_from_string(std::string_view name);

/// Generalized Pauli channel given by its parameters and MUB directions.
struct ChannelSpec {
  RVector lambda;
  Mub mub;

  GenPauliChannel channel() const { return GenPauliChannel(mub, lambda); }
  int dim() const noexcept { return mub.dim; }
};

struct CaseStudySpec {
  ChannelSpec channel;
  Strategy strategy = Strategy::kOptimal;
  std::vector<std::int64_t> shot_grid = {100, 250, 500, 1000, 1500, 2500, 4500};
  int trials = 5;
  std::uint64_t seed = 0;
  /// Use exact outcome probabilities instead of sampled frequencies.
  bool exact = false;
  SolverSettings solver;

  void validate() const;
};

/// Qubit channel (0.3, -0.1, 0.1) with sigma directions, or for the qutrit
/// strategies (-0.3, -0.2, -0.1, 0.1) on the closed-form template's
/// parameter labels, mapped to standard_mub(3) order.
CaseStudySpec default_case_study(Strategy s);

/// Tomography configurations of a strategy, each probed `shots` times.
///   nonoptimal-minimal: input (1,1,1)/sqrt(3), tetrahedron POVM.
///   nonoptimal-input:   input (1,1,1)/sqrt(3), measured in each direction.
///   optimal:            optimal_configs_qubit.
///   qutrit-nonoptimal:  input sum_i |phi_{i,1}> normalized, every basis.
///   qutrit-optimal:     input |phi_{i,1}> measured in basis i.
std::vector<TomographyConfiguration> strategy_configs(const ChannelSpec& ch,
                                                      Strategy s,
                                                      std::int64_t shots);

/// Affine basis and parameter constraints the estimator uses for a channel.
AffineBasis estimation_basis(const Mub& mub);
LinearInequalitySet estimation_constraints(int d);

struct MetricsRow {
  std::int64_t n_shots = 0;
  /// Trials whose estimation succeeded.
  int trial_count = 0;
  RVector lambda_mean;
  RVector lambda_var;
  double hs_error = 0.0;
  /// Mean of p_plus - p_minus, for the optimal strategy.
  std::optional<RVector> closed_form_mean;
  int failures = 0;
  bool incomplete() const noexcept { return trial_count == 0; }
};

/// Generator stream of trial t at shot number n. Rows with equal n share
/// streams across runs, so sweeps reuse the same random numbers.
std::uint64_t trial_stream(std::int64_t n, int t);

std::vector<MetricsRow> run_case_study(const CaseStudySpec& spec);

struct EmpiricalStats {
  RVector mean;
  RVector variance;
};

/// Sample mean and unbiased variance (divisor T - 1) per component.
EmpiricalStats empirical_stats(std::span<const RVector> estimates);

/// Frobenius norm of the difference.
double hs_error(const ChoiMatrix& estimate, const ChoiMatrix& truth);

/// Rotation of v by alpha about the unit axis (Rodrigues).
BlochVector rotate_bloch(const BlochVector& v, const BlochVector& axis, double alpha);

struct RobustnessRow {
  double alpha = 0.0;
  int trial_count = 0;
  /// Mean Frobenius distance to the Choi matrix of the rotated channel.
  double hs_error = 0.0;
  RVector lambda_mean;
  RVector lambda_var;
};

/// Data from the channel with directions R_axis(alpha) e_i, estimated with
/// the optimal configurations of the unrotated sigma directions.
std::vector<RobustnessRow> robustness_sweep(const Vec3& lambda, const BlochVector& axis,
                                            std::span<const double> alphas,
                                            std::int64_t shots, int trials,
                                            std::uint64_t seed,
                                            const SolverSettings& solver = {});

/// Header n_shots,trial_count,lambda_mean_*,lambda_var_*,hs_error; numbers
/// are printed with 17 significant digits.
void write_case_study_csv(std::ostream& os, std::span<const MetricsRow> rows);
/// Header alpha,trial_count,hs_error,lambda_mean_*,lambda_var_*.
void write_robustness_csv(std::ostream& os, std::span<const RobustnessRow> rows);

}  // namespace ptomo
