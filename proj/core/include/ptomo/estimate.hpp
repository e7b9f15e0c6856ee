#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ptomo/channel.hpp"
#include "ptomo/errors.hpp"
#include "ptomo/qstate.hpp"
#include "ptomo/rng.hpp"
#include "ptomo/solver.hpp"

namespace ptomo {

/// One (input state, POVM) pair probed n_gamma times.
struct TomographyConfiguration {
  DensityMatrix input;
  Povm povm;
  std::int64_t shots = 1;

  void validate() const;
};

/// Exact outcome probabilities of every configuration under a channel.
std::vector<RVector> exact_probabilities(
    std::span<const TomographyConfiguration> configs, const LinearMap& channel);

/// Simulated counts for every configuration; configuration g draws from
/// the generator in order.
MeasurementRecord simulate_record(std::span<const TomographyConfiguration> configs,
                                  const LinearMap& channel, Rng& rng);

/// p_hat_{alpha,gamma} = c_{alpha,gamma} / n_gamma.
std::vector<RVector> relative_freqs(const MeasurementRecord& record);

struct EstimationResult {
  RVector lambda;
  ChoiMatrix choi;
  double residual = 0.0;
  int iterations = 0;
};

/// Unconstrained-model least squares over all CPTP Choi matrices.
EstimationResult estimate_choi(std::span<const TomographyConfiguration> configs,
                               const MeasurementRecord& record,
                               const SolverSettings& s);
EstimationResult estimate_choi(std::span<const TomographyConfiguration> configs,
                               std::span<const RVector> freqs,
                               const SolverSettings& s);

/// Least squares in the affine parametrization H0 + sum_k lambda_k H_k,
/// subject to the linear parameter constraints.
EstimationResult estimate_affine(const AffineBasis& basis,
                                 const LinearInequalitySet& ineq,
                                 std::span<const TomographyConfiguration> configs,
                                 const MeasurementRecord& record,
                                 const SolverSettings& s);
EstimationResult estimate_affine(const AffineBasis& basis,
                                 const LinearInequalitySet& ineq,
                                 std::span<const TomographyConfiguration> configs,
                                 std::span<const RVector> freqs,
                                 const SolverSettings& s);

/// Estimator for the three optimal qubit configurations: p_plus - p_minus.
Vec3 estimate_optimal_closed_form(const Vec3& p_plus, const Vec3& p_minus);

/// Coefficients lambda_k = <H_k, X - H0> solving the (orthogonal) affine
/// decomposition of a Choi matrix in the least-squares sense.
RVector affine_coordinates(const AffineBasis& basis, const CMatrix& x);

/// State-tomography surrogate: theta_i + xi_i sqrt((1 - theta_i)/N) with
/// standard normal xi_i, pulled back into the unit ball if needed.
BlochVector simulate_state_tomography(const BlochVector& b, std::int64_t shots,
                                      Rng& rng);

/// Projects b onto the orthogonal complement of span(found) and normalizes.
/// Throws kDegenerateIterate when nothing is left after the projection.
BlochVector normalize_project(const Vec3& b, std::span<const Vec3> found);

/// Black-box qubit channel acting on Bloch vectors.
using BlochMap = std::function<Vec3(const Vec3&)>;

struct DirectionSettings {
  /// Tomography shots per step; nullopt selects exact tomography.
  std::optional<std::int64_t> shots = 5000;
  int cascade_depth = 2;
  double tau_scale = 2.0;
  int max_steps = 50;
  int max_restarts = 5;
  /// Stopping distance in exact mode.
  double exact_tau = 1e-10;

  /// tau = tau_scale * sqrt(3 / N), or exact_tau in exact mode.
  double tau() const;
};

struct DirectionEstimate {
  /// Orthonormal channel directions in discovery order (largest |lambda|
  /// first); the first nonzero component of each is positive.
  std::vector<Vec3> directions;
  /// Normalized inputs b~(0), b~(1), ... of the accepted search for each
  /// searched direction.
  std::vector<std::vector<Vec3>> iterates;
  /// ||b_out|| / ||b_in|| per step: rough |lambda|^k of the searched direction.
  std::vector<std::vector<double>> lambda_first_pass;
  std::vector<int> restarts;
};

class DirectionSearchError : public Error {
 public:
  DirectionSearchError(const std::string& what, DirectionEstimate partial)
      : Error(ErrorKind::kPartialResult, what), partial_(std::move(partial)) {}
  const DirectionEstimate& partial() const noexcept { return partial_; }

 private:
  DirectionEstimate partial_;
};

/// Iterative search for the depolarizing directions of a qubit Pauli
/// channel accessed only through input/output Bloch vectors. Two directions
/// are found by repeated renormalized application; the third is their cross
/// product.
DirectionEstimate estimate_directions(const BlochMap& channel,
                                      const DirectionSettings& settings, Rng& rng);

}  // namespace ptomo
