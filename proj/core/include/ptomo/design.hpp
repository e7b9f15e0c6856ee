#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ptomo/channel.hpp"
#include "ptomo/estimate.hpp"
#include "ptomo/rng.hpp"

namespace ptomo {

/// Probabilities below this are treated as zero in Fisher sums.
inline constexpr double kFisherProbFloor = 1e-12;

struct FisherMatrix {
  RMatrix entries;
  int configs_used = 0;
};

/// F_ij = sum_alpha tr(C H_i) tr(C H_j) / tr(C X_lambda) over every outcome
/// of every configuration. Throws kSingularConfiguration when a vanishing
/// probability has a nonzero derivative.
FisherMatrix fisher_matrix(const AffineBasis& basis, const RVector& lambda,
                           std::span<const TomographyConfiguration> configs);

double fisher_trace(const AffineBasis& basis, const RVector& lambda,
                    std::span<const TomographyConfiguration> configs);

/// Same objective over raw configuration matrices C_alpha, which need not
/// come from a state and a POVM (convex combinations, for instance).
double fisher_trace(const AffineBasis& basis, const RVector& lambda,
                    std::span<const CMatrix> config_matrices);

/// c_i = m_i b_i.
Vec3 config_vector(const BlochVector& b, const BlochVector& m);

/// sum (m_i b_i)^2 / (1 - (c . lambda)^2) for input b and projective
/// measurement along unit m, channel with sigma directions.
double fisher_qubit(const BlochVector& b, const BlochVector& m, const Vec3& lambda);

/// Direction indices by descending |lambda_i|, ties by ascending index.
std::vector<int> optimal_order(const Vec3& lambda);

/// Pure input and projective POVM along each channel direction, in
/// optimal_order.
std::vector<TomographyConfiguration> optimal_configs_qubit(const Mub& directions,
                                                           const Vec3& lambda,
                                                           std::int64_t shots = 1);

struct DesignCandidate {
  TomographyConfiguration config;
  double objective;
  /// Basis index when input and measurement lie in one MUB basis, else -1.
  int mub_basis;
};

struct DesignSearchResult {
  /// Input |phi_{i,k}> measured in basis i, for every i and k.
  std::vector<DesignCandidate> baselines;
  /// Best configuration reached by each restart.
  std::vector<DesignCandidate> restarts;
  DesignCandidate best;
  /// True when some baseline is within tolerance of the best objective.
  bool mub_attains_max;
};

/// Trace objective of a pure input psi measured in the orthonormal basis u
/// (columns), in the natural parameters of the channel.
double design_objective(const GenPauliChannel& ch, const CVector& psi,
                        const CMatrix& u);

/// Random-restart coordinate ascent over pure inputs and orthonormal
/// measurement bases. restarts = 0 evaluates the MUB-aligned baselines only.
DesignSearchResult search_optimal_configs(const GenPauliChannel& ch, int restarts,
                                          Rng& rng, int max_sweeps = 200);

}  // namespace ptomo
