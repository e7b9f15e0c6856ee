#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ptomo/linalg.hpp"
#include "ptomo/rng.hpp"

namespace ptomo {

/// Tolerances for state and measurement validation.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kBlochNormTol = 1e-12;
inline constexpr double kUnitTol = 1e-10;
inline constexpr double kProbabilityClip = 1e-10;

/// Real coordinates of a qubit state in the Pauli basis; lies in the unit ball.
class BlochVector {
 public:
  BlochVector() : v_(Vec3::Zero()) {}
  /// Throws kInvalidState when the norm exceeds 1 beyond tolerance.
  explicit BlochVector(const Vec3& v);
  BlochVector(double x, double y, double z) : BlochVector(Vec3(x, y, z)) {}

  const Vec3& vec() const noexcept { return v_; }
  double operator[](int i) const { return v_[i]; }
  double norm() const { return v_.norm(); }
  bool is_pure(double tol = 1e-10) const { return std::abs(norm() - 1.0) <= tol; }

 private:
  Vec3 v_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  /// Validates the three state invariants. A Hermitian residual below
  /// kHermitianTol is symmetrized away.
  static DensityMatrix from_matrix(const CMatrix& m);
  /// Projector onto the normalized vector psi.
  static DensityMatrix pure(const CVector& psi);
  static DensityMatrix maximally_mixed(int d);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }

 private:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// u orthonormal bases of C^d; column k of bases[i] is |phi_{i,k}>.
struct Mub {
  int dim = 0;
  std::vector<CMatrix> bases;

  int size() const noexcept { return static_cast<int>(bases.size()); }
  CVector vector(int i, int k) const { return bases.at(i).col(k); }
  CMatrix projector(int i, int k) const;
};

/// Largest deviation from orthonormality within bases and from |<.|.>|^2 = 1/d
/// across bases.
double mub_residual(const Mub& mub);

/// Positive operators summing to the identity.
class Povm {
 public:
  /// Validates positivity (to kPsdTol) and completeness (to kUnitTol).
  static Povm from_elements(std::vector<CMatrix> elements,
                            std::vector<std::string> labels = {});

  int dim() const noexcept { return static_cast<int>(elements_.front().rows()); }
  int size() const noexcept { return static_cast<int>(elements_.size()); }
  const std::vector<CMatrix>& elements() const noexcept { return elements_; }
  const CMatrix& element(int a) const { return elements_.at(a); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  Povm(std::vector<CMatrix> e, std::vector<std::string> l)
      : elements_(std::move(e)), labels_(std::move(l)) {}
  std::vector<CMatrix> elements_;
  std::vector<std::string> labels_;
};

/// Outcome counts of one configuration.
struct OutcomeCounts {
  std::vector<std::int64_t> counts;
  std::int64_t shots = 0;
};

/// Counts c_{alpha,gamma} for every configuration gamma.
struct MeasurementRecord {
  std::vector<OutcomeCounts> entries;

  std::int64_t total_shots() const;
  /// Throws kInvalidArgument unless every entry has non-negative counts
  /// summing to a positive shot number.
  void validate() const;
};

DensityMatrix bloch_to_density(const BlochVector& theta);
BlochVector density_to_bloch(const DensityMatrix& rho);

/// Mutually unbiased bases for d = 2 (Pauli eigenbases, ordered sigma_1,
/// sigma_2, sigma_3 with the +1 eigenvector first) and d = 3 (computational
/// basis followed by the three bases with columns (1, w^k, w^(2k+j))/sqrt(3)).
Mub standard_mub(int d);

/// Qubit MUB whose i-th basis is the eigenbasis of axes[i].sigma, with the
/// +1 eigenvector first. Axes must be orthonormal.
Mub mub_from_bloch_axes(const std::array<Vec3, 3>& axes);

/// Bloch vectors of |phi_{i,1}><phi_{i,1}| for a qubit MUB.
std::array<Vec3, 3> bloch_axes(const Mub& mub);

/// Two-outcome projective measurement along the unit Bloch vector m; the
/// first element has Bloch vector m, the second -m.
Povm projective_povm(const BlochVector& m);

/// Rank-one measurement in basis i of the MUB.
Povm basis_povm(const Mub& mub, int i);

/// Four-outcome symmetric informationally complete qubit POVM with elements
/// (I + t_k.sigma)/4 at the vertices t_k of a regular tetrahedron.
Povm tetrahedron_povm();

/// p(alpha) = tr(rho M_alpha). Values within kProbabilityClip outside [0, 1]
/// are clipped; larger violations throw kInvalidState.
RVector outcome_probs(const DensityMatrix& rho, const Povm& povm);

/// Multinomial draw of n outcomes by sequential binomial conditioning.
OutcomeCounts sample_record(const RVector& probs, std::int64_t n, Rng& rng);
OutcomeCounts sample_record(const RVector& probs, std::int64_t n,
                            std::uint64_t seed);

/// C = rho^T (x) M, so that tr(C X_E) = tr(E(rho) M) for the Choi matrix X_E.
CMatrix config_matrix(const DensityMatrix& rho, const CMatrix& element);

}  // namespace ptomo
