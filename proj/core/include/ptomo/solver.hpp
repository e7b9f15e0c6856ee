#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ptomo/channel.hpp"
#include "ptomo/linalg.hpp"

namespace ptomo {

enum class StepRule { kFixed, kBacktracking };

struct SolverSettings {
  int max_iters = 5000;
  double tol_objective = 1e-10;
  double tol_feasibility = 1e-8;
  StepRule step_rule = StepRule::kBacktracking;
  /// When set, iteration rows "iter,objective,feas_psd,feas_tp" are written
  /// here as CSV.
  std::ostream* trace = nullptr;

  void validate() const;
};

/// The polyhedron {x : rows * x <= bounds}.
struct LinearInequalitySet {
  RMatrix rows;
  RVector bounds;

  int size() const noexcept { return static_cast<int>(rows.rows()); }
  int dim() const noexcept { return static_cast<int>(rows.cols()); }
  /// max_i (rows x - bounds)_i, clipped below at 0.
  double max_violation(const RVector& x) const;
  void validate() const;
};

/// Tetrahedron 1 + l3 >= |l1 + l2|, 1 - l3 >= |l1 - l2| plus the box |l_i| <= 1.
LinearInequalitySet qubit_cptp_constraints();

/// 1 + d l_i >= sum l >= -1/(d-1) plus the box |l_i| <= 1, in d+1 variables.
LinearInequalitySet gen_pauli_constraints(int d);

/// Frobenius-nearest PSD matrix (negative eigenvalues clipped). Inputs with a
/// Hermitian residual up to 1e-10 are symmetrized; larger residuals throw.
CMatrix project_psd(const CMatrix& h);

/// Orthogonal projection onto {X : tr_2 X = I}: X - (tr_2 X - I) (x) I / d.
CMatrix project_tp(const CMatrix& x, int d);

struct DykstraLog {
  std::vector<CMatrix> iterates;
  std::vector<double> tp_residual;
};

/// Projection of x0 onto the CPTP Choi set by Dykstra's alternating scheme
/// between the trace-preserving affine set and the PSD cone. The returned
/// matrix is PSD with partial-trace residual at most s.tol_feasibility.
/// Throws NonConvergenceError after s.max_iters sweeps.
ChoiMatrix dykstra_cptp(const CMatrix& x0, int d, const SolverSettings& s,
                        DykstraLog* log = nullptr);

/// 0.5 x^T A x + b^T x with A symmetric PSD.
struct QuadraticObjective {
  RMatrix a;
  RVector b;

  double value(const RVector& x) const { return 0.5 * x.dot(a * x) + b.dot(x); }
  RVector gradient(const RVector& x) const { return a * x + b; }
};

/// Euclidean projection onto a polyhedron. Exact active-set enumeration for
/// small sets, cyclic Dykstra over half-spaces otherwise. Throws kInfeasible
/// when the polyhedron is empty.
RVector project_polytope(const RVector& x, const LinearInequalitySet& set);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double power_iteration(const RMatrix& a, int max_iters = 500, double tol = 1e-12);

struct LsResult {
  RVector x;
  double objective = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  std::vector<double> objective_log;
};

/// Projected gradient for a convex quadratic over a polyhedron, started from
/// the projection of the zero vector (minimum-norm tie-break).
LsResult pgd_ls(const QuadraticObjective& q, const LinearInequalitySet& ineq,
                const SolverSettings& s);

struct ChoiLsResult {
  ChoiMatrix choi;
  double objective = 0.0;
  int iterations = 0;
  double stationarity = 0.0;
  std::vector<double> objective_log;
};

/// argmin_X sum_k (freqs_k - tr(C_k X))^2 over CPTP Choi matrices, by
/// projected gradient with Dykstra projections.
ChoiLsResult pgd_choi_ls(std::span<const CMatrix> configs, const RVector& freqs,
                         int d, const SolverSettings& s);

}  // namespace ptomo
