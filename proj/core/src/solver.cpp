#include "ptomo/solver.hpp"

#include <bit>
#include <limits>
#include <cmath>
#include <cstdint>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "ptomo/errors.hpp"

namespace ptomo {

namespace {

constexpr double kArmijo = 1e-4;
// Largest stationarity accepted when the line search cannot make progress.
constexpr double kStallTol = 1e-6;
constexpr double kHermitianSymmetrizeTol = 1e-10;
// Enumeration is used up to this many constraints.
constexpr int kMaxEnumeratedConstraints = 24;

void trace_header(const SolverSettings& s) {
  if (s.trace) *s.trace << "iter,objective,feas_psd,feas_tp\n";
}

void trace_row(const SolverSettings& s, int iter, double objective,
               double feas_psd, double feas_tp) {
  if (s.trace) {
    *s.trace << iter << ',' << objective << ',' << feas_psd << ',' << feas_tp
             << '\n';
  }
}

double tp_residual(const CMatrix& x, int d) {
  return (linalg::partial_trace_second(x, d, d) - CMatrix::Identity(d, d))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

void SolverSettings::validate() const {
  if (max_iters < 1 || !(tol_objective > 0.0) || !(tol_feasibility > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "solver settings need max_iters >= 1 and positive tolerances");
  }
}

double LinearInequalitySet::max_violation(const RVector& x) const {
  if (size() == 0) return 0.0;
  return std::max(0.0, (rows * x - bounds).maxCoeff());
}

void LinearInequalitySet::validate() const {
  if (rows.rows() != bounds.size()) {
    throw Error(ErrorKind::kDimension, "inequality rows and bounds differ in count");
  }
}

LinearInequalitySet qubit_cptp_constraints() {
  LinearInequalitySet set;
  set.rows.resize(10, 3);
  set.bounds = RVector::Ones(10);
  // 1 + l3 >= +-(l1 + l2), 1 - l3 >= +-(l1 - l2).
  set.rows.row(0) << 1, 1, -1;
  set.rows.row(1) << -1, -1, -1;
  set.rows.row(2) << 1, -1, 1;
  set.rows.row(3) << -1, 1, 1;
  set.rows.block(4, 0, 3, 3) = RMatrix::Identity(3, 3);
  set.rows.block(7, 0, 3, 3) = -RMatrix::Identity(3, 3);
  return set;
}

LinearInequalitySet gen_pauli_constraints(int d) {
  if (d < 2) throw Error(ErrorKind::kDimension, "dimension must be >= 2");
  const int u = d + 1;
  LinearInequalitySet set;
  set.rows = RMatrix::Zero(3 * u + 1, u);
  set.bounds = RVector::Ones(3 * u + 1);
  for (int i = 0; i < u; ++i) {
    set.rows.row(i).setOnes();
    set.rows(i, i) -= d;
  }
  set.rows.row(u).setConstant(-1.0);
  set.bounds[u] = 1.0 / (d - 1);
  set.rows.block(u + 1, 0, u, u) = RMatrix::Identity(u, u);
  set.rows.block(2 * u + 1, 0, u, u) = -RMatrix::Identity(u, u);
  return set;
}

CMatrix project_psd(const CMatrix& h) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorKind::kDimension, "PSD projection needs a square matrix");
  }
  if (linalg::hermitian_residual(h) > kHermitianSymmetrizeTol) {
    throw Error(ErrorKind::kInvalidArgument, "PSD projection input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(linalg::hermitian_part(h));
  const RVector clipped = eig.eigenvalues().cwiseMax(0.0);
  const CMatrix& v = eig.eigenvectors();
  CMatrix out = v * clipped.cast<cplx>().asDiagonal() * v.adjoint();
  return linalg::hermitian_part(out);
}

CMatrix project_tp(const CMatrix& x, int d) {
  if (x.rows() != d * d || x.cols() != d * d) {
    throw Error(ErrorKind::kDimension, "trace-preserving projection: wrong size");
  }
  const CMatrix excess =
      linalg::partial_trace_second(x, d, d) - CMatrix::Identity(d, d);
  return x - linalg::kron(excess, CMatrix::Identity(d, d)) / static_cast<double>(d);
}

ChoiMatrix dykstra_cptp(const CMatrix& x0, int d, const SolverSettings& s,
                        DykstraLog* log) {
  s.validate();
  if (x0.rows() != d * d || x0.cols() != d * d) {
    throw Error(ErrorKind::kDimension, "Dykstra start has wrong size");
  }
  if (linalg::hermitian_residual(x0) > kHermitianSymmetrizeTol) {
    throw Error(ErrorKind::kInvalidArgument, "Dykstra start is not Hermitian");
  }
  const CMatrix start = linalg::hermitian_part(x0);
  CMatrix x = start;
  CMatrix p = CMatrix::Zero(x.rows(), x.cols());
  CMatrix q = p;
  trace_header(s);
  double res = INFINITY;
  for (int it = 1; it <= s.max_iters; ++it) {
    const CMatrix y = project_tp(x + p, d);
    p = x + p - y;
    const CMatrix next = project_psd(y + q);
    q = y + q - next;
    x = next;
    res = tp_residual(x, d);
    if (log) {
      log->iterates.push_back(x);
      log->tp_residual.push_back(res);
    }
    trace_row(s, it, (x - start).norm(), 0.0, res);
    if (res <= s.tol_feasibility) return ChoiMatrix{d, x};
  }
  throw NonConvergenceError("Dykstra projection did not reach the CPTP set",
                            s.max_iters, 0.0, res);
}

namespace {

// Cyclic Dykstra over half-spaces; used for large constraint sets.
RVector project_halfspaces(const RVector& x, const LinearInequalitySet& set) {
  const int m = set.size();
  RVector y = x;
  RMatrix corr = RMatrix::Zero(x.size(), m);
  for (int sweep = 0; sweep < 100000; ++sweep) {
    const RVector before = y;
    for (int i = 0; i < m; ++i) {
      const RVector z = y + corr.col(i);
      const auto a = set.rows.row(i).transpose();
      const double viol = a.dot(z) - set.bounds[i];
      const RVector proj = viol > 0.0 ? RVector(z - viol / a.squaredNorm() * a) : z;
      corr.col(i) = z - proj;
      y = proj;
    }
    if ((y - before).norm() <= 1e-15 && set.max_violation(y) <= 1e-12) return y;
  }
  if (set.max_violation(y) > 1e-9) {
    throw Error(ErrorKind::kInfeasible, "constraint set appears to be empty");
  }
  return y;
}

}  // namespace

RVector project_polytope(const RVector& x, const LinearInequalitySet& set) {
  set.validate();
  if (x.size() != set.dim() && set.size() > 0) {
    throw Error(ErrorKind::kDimension, "point and constraint dimensions differ");
  }
  const double scale = 1.0 + set.bounds.cwiseAbs().maxCoeff();
  // Only exactly feasible points pass through: tolerating a small violation
  // lets projected gradient creep outside the set along the normal.
  if (set.max_violation(x) <= 0.0) return x;
  const int m = set.size();
  const int n = static_cast<int>(x.size());
  if (m > kMaxEnumeratedConstraints) return project_halfspaces(x, set);

  // The projection satisfies KKT with some linearly independent active set
  // of at most n rows; enumerate by increasing size.
  // Rounding can let a wrong active set pass a loose KKT test near degenerate
  // vertices, so return early only on a tight fit and otherwise keep the best.
  const std::uint32_t limit = 1u << m;
  RVector best;
  double best_err = std::numeric_limits<double>::infinity();
  for (int size = 1; size <= std::min(n, m); ++size) {
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
      if (std::popcount(mask) != size) continue;
      RMatrix g(size, n);
      RVector h(size);
      for (int i = 0, r = 0; i < m; ++i) {
        if (mask & (1u << i)) {
          g.row(r) = set.rows.row(i);
          h[r++] = set.bounds[i];
        }
      }
      const RMatrix gram = g * g.transpose();
      Eigen::FullPivLU<RMatrix> lu(gram);
      if (lu.rank() < size) continue;
      const RVector mu = lu.solve(g * x - h);
      const RVector y = x - g.transpose() * mu;
      const double err = std::max(set.max_violation(y), std::max(0.0, -mu.minCoeff()));
      if (err <= 1e-14 * scale) return y;
      if (err < best_err) {
        best_err = err;
        best = y;
      }
    }
  }
  if (best_err <= 1e-10 * scale) return best;
  throw Error(ErrorKind::kInfeasible, "constraint set is empty");
}

double power_iteration(const RMatrix& a, int max_iters, double tol) {
  if (a.rows() == 0) return 0.0;
  RVector v(a.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i);
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const RVector w = a * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - est) <= tol * std::max(1.0, std::abs(next))) {
      est = next;
      break;
    }
    est = next;
  }
  return est;
}

LsResult pgd_ls(const QuadraticObjective& q, const LinearInequalitySet& ineq,
                const SolverSettings& s) {
  s.validate();
  const auto n = q.b.size();
  if (q.a.rows() != n || q.a.cols() != n) {
    throw Error(ErrorKind::kDimension, "quadratic objective size mismatch");
  }
  if (ineq.size() > 0 && ineq.dim() != n) {
    throw Error(ErrorKind::kDimension, "constraints and objective differ in size");
  }
  // Small margin so the fixed rule is safe against power-iteration underestimates.
  const double lip = 1.01 * power_iteration(q.a);
  const double step0 = lip > 0.0 ? 1.0 / lip : 1.0;

  LsResult out;
  RVector x = project_polytope(RVector::Zero(n), ineq);
  double fx = q.value(x);
  out.objective_log.push_back(fx);
  trace_header(s);
  for (int it = 1; it <= s.max_iters; ++it) {
    const RVector g = q.gradient(x);
    RVector y = project_polytope(x - step0 * g, ineq);
    // Stationarity is judged at the base step so backtracking cannot fake it.
    const double gm = (x - y).norm() / step0;
    bool stalled = false;
    if (gm > s.tol_feasibility) {
      double t = step0;
      // f(y) - f(x) from the step itself; differencing two values of f loses
      // the decrease to rounding near the minimum.
      auto decrease = [&](const RVector& dx) { return g.dot(dx) + 0.5 * dx.dot(q.a * dx); };
      if (s.step_rule == StepRule::kBacktracking) {
        while (decrease(y - x) > kArmijo * g.dot(y - x)) {
          t *= 0.5;
          y = project_polytope(x - t * g, ineq);
          if (t < 1e-20 || y == x) {
            stalled = true;
            break;
          }
        }
      }
      if (!stalled) {
        x = y;
        fx = q.value(x);
      }
    }
    out.objective_log.push_back(fx);
    trace_row(s, it, fx, 0.0, ineq.max_violation(x));
    // A stalled line search means rounding dominates the decrease.
    if (gm <= s.tol_feasibility || (stalled && gm <= kStallTol * (1.0 + g.norm()))) {
      out.x = x;
      out.objective = fx;
      out.iterations = it;
      out.kkt_residual = gm;
      return out;
    }
    if (stalled) break;
  }
  throw NonConvergenceError("projected gradient did not converge", s.max_iters,
                            0.0, ineq.max_violation(x));
}

ChoiLsResult pgd_choi_ls(std::span<const CMatrix> configs, const RVector& freqs,
                         int d, const SolverSettings& s) {
  s.validate();
  const int dd = d * d;
  const auto k = static_cast<Eigen::Index>(configs.size());
  if (freqs.size() != k || k == 0) {
    throw Error(ErrorKind::kDimension, "need one frequency per configuration matrix");
  }
  for (const auto& c : configs) {
    if (c.rows() != dd || c.cols() != dd) {
      throw Error(ErrorKind::kDimension, "configuration matrix has wrong size");
    }
  }
  RMatrix gram(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a; b < k; ++b) {
      gram(a, b) = gram(b, a) = linalg::inner(configs[a], configs[b]);
    }
  }
  const double lip = 2.0 * 1.01 * power_iteration(gram);
  const double step0 = lip > 0.0 ? 1.0 / lip : 1.0;

  auto residuals = [&](const CMatrix& x) {
    RVector r(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      r[a] = freqs[a] - linalg::trace_product(configs[a], x);
    }
    return r;
  };
  auto gradient = [&](const RVector& r) {
    CMatrix g = CMatrix::Zero(dd, dd);
    for (Eigen::Index a = 0; a < k; ++a) g -= 2.0 * r[a] * configs[a];
    return g;
  };

  SolverSettings inner = s;
  inner.trace = nullptr;
  inner.tol_feasibility = std::min(1e-12, 1e-3 * s.tol_feasibility);
  inner.max_iters = 100000;

  ChoiLsResult out;
  CMatrix x = CMatrix::Identity(dd, dd) / static_cast<double>(d);
  RVector r = residuals(x);
  double fx = r.squaredNorm();
  out.objective_log.push_back(fx);
  trace_header(s);
  for (int it = 1; it <= s.max_iters; ++it) {
    const CMatrix g = gradient(r);
    CMatrix y = dykstra_cptp(x - step0 * g, d, inner).entries;
    const double stat = (x - y).norm() / step0;
    const double tol = s.tol_feasibility * (1.0 + g.norm());
    bool stalled = false;
    if (stat > tol) {
      double t = step0;
      RVector ry = residuals(y);
      // f(y) - f(x) = <g, y - x> + |r(x) - r(y)|^2, free of cancellation.
      auto decrease = [&](const CMatrix& y, const RVector& ry) {
        return linalg::inner(g, y - x) + (r - ry).squaredNorm();
      };
      if (s.step_rule == StepRule::kBacktracking) {
        while (decrease(y, ry) > kArmijo * linalg::inner(g, y - x)) {
          t *= 0.5;
          y = dykstra_cptp(x - t * g, d, inner).entries;
          ry = residuals(y);
          if (t < 1e-20 || y == x) {
            stalled = true;
            break;
          }
        }
      }
      const double fy = ry.squaredNorm();
      if (!stalled) {
        x = y;
        r = ry;
        fx = fy;
      }
    }
    out.objective_log.push_back(fx);
    trace_row(s, it, fx, std::max(0.0, -linalg::min_eigenvalue(x)),
              tp_residual(x, d));
    // Inexact projections can stall the line search a hair above tol.
    if (stat <= tol || (stalled && stat <= kStallTol * (1.0 + g.norm()))) {
      out.choi = ChoiMatrix{d, x};
      out.objective = fx;
      out.iterations = it;
      out.stationarity = stat;
      return out;
    }
    if (stalled) break;
  }
  throw NonConvergenceError("Choi least squares did not converge", s.max_iters,
                            std::max(0.0, -linalg::min_eigenvalue(x)),
                            tp_residual(x, d), fx);
}

}  // namespace ptomo
