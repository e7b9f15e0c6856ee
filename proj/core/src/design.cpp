#include "ptomo/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ptomo {

namespace {

// Accumulates one outcome's contribution g g^T / p. Returns false when the
// outcome is skipped.
bool accumulate_outcome(double p, const RVector& g, RMatrix& f) {
  if (p < kFisherProbFloor) {
    if (g.cwiseAbs().maxCoeff() > 1e-9) {
      throw Error(ErrorKind::kSingularConfiguration,
                  "outcome with zero probability has a nonzero parameter derivative");
    }
    return false;
  }
  f.noalias() += g * g.transpose() / p;
  return true;
}

void add_config_matrix(const AffineBasis& basis, const CMatrix& x, const CMatrix& c,
                       RMatrix& f) {
  const int m = basis.num_params();
  RVector g(m);
  for (int k = 0; k < m; ++k) g[k] = linalg::trace_product(c, basis.hk[k]);
  accumulate_outcome(linalg::trace_product(c, x), g, f);
}

}  // namespace

FisherMatrix fisher_matrix(const AffineBasis& basis, const RVector& lambda,
                           std::span<const TomographyConfiguration> configs) {
  if (lambda.size() != basis.num_params()) {
    throw Error(ErrorKind::kDimension, "lambda length differs from the parameter count");
  }
  const CMatrix x = basis.evaluate(lambda);
  FisherMatrix out;
  out.entries = RMatrix::Zero(basis.num_params(), basis.num_params());
  for (const auto& cfg : configs) {
    cfg.validate();
    if (cfg.input.dim() != basis.dim) {
      throw Error(ErrorKind::kDimension, "configuration and basis dimensions differ");
    }
    for (const auto& e : cfg.povm.elements()) {
      add_config_matrix(basis, x, config_matrix(cfg.input, e), out.entries);
    }
    ++out.configs_used;
  }
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  return out;
}

double fisher_trace(const AffineBasis& basis, const RVector& lambda,
                    std::span<const TomographyConfiguration> configs) {
  return fisher_matrix(basis, lambda, configs).entries.trace();
}

double fisher_trace(const AffineBasis& basis, const RVector& lambda,
                    std::span<const CMatrix> config_matrices) {
  if (lambda.size() != basis.num_params()) {
    throw Error(ErrorKind::kDimension, "lambda length differs from the parameter count");
  }
  const CMatrix x = basis.evaluate(lambda);
  RMatrix f = RMatrix::Zero(basis.num_params(), basis.num_params());
  for (const auto& c : config_matrices) {
    if (c.rows() != x.rows() || c.cols() != x.cols()) {
      throw Error(ErrorKind::kDimension, "configuration matrix has the wrong size");
    }
    add_config_matrix(basis, x, c, f);
  }
  return f.trace();
}

Vec3 config_vector(const BlochVector& b, const BlochVector& m) {
  return m.vec().cwiseProduct(b.vec());
}

double fisher_qubit(const BlochVector& b, const BlochVector& m, const Vec3& lambda) {
  if (std::abs(m.norm() - 1.0) > kUnitTol) {
    throw Error(ErrorKind::kInvalidMeasurement, "measurement direction must be a unit vector");
  }
  const Vec3 c = config_vector(b, m);
  const double s = c.dot(lambda);
  const double denom = 1.0 - s * s;
  if (denom <= 1e-12) {
    throw Error(ErrorKind::kSingularConfiguration,
                "configuration has a deterministic outcome");
  }
  return c.squaredNorm() / denom;
}

std::vector<int> optimal_order(const Vec3& lambda) {
  std::vector<int> idx = {0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(lambda[a]) > std::abs(lambda[b]);
  });
  return idx;
}

std::vector<TomographyConfiguration> optimal_configs_qubit(const Mub& directions,
                                                           const Vec3& lambda,
                                                           std::int64_t shots) {
  if (directions.dim != 2 || directions.size() != 3) {
    throw Error(ErrorKind::kDimension, "qubit channel directions expected");
  }
  std::vector<TomographyConfiguration> out;
  for (int i : optimal_order(lambda)) {
    out.push_back(TomographyConfiguration{DensityMatrix::pure(directions.vector(i, 0)),
                                          basis_povm(directions, i), shots});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Numerical design search

namespace {

struct StateCache {
  CMatrix out;                 // E(rho)
  std::vector<CMatrix> deriv;  // dE(rho)/dlambda_i = E_i(rho) - I/d
};

StateCache make_cache(const GenPauliChannel& ch, const CVector& psi) {
  const int d = ch.dim();
  const CMatrix rho = psi * psi.adjoint();
  StateCache c;
  c.out = ch.apply(rho);
  const CMatrix id = CMatrix::Identity(d, d) / static_cast<double>(d);
  for (int i = 0; i < ch.mub().size(); ++i) {
    c.deriv.push_back(cond_expectation(ch.mub(), i, rho) - id);
  }
  return c;
}

double objective_cached(const StateCache& c, const CMatrix& u) {
  double f = 0.0;
  for (int j = 0; j < u.cols(); ++j) {
    const auto col = u.col(j);
    const double p = (col.adjoint() * c.out * col)(0, 0).real();
    if (p < kFisherProbFloor) continue;
    double g2 = 0.0;
    for (const auto& dm : c.deriv) {
      const double g = (col.adjoint() * dm * col)(0, 0).real();
      g2 += g * g;
    }
    f += g2 / p;
  }
  return f;
}

// Plane rotation exp(i t G) with G = E_pq + E_qp (kind 0),
// -i E_pq + i E_qp (kind 1) or E_pp - E_qq (kind 2).
CMatrix plane_rotation(int d, int p, int q, int kind, double t) {
  CMatrix r = CMatrix::Identity(d, d);
  const double c = std::cos(t);
  const double s = std::sin(t);
  if (kind == 2) {
    r(p, p) = cplx(c, s);
    r(q, q) = cplx(c, -s);
    return r;
  }
  r(p, p) = c;
  r(q, q) = c;
  if (kind == 0) {
    r(p, q) = cplx(0.0, s);
    r(q, p) = cplx(0.0, s);
  } else {
    r(p, q) = s;
    r(q, p) = -s;
  }
  return r;
}

// Maximizes f over [lo, hi]: coarse grid, then golden section around the
// best grid point. Returns the argmax and its value.
template <class F>
std::pair<double, double> line_maximize(F&& f, double lo, double hi) {
  constexpr int kGrid = 12;
  double best_t = 0.0;
  double best_f = f(0.0);
  const double h = (hi - lo) / kGrid;
  for (int g = 0; g <= kGrid; ++g) {
    const double t = lo + g * h;
    const double v = f(t);
    if (v > best_f) {
      best_f = v;
      best_t = t;
    }
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_t - h;
  double b = best_t + h;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double t = 0.5 * (a + b);
  const double v = f(t);
  if (v > best_f) return {t, v};
  return {best_t, best_f};
}

CVector random_state(int d, Rng& rng) {
  CVector v(d);
  for (int k = 0; k < d; ++k) v[k] = cplx(standard_normal(rng), standard_normal(rng));
  return v.normalized();
}

CMatrix random_unitary(int d, Rng& rng) {
  CMatrix g(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) g(r, c) = cplx(standard_normal(rng), standard_normal(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(d, d);
}

CMatrix reorthonormalize(const CMatrix& u) {
  Eigen::HouseholderQR<CMatrix> qr(u);
  CMatrix q = qr.householderQ() * CMatrix::Identity(u.rows(), u.cols());
  // Keep each column's phase aligned with the input.
  for (int c = 0; c < u.cols(); ++c) {
    const cplx ov = q.col(c).dot(u.col(c));
    if (std::abs(ov) > 0.0) q.col(c) *= ov / std::abs(ov);
  }
  return q;
}

DesignCandidate make_candidate(const CVector& psi, const CMatrix& u, double objective,
                               int mub_basis) {
  std::vector<CMatrix> elements;
  for (int j = 0; j < u.cols(); ++j) elements.push_back(u.col(j) * u.col(j).adjoint());
  return DesignCandidate{
      TomographyConfiguration{DensityMatrix::pure(psi),
                              Povm::from_elements(std::move(elements)), 1},
      objective, mub_basis};
}

}  // namespace

double design_objective(const GenPauliChannel& ch, const CVector& psi,
                        const CMatrix& u) {
  if (psi.size() != ch.dim() || u.rows() != ch.dim() || u.cols() != ch.dim()) {
    throw Error(ErrorKind::kDimension, "state or basis dimension differs from the channel");
  }
  return objective_cached(make_cache(ch, psi.normalized()), u);
}

DesignSearchResult search_optimal_configs(const GenPauliChannel& ch, int restarts,
                                          Rng& rng, int max_sweeps) {
  if (restarts < 0 || max_sweeps < 1) {
    throw Error(ErrorKind::kInvalidArgument, "restarts must be >= 0 and sweeps >= 1");
  }
  const int d = ch.dim();
  const Mub& mub = ch.mub();
  std::vector<DesignCandidate> baselines;
  std::vector<DesignCandidate> found;

  for (int i = 0; i < mub.size(); ++i) {
    for (int k = 0; k < d; ++k) {
      const CVector psi = mub.vector(i, k);
      const double f = objective_cached(make_cache(ch, psi), mub.bases[i]);
      baselines.push_back(make_candidate(psi, mub.bases[i], f, i));
    }
  }

  for (int r = 0; r < restarts; ++r) {
    CVector psi = random_state(d, rng);
    CMatrix u = random_unitary(d, rng);
    StateCache cache = make_cache(ch, psi);
    double f = objective_cached(cache, u);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      const double start = f;
      for (int p = 0; p < d; ++p) {
        for (int q = p + 1; q < d; ++q) {
          for (int kind = 0; kind < 3; ++kind) {
            auto fs = [&](double t) {
              return objective_cached(make_cache(ch, plane_rotation(d, p, q, kind, t) * psi), u);
            };
            const auto [ts, vs] = line_maximize(fs, -std::numbers::pi / 2, std::numbers::pi / 2);
            if (vs > f) {
              psi = (plane_rotation(d, p, q, kind, ts) * psi).normalized();
              cache = make_cache(ch, psi);
              f = objective_cached(cache, u);
            }
            auto fu = [&](double t) {
              return objective_cached(cache, u * plane_rotation(d, p, q, kind, t));
            };
            const auto [tu, vu] = line_maximize(fu, -std::numbers::pi / 2, std::numbers::pi / 2);
            if (vu > f) {
              u = u * plane_rotation(d, p, q, kind, tu);
              f = objective_cached(cache, u);
            }
            // Rotating input and basis together escapes points where
            // neither can improve alone (c = e_3 for a qubit, say).
            auto fj = [&](double t) {
              const CMatrix r = plane_rotation(d, p, q, kind, t);
              return objective_cached(make_cache(ch, r * psi), r * u);
            };
            const auto [tj, vj] = line_maximize(fj, -std::numbers::pi / 2, std::numbers::pi / 2);
            if (vj > f) {
              const CMatrix r = plane_rotation(d, p, q, kind, tj);
              psi = (r * psi).normalized();
              u = r * u;
              cache = make_cache(ch, psi);
              f = objective_cached(cache, u);
            }
          }
        }
      }
      u = reorthonormalize(u);
      f = objective_cached(cache, u);
      if (f - start <= 1e-13 * std::max(1.0, std::abs(f))) break;
    }
    found.push_back(make_candidate(psi, u, f, -1));
  }

  const DesignCandidate* best = &baselines.front();
  double best_baseline = -1.0;
  for (const auto& c : baselines) {
    best_baseline = std::max(best_baseline, c.objective);
    if (c.objective > best->objective) best = &c;
  }
  for (const auto& c : found) {
    if (c.objective > best->objective) best = &c;
  }
  DesignCandidate top = *best;
  const bool attains =
      best_baseline >= top.objective - 1e-6 * std::max(1.0, std::abs(top.objective));
  return DesignSearchResult{std::move(baselines), std::move(found), std::move(top),
                            attains};
}

}  // namespace ptomo
