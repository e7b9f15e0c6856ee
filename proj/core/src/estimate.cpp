#include "ptomo/estimate.hpp"

#include <cmath>

namespace ptomo {

void TomographyConfiguration::validate() const {
  if (input.dim() != povm.dim()) {
    throw Error(ErrorKind::kDimension, "configuration input and POVM dimensions differ");
  }
  if (shots < 1) {
    throw Error(ErrorKind::kInvalidArgument, "configuration needs at least one shot");
  }
}

std::vector<RVector> exact_probabilities(
    std::span<const TomographyConfiguration> configs, const LinearMap& channel) {
  std::vector<RVector> out;
  out.reserve(configs.size());
  for (const auto& c : configs) {
    c.validate();
    const auto output = DensityMatrix::from_matrix(channel(c.input.matrix()));
    out.push_back(outcome_probs(output, c.povm));
  }
  return out;
}

MeasurementRecord simulate_record(std::span<const TomographyConfiguration> configs,
                                  const LinearMap& channel, Rng& rng) {
  const auto probs = exact_probabilities(configs, channel);
  MeasurementRecord record;
  for (std::size_t g = 0; g < configs.size(); ++g) {
    record.entries.push_back(sample_record(probs[g], configs[g].shots, rng));
  }
  return record;
}

std::vector<RVector> relative_freqs(const MeasurementRecord& record) {
  record.validate();
  std::vector<RVector> out;
  out.reserve(record.entries.size());
  for (const auto& e : record.entries) {
    RVector p(static_cast<Eigen::Index>(e.counts.size()));
    for (std::size_t a = 0; a < e.counts.size(); ++a) {
      p[static_cast<Eigen::Index>(a)] =
          static_cast<double>(e.counts[a]) / static_cast<double>(e.shots);
    }
    out.push_back(p);
  }
  return out;
}

namespace {

void check_data(std::span<const TomographyConfiguration> configs,
                std::span<const RVector> freqs) {
  if (configs.size() != freqs.size()) {
    throw Error(ErrorKind::kDimension, "one frequency vector per configuration expected");
  }
  for (std::size_t g = 0; g < configs.size(); ++g) {
    configs[g].validate();
    if (freqs[g].size() != configs[g].povm.size()) {
      throw Error(ErrorKind::kDimension,
                  "frequency vector length differs from the POVM size");
    }
  }
}

}  // namespace

EstimationResult estimate_choi(std::span<const TomographyConfiguration> configs,
                               const MeasurementRecord& record,
                               const SolverSettings& s) {
  const auto freqs = relative_freqs(record);
  return estimate_choi(configs, freqs, s);
}

EstimationResult estimate_choi(std::span<const TomographyConfiguration> configs,
                               std::span<const RVector> freqs,
                               const SolverSettings& s) {
  check_data(configs, freqs);
  if (configs.empty()) throw Error(ErrorKind::kInvalidArgument, "no configurations");
  std::vector<CMatrix> cs;
  std::vector<double> ps;
  for (std::size_t g = 0; g < configs.size(); ++g) {
    for (int a = 0; a < configs[g].povm.size(); ++a) {
      cs.push_back(config_matrix(configs[g].input, configs[g].povm.element(a)));
      ps.push_back(freqs[g][a]);
    }
  }
  const RVector p = Eigen::Map<const RVector>(ps.data(), static_cast<Eigen::Index>(ps.size()));
  auto ls = pgd_choi_ls(cs, p, configs.front().input.dim(), s);
  EstimationResult out;
  out.choi = std::move(ls.choi);
  out.residual = ls.objective;
  out.iterations = ls.iterations;
  return out;
}

EstimationResult estimate_affine(const AffineBasis& basis,
                                 const LinearInequalitySet& ineq,
                                 std::span<const TomographyConfiguration> configs,
                                 const MeasurementRecord& record,
                                 const SolverSettings& s) {
  const auto freqs = relative_freqs(record);
  return estimate_affine(basis, ineq, configs, freqs, s);
}

EstimationResult estimate_affine(const AffineBasis& basis,
                                 const LinearInequalitySet& ineq,
                                 std::span<const TomographyConfiguration> configs,
                                 std::span<const RVector> freqs,
                                 const SolverSettings& s) {
  check_data(configs, freqs);
  const int m = basis.num_params();
  // Each outcome contributes (r0 - a.lambda)^2 with r0 = p - tr(C H0) and
  // a_k = tr(C H_k).
  RMatrix a = RMatrix::Zero(m, m);
  RVector b = RVector::Zero(m);
  double constant = 0.0;
  for (std::size_t g = 0; g < configs.size(); ++g) {
    if (configs[g].input.dim() != basis.dim) {
      throw Error(ErrorKind::kDimension, "configuration and affine basis dimensions differ");
    }
    for (int al = 0; al < configs[g].povm.size(); ++al) {
      const CMatrix c = config_matrix(configs[g].input, configs[g].povm.element(al));
      RVector row(m);
      for (int k = 0; k < m; ++k) row[k] = linalg::trace_product(c, basis.hk[k]);
      const double r0 = freqs[g][al] - linalg::trace_product(c, basis.h0);
      a += 2.0 * row * row.transpose();
      b -= 2.0 * r0 * row;
      constant += r0 * r0;
    }
  }
  const auto ls = pgd_ls(QuadraticObjective{a, b}, ineq, s);
  EstimationResult out;
  out.lambda = ls.x;
  out.choi = ChoiMatrix{basis.dim, basis.evaluate(ls.x)};
  out.residual = std::max(0.0, ls.objective + constant);
  out.iterations = ls.iterations;
  return out;
}

Vec3 estimate_optimal_closed_form(const Vec3& p_plus, const Vec3& p_minus) {
  return p_plus - p_minus;
}

RVector affine_coordinates(const AffineBasis& basis, const CMatrix& x) {
  const int m = basis.num_params();
  RMatrix gram(m, m);
  RVector rhs(m);
  const CMatrix diff = x - basis.h0;
  for (int k = 0; k < m; ++k) {
    rhs[k] = linalg::inner(basis.hk[k], diff);
    for (int l = 0; l < m; ++l) gram(k, l) = linalg::inner(basis.hk[k], basis.hk[l]);
  }
  return gram.ldlt().solve(rhs);
}

BlochVector simulate_state_tomography(const BlochVector& b, std::int64_t shots,
                                      Rng& rng) {
  if (shots < 1) throw Error(ErrorKind::kInvalidArgument, "tomography needs shots >= 1");
  Vec3 v = b.vec();
  for (int i = 0; i < 3; ++i) {
    const double sd = std::sqrt(std::max(0.0, 1.0 - b[i]) / static_cast<double>(shots));
    v[i] += standard_normal(rng) * sd;
  }
  const double n = v.norm();
  if (n > 1.0) v /= n;
  return BlochVector(v);
}

BlochVector normalize_project(const Vec3& b, std::span<const Vec3> found) {
  Vec3 y = b;
  for (const auto& f : found) y -= f.dot(y) / f.squaredNorm() * f;
  const double n = y.norm();
  if (!(n > 1e-12)) {
    throw Error(ErrorKind::kDegenerateIterate,
                "iterate vanishes after projection onto the search subspace");
  }
  return BlochVector(y / n);
}

double DirectionSettings::tau() const {
  if (!shots) return exact_tau;
  return tau_scale * std::sqrt(3.0 / static_cast<double>(*shots));
}

namespace {

Vec3 random_pure_in_complement(std::span<const Vec3> found, Rng& rng) {
  for (;;) {
    Vec3 g(standard_normal(rng), standard_normal(rng), standard_normal(rng));
    for (const auto& f : found) g -= f.dot(g) * f;
    if (g.norm() > 1e-6) return g.normalized();
  }
}

Vec3 canonical_sign(const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) > 1e-12) return v[i] < 0.0 ? Vec3(-v) : v;
  }
  return v;
}

Vec3 clip_to_ball(const Vec3& v) {
  const double n = v.norm();
  return n > 1.0 ? Vec3(v / n) : v;
}

}  // namespace

DirectionEstimate estimate_directions(const BlochMap& channel,
                                      const DirectionSettings& settings, Rng& rng) {
  if (settings.cascade_depth < 1 || settings.max_steps < 1 ||
      settings.max_restarts < 0 || (settings.shots && *settings.shots < 1)) {
    throw Error(ErrorKind::kInvalidArgument, "invalid direction-search settings");
  }
  const double tau = settings.tau();
  DirectionEstimate est;
  std::vector<Vec3> found;

  for (int dir = 0; dir < 2; ++dir) {
    bool converged = false;
    int restarts = 0;
    std::vector<Vec3> iterates;
    std::vector<double> rough;
    for (int attempt = 0; attempt <= settings.max_restarts && !converged; ++attempt) {
      if (attempt > 0) ++restarts;
      iterates.clear();
      rough.clear();
      Vec3 b = random_pure_in_complement(found, rng);
      iterates.push_back(b);
      try {
        for (int step = 0; step < settings.max_steps; ++step) {
          Vec3 out = b;
          for (int k = 0; k < settings.cascade_depth; ++k) out = channel(out);
          rough.push_back(out.norm() / b.norm());
          Vec3 measured = out;
          if (settings.shots) {
            measured = simulate_state_tomography(BlochVector(clip_to_ball(out)),
                                                 *settings.shots, rng)
                           .vec();
          }
          Vec3 next = normalize_project(measured, found).vec();
          // Negative parameters flip the Bloch vector each pass; directions
          // are sign-free, so compare against the aligned iterate.
          if (next.dot(b) < 0.0) next = -next;
          iterates.push_back(next);
          const double dist = (b - next).norm();
          b = next;
          if (dist <= tau) {
            converged = true;
            break;
          }
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kDegenerateIterate) throw;
      }
      if (converged) found.push_back(b);
    }
    est.iterates.push_back(iterates);
    est.lambda_first_pass.push_back(rough);
    est.restarts.push_back(restarts);
    if (!converged) {
      est.directions = found;
      throw DirectionSearchError(
          "direction search " + std::to_string(dir + 1) +
              " did not meet the stopping criterion",
          std::move(est));
    }
  }
  found.push_back(found[0].cross(found[1]).normalized());
  for (auto& v : found) v = canonical_sign(v);
  est.directions = found;
  return est;
}

}  // namespace ptomo
