#include "ptomo/harness.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "ptomo/design.hpp"
#include "ptomo/rng.hpp"

namespace ptomo {

namespace {

constexpr std::string_view kStrategyNames[] = {
    "nonoptimal-minimal", "nonoptimal-input", "optimal", "qutrit-nonoptimal",
    "qutrit-optimal"};

bool is_qutrit(Strategy s) {
  return s == Strategy::kQutritNonoptimal || s == Strategy::kQutritOptimal;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DensityMatrix bloch_state(const Vec3& v) { return bloch_to_density(BlochVector(v)); }

}  // namespace

std::string_view to_string(Strategy s) {
  return kStrategyNames[static_cast<int>(s)];
}

Strategy strategy_from_string(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kStrategyNames[i] == name) return static_cast<Strategy>(i);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

void CaseStudySpec::validate() const {
  if (trials < 1) throw Error(ErrorKind::kInvalidArgument, "trials must be >= 1");
  if (shot_grid.empty()) throw Error(ErrorKind::kInvalidArgument, "empty shot grid");
  for (std::size_t i = 0; i < shot_grid.size(); ++i) {
    if (shot_grid[i] < 1 || (i > 0 && shot_grid[i] <= shot_grid[i - 1])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "shot grid must be positive and strictly increasing");
    }
  }
  if (channel.mub.dim != (is_qutrit(strategy) ? 3 : 2)) {
    throw Error(ErrorKind::kDimension, "channel dimension does not fit the strategy");
  }
  channel.channel();
  solver.validate();
}

CaseStudySpec default_case_study(Strategy s) {
  CaseStudySpec spec;
  spec.strategy = s;
  if (is_qutrit(s)) {
    RVector t(4);
    t << -0.3, -0.2, -0.1, 0.1;
    spec.channel = ChannelSpec{qutrit_lambda_from_template(t), standard_mub(3)};
  } else {
    spec.channel = ChannelSpec{Vec3(0.3, -0.1, 0.1), standard_mub(2)};
  }
  return spec;
}

std::vector<TomographyConfiguration> strategy_configs(const ChannelSpec& ch, Strategy s,
                                                      std::int64_t shots) {
  const Mub& mub = ch.mub;
  std::vector<TomographyConfiguration> out;
  const Vec3 diag = Vec3::Ones().normalized();
  switch (s) {
    case Strategy::kNonoptimalMinimal:
      out.push_back({bloch_state(diag), tetrahedron_povm(), shots});
      break;
    case Strategy::kNonoptimalInput:
      for (int i = 0; i < 3; ++i) out.push_back({bloch_state(diag), basis_povm(mub, i), shots});
      break;
    case Strategy::kOptimal:
      return optimal_configs_qubit(mub, ch.lambda, shots);
    case Strategy::kQutritNonoptimal: {
      CVector phi = CVector::Zero(mub.dim);
      for (int i = 0; i < mub.size(); ++i) phi += mub.vector(i, 0);
      const auto input = DensityMatrix::pure(phi.normalized());
      for (int i = 0; i < mub.size(); ++i) out.push_back({input, basis_povm(mub, i), shots});
      break;
    }
    case Strategy::kQutritOptimal:
      for (int i = 0; i < mub.size(); ++i) {
        out.push_back({DensityMatrix::pure(mub.vector(i, 0)), basis_povm(mub, i), shots});
      }
      break;
  }
  return out;
}

AffineBasis estimation_basis(const Mub& mub) {
  if (mub.dim == 2 && mub.size() == 3) {
    const auto axes = bloch_axes(mub);
    bool standard = true;
    for (int i = 0; i < 3; ++i) standard = standard && (axes[i] - Vec3::Unit(i)).norm() < 1e-12;
    return standard ? affine_basis_qubit() : affine_basis_gen(mub);
  }
  if (mub.dim == 3) return affine_basis_qutrit(mub);
  return affine_basis_gen(mub);
}

LinearInequalitySet estimation_constraints(int d) {
  return d == 2 ? qubit_cptp_constraints() : gen_pauli_constraints(d);
}

std::uint64_t trial_stream(std::int64_t n, int t) {
  return (static_cast<std::uint64_t>(n) << 24) ^ static_cast<std::uint64_t>(t);
}

EmpiricalStats empirical_stats(std::span<const RVector> estimates) {
  if (estimates.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "empirical statistics need >= 2 estimates");
  }
  const auto m = estimates.front().size();
  RVector mean = RVector::Zero(m);
  for (const auto& e : estimates) {
    if (e.size() != m) throw Error(ErrorKind::kDimension, "estimates differ in length");
    mean += e;
  }
  mean /= static_cast<double>(estimates.size());
  RVector var = RVector::Zero(m);
  for (const auto& e : estimates) var += (e - mean).cwiseAbs2();
  var /= static_cast<double>(estimates.size() - 1);
  return {mean, var};
}

double hs_error(const ChoiMatrix& estimate, const ChoiMatrix& truth) {
  if (estimate.entries.rows() != truth.entries.rows() ||
      estimate.entries.cols() != truth.entries.cols()) {
    throw Error(ErrorKind::kDimension, "Choi matrices differ in size");
  }
  return (estimate.entries - truth.entries).norm();
}

BlochVector rotate_bloch(const BlochVector& v, const BlochVector& axis, double alpha) {
  if (std::abs(axis.norm() - 1.0) > kUnitTol) {
    throw Error(ErrorKind::kInvalidArgument, "rotation axis must be a unit vector");
  }
  const Vec3& a = axis.vec();
  const Vec3& x = v.vec();
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const Vec3 r = c * x + s * a.cross(x) + (1.0 - c) * a.dot(x) * a;
  // Rounding can push a pure state a few ulps outside the ball.
  const double n = r.norm();
  return BlochVector(n > 1.0 ? Vec3(r / n) : r);
}

namespace {

struct TrialSet {
  std::vector<RVector> lambdas;
  std::vector<RVector> closed_form;
  double hs_sum = 0.0;
  int failures = 0;
};

// Runs one trial: draws data from `truth`, fits with the affine estimator.
// Returns false on a solver failure.
bool run_trial(std::span<const TomographyConfiguration> configs, const LinearMap& truth,
               const ChoiMatrix& truth_choi, const AffineBasis& basis,
               const LinearInequalitySet& ineq, const SolverSettings& s, bool exact,
               Rng& rng, TrialSet& acc, const std::vector<int>* closed_form_order) {
  std::vector<RVector> freqs =
      exact ? exact_probabilities(configs, truth) : relative_freqs(simulate_record(configs, truth, rng));
  try {
    const auto res = estimate_affine(basis, ineq, configs, freqs, s);
    acc.lambdas.push_back(res.lambda);
    acc.hs_sum += hs_error(res.choi, truth_choi);
  } catch (const Error& e) {
    if (!e.is_solver_failure()) throw;
    ++acc.failures;
    return false;
  }
  if (closed_form_order) {
    RVector cf(3);
    for (std::size_t g = 0; g < configs.size(); ++g) {
      cf[(*closed_form_order)[g]] = freqs[g][0] - freqs[g][1];
    }
    acc.closed_form.push_back(cf);
  }
  return true;
}

void summarize(const TrialSet& acc, int m, RVector& mean, RVector& var, double& hs) {
  const auto n = acc.lambdas.size();
  if (n == 0) {
    mean = RVector::Constant(m, std::nan(""));
    var = RVector::Constant(m, std::nan(""));
    hs = std::nan("");
    return;
  }
  if (n == 1) {
    mean = acc.lambdas.front();
    var = RVector::Zero(m);
  } else {
    const auto st = empirical_stats(acc.lambdas);
    mean = st.mean;
    var = st.variance;
  }
  hs = acc.hs_sum / static_cast<double>(n);
}

}  // namespace

std::vector<MetricsRow> run_case_study(const CaseStudySpec& spec) {
  spec.validate();
  const GenPauliChannel ch = spec.channel.channel();
  const LinearMap truth = [&ch](const CMatrix& a) { return ch.apply(a); };
  const ChoiMatrix truth_choi = choi(ch);
  const AffineBasis basis = estimation_basis(spec.channel.mub);
  const LinearInequalitySet ineq = estimation_constraints(spec.channel.dim());
  const int m = basis.num_params();
  std::vector<int> order;
  const bool closed_form = spec.strategy == Strategy::kOptimal;
  if (closed_form) order = optimal_order(spec.channel.lambda);

  std::vector<MetricsRow> rows;
  for (const auto n : spec.shot_grid) {
    const auto configs = strategy_configs(spec.channel, spec.strategy, n);
    TrialSet acc;
    for (int t = 0; t < spec.trials; ++t) {
      Rng rng = make_rng(spec.seed, trial_stream(n, t));
      run_trial(configs, truth, truth_choi, basis, ineq, spec.solver, spec.exact, rng, acc,
                closed_form ? &order : nullptr);
    }
    MetricsRow row;
    row.n_shots = n;
    row.trial_count = static_cast<int>(acc.lambdas.size());
    row.failures = acc.failures;
    summarize(acc, m, row.lambda_mean, row.lambda_var, row.hs_error);
    if (closed_form && !acc.closed_form.empty()) {
      RVector s = RVector::Zero(3);
      for (const auto& c : acc.closed_form) s += c;
      row.closed_form_mean = s / static_cast<double>(acc.closed_form.size());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RobustnessRow> robustness_sweep(const Vec3& lambda, const BlochVector& axis,
                                            std::span<const double> alphas,
                                            std::int64_t shots, int trials,
                                            std::uint64_t seed,
                                            const SolverSettings& solver) {
  if (trials < 1 || shots < 1) {
    throw Error(ErrorKind::kInvalidArgument, "trials and shots must be >= 1");
  }
  const ChannelSpec assumed{lambda, standard_mub(2)};
  assumed.channel();
  const auto configs = strategy_configs(assumed, Strategy::kOptimal, shots);
  const AffineBasis basis = affine_basis_qubit();
  const LinearInequalitySet ineq = qubit_cptp_constraints();

  std::vector<RobustnessRow> rows;
  for (const double alpha : alphas) {
    std::array<Vec3, 3> axes;
    for (int i = 0; i < 3; ++i) {
      axes[i] = rotate_bloch(BlochVector(Vec3::Unit(i)), axis, alpha).vec().normalized();
    }
    const PauliChannel ch = PauliChannel::from_axes(lambda, axes);
    const LinearMap truth = [&ch](const CMatrix& a) { return ch.apply(a); };
    const ChoiMatrix truth_choi = choi(ch);
    TrialSet acc;
    for (int t = 0; t < trials; ++t) {
      Rng rng = make_rng(seed, trial_stream(shots, t));
      run_trial(configs, truth, truth_choi, basis, ineq, solver, false, rng, acc, nullptr);
    }
    RobustnessRow row;
    row.alpha = alpha;
    row.trial_count = static_cast<int>(acc.lambdas.size());
    summarize(acc, 3, row.lambda_mean, row.lambda_var, row.hs_error);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_case_study_csv(std::ostream& os, std::span<const MetricsRow> rows) {
  const auto m = rows.empty() ? 0 : rows.front().lambda_mean.size();
  os << "n_shots,trial_count";
  for (Eigen::Index i = 1; i <= m; ++i) os << ",lambda_mean_" << i;
  for (Eigen::Index i = 1; i <= m; ++i) os << ",lambda_var_" << i;
  os << ",hs_error\n";
  for (const auto& r : rows) {
    os << r.n_shots << ',' << r.trial_count;
    for (Eigen::Index i = 0; i < m; ++i) os << ',' << fmt(r.lambda_mean[i]);
    for (Eigen::Index i = 0; i < m; ++i) os << ',' << fmt(r.lambda_var[i]);
    os << ',' << fmt(r.hs_error) << '\n';
  }
}

void write_robustness_csv(std::ostream& os, std::span<const RobustnessRow> rows) {
  os << "alpha,trial_count,hs_error";
  for (int i = 1; i <= 3; ++i) os << ",lambda_mean_" << i;
  for (int i = 1; i <= 3; ++i) os << ",lambda_var_" << i;
  os << '\n';
  for (const auto& r : rows) {
    os << fmt(r.alpha) << ',' << r.trial_count << ',' << fmt(r.hs_error);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.lambda_mean[i]);
    for (int i = 0; i < 3; ++i) os << ',' << fmt(r.lambda_var[i]);
    os << '\n';
  }
}

}  // namespace ptomo
