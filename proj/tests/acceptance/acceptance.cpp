// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ptomo/channel.hpp"
#include "ptomo/design.hpp"
#include "ptomo/errors.hpp"
#include "ptomo/estimate.hpp"
#include "ptomo/harness.hpp"
#include "ptomo/solver.hpp"

using namespace ptomo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

LinearMap map_of(const GenPauliChannel& ch) {
  return [ch](const CMatrix& a) { return ch.apply(a); };
}

double angle(const Vec3& a, const Vec3& b) {
  return std::acos(std::min(1.0, std::abs(a.normalized().dot(b.normalized()))));
}

// Least-squares fit y = c0 + c1 x; returns {c0, c1, R^2, t statistic of c1}.
std::array<double, 4> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double c1 = sxy / sxx;
  const double c0 = my - c1 * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - c0 - c1 * x[i];
    sse += r * r;
  }
  const double r2 = 1.0 - sse / syy;
  const double se = std::sqrt(sse / (n - 2.0) / sxx);
  return {c0, c1, r2, c1 / se};
}

// 1. Choi matrix of the reference qubit channel against its closed form.
Outcome choi_template() {
  CMatrix want = CMatrix::Zero(4, 4);
  want(0, 0) = 1.1;
  want(0, 3) = 0.2;
  want(1, 1) = 0.9;
  want(1, 2) = 0.4;
  want(2, 1) = 0.4;
  want(2, 2) = 0.9;
  want(3, 0) = 0.2;
  want(3, 3) = 1.1;
  want /= 2.0;
  const double err = (choi(PauliChannel::standard(Vec3(0.3, -0.1, 0.1))).entries - want)
                         .cwiseAbs()
                         .maxCoeff();
  return {err <= 1e-12, fmt("max deviation %.2e (tol 1e-12)", err)};
}

// 2. Affine parametrizations against choi(), qutrit after re-deriving the
// template-to-MUB permutation.
Outcome affine_consistency() {
  std::mt19937_64 g(2);
  const auto qb = affine_basis_qubit();
  double err_q = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Vec3 l = oracle::random_valid_qubit_lambda(g);
    err_q = std::max(err_q, (qb.evaluate(l) - choi(PauliChannel::standard(l)).entries).cwiseAbs().maxCoeff());
    err_q = std::max(err_q, (qb.evaluate(l) - oracle::pauli_kraus_choi(l)).cwiseAbs().maxCoeff());
  }

  const Mub m3 = standard_mub(3);
  RVector probe(4);
  probe << -0.3, -0.2, -0.1, 0.1;
  std::array<int, 4> perm = {0, 1, 2, 3};
  std::array<int, 4> fitted = {-1, -1, -1, -1};
  int matches = 0;
  do {
    RVector l(4);
    for (int t = 0; t < 4; ++t) l[perm[t]] = probe[t];
    const double e = (choi(GenPauliChannel(m3, l)).entries - qutrit_choi_template(probe)).norm();
    if (e < 1e-12) {
      fitted = perm;
      ++matches;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  const bool perm_ok = matches == 1 && fitted == kQutritTemplateToMub;

  const auto tb = affine_basis_qutrit(m3);
  double err_t = 0.0;
  for (int t = 0; t < 100; ++t) {
    const RVector l = oracle::random_valid_qutrit_lambda(g);
    const CMatrix c = choi(GenPauliChannel(m3, l)).entries;
    err_t = std::max(err_t, (tb.evaluate(l) - c).cwiseAbs().maxCoeff());
    err_t = std::max(err_t, (qutrit_choi_template(qutrit_lambda_to_template(l)) - c).cwiseAbs().maxCoeff());
  }
  return {perm_ok && err_q <= 1e-10 && err_t <= 1e-10,
          fmt("qubit %.2e, qutrit %.2e (tol 1e-10), unique permutation fit %s", err_q, err_t,
              perm_ok ? "matches" : "DIFFERS")};
}

// 3. Noiseless recovery from exact probabilities.
Outcome noiseless_identifiability() {
  std::mt19937_64 g(3);
  SolverSettings s;
  s.tol_feasibility = 1e-12;
  s.max_iters = 100000;
  double err_q = 0.0, err_t = 0.0;
  const Mub m2 = standard_mub(2);
  const Mub m3 = standard_mub(3);
  for (int t = 0; t < 100; ++t) {
    const Vec3 l = oracle::random_valid_qubit_lambda(g);
    const ChannelSpec q{l, m2};
    const auto cs = strategy_configs(q, Strategy::kOptimal, 1);
    const auto r = estimate_affine(affine_basis_qubit(), qubit_cptp_constraints(), cs,
                                   exact_probabilities(cs, map_of(q.channel())), s);
    err_q = std::max(err_q, (r.lambda - l).cwiseAbs().maxCoeff());

    const RVector lt = oracle::random_valid_qutrit_lambda(g);
    const ChannelSpec c3{lt, m3};
    const auto ct = strategy_configs(c3, Strategy::kQutritOptimal, 1);
    const auto rt = estimate_affine(affine_basis_qutrit(m3), gen_pauli_constraints(3), ct,
                                    exact_probabilities(ct, map_of(c3.channel())), s);
    err_t = std::max(err_t, (rt.lambda - lt).cwiseAbs().maxCoeff());
  }
  return {err_q <= 1e-6 && err_t <= 1e-6,
          fmt("max error qubit %.2e, qutrit %.2e over 100 cases each (tol 1e-6)", err_q, err_t)};
}

// 4. Fisher information: closed form and finite differences.
Outcome fisher_closed_form() {
  std::mt19937_64 g(4);
  const auto basis = affine_basis_qubit();
  double err_cf = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vec3 l = 0.99 * oracle::random_valid_qubit_lambda(g);
    const std::vector<TomographyConfiguration> cs = {
        {bloch_to_density(BlochVector(1, 0, 0)), projective_povm(BlochVector(1, 0, 0)), 1}};
    err_cf = std::max(err_cf, std::abs(fisher_trace(basis, l, cs) - 1.0 / (1.0 - l[0] * l[0])));
  }
  double err_fd = 0.0;
  const double h = 1e-5;
  for (int t = 0; t < 100; ++t) {
    const Vec3 l = 0.9 * oracle::random_valid_qubit_lambda(g);
    const std::vector<TomographyConfiguration> cs = {
        {bloch_to_density(BlochVector(oracle::random_ball_point(g))),
         projective_povm(BlochVector(oracle::random_sphere_point(g))), 1},
        {bloch_to_density(BlochVector(oracle::random_ball_point(g))), tetrahedron_povm(), 1}};
    RMatrix fd = RMatrix::Zero(3, 3);
    for (const auto& c : cs) {
      for (const auto& e : c.povm.elements()) {
        auto prob = [&](const Vec3& x) {
          return (oracle::pauli_kraus_apply(x, c.input.matrix()) * e).trace().real();
        };
        Vec3 grad;
        for (int i = 0; i < 3; ++i) {
          grad[i] = (prob(l + h * Vec3::Unit(i)) - prob(l - h * Vec3::Unit(i))) / (2 * h);
        }
        fd += grad * grad.transpose() / prob(l);
      }
    }
    const RMatrix f = fisher_matrix(basis, l, cs).entries;
    err_fd = std::max(err_fd, (f - fd).cwiseAbs().maxCoeff() / std::max(1.0, fd.cwiseAbs().maxCoeff()));
  }
  return {err_cf <= 1e-10 && err_fd <= 1e-6,
          fmt("closed form %.2e (tol 1e-10), finite differences %.2e relative (tol 1e-6)", err_cf,
              err_fd)};
}

// 5. Exhaustive 1-degree grid over (b, m) pairs of the qubit objective.
Outcome optimal_direction_argmax() {
  const Vec3 l(0.3, -0.1, 0.1);
  std::vector<double> xs, ys, zs;
  for (int th = 0; th <= 180; ++th) {
    for (int ph = 0; ph < 360; ++ph) {
      if ((th == 0 || th == 180) && ph > 0) continue;
      const double t = th * std::numbers::pi / 180.0;
      const double p = ph * std::numbers::pi / 180.0;
      xs.push_back(std::sin(t) * std::cos(p));
      ys.push_back(std::sin(t) * std::sin(p));
      zs.push_back(std::cos(t));
    }
  }
  const std::size_t n = xs.size();
  double best = -1.0;
  std::size_t bi = 0, mi = 0;
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double bx = xs[i], by = ys[i], bz = zs[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double c0 = bx * xs[j], c1 = by * ys[j], c2 = bz * zs[j];
      const double cl = c0 * l[0] + c1 * l[1] + c2 * l[2];
      row[j] = (c0 * c0 + c1 * c1 + c2 * c2) / (1.0 - cl * cl);
    }
    const auto it = std::max_element(row.begin(), row.end());
    if (*it > best) {
      best = *it;
      bi = i;
      mi = static_cast<std::size_t>(it - row.begin());
    }
  }
  const Vec3 b(xs[bi], ys[bi], zs[bi]);
  const Vec3 m(xs[mi], ys[mi], zs[mi]);
  const double lib = fisher_qubit(BlochVector(b), BlochVector(m), l);
  const double deg = std::numbers::pi / 180.0;
  const bool at_x = angle(b, Vec3::UnitX()) <= deg && angle(m, Vec3::UnitX()) <= deg;
  const bool ok = at_x && std::abs(best - 1.0 / 0.91) <= 1e-3 && std::abs(lib - best) <= 1e-12;
  return {ok, fmt("%zu^2 pairs, max %.6f at b=(%.3f,%.3f,%.3f) m=(%.3f,%.3f,%.3f), target %.6f",
                  n, best, b[0], b[1], b[2], m[0], m[1], m[2], 1.0 / 0.91)};
}

// 6. Accuracy of the optimal strategy at n = 1000 plus the 1/n variance trend.
Outcome statistical_accuracy() {
  const auto base = default_case_study(Strategy::kOptimal);
  const RVector l = base.channel.lambda;
  int good = 0;
  for (int rep = 0; rep < 20; ++rep) {
    auto s = base;
    s.shot_grid = {1000};
    s.trials = 5;
    s.seed = 600 + rep;
    const auto row = run_case_study(s).front();
    bool all = row.trial_count == 5;
    for (int i = 0; i < 3; ++i) {
      all = all && std::abs(row.lambda_mean[i] - l[i]) <= 3.0 * std::sqrt((1 - l[i] * l[i]) / 5000.0);
    }
    good += all;
  }
  auto s = base;
  s.trials = 200;
  s.seed = 699;
  double worst = 1.0;
  for (const auto& row : run_case_study(s)) {
    for (int i = 0; i < 3; ++i) {
      const double ratio = row.lambda_var[i] * static_cast<double>(row.n_shots) / (1 - l[i] * l[i]);
      if (std::abs(std::log(ratio)) > std::abs(std::log(worst))) worst = ratio;
    }
  }
  const bool trend = worst >= 0.5 && worst <= 2.0;
  return {good >= 19 && trend,
          fmt("%d/20 repetitions within 3 sigma (need 19); n*Var/(1-l^2) worst ratio %.3f "
              "over the shot grid (need 0.5..2)",
              good, worst)};
}

// 7. Direction estimation, noisy and exact.
Outcome direction_estimation() {
  const Vec3 l(0.6, 0.3, 0.1);
  const auto ch = PauliChannel::standard(l);
  const BlochMap f = [&ch](const Vec3& b) { return ch.apply_bloch(b); };
  int good = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng = make_rng(700 + seed);
    const auto est = estimate_directions(f, DirectionSettings{}, rng);
    const auto& its = est.iterates[0];
    good += angle(its[std::min<std::size_t>(5, its.size() - 1)], Vec3::UnitX()) <= 0.15;
  }
  DirectionSettings exact;
  exact.shots = std::nullopt;
  double worst = 0.0;
  std::mt19937_64 g(7);
  for (int t = 0; t < 10; ++t) {
    std::array<Vec3, 3> axes;
    const Vec3 axis = oracle::random_sphere_point(g);
    for (int i = 0; i < 3; ++i) axes[i] = oracle::rotate_expm(Vec3::Unit(i), axis, 0.3 * t);
    const auto rc = PauliChannel::from_axes(l, axes);
    Rng rng = make_rng(770 + t);
    const auto est = estimate_directions([&rc](const Vec3& b) { return rc.apply_bloch(b); }, exact, rng);
    for (int i = 0; i < 3; ++i) worst = std::max(worst, angle(est.directions[i], axes[i]));
  }
  return {good >= 45 && worst <= 1e-6,
          fmt("noisy: %d/50 within 0.15 rad after <= 5 steps (need 45); exact: worst angle %.2e "
              "(tol 1e-6)",
              good, worst)};
}

// 8. Robustness against rotated channel directions.
Outcome robustness() {
  const Vec3 l(0.3, -0.1, 0.1);
  const BlochVector axis(Vec3::Ones().normalized());
  const std::int64_t n = 1500;
  const int trials = 5;
  std::vector<double> alphas;
  for (int k = 0; k <= 20; ++k) alphas.push_back(0.01 * k);
  alphas.push_back(2.0 * std::numbers::pi / 3.0);
  const auto rows = robustness_sweep(l, axis, alphas, n, trials, 800);

  const auto& last = rows.back();
  std::array<int, 3> perm = {0, 1, 2};
  double best_z = 1e300;
  do {
    double z = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double li = l[perm[i]];
      const double sigma = std::sqrt((1 - li * li) / static_cast<double>(n * trials));
      z = std::max(z, std::abs(last.lambda_mean[i] - li) / sigma);
    }
    best_z = std::min(best_z, z);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<double> a, a2, dev, hs;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    a.push_back(rows[k].alpha);
    a2.push_back(rows[k].alpha * rows[k].alpha);
    dev.push_back((rows[k].lambda_mean - RVector(l)).norm());
    hs.push_back(rows[k].hs_error);
  }
  const auto lin = line_fit(a, dev);
  const auto quad = line_fit(a2, dev);
  const auto hfit = line_fit(a, hs);
  // Two-sided 1% critical value of Student t with 19 degrees of freedom.
  const double t_crit = 2.861;
  const bool ok = best_z <= 3.0 && quad[2] > lin[2] && hfit[1] > 0.0 && hfit[3] > t_crit;
  return {ok, fmt("alpha=2pi/3 permutation max |z| %.2f (need <= 3); R^2 quadratic %.4f vs "
                  "linear %.4f; hs slope %.4f with t=%.1f (need > %.3f)",
                  best_z, quad[2], lin[2], hfit[1], hfit[3], t_crit)};
}

// 9. Solvers against brute force and feasibility targets.
Outcome solver_oracles() {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> coef(-1, 1);
  std::uniform_int_distribution<int> offset(50, 500);
  const auto cptp = qubit_cptp_constraints();
  // Tetrahedron cut by two random half-spaces with normals in {-1,0,1}^3 (so
  // every edge carries 1e-3 lattice points) at 1e-3 lattice offsets; the
  // origin stays feasible.
  auto random_set = [&] {
    LinearInequalitySet set = cptp;
    const int k = set.size();
    set.rows.conservativeResize(k + 2, 3);
    set.bounds.conservativeResize(k + 2);
    for (int r = k; r < k + 2; ++r) {
      do {
        for (int c = 0; c < 3; ++c) set.rows(r, c) = coef(g);
      } while (set.rows.row(r).isZero());
      set.bounds[r] = 1e-3 * offset(g);
    }
    return set;
  };
  SolverSettings s;
  s.tol_feasibility = 1e-12;
  s.max_iters = 100000;
  double worst = 0.0;
  double worst_gap = -1e300;
  for (int t = 0; t < 200; ++t) {
    RMatrix m(3, 3);
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = u(g);
    const RMatrix a = m * m.transpose() + RMatrix::Identity(3, 3);
    RVector b(3);
    for (int i = 0; i < 3; ++i) b[i] = 2.0 * u(g);
    const auto set = random_set();
    const auto r = pgd_ls(QuadraticObjective{a, b}, set, s);
    const RVector grid = oracle::grid_qp(a, b, set);
    worst = std::max(worst, (r.x - grid).cwiseAbs().maxCoeff());
    const QuadraticObjective q{a, b};
    worst_gap = std::max(worst_gap, q.value(r.x) - q.value(grid));
  }
  double resid = 0.0;
  SolverSettings ds;
  ds.max_iters = 100000;
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 2;
    const CMatrix h = oracle::random_hermitian(d * d, g);
    const auto x = dykstra_cptp(h, d, ds).entries;
    resid = std::max(resid, std::max(0.0, -linalg::min_eigenvalue(x)));
    resid = std::max(resid, (oracle::partial_trace2(x, d) - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  return {worst <= 2e-3 && worst_gap <= 1e-12 && resid <= 1e-8,
          fmt("pgd_ls vs grid: max |dx| %.2e (tol 2e-3), objective excess %.1e; Dykstra "
              "residual %.2e (tol 1e-8)",
              worst, worst_gap, resid)};
}

// 10. Generalized CPTP boundary.
Outcome cptp_boundary() {
  const Mub m3 = standard_mub(3);
  RVector lt(4);
  lt << -0.3, -0.2, -0.1, 0.1;
  const RVector on = qutrit_lambda_from_template(lt);
  const bool on_ok = std::abs(on.sum() + 0.5) < 1e-15 && cptp_check_gen(on, 3).valid &&
                     choi_validate(choi(GenPauliChannel(m3, on)).entries).ok();
  RVector off = on;
  off[0] -= 1e-3;
  const auto v = choi_validate(choi(GenPauliChannel::unchecked(m3, off)).entries);
  const double min_eig = linalg::min_eigenvalue(choi(GenPauliChannel::unchecked(m3, off)).entries);
  const bool off_ok = !cptp_check_gen(off, 3).valid && !v.psd && v.trace_preserving;
  bool ctor_rejects = false;
  try {
    GenPauliChannel(m3, off);
  } catch (const Error&) {
    ctor_rejects = true;
  }
  return {on_ok && off_ok && ctor_rejects,
          fmt("sum=-1/2 accepted: %s; sum=-1/2-1e-3 rejected: %s (Choi min eigenvalue %.2e)",
              on_ok ? "yes" : "no", off_ok && ctor_rejects ? "yes" : "no", min_eig)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"Choi template match", 1, choi_template},
      {"affine-basis consistency", 10, affine_consistency},
      {"noiseless identifiability", 30, noiseless_identifiability},
      {"Fisher closed form", 10, fisher_closed_form},
      {"optimal-direction argmax", 60, optimal_direction_argmax},
      {"statistical accuracy", 60, statistical_accuracy},
      {"direction estimation", 60, direction_estimation},
      {"robustness reproduction", 300, robustness},
      {"solver oracle equivalence", 120, solver_oracles},
      {"CPTP boundary detection", 1, cptp_boundary},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs <= criteria[i].budget_s;
    failed += !pass;
    std::printf("%s %2zu %s: %s [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, o.detail.c_str(), secs, criteria[i].budget_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
