#include "oracles.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

namespace oracle {

CMatrix pauli(int i) {
  const cplx I(0.0, 1.0);
  CMatrix m(2, 2);
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

CMatrix bloch_density(const Vec3& v) {
  CMatrix r = pauli(0);
  for (int i = 0; i < 3; ++i) r += v[i] * pauli(i + 1);
  return 0.5 * r;
}

Eigen::Vector4d pauli_weights(const Vec3& l) {
  return Eigen::Vector4d((1 + l[0] + l[1] + l[2]) / 4, (1 + l[0] - l[1] - l[2]) / 4,
                         (1 - l[0] + l[1] - l[2]) / 4, (1 - l[0] - l[1] + l[2]) / 4);
}

CMatrix pauli_kraus_apply(const Vec3& lambda, const CMatrix& a) {
  const auto p = pauli_weights(lambda);
  CMatrix out = CMatrix::Zero(2, 2);
  for (int k = 0; k < 4; ++k) out += p[k] * pauli(k) * a * pauli(k);
  return out;
}

CMatrix kraus_choi(const std::vector<CMatrix>& kraus) {
  const int d = static_cast<int>(kraus.front().cols());
  CMatrix x = CMatrix::Zero(d * d, d * d);
  for (const auto& k : kraus) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        CMatrix e = CMatrix::Zero(d, d);
        e(i, j) = 1.0;
        x.block(i * d, j * d, d, d) += k * e * k.adjoint();
      }
    }
  }
  return x;
}

CMatrix pauli_kraus_choi(const Vec3& lambda) {
  const auto p = pauli_weights(lambda);
  std::vector<CMatrix> kraus;
  for (int k = 0; k < 4; ++k) kraus.push_back(std::sqrt(std::max(0.0, p[k])) * pauli(k));
  return kraus_choi(kraus);
}

CMatrix gen_pauli_apply(const std::vector<CMatrix>& bases, const RVector& lambda,
                        const CMatrix& a) {
  const int d = static_cast<int>(a.rows());
  cplx tr = 0.0;
  for (int r = 0; r < d; ++r) tr += a(r, r);
  CMatrix out = CMatrix::Identity(d, d) * ((1.0 - lambda.sum()) * tr / static_cast<double>(d));
  for (std::size_t i = 0; i < bases.size(); ++i) {
    for (int k = 0; k < d; ++k) {
      const CVector phi = bases[i].col(k);
      cplx amp = 0.0;
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) amp += std::conj(phi[r]) * a(r, c) * phi[c];
      }
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) out(r, c) += lambda[static_cast<Eigen::Index>(i)] * amp * phi[r] * std::conj(phi[c]);
      }
    }
  }
  return out;
}

CMatrix choi_of(const std::function<CMatrix(const CMatrix&)>& f, int d) {
  CMatrix x(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      CMatrix e = CMatrix::Zero(d, d);
      e(i, j) = 1.0;
      x.block(i * d, j * d, d, d) = f(e);
    }
  }
  return x;
}

CMatrix partial_trace2(const CMatrix& x, int d) {
  CMatrix out(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < d; ++k) s += x(i * d + k, j * d + k);
      out(i, j) = s;
    }
  }
  return out;
}

CMatrix random_hermitian(int n, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = cplx(nd(g), nd(g));
  }
  return 0.5 * (m + m.adjoint());
}

CVector random_unit_vector(int n, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  CVector v(n);
  for (int k = 0; k < n; ++k) v[k] = cplx(nd(g), nd(g));
  return v.normalized();
}

Vec3 random_sphere_point(std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  return Vec3(nd(g), nd(g), nd(g)).normalized();
}

Vec3 random_ball_point(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::cbrt(u(g)) * random_sphere_point(g);
}

Vec3 random_valid_qubit_lambda(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Vec3 l(u(g), u(g), u(g));
    if (pauli_weights(l).minCoeff() >= 0.0) return l;
  }
}

RVector random_valid_qutrit_lambda(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    RVector l(4);
    for (int i = 0; i < 4; ++i) l[i] = u(g);
    const double s = l.sum();
    bool ok = s > -0.5;
    for (int i = 0; i < 4; ++i) ok = ok && (1.0 + 3.0 * l[i] > s);
    if (ok) return l;
  }
}

Vec3 rotate_expm(const Vec3& v, const Vec3& axis, double alpha) {
  Eigen::Matrix3d k;
  k << 0, -axis[2], axis[1], axis[2], 0, -axis[0], -axis[1], axis[0], 0;
  const Eigen::Matrix3d r = (alpha * k).exp();
  return r * v;
}

RVector grid_qp(const RMatrix& a, const RVector& b, const ptomo::LinearInequalitySet& set) {
  auto feasible = [&](const Eigen::Vector3d& x) {
    // Lattice points lying on a face must count as feasible despite roundoff.
    return ((set.rows * x - set.bounds).array() <= 1e-12).all();
  };
  auto f = [&](const Eigen::Vector3d& x) { return 0.5 * x.dot(a * x) + b.dot(x); };
  // Points are integer multiples of h so faces with integer normals pass
  // through lattice points.
  auto search = [&](const Eigen::Vector3d& lo, double h, int n) {
    const Eigen::Vector3d base = (lo / h).array().round();
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector3d arg = Eigen::Vector3d::Constant(std::nan(""));
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        for (int k = 0; k <= n; ++k) {
          const Eigen::Vector3d x = h * (base + Eigen::Vector3d(i, j, k));
          if (x.cwiseAbs().maxCoeff() > 1.0 + 1e-12 || !feasible(x)) continue;
          const double v = f(x);
          if (v < best) {
            best = v;
            arg = x;
          }
        }
      }
    }
    return arg;
  };
  const Eigen::Vector3d coarse = search(Eigen::Vector3d::Constant(-1.0), 0.02, 100);
  return search(coarse - Eigen::Vector3d::Constant(0.05), 1e-3, 100);
}

double sample_variance(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace oracle
