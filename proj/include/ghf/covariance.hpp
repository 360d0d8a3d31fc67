#pragma once

// Algebra of fermionic Gaussian states represented by their Majorana
// covariance matrix Gamma_{kl} = <i/2 [c_k, c_l]>, a real antisymmetric
// 2M x 2M matrix. Majorana convention: complex mode k (0-based, k < M)
// owns the Majorana pair (k, k+M) with c_k = a^dag_k + a_k and
// c_{k+M} = -i(a^dag_k - a_k).

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghf {

inline constexpr double antisym_tol = 1e-12;
inline constexpr double physical_tol = 1e-8;

struct CovarianceMatrix {
  int modes = 0;           // M complex modes; gamma is 2M x 2M
  Eigen::MatrixXd gamma;
};

namespace detail {

inline void require_square(const Eigen::MatrixXd& a, const char* what) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
}

// Deterministic standard normals (Box-Muller on splittable 64-bit uniforms);
// std::normal_distribution is implementation-defined, this is not.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

 private:
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t next() {  // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

inline double skew_deviation(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return (a + a.transpose()).cwiseAbs().maxCoeff();
}

inline void require_skew(const Eigen::MatrixXd& a, double tol = antisym_tol,
                         const char* what = "matrix") {
  detail::require_square(a, what);
  const double dev = skew_deviation(a);
  if (dev > tol)
    throw std::invalid_argument(std::string(what) + ": not antisymmetric (deviation " +
                                std::to_string(dev) + ")");
}

inline Eigen::MatrixXd antisymmetrize(const Eigen::MatrixXd& a) {
  return 0.5 * (a - a.transpose());
}

inline Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a * b - b * a;
}

inline CovarianceMatrix make_cm(Eigen::MatrixXd g) {
  detail::require_square(g, "covariance matrix");
  if (g.rows() % 2 != 0)
    throw std::invalid_argument("covariance matrix: dimension must be even");
  require_skew(g, antisym_tol, "covariance matrix");
  CovarianceMatrix cm;
  cm.modes = static_cast<int>(g.rows() / 2);
  cm.gamma = antisymmetrize(g);
  return cm;
}

inline CovarianceMatrix vacuum_cm(int modes) {
  if (modes < 1) throw std::invalid_argument("vacuum_cm: need at least one mode");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    g(k, k + modes) = 1.0;
    g(k + modes, k) = -1.0;
  }
  CovarianceMatrix cm;
  cm.modes = modes;
  cm.gamma = std::move(g);
  return cm;
}

// Haar-ish random pure state: Gamma = O J O^T with J the vacuum CM and O the
// sign-fixed Q factor of a seeded Gaussian matrix. Reproducible per seed.
inline CovarianceMatrix random_pure_cm(int modes, std::uint64_t seed) {
  if (modes < 1) throw std::invalid_argument("random_pure_cm: need at least one mode");
  const int n = 2 * modes;
  detail::NormalSampler normal(seed);
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  CovarianceMatrix cm;
  cm.modes = modes;
  cm.gamma = antisymmetrize(q * vacuum_cm(modes).gamma * q.transpose());
  return cm;
}

// Largest singular value of a real antisymmetric matrix, computed from the
// spectrum of -A^2 = A A^T.
inline double max_singular_value(const Eigen::MatrixXd& a) {
  detail::require_square(a, "max_singular_value");
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-(a * a), Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

// Physicality: i*Gamma <= 1, i.e. all singular values of Gamma at most 1.
inline bool is_physical(const CovarianceMatrix& cm, double tol = physical_tol) {
  return max_singular_value(cm.gamma) <= 1.0 + tol;
}

// Purity: Gamma^2 = -1.
inline bool is_pure(const CovarianceMatrix& cm, double tol = physical_tol) {
  const int n = 2 * cm.modes;
  const double dev =
      (cm.gamma * cm.gamma + Eigen::MatrixXd::Identity(n, n)).norm();
  return dev <= tol * static_cast<double>(n);
}

namespace detail {

// Applies an odd scalar function f to a real antisymmetric matrix A, i.e.
// the matrix function mapping each canonical 2x2 block [[0,b],[-b,0]] to
// [[0,f(b)],[-f(b),0]]. The caller supplies ratio(b) = f(b)/b (with the
// b -> 0 limit handled), and the result is A * ratio(-A^2) computed through
// one real symmetric eigendecomposition. Exact antisymmetry is restored.
template <class Ratio>
Eigen::MatrixXd skew_apply_odd(const Eigen::MatrixXd& a, Ratio&& ratio) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-(a * a));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("skew_apply_odd: eigendecomposition failed");
  Eigen::VectorXd g(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double b = std::sqrt(std::max(es.eigenvalues()[i], 0.0));
    g[i] = ratio(b);
  }
  const Eigen::MatrixXd w =
      es.eigenvectors() * g.asDiagonal() * es.eigenvectors().transpose();
  return antisymmetrize(a * w);
}

}  // namespace detail

// exp(A) for antisymmetric A; result is orthogonal with det +1.
inline Eigen::MatrixXd orthogonal_exp(const Eigen::MatrixXd& a) {
  const double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  require_skew(a, 1e-10 * std::max(1.0, scale), "orthogonal_exp");
  return antisymmetrize(a).exp();
}

// Gibbs covariance matrix of the quadratic Hamiltonian i sum h_{kl} c_k c_l:
// Gamma = i tanh(2 i beta h). Strictly mixed for finite beta.
inline CovarianceMatrix tanh_gibbs(const Eigen::MatrixXd& hbar, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("tanh_gibbs: beta must be positive");
  const double scale = hbar.size() ? hbar.cwiseAbs().maxCoeff() : 0.0;
  require_skew(hbar, 1e-10 * std::max(1.0, scale), "tanh_gibbs");
  Eigen::MatrixXd g = detail::skew_apply_odd(hbar, [beta](double b) {
    return b < 1e-300 ? -2.0 * beta : -std::tanh(2.0 * beta * b) / b;
  });
  return make_cm(std::move(g));
}

// The logarithmic term of the free-energy stationarity condition:
// (i/4) ln[(1 + i Gamma)(1 - i Gamma)^{-1}], a real antisymmetric matrix.
// Equals beta * hbar when Gamma = tanh_gibbs(hbar, beta). Eigenvalues of
// i*Gamma are clipped to 1 - 1e-12 before the logarithm, so near-pure
// input stays finite; that clipping is the sole regularization.
inline Eigen::MatrixXd cm_log_term(const CovarianceMatrix& cm) {
  return detail::skew_apply_odd(cm.gamma, [](double b) {
    if (b < 1e-300) return -0.5;
    const double bc = std::min(b, 1.0 - 1e-12);
    return -std::atanh(bc) / (2.0 * b);
  });
}

// Von Neumann entropy in nats: S = M ln 2 - 1/2 tr[(1+iG) ln(1+iG)],
// evaluated as sum of binary entropies of the pair occupations.
inline double entropy(const CovarianceMatrix& cm) {
  const Eigen::MatrixXd& g = cm.gamma;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-(g * g), Eigen::EigenvaluesOnly);
  double s = 0.0;
  const auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double b = std::sqrt(std::max(es.eigenvalues()[i], 0.0));
    if (b > 1.0 + physical_tol)
      throw std::domain_error("entropy: covariance matrix is not physical");
    b = std::min(b, 1.0);
    const double p = 0.5 * (1.0 + b);
    // each Majorana pair contributes twice to the spectrum of -Gamma^2
    s += 0.5 * (-xlnx(p) - xlnx(1.0 - p));
  }
  return s;
}

// Polar projection onto the pure-state manifold: Gamma (-Gamma^2)^{-1/2}.
// Intended for re-orthogonalizing roundoff drift of a nearly pure CM.
inline CovarianceMatrix purify(const CovarianceMatrix& cm) {
  Eigen::MatrixXd g = detail::skew_apply_odd(
      cm.gamma, [](double b) { return 1.0 / std::max(b, 1e-12); });
  return make_cm(std::move(g));
}

// Pfaffian of a real antisymmetric matrix of even dimension via Parlett-Reid
// skew tridiagonalization with partial pivoting. Sign convention: the term
// A_{12} A_{34} ... A_{n-1,n} enters with positive sign.
inline double pfaffian(Eigen::MatrixXd a) {
  detail::require_square(a, "pfaffian");
  const Eigen::Index n = a.rows();
  if (n % 2 != 0) throw std::invalid_argument("pfaffian: dimension must be even");
  if (n == 0) return 1.0;
  require_skew(a, 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff()), "pfaffian");
  double sign = 1.0;
  for (Eigen::Index j = 0; j + 2 < n; ++j) {
    // pivot: largest entry of column j below the subdiagonal position
    Eigen::Index pivot = j + 1;
    double big = std::abs(a(j + 1, j));
    for (Eigen::Index i = j + 2; i < n; ++i) {
      if (std::abs(a(i, j)) > big) {
        big = std::abs(a(i, j));
        pivot = i;
      }
    }
    if (big == 0.0) {
      if (j % 2 == 0) return 0.0;  // a vanishing even superdiagonal kills Pf
      continue;
    }
    if (pivot != j + 1) {
      a.row(j + 1).swap(a.row(pivot));
      a.col(j + 1).swap(a.col(pivot));
      sign = -sign;
    }
    const double inv = 1.0 / a(j + 1, j);
    for (Eigen::Index i = j + 2; i < n; ++i) {
      const double f = a(i, j) * inv;
      if (f != 0.0) {
        a.row(i) -= f * a.row(j + 1);
        a.col(i) -= f * a.col(j + 1);
      }
    }
  }
  double pf = sign;
  for (Eigen::Index k = 0; k < n; k += 2) pf *= a(k, k + 1);
  return pf;
}

// Two-point function <c_a c_b> = delta_{ab} - i Gamma_{ab}.
inline std::complex<double> two_point(const CovarianceMatrix& cm, int a, int b) {
  const int n = 2 * cm.modes;
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw std::out_of_range("two_point: Majorana index out of range");
  if (a == b) return {1.0, 0.0};
  return {0.0, -cm.gamma(a, b)};
}

// Four-point function <c_i c_j c_k c_l> by Wick's theorem, with CAR
// reduction (c_a^2 = 1) when indices coincide. Real for distinct indices.
inline std::complex<double> wick_four(const CovarianceMatrix& cm, int i, int j, int k,
                                      int l) {
  const int n = 2 * cm.modes;
  for (int idx : {i, j, k, l})
    if (idx < 0 || idx >= n) throw std::out_of_range("wick_four: index out of range");
  if (i == j) return two_point(cm, k, l);
  if (j == k) return two_point(cm, i, l);
  if (k == l) return two_point(cm, i, j);
  if (i == k) return -two_point(cm, j, l);
  if (j == l) return -two_point(cm, i, k);
  if (i == l) return two_point(cm, j, k);
  const Eigen::MatrixXd& g = cm.gamma;
  return {-(g(i, j) * g(k, l) - g(i, k) * g(j, l) + g(i, l) * g(j, k)), 0.0};
}

// 2p-point function tr[rho c_{j1} ... c_{j2p}] = i^{-p} Pf(Gamma|_{j1..j2p})
// for strictly increasing Majorana indices. Real for even p, imaginary for
// odd p.
inline std::complex<double> wick_2p(const CovarianceMatrix& cm, std::span<const int> idx) {
  const int n = 2 * cm.modes;
  if (idx.empty() || idx.size() % 2 != 0)
    throw std::invalid_argument("wick_2p: need a nonempty even-length index list");
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= n) throw std::out_of_range("wick_2p: index out of range");
    if (a > 0 && idx[a] <= idx[a - 1])
      throw std::invalid_argument("wick_2p: indices must be strictly increasing");
  }
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) sub(r, c) = cm.gamma(idx[r], idx[c]);
  const double pf = pfaffian(std::move(sub));
  static constexpr std::complex<double> inv_i_pow[4] = {
      {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
  return inv_i_pow[(idx.size() / 2) % 4] * pf;
}

}  // namespace ghf
