#pragma once

// Small-system exact references: dense Jordan-Wigner Majorana operators,
// Fock-space Hamiltonians and exact diagonalization, Gaussian density
// operators built from a covariance matrix, and the brute-force rate checks
// that certify the mean-field evolution equations. Dimensions are capped so
// every routine stays in the seconds range.

#include "ghf/covariance.hpp"
#include "ghf/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ghf {

inline constexpr int max_oracle_modes = 12;

// Dense Jordan-Wigner representation of Majorana operator c_a, a in [0, 2M).
// Basis: occupation numbers with mode 0 on the least significant bit.
// c_k = (prod_{j<k} Z_j) X_k,  c_{k+M} = -(prod_{j<k} Z_j) Y_k.
inline Eigen::MatrixXcd majorana_op(int modes, int a) {
  if (modes < 1 || modes > max_oracle_modes)
    throw std::invalid_argument("majorana_op: mode count outside oracle range");
  if (a < 0 || a >= 2 * modes) throw std::out_of_range("majorana_op: index out of range");
  const int k = a % modes;
  const bool is_x_type = a < modes;
  const long dim = 1L << modes;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  const long low_mask = (1L << k) - 1;
  for (long n = 0; n < dim; ++n) {
    const long m = n ^ (1L << k);
    const double jw = (__builtin_popcountll(n & low_mask) % 2 == 0) ? 1.0 : -1.0;
    if (is_x_type) {
      op(m, n) = jw;
    } else {
      // -(Y_k): |0> -> -i|1>, |1> -> +i|0>
      const bool occupied = (n >> k) & 1;
      op(m, n) = occupied ? std::complex<double>(0.0, jw) : std::complex<double>(0.0, -jw);
    }
  }
  return op;
}

namespace detail {

inline std::vector<Eigen::MatrixXcd> all_majoranas(int modes) {
  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(2 * modes);
  for (int a = 0; a < 2 * modes; ++a) ops.push_back(majorana_op(modes, a));
  return ops;
}

}  // namespace detail

// H = i sum T_{kl} c_k c_l + sum_t w_t c c c c + e0 as a dense Fock operator.
inline Eigen::MatrixXcd fock_hamiltonian(const MajoranaHamiltonian& h) {
  if (h.modes < 1 || h.modes > max_oracle_modes)
    throw std::invalid_argument("fock_hamiltonian: mode count outside oracle range");
  const long dim = 1L << h.modes;
  const auto c = detail::all_majoranas(h.modes);
  Eigen::MatrixXcd op = h.offset * Eigen::MatrixXcd::Identity(dim, dim);
  const std::complex<double> im(0.0, 1.0);
  const int n = 2 * h.modes;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (h.quadratic(k, l) != 0.0) op += im * h.quadratic(k, l) * (c[k] * c[l]);
    }
  }
  for (const QuarticTerm& q : h.quartic) {
    if (q.weight != 0.0) op += q.weight * (c[q.k] * c[q.l]) * (c[q.m] * c[q.n]);
  }
  return op;
}

// Second-quantized Hubbard Hamiltonian built directly from a^dag/a operators,
// independent of the Majorana conversion. Used to certify build_hubbard.
inline Eigen::MatrixXcd fock_hubbard_direct(const ModelSpec& spec) {
  validate(spec);
  const int modes = mode_count(spec);
  if (modes > max_oracle_modes)
    throw std::invalid_argument("fock_hubbard_direct: lattice too large for the oracle");
  const long dim = 1L << modes;
  const auto c = detail::all_majoranas(modes);
  const auto creator = [&](int mode) {
    return 0.5 * (c[mode] + std::complex<double>(0.0, 1.0) * c[mode + modes]);
  };
  const auto annihilator = [&](int mode) {
    return 0.5 * (c[mode] - std::complex<double>(0.0, 1.0) * c[mode + modes]);
  };
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::MatrixXd a = one_body_matrix(spec);
  for (int k = 0; k < modes; ++k)
    for (int l = 0; l < modes; ++l)
      if (a(k, l) != 0.0) op += a(k, l) * (creator(k) * annihilator(l));
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  for (int s = 0; s < site_count(spec); ++s) {
    const int up = mode_index(spec, s, Spin::up);
    const int dn = mode_index(spec, s, Spin::down);
    const Eigen::MatrixXcd n_up = creator(up) * annihilator(up);
    const Eigen::MatrixXcd n_dn = creator(dn) * annihilator(dn);
    if (spec.interaction == InteractionForm::symmetric)
      op += spec.u * (n_up - 0.5 * id) * (n_dn - 0.5 * id);
    else
      op += spec.u * n_up * n_dn;
  }
  return op;
}

// Lowest eigenpair of the Fock-space Hamiltonian.
inline std::pair<double, Eigen::VectorXcd> ed_ground(const MajoranaHamiltonian& h) {
  const Eigen::MatrixXcd hf = fock_hamiltonian(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hf);
  if (es.info() != Eigen::Success) throw std::runtime_error("ed_ground: eigensolver failed");
  return {es.eigenvalues()[0], es.eigenvectors().col(0)};
}

// Gaussian density operator with the prescribed covariance matrix: Gamma is
// rotated to canonical 2x2 blocks by a real orthogonal O, and rho is the
// product of per-pair thermal factors (1 + b_j i c~_{2j-1} c~_{2j})/2 over
// the rotated Majorana pairs c~_a = sum_p O_{pa} c_p.
inline Eigen::MatrixXcd gaussian_density_operator(const CovarianceMatrix& cm) {
  if (cm.modes < 1 || cm.modes > 10)
    throw std::invalid_argument("gaussian_density_operator: mode count outside oracle range");
  if (!is_physical(cm, 1e-8))
    throw std::invalid_argument("gaussian_density_operator: covariance matrix not physical");
  const int n = 2 * cm.modes;

  Eigen::RealSchur<Eigen::MatrixXd> schur(cm.gamma);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("gaussian_density_operator: Schur decomposition failed");
  Eigen::MatrixXd o = schur.matrixU();
  const Eigen::MatrixXd& t = schur.matrixT();

  // collect canonical 2x2 blocks with value b >= 0, reordering columns of O
  // as needed; 1x1 zero rows are maximally mixed pairs whose thermal factor
  // is trivial
  std::vector<double> pair_value;
  std::vector<int> pair_col;  // first column of each block
  for (int i = 0; i < n;) {
    if (i + 1 < n && std::abs(t(i + 1, i)) > 1e-12) {
      double b = 0.5 * (t(i, i + 1) - t(i + 1, i));
      if (b < 0.0) {
        o.col(i).swap(o.col(i + 1));
        b = -b;
      }
      pair_value.push_back(std::min(b, 1.0));
      pair_col.push_back(i);
      i += 2;
    } else {
      i += 1;
    }
  }

  const long dim = 1L << cm.modes;
  const auto c = detail::all_majoranas(cm.modes);
  const auto rotated = [&](int col) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int p = 0; p < n; ++p)
      if (o(p, col) != 0.0) out += o(p, col) * c[p];
    return out;
  };

  Eigen::MatrixXcd rho =
      std::pow(0.5, cm.modes) * Eigen::MatrixXcd::Identity(dim, dim);
  const std::complex<double> im(0.0, 1.0);
  for (std::size_t j = 0; j < pair_value.size(); ++j) {
    if (pair_value[j] == 0.0) continue;
    const Eigen::MatrixXcd z = im * (rotated(pair_col[j]) * rotated(pair_col[j] + 1));
    rho = rho + pair_value[j] * (rho * z);
  }
  return rho;
}

// Free-fermion reference for a quadratic Hamiltonian i sum T c c + e0:
// ground state (beta absent) or Gibbs state, with exact energy, entropy and
// free energy from the pair spectrum.
struct FreeFermionSolution {
  CovarianceMatrix gamma;
  double energy = 0.0;
  double entropy_nats = 0.0;
  double free_energy = 0.0;
};

inline FreeFermionSolution free_fermion_reference(const Eigen::MatrixXd& t_matrix,
                                                  std::optional<double> beta,
                                                  double e0 = 0.0) {
  const double scale = t_matrix.size() ? t_matrix.cwiseAbs().maxCoeff() : 0.0;
  require_skew(t_matrix, 1e-10 * std::max(1.0, scale), "free_fermion_reference");
  if (beta && *beta <= 0.0)
    throw std::invalid_argument("free_fermion_reference: beta must be positive");
  FreeFermionSolution sol;
  if (beta) {
    sol.gamma = tanh_gibbs(t_matrix, *beta);
  } else {
    Eigen::MatrixXd g = detail::skew_apply_odd(
        t_matrix, [](double b) { return b < 1e-12 ? 0.0 : -1.0 / b; });
    sol.gamma = make_cm(std::move(g));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-(t_matrix * t_matrix),
                                                    Eigen::EigenvaluesOnly);
  const auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  double e = e0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double b = std::sqrt(std::max(es.eigenvalues()[i], 0.0));
    if (beta) {
      const double th = std::tanh(2.0 * *beta * b);
      e -= 0.5 * (2.0 * b * th);  // half: spectrum lists each pair twice
      const double p = 0.5 * (1.0 + th);
      s += 0.5 * (-xlnx(p) - xlnx(1.0 - p));
    } else {
      e -= 0.5 * (2.0 * b);
    }
  }
  sol.energy = e;
  sol.entropy_nats = s;
  sol.free_energy = beta ? e - s / *beta : e;
  return sol;
}

// Max-norm residual between the Fock-space real-time rate <[c_a c_b, H]>
// evaluated with the Gaussian density operator of Gamma and the mean-field
// rate 4 [hbar(Gamma), Gamma].
inline double rate_check_real(const MajoranaHamiltonian& h, const CovarianceMatrix& cm) {
  if (h.modes > 6) throw std::invalid_argument("rate_check_real: oracle capped at M = 6");
  const Eigen::MatrixXcd rho = gaussian_density_operator(cm);
  const Eigen::MatrixXcd hf = fock_hamiltonian(h);
  const auto c = detail::all_majoranas(h.modes);
  const Eigen::MatrixXd analytic = 4.0 * commutator(mean_field(h, cm.gamma), cm.gamma);
  const int n = 2 * h.modes;
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const Eigen::MatrixXcd cc = c[a] * c[b];
      const std::complex<double> val = (rho * (cc * hf - hf * cc)).trace();
      worst = std::max(worst, std::abs(val - std::complex<double>(analytic(a, b), 0.0)));
    }
  }
  return worst;
}

// Same for the imaginary-time rate: -i tr[{H, c_k c_l} rho] + 2 Gamma tr[H rho]
// against -4 (Gamma hbar Gamma + hbar).
inline double rate_check_imag(const MajoranaHamiltonian& h, const CovarianceMatrix& cm) {
  if (h.modes > 6) throw std::invalid_argument("rate_check_imag: oracle capped at M = 6");
  const Eigen::MatrixXcd rho = gaussian_density_operator(cm);
  const Eigen::MatrixXcd hf = fock_hamiltonian(h);
  const auto c = detail::all_majoranas(h.modes);
  const Eigen::MatrixXd hbar = mean_field(h, cm.gamma);
  const Eigen::MatrixXd analytic = -4.0 * (cm.gamma * hbar * cm.gamma + hbar);
  const double e_mean = std::real((rho * hf).trace());
  const std::complex<double> im(0.0, 1.0);
  const int n = 2 * h.modes;
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const Eigen::MatrixXcd cc = c[a] * c[b];
      const std::complex<double> val =
          -im * (rho * (hf * cc + cc * hf)).trace() + 2.0 * cm.gamma(a, b) * e_mean;
      worst = std::max(worst, std::abs(val - std::complex<double>(analytic(a, b), 0.0)));
    }
  }
  return worst;
}

}  // namespace ghf
