#pragma once

// Lattice Hubbard models in Majorana form: H = i sum T_{kl} c_k c_l
// + sum_t w_t c_{k1} c_{k2} c_{k3} c_{k4} + e0, together with the shared
// mean-field map hbar(Gamma), the energy functional and the particle number.
//
// Complex modes enumerate sites site-major (h fastest), spin-up block first:
// mode(site, up) = site, mode(site, down) = site + n_sites.

#include "ghf/covariance.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ghf {

enum class Boundary { periodic, open };
enum class InteractionForm { symmetric, plain };
enum class Spin { up, down };

struct ModelSpec {
  int n_h = 2;
  int n_v = 2;
  Boundary boundary = Boundary::periodic;
  double t = 1.0;   // hopping, the energy scale
  double u = 0.0;   // on-site interaction
  double mu = 0.0;  // chemical potential
  double v_t = 0.0; // harmonic trap curvature
  InteractionForm interaction = InteractionForm::symmetric;
};

inline void validate(const ModelSpec& spec) {
  if (spec.n_h < 2 || spec.n_v < 2)
    throw std::invalid_argument("model: lattice too small, n_h and n_v must be >= 2");
}

inline int site_count(const ModelSpec& spec) { return spec.n_h * spec.n_v; }
inline int mode_count(const ModelSpec& spec) { return 2 * site_count(spec); }

inline int site_index(const ModelSpec& spec, int h, int v) {
  if (h < 0 || h >= spec.n_h || v < 0 || v >= spec.n_v)
    throw std::out_of_range("site_index: coordinates outside lattice");
  return v * spec.n_h + h;
}

inline int mode_index(const ModelSpec& spec, int site, Spin spin) {
  if (site < 0 || site >= site_count(spec))
    throw std::out_of_range("mode_index: site outside lattice");
  return spin == Spin::up ? site : site + site_count(spec);
}

// Site-dependent chemical potential mu_x = mu + V_t [(c_h - h)^2 + (c_v - v)^2]
// with the trap centered on the lattice.
inline double local_chemical_potential(const ModelSpec& spec, int h, int v) {
  const double ch = 0.5 * (spec.n_h - 1);
  const double cv = 0.5 * (spec.n_v - 1);
  const double dh = ch - h;
  const double dv = cv - v;
  return spec.mu + spec.v_t * (dh * dh + dv * dv);
}

// One canonical quartic monomial: weight * c_k c_l c_m c_n with k<l<m<n.
// The fully antisymmetrized tensor entry is weight/24 times the permutation
// sign; storing monomials keeps the table O(M) for Hubbard interactions.
struct QuarticTerm {
  int k = 0, l = 0, m = 0, n = 0;
  double weight = 0.0;
};

struct MajoranaHamiltonian {
  int modes = 0;                      // M
  Eigen::MatrixXd quadratic;          // T, 2M x 2M antisymmetric
  std::vector<QuarticTerm> quartic;   // canonical ascending monomials
  double offset = 0.0;                // e0
};

// Converts the number-conserving one-body coefficient matrix A (real
// symmetric, H1 = sum A_{kl} a^dag_k a_l) into Majorana form:
// T = [[0, -A/4], [A/4, 0]] and a scalar tr(A)/2.
inline MajoranaHamiltonian majorana_quadratic(const Eigen::MatrixXd& one_body) {
  detail::require_square(one_body, "majorana_quadratic");
  if ((one_body - one_body.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, one_body.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("majorana_quadratic: one-body matrix must be symmetric");
  const int m = static_cast<int>(one_body.rows());
  MajoranaHamiltonian h;
  h.modes = m;
  h.quadratic = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  h.quadratic.block(0, m, m, m) = -0.25 * one_body;
  h.quadratic.block(m, 0, m, m) = 0.25 * one_body;
  h.offset = 0.5 * one_body.trace();
  return h;
}

// Hopping plus (site-dependent) chemical potential of the given spec,
// without the interaction, as an M x M one-body matrix.
inline Eigen::MatrixXd one_body_matrix(const ModelSpec& spec) {
  validate(spec);
  const int ns = site_count(spec);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * ns, 2 * ns);
  const auto add_bond = [&](int s1, int s2) {
    for (Spin s : {Spin::up, Spin::down}) {
      const int m1 = mode_index(spec, s1, s);
      const int m2 = mode_index(spec, s2, s);
      a(m1, m2) += spec.t;
      a(m2, m1) += spec.t;
    }
  };
  for (int v = 0; v < spec.n_v; ++v) {
    for (int h = 0; h < spec.n_h; ++h) {
      const int s = site_index(spec, h, v);
      if (h + 1 < spec.n_h)
        add_bond(s, site_index(spec, h + 1, v));
      else if (spec.boundary == Boundary::periodic)
        add_bond(s, site_index(spec, 0, v));
      if (v + 1 < spec.n_v)
        add_bond(s, site_index(spec, h, v + 1));
      else if (spec.boundary == Boundary::periodic)
        add_bond(s, site_index(spec, h, 0));
      const double mu_x = local_chemical_potential(spec, h, v);
      for (Spin sp : {Spin::up, Spin::down}) {
        const int m = mode_index(spec, s, sp);
        a(m, m) += mu_x;
      }
    }
  }
  return a;
}

// Full Hubbard Hamiltonian in Majorana form. The on-site interaction
// u (n_up - 1/2)(n_dn - 1/2) is exactly one quartic monomial per site,
// u/4 * c_p c_q c_{p+M} c_{q+M}; the plain u n_up n_dn form additionally
// shifts the one-body diagonal by u/2 and the scalar by -u/4 per site.
inline MajoranaHamiltonian build_hubbard(const ModelSpec& spec) {
  validate(spec);
  const int ns = site_count(spec);
  const int m = 2 * ns;
  Eigen::MatrixXd a = one_body_matrix(spec);
  double extra_offset = 0.0;
  if (spec.interaction == InteractionForm::plain) {
    for (int s = 0; s < ns; ++s) {
      a(mode_index(spec, s, Spin::up), mode_index(spec, s, Spin::up)) += 0.5 * spec.u;
      a(mode_index(spec, s, Spin::down), mode_index(spec, s, Spin::down)) += 0.5 * spec.u;
    }
    extra_offset = -0.25 * spec.u * ns;
  }
  MajoranaHamiltonian h = majorana_quadratic(a);
  h.offset += extra_offset;
  if (spec.u != 0.0) {
    h.quartic.reserve(ns);
    for (int s = 0; s < ns; ++s) {
      const int p = mode_index(spec, s, Spin::up);
      const int q = mode_index(spec, s, Spin::down);
      h.quartic.push_back({p, q, p + m, q + m, 0.25 * spec.u});
    }
  }
  return h;
}

// Mean-field matrix hbar(Gamma) = T + 6 tr_B[U Gamma]. For one canonical
// monomial w c_{k1} c_{k2} c_{k3} c_{k4} the contraction contributes
// -(w/2) sgn(pi) Gamma_{kc,kd} to hbar_{ka,kb} for every splitting of the
// quadruple into pairs (a,b),(c,d).
inline Eigen::MatrixXd mean_field(const MajoranaHamiltonian& h,
                                  const Eigen::MatrixXd& gamma) {
  if (gamma.rows() != 2 * h.modes || gamma.cols() != 2 * h.modes)
    throw std::invalid_argument("mean_field: dimension mismatch");
  Eigen::MatrixXd hbar = h.quadratic;
  for (const QuarticTerm& q : h.quartic) {
    const double w2 = 0.5 * q.weight;
    const auto add = [&](int a, int b, double val) {
      hbar(a, b) += val;
      hbar(b, a) -= val;
    };
    add(q.k, q.l, -w2 * gamma(q.m, q.n));
    add(q.k, q.m, +w2 * gamma(q.l, q.n));
    add(q.k, q.n, -w2 * gamma(q.l, q.m));
    add(q.l, q.m, -w2 * gamma(q.k, q.n));
    add(q.l, q.n, +w2 * gamma(q.k, q.m));
    add(q.m, q.n, -w2 * gamma(q.k, q.l));
  }
  return hbar;
}

// E = -tr[(T + 3 tr_B[U Gamma]) Gamma] + e0. The quartic part is evaluated
// per monomial through the Wick value of the four-point function.
inline double energy(const MajoranaHamiltonian& h, const Eigen::MatrixXd& gamma) {
  if (gamma.rows() != 2 * h.modes || gamma.cols() != 2 * h.modes)
    throw std::invalid_argument("energy: dimension mismatch");
  double e = h.offset + h.quadratic.cwiseProduct(gamma).sum();
  for (const QuarticTerm& q : h.quartic) {
    e -= q.weight * (gamma(q.k, q.l) * gamma(q.m, q.n) -
                     gamma(q.k, q.m) * gamma(q.l, q.n) +
                     gamma(q.k, q.n) * gamma(q.l, q.m));
  }
  return e;
}

inline double energy(const MajoranaHamiltonian& h, const CovarianceMatrix& cm) {
  return energy(h, cm.gamma);
}

// N = M/2 - 1/2 sum_k Gamma_{k,k+M}, in [0, M].
inline double particle_number(const CovarianceMatrix& cm) {
  double s = 0.0;
  for (int k = 0; k < cm.modes; ++k) s += cm.gamma(k, k + cm.modes);
  return 0.5 * cm.modes - 0.5 * s;
}

// Quadratic seed Hamiltonians used to bias the initial state of the ground
// flow towards a symmetry-broken branch of a degenerate minimum family.

// Hopping + trap + a uniform on-site s-wave pairing field of strength delta.
inline MajoranaHamiltonian seed_pairing_hamiltonian(const ModelSpec& spec, double delta) {
  MajoranaHamiltonian h = majorana_quadratic(one_body_matrix(spec));
  const int m = h.modes;
  for (int s = 0; s < site_count(spec); ++s) {
    const int k = mode_index(spec, s, Spin::up);
    const int l = mode_index(spec, s, Spin::down);
    const double w = 0.25 * delta;
    h.quadratic(k, l + m) += w;
    h.quadratic(l + m, k) -= w;
    h.quadratic(k + m, l) += w;
    h.quadratic(l, k + m) -= w;
  }
  return h;
}

// Hopping + trap + a staggered field favouring a Neel pattern along z.
inline MajoranaHamiltonian seed_neel_hamiltonian(const ModelSpec& spec, double field) {
  Eigen::MatrixXd a = one_body_matrix(spec);
  for (int v = 0; v < spec.n_v; ++v) {
    for (int h = 0; h < spec.n_h; ++h) {
      const int s = site_index(spec, h, v);
      const double sign = ((h + v) % 2 == 0) ? 1.0 : -1.0;
      a(mode_index(spec, s, Spin::up), mode_index(spec, s, Spin::up)) -= sign * field;
      a(mode_index(spec, s, Spin::down), mode_index(spec, s, Spin::down)) += sign * field;
    }
  }
  return majorana_quadratic(a);
}

}  // namespace ghf
