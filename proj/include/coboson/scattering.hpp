#pragma once

// Plane-wave scattering theory: single-defect transmission/reflection,
// composite-composite phase shifts, suppression factors and bunching
// probabilities.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "coboson/effective.hpp"

namespace coboson {

struct ScatteringAmplitudes {
  cplx t;
  cplx r;
  double k = 0.0;
};

struct PhaseShift {
  cplx phase_factor;  ///< e^{i phi}
  int eps = 1;
  double k = 0.0;

  double angle() const { return std::arg(phase_factor); }
};

namespace detail {

inline void require_open_interval(double k, const char* what) {
  if (!(k > 0.0 && k < pi)) throw InvalidParameter(std::string(what) + ": k must lie strictly inside (0, pi)");
}

inline void require_closed_interval(double k, const char* what) {
  if (!(k >= 0.0 && k <= pi)) throw InvalidParameter(std::string(what) + ": k must lie in [0, pi]");
}

}  // namespace detail

/// Delta barrier of height mu_b on a chain with hopping J_hop:
/// t = 2i J sin k / (2i J sin k - mu_b), r = t - 1.
inline ScatteringAmplitudes barrier_amplitudes(double k, double J_hop, double mu_b) {
  detail::require_open_interval(k, "barrier_amplitudes");
  if (J_hop == 0.0) throw InvalidParameter("barrier_amplitudes: zero hopping");
  const cplx a{0.0, 2.0 * J_hop * std::sin(k)};
  const cplx t = a / (a - mu_b);
  return {t, t - 1.0, k};
}

/// 16 b^2 sin^2 k / (4 sin^2 k + b^2)^2 with b = mu U / J^2.
inline double p_b_elem(double k, double beta) {
  detail::require_closed_interval(k, "p_b_elem");
  const double s2 = std::sin(k) * std::sin(k);
  const double den = 4.0 * s2 + beta * beta;
  if (den == 0.0) return 0.0;
  return 16.0 * beta * beta * s2 / (den * den);
}

/// e^{i phi} = -e^{ik} (fermionic constituents),
///             e^{ik} (sin k - i) / (sin k + i) (bosonic constituents).
inline PhaseShift phase_composite(double k, int eps) {
  detail::require_closed_interval(k, "phase_composite");
  require_sign(eps);
  const cplx ek = std::polar(1.0, k);
  const cplx i{0.0, 1.0};
  if (eps == -1) return {-ek, eps, k};
  return {ek * (std::sin(k) - i) / (std::sin(k) + i), eps, k};
}

inline double suppression(double k, int eps) {
  detail::require_closed_interval(k, "suppression");
  require_sign(eps);
  const double h = std::sin(0.5 * k);
  if (eps == -1) return h * h;
  const double c = 2.0 + std::cos(k);
  const double s = std::sin(k);
  return c * c * h * h / (1.0 + s * s);
}

/// |1 + e^{i phi}|^2 / 4
inline double suppression_from_phase(const PhaseShift& phase) {
  return std::norm(1.0 + phase.phase_factor) / 4.0;
}

/// |r t + t e^{i phi} r|^2
inline double p_b_from_phase(const ScatteringAmplitudes& amps, const PhaseShift& phase) {
  if (std::abs(amps.k - phase.k) > 1e-12) throw InvalidParameter("p_b_from_phase: quasimomentum mismatch");
  return std::norm(amps.r * amps.t + amps.t * phase.phase_factor * amps.r);
}

inline double p_b_comp(double k, double beta, int eps) { return suppression(k, eps) * p_b_elem(k, beta); }

/// Numerical phase shift: solves the K = 0 relative-coordinate problem of the
/// two-composite effective Hamiltonian on a finite chain r = 1..N, with the
/// double-occupancy amplitude d attached to r = 1 and the scattering ansatz
/// phi(r) = e^{ikr} + A e^{-ikr} imposed on the last two sites. Energies are
/// measured from the bulk shift, E = -4 J_eff cos k.
///
///   E d    = 2 t_d phi(1)
///   E phi1 = v_nn phi(1) - 2 J_eff phi(2) + 2 t_d d
///   E phir = -2 J_eff (phi(r-1) + phi(r+1)),  r >= 2
inline PhaseShift phase_numeric(double k, int eps, const EffectiveParams& eff, int chain = 12) {
  detail::require_open_interval(k, "phase_numeric");
  require_sign(eps);
  if (eff.eps != eps) throw InvalidParameter("phase_numeric: effective parameters built for another eps");
  if (eff.J_eff == 0.0) throw InvalidParameter("phase_numeric: J_eff must be nonzero");
  if (chain < 3) throw InvalidParameter("phase_numeric: chain too short");

  const double E = -4.0 * eff.J_eff * std::cos(k);
  const double hop = -2.0 * eff.J_eff;
  const double td = 2.0 * eff.t_double;
  const bool with_double = eps == 1;

  // Unknowns: [d?] phi(1..N) A
  const int off = with_double ? 1 : 0;
  const int n = off + chain + 1;
  const int a_col = n - 1;
  auto col = [off](int r) { return off + r - 1; };
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  int row = 0;
  if (with_double) {
    m(row, 0) = E;
    m(row, col(1)) = -td;
    ++row;
  }
  // r = 1
  m(row, col(1)) = E - eff.v_nn;
  m(row, col(2)) = -hop;
  if (with_double) m(row, 0) = -td;
  ++row;
  for (int r = 2; r < chain; ++r, ++row) {
    m(row, col(r)) = E;
    m(row, col(r - 1)) = -hop;
    m(row, col(r + 1)) = -hop;
  }
  for (int r : {chain - 1, chain}) {
    m(row, col(r)) = 1.0;
    m(row, a_col) = -std::polar(1.0, -k * r);
    rhs[row] = std::polar(1.0, k * r);
    ++row;
  }

  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw NumericalFailure("phase_numeric: singular boundary problem");
  const Eigen::VectorXcd x = lu.solve(rhs);
  const double residual = (m * x - rhs).norm();
  if (!(residual < 1e-10) || !x.allFinite()) throw NumericalFailure("phase_numeric: linear solve did not converge");
  const cplx a = x[a_col];

  // The ansatz must also hold on r = 1 when the solution is a pure scattering state.
  const cplx phi1 = x[col(1)];
  const cplx expected = std::polar(1.0, k) + a * std::polar(1.0, -k);
  if (std::abs(phi1 - expected) > 1e-8) throw NumericalFailure("phase_numeric: ansatz inconsistent on the chain");
  return {a, eps, k};
}

}  // namespace coboson
