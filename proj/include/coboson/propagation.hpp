#pragma once

// exp(-i H t) v by dense eigendecomposition, Chebyshev expansion, or
// short-iterative Lanczos. Every run is checked against the unitarity and
// energy-conservation contract.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "coboson/model_core.hpp"

namespace coboson {

enum class Propagator { automatic, eigen, chebyshev, krylov };

inline const char* to_string(Propagator p) {
  switch (p) {
    case Propagator::automatic: return "automatic";
    case Propagator::eigen: return "eigen";
    case Propagator::chebyshev: return "chebyshev";
    case Propagator::krylov: return "krylov";
  }
  return "unknown";
}

struct PropagationOptions {
  Propagator method = Propagator::automatic;
  Index dense_limit = 1200;       ///< automatic: eigendecomposition up to this dimension
  double series_tolerance = 1e-15;
  int krylov_dim = 30;
  double norm_tolerance = 1e-10;   ///< relative norm drift
  double energy_tolerance = 1e-8;  ///< absolute drift of <H>, units of J
};

struct Propagation {
  StateVector state;
  Propagator method = Propagator::automatic;
  double norm_drift = 0.0;
  double energy_drift = 0.0;
  int steps = 0;
};

namespace detail {

inline Eigen::VectorXcd evolve_eigen(const SparseHermitianOperator& h, const Eigen::VectorXcd& v, double t) {
  if (h.is_real()) {
    const Eigen::MatrixXd dense = h.to_dense().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) throw NumericalFailure("eigendecomposition failed");
    const Eigen::MatrixXd& vecs = solver.eigenvectors();
    Eigen::VectorXcd c = vecs.transpose().cast<cplx>() * v;
    for (Index i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -solver.eigenvalues()[i] * t);
    return vecs.cast<cplx>() * c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.to_dense());
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigendecomposition failed");
  const Eigen::MatrixXcd& vecs = solver.eigenvectors();
  Eigen::VectorXcd c = vecs.adjoint() * v;
  for (Index i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -solver.eigenvalues()[i] * t);
  return vecs * c;
}

/// exp(-iHt) = e^{-i c t} sum_n (2 - delta_n0) (-i)^n J_n(R t) T_n((H - c)/R)
inline Eigen::VectorXcd evolve_chebyshev(const SparseHermitianOperator& h, const Eigen::VectorXcd& v, double t,
                                         double tol, int& steps) {
  auto [lo, hi] = h.spectral_bounds();
  const double centre = 0.5 * (lo + hi);
  const double radius = std::max(0.5 * (hi - lo) * 1.01, 1e-12);
  constexpr double max_arg = 25.0;
  steps = std::max(1, static_cast<int>(std::ceil(radius * std::abs(t) / max_arg)));
  const double dt = t / steps;
  const double x = radius * std::abs(dt);

  std::vector<double> bessel;
  for (int n = 0;; ++n) {
    const double jn = std::cyl_bessel_j(static_cast<double>(n), x);
    bessel.push_back(jn);
    if (n > x + 10 && std::abs(jn) < tol) break;
    if (n > 100000) throw NumericalFailure("Chebyshev series did not converge");
  }
  const double sign = t >= 0 ? 1.0 : -1.0;
  const cplx minus_i{0.0, -sign};
  std::vector<cplx> coeff(bessel.size());
  cplx power{1.0, 0.0};
  for (std::size_t n = 0; n < bessel.size(); ++n) {
    coeff[n] = (n == 0 ? 1.0 : 2.0) * power * bessel[n];
    power *= minus_i;
  }
  const cplx global = std::polar(1.0, -centre * dt);

  Eigen::VectorXcd psi = v;
  Eigen::VectorXcd t0, t1, t2, tmp;
  for (int s = 0; s < steps; ++s) {
    t0 = psi;
    h.multiply(t0, tmp);
    t1 = (tmp - centre * t0) / radius;
    Eigen::VectorXcd acc = coeff[0] * t0 + coeff[1] * t1;
    for (std::size_t n = 2; n < coeff.size(); ++n) {
      h.multiply(t1, tmp);
      t2 = 2.0 * (tmp - centre * t1) / radius - t0;
      acc += coeff[n] * t2;
      std::swap(t0, t1);
      std::swap(t1, t2);
    }
    psi = global * acc;
  }
  return psi;
}

/// Short-iterative Lanczos with adaptive steps and full reorthogonalization.
inline Eigen::VectorXcd evolve_krylov(const SparseHermitianOperator& h, const Eigen::VectorXcd& v, double t,
                                      int max_dim, double tol, int& steps) {
  const Index n = h.dim();
  const int m_max = static_cast<int>(std::min<Index>(max_dim, n));
  auto [lo, hi] = h.spectral_bounds();
  const double width = std::max(hi - lo, 1e-12);
  Eigen::VectorXcd psi = v;
  double done = 0.0;
  double dt = std::min(std::abs(t), 0.5 * m_max / width);
  const double sign = t >= 0 ? 1.0 : -1.0;
  steps = 0;
  Eigen::MatrixXcd basis(n, m_max + 1);
  Eigen::VectorXcd w;
  while (done < std::abs(t)) {
    const double norm0 = psi.norm();
    if (norm0 == 0.0) break;
    basis.col(0) = psi / norm0;
    std::vector<double> alpha, beta;
    int m = 0;
    double beta_last = 0.0;
    for (; m < m_max; ++m) {
      h.multiply(basis.col(m), w);
      const double a = basis.col(m).dot(w).real();
      alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j <= m; ++j) w -= basis.col(j).dot(w) * basis.col(j);
      beta_last = w.norm();
      if (beta_last < 1e-14 * width) {
        ++m;
        break;
      }
      if (m + 1 < m_max + 1) basis.col(m + 1) = w / beta_last;
      if (m + 1 < m_max) beta.push_back(beta_last);
    }
    const bool invariant = beta_last < 1e-14 * width;
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) tri(j, j) = alpha[static_cast<std::size_t>(j)];
    for (int j = 0; j + 1 < m; ++j) tri(j, j + 1) = tri(j + 1, j) = beta[static_cast<std::size_t>(j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
    if (solver.info() != Eigen::Success) throw NumericalFailure("Lanczos tridiagonal solve failed");

    for (;;) {
      const double step = std::min(dt, std::abs(t) - done);
      Eigen::VectorXcd c = solver.eigenvectors().row(0).transpose().cast<cplx>();
      for (int j = 0; j < m; ++j) c[j] *= std::polar(1.0, -sign * solver.eigenvalues()[j] * step);
      const Eigen::VectorXcd y = solver.eigenvectors().cast<cplx>() * c;
      const double err = invariant ? 0.0 : beta_last * std::abs(y[m - 1]);
      // Error budget proportional to the step, floored at round-off level.
      const double target = std::max(tol * step / std::abs(t), 1e-13);
      if (err <= target || step < 1e-12) {
        psi = norm0 * (basis.leftCols(m) * y);
        done += step;
        ++steps;
        if (err < 0.1 * target) dt *= 1.25;
        break;
      }
      dt *= 0.5;
    }
    if (steps > 1000000) throw NumericalFailure("Lanczos propagation did not converge");
  }
  return psi;
}

}  // namespace detail

/// exp(-i h t) v with the drift contract enforced; throws NumericalFailure
/// when norm or energy drift exceed the configured tolerances.
inline Propagation evolve(const SparseHermitianOperator& h, const StateVector& v, double t,
                          const PropagationOptions& options = {}) {
  if (h.dim() != v.dim()) throw InvalidParameter("dimension mismatch in propagate");
  if (!std::isfinite(t)) throw InvalidParameter("propagation time must be finite");
  Propagation out;
  out.method = options.method;
  if (out.method == Propagator::automatic)
    out.method = h.dim() <= options.dense_limit ? Propagator::eigen : Propagator::chebyshev;

  const double norm_in = v.norm();
  const double energy_in = norm_in > 0 ? expectation(h, v) / (norm_in * norm_in) : 0.0;
  out.state.basis = v.basis;
  switch (out.method) {
    case Propagator::eigen:
      out.state.amp = detail::evolve_eigen(h, v.amp, t);
      out.steps = 1;
      break;
    case Propagator::chebyshev:
      out.state.amp = detail::evolve_chebyshev(h, v.amp, t, options.series_tolerance, out.steps);
      break;
    case Propagator::krylov:
      out.state.amp = detail::evolve_krylov(h, v.amp, t, options.krylov_dim, 1e-12, out.steps);
      break;
    case Propagator::automatic: break;
  }

  const double norm_out = out.state.norm();
  out.norm_drift = norm_in > 0 ? std::abs(norm_out - norm_in) / norm_in : norm_out;
  out.energy_drift = norm_out > 0 ? std::abs(expectation(h, out.state) / (norm_out * norm_out) - energy_in) : 0.0;
  if (!(out.norm_drift <= options.norm_tolerance))
    throw NumericalFailure(std::string("norm drift ") + std::to_string(out.norm_drift) + " with " +
                           to_string(out.method));
  if (!(out.energy_drift <= options.energy_tolerance))
    throw NumericalFailure(std::string("energy drift ") + std::to_string(out.energy_drift) + " with " +
                           to_string(out.method));
  return out;
}

inline StateVector propagate(const SparseHermitianOperator& h, const StateVector& v, double t,
                             const PropagationOptions& options = {}) {
  return evolve(h, v, t, options).state;
}

}  // namespace coboson
