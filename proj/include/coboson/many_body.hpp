#pragma once

// Exact two- and four-particle Hamiltonians in a distinguishable-particle
// position basis, the exchange/parity permutations acting on it, and the
// interaction-energy-2U ("paired") subspace of two composites.
//
// Four-particle configurations are ordered (A1, B1, A2, B2) everywhere.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "coboson/model_core.hpp"

namespace coboson {

using Config4 = std::array<int, 4>;

/// |l, l'> with particle A on l and B on l'; offset = off(l) * L + off(l').
class TwoParticleBasis {
 public:
  explicit TwoParticleBasis(int L) : lattice_(L) {}

  Index dim() const { return static_cast<Index>(lattice_.size()) * lattice_.size(); }
  const Lattice& lattice() const { return lattice_; }
  std::string name() const { return "two-particle:" + std::to_string(lattice_.size()); }

  Index index(int l, int lp) const { return lattice_.offset(l) * lattice_.size() + lattice_.offset(lp); }
  std::array<int, 2> labels(Index i) const {
    if (i < 0 || i >= dim()) throw InvalidParameter("two-particle offset out of range");
    return {lattice_.label(i / lattice_.size()), lattice_.label(i % lattice_.size())};
  }

 private:
  Lattice lattice_;
};

/// |l, l', m, m'> = |l>_A1 |l'>_B1 |m>_A2 |m'>_B2, lexicographic in that order.
class FourParticleBasis {
 public:
  explicit FourParticleBasis(int L) : lattice_(L) {}

  Index dim() const {
    const Index n = lattice_.size();
    return n * n * n * n;
  }
  const Lattice& lattice() const { return lattice_; }
  std::string name() const { return "four-particle:" + std::to_string(lattice_.size()); }

  Index index(const Config4& c) const {
    const Index n = lattice_.size();
    return ((lattice_.offset(c[0]) * n + lattice_.offset(c[1])) * n + lattice_.offset(c[2])) * n +
           lattice_.offset(c[3]);
  }

  Config4 labels(Index i) const {
    if (i < 0 || i >= dim()) throw InvalidParameter("four-particle offset out of range");
    const Index n = lattice_.size();
    Config4 c{};
    for (int p = 3; p >= 0; --p) {
      c[static_cast<std::size_t>(p)] = lattice_.label(i % n);
      i /= n;
    }
    return c;
  }

 private:
  Lattice lattice_;
};

/// Contact interactions: +U for every coinciding A-B pair, -U for A1 = A2
/// and for B1 = B2.
inline double interaction_energy(const Config4& c, double U) {
  const auto [a1, b1, a2, b2] = c;
  int n = 0;
  n += (a1 == b1) + (a1 == b2) + (a2 == b1) + (a2 == b2);
  n -= (a1 == a2) + (b1 == b2);
  return n * U;
}

inline SparseHermitianOperator build_h2(const ModelParams& params) {
  params.validate();
  const TwoParticleBasis basis(params.L);
  const Lattice& lat = basis.lattice();
  OperatorBuilder b(basis.dim());
  for (int l = lat.min_site(); l <= lat.max_site(); ++l) {
    for (int lp = lat.min_site(); lp <= lat.max_site(); ++lp) {
      const Index i = basis.index(l, lp);
      double diag = 0.0;
      if (l == lp) diag += params.U;
      if (l == 0) diag += params.mu;
      if (lp == 0) diag += params.mu;
      if (diag != 0.0) b.add_diagonal(i, diag);
      if (l + 1 <= lat.max_site()) b.add(i, basis.index(l + 1, lp), -params.J);
      if (lp + 1 <= lat.max_site()) b.add(i, basis.index(l, lp + 1), -params.J);
    }
  }
  return b.build();
}

inline SparseHermitianOperator build_h4(const ModelParams& params) {
  params.validate();
  const FourParticleBasis basis(params.L);
  const Lattice& lat = basis.lattice();
  OperatorBuilder b(basis.dim());
  for (Index i = 0; i < basis.dim(); ++i) {
    const Config4 c = basis.labels(i);
    double diag = interaction_energy(c, params.U);
    for (int x : c)
      if (x == 0) diag += params.mu;
    if (diag != 0.0) b.add_diagonal(i, diag);
    for (std::size_t p = 0; p < 4; ++p) {
      if (c[p] + 1 > lat.max_site()) continue;
      Config4 n = c;
      ++n[p];
      b.add(i, basis.index(n), -params.J);
    }
  }
  return b.build();
}

/// Basis permutation: P|i> = |image[i]>.
class Permutation {
 public:
  explicit Permutation(std::vector<Index> image) : image_(std::move(image)) {}

  Index dim() const { return static_cast<Index>(image_.size()); }
  Index operator[](Index i) const { return image_[static_cast<std::size_t>(i)]; }

  StateVector apply(const StateVector& v) const {
    if (v.dim() != dim()) throw InvalidParameter("dimension mismatch in permutation");
    StateVector out{v.basis, Eigen::VectorXcd(v.dim())};
    for (Index i = 0; i < dim(); ++i) out.amp[(*this)[i]] = v.amp[i];
    return out;
  }

  bool is_involution() const {
    for (Index i = 0; i < dim(); ++i)
      if ((*this)[(*this)[i]] != i) return false;
    return true;
  }

  bool commutes_with(const Permutation& other) const {
    if (other.dim() != dim()) return false;
    for (Index i = 0; i < dim(); ++i)
      if ((*this)[other[i]] != other[(*this)[i]]) return false;
    return true;
  }

  /// Exact test of P H P^-1 == H on the stored elements.
  bool commutes_with(const SparseHermitianOperator& h) const {
    if (h.dim() != dim()) return false;
    for (const auto& t : h.entries())
      if (h.element((*this)[t.row], (*this)[t.col]) != t.value) return false;
    return true;
  }

  /// Involutive permutations are real symmetric matrices.
  SparseHermitianOperator as_operator() const {
    if (!is_involution()) throw InvalidParameter("only involutive permutations are Hermitian");
    OperatorBuilder b(dim());
    for (Index i = 0; i < dim(); ++i)
      if ((*this)[i] >= i) b.add((*this)[i], i, 1.0);
    return b.build();
  }

 private:
  std::vector<Index> image_;
};

/// <v| P |v> for a basis permutation P.
inline cplx expectation(const Permutation& p, const StateVector& v) {
  return v.amp.dot(p.apply(v).amp);
}

struct SymmetryOps {
  Permutation exchange_a;  ///< |l,l',m,m'> -> |m,l',l,m'>
  Permutation exchange_b;  ///< |l,l',m,m'> -> |l,m',m,l'>
  Permutation parity;      ///< |l,l',m,m'> -> |-l,-l',-m,-m'>
};

inline SymmetryOps build_symmetry_ops(int L) {
  const FourParticleBasis basis(L);
  const auto n = static_cast<std::size_t>(basis.dim());
  std::vector<Index> ea(n), eb(n), par(n);
  for (Index i = 0; i < basis.dim(); ++i) {
    const auto [l, lp, m, mp] = basis.labels(i);
    const auto s = static_cast<std::size_t>(i);
    ea[s] = basis.index({m, lp, l, mp});
    eb[s] = basis.index({l, mp, m, lp});
    par[s] = basis.index({-l, -lp, -m, -mp});
  }
  return {Permutation(std::move(ea)), Permutation(std::move(eb)), Permutation(std::move(par))};
}

/// Simultaneous eigenvalues of (E_A, E_B, P); parity may be left open.
struct SymmetrySector {
  int eps_a = 1;
  int eps_b = 1;
  std::optional<int> parity;

  void validate() const {
    auto ok = [](int v) { return v == 1 || v == -1; };
    if (!ok(eps_a) || !ok(eps_b) || (parity && !ok(*parity)))
      throw InvalidParameter("symmetry eigenvalues must be +1 or -1");
  }
};

inline void require_sign(int eps) {
  if (eps != 1 && eps != -1) throw InvalidParameter("eps must be +1 or -1, got " + std::to_string(eps));
}

/// (1 + eps E_A)(1 + eps E_B) v, renormalized.
inline StateVector symmetrize(const SymmetryOps& ops, const StateVector& v, int eps) {
  require_sign(eps);
  const double in_norm = v.norm();
  StateVector w = v;
  w.amp += eps * ops.exchange_b.apply(v).amp;
  w.amp += eps * ops.exchange_a.apply(w).amp;
  if (!(w.norm() > 1e-12 * in_norm)) throw DegenerateInput("symmetrization annihilates the state");
  return w.normalize();
}

inline StateVector symmetrize(const StateVector& v, int eps, int L) { return symmetrize(build_symmetry_ops(L), v, eps); }

struct BoundBand {
  std::vector<double> energies;  ///< ascending
  double threshold = 0.0;        ///< |E| cut separating the band from the continuum
  bool complete = false;         ///< false when fewer than L levels were found
};

/// Eigenvalues of H_2 beyond the scattering continuum on the side of U.
/// Dense diagonalization of the L^2-dimensional problem.
inline BoundBand bound_band(const ModelParams& params) {
  params.require_interaction();
  const auto h = build_h2(params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.to_dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("H2 diagonalization failed");
  BoundBand band;
  band.threshold = 4.0 * params.J + 2.0 * params.J * params.J / std::abs(params.U);
  const double side = params.U > 0 ? 1.0 : -1.0;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double e = solver.eigenvalues()[i];
    if (side * e > band.threshold) band.energies.push_back(e);
  }
  band.complete = static_cast<int>(band.energies.size()) >= params.L;
  return band;
}

/// The two families of paired states, {|l,l,m,m>} for all (l, m) and
/// {|l,m,m,l>} for l != m; the intersection |l,l,l,l> belongs to the
/// first family only. Dimension 2L^2 - L.
class PairedSubspace {
 public:
  enum class Family { same_partners, swapped_partners };

  explicit PairedSubspace(int L) : lattice_(L) {}

  const Lattice& lattice() const { return lattice_; }
  Index dim() const {
    const Index n = lattice_.size();
    return 2 * n * n - n;
  }
  std::string name() const { return "paired:" + std::to_string(lattice_.size()); }

  /// |l,l,m,m>
  Index same_index(int l, int m) const { return lattice_.offset(l) * lattice_.size() + lattice_.offset(m); }

  /// |l,m,m,l>, l != m
  Index swapped_index(int l, int m) const {
    if (l == m) throw InvalidParameter("|l,l,l,l> is indexed as a same-partner state");
    const Index n = lattice_.size();
    const Index a = lattice_.offset(l);
    const Index b = lattice_.offset(m);
    return n * n + a * (n - 1) + (b < a ? b : b - 1);
  }

  std::optional<Index> find(const Config4& c) const {
    const auto [a1, b1, a2, b2] = c;
    for (int x : c)
      if (!lattice_.contains(x)) return std::nullopt;
    if (a1 == b1 && a2 == b2) return same_index(a1, a2);
    if (a1 == b2 && b1 == a2) return swapped_index(a1, b1);
    return std::nullopt;
  }

  bool contains(const Config4& c) const { return find(c).has_value(); }

  Config4 config(Index i) const {
    const Index n = lattice_.size();
    if (i < 0 || i >= dim()) throw InvalidParameter("paired index out of range");
    if (i < n * n) {
      const int l = lattice_.label(i / n);
      const int m = lattice_.label(i % n);
      return {l, l, m, m};
    }
    const Index j = i - n * n;
    const Index a = j / (n - 1);
    Index b = j % (n - 1);
    if (b >= a) ++b;
    const int l = lattice_.label(a);
    const int m = lattice_.label(b);
    return {l, m, m, l};
  }

  Family family(Index i) const {
    const Index n = lattice_.size();
    return i < n * n ? Family::same_partners : Family::swapped_partners;
  }

 private:
  Lattice lattice_;
};

inline PairedSubspace paired_subspace(const ModelParams& params) {
  params.validate();
  return PairedSubspace(params.L);
}

}  // namespace coboson
