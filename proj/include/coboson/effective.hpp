#pragma once

// Second-order effective Hamiltonians for one and two tightly bound
// composites, and a numerical perturbation-theory oracle that derives the
// two-composite one directly from H_4.

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "coboson/many_body.hpp"

namespace coboson {

/// Constants of the effective composite model for constituent statistics eps.
struct EffectiveParams {
  int eps = 1;
  double J_eff = 0.0;        ///< -2 J^2 / U
  double barrier_eff = 0.0;  ///< 2 mu
  double shift_one = 0.0;    ///< U - 2 J_eff (bulk)
  double shift_two = 0.0;    ///< 2 (U - 2 J_eff) (bulk)
  double v_nn = 0.0;         ///< -2 eps J_eff, neighbouring composites
  double t_double = 0.0;     ///< -(1 + eps) J_eff, neighbour <-> double occupancy
};

inline EffectiveParams effective_params(const ModelParams& params, int eps) {
  params.require_interaction();
  require_sign(eps);
  EffectiveParams e;
  e.eps = eps;
  e.J_eff = -2.0 * params.J * params.J / params.U;
  e.barrier_eff = 2.0 * params.mu;
  e.shift_one = params.U - 2.0 * e.J_eff;
  e.shift_two = 2.0 * e.shift_one;
  e.v_nn = -2.0 * eps * e.J_eff;
  e.t_double = -(1.0 + eps) * e.J_eff;
  return e;
}

/// Second-order self-energy of one composite on site l: U - n(l) J_eff with
/// n(l) the number of in-lattice neighbours (2 in the bulk, 1 at an edge).
inline double composite_level(const Lattice& lattice, const ModelParams& params, double J_eff, int l) {
  return params.U - lattice.coordination(l) * J_eff;
}

/// Single composite |l,l> -> |l>: hopping -J_eff, barrier 2 mu.
inline SparseHermitianOperator build_heff_single(const ModelParams& params) {
  const auto eff = effective_params(params, 1);
  const Lattice lattice(params.L);
  OperatorBuilder b(params.L);
  for (int l = lattice.min_site(); l <= lattice.max_site(); ++l) {
    double diag = composite_level(lattice, params, eff.J_eff, l);
    if (l == 0) diag += eff.barrier_eff;
    b.add_diagonal(lattice.offset(l), diag);
    if (l < lattice.max_site()) b.add(lattice.offset(l), lattice.offset(l + 1), -eff.J_eff);
  }
  return b.build();
}

/// Symmetry-adapted two-composite basis for eps_A = eps_B = eps.
///   U_{lm}, l > m : (1 + eps E_A)(1 + eps E_B)|l,l,m,m> / 2
///   D_l (eps = +1): |l,l,l,l>
/// Pair states come first in triangular order of the site offsets, then D.
class CompositeBasisTwo {
 public:
  struct State {
    int first;   ///< larger site (l)
    int second;  ///< smaller site (m); equals first for D states
    bool is_double() const { return first == second; }
  };

  CompositeBasisTwo(int L, int eps) : lattice_(L), eps_(eps) { require_sign(eps); }

  const Lattice& lattice() const { return lattice_; }
  int eps() const { return eps_; }
  Index pair_count() const {
    const Index n = lattice_.size();
    return n * (n - 1) / 2;
  }
  Index dim() const { return pair_count() + (eps_ == 1 ? lattice_.size() : 0); }
  std::string name() const {
    return "composite-two:" + std::to_string(lattice_.size()) + ":" + (eps_ == 1 ? "+" : "-");
  }

  /// U_{lm} for l != m, order-independent.
  Index pair_index(int l, int m) const {
    if (l == m) throw InvalidParameter("pair state needs distinct sites");
    Index a = lattice_.offset(l);
    Index b = lattice_.offset(m);
    if (a < b) std::swap(a, b);
    return a * (a - 1) / 2 + b;
  }

  Index double_index(int l) const {
    if (eps_ != 1) throw InvalidParameter("double occupancy is Pauli-excluded for eps = -1");
    return pair_count() + lattice_.offset(l);
  }

  /// Index of the state with composites on sites l and m (D_l if equal).
  Index index(int l, int m) const { return l == m ? double_index(l) : pair_index(l, m); }

  State state(Index i) const {
    if (i < 0 || i >= dim()) throw InvalidParameter("composite index out of range");
    if (i >= pair_count()) {
      const int l = lattice_.label(i - pair_count());
      return {l, l};
    }
    auto a = static_cast<Index>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(i))) / 2.0);
    while (a * (a - 1) / 2 > i) --a;
    while ((a + 1) * a / 2 <= i) ++a;
    const Index b = i - a * (a - 1) / 2;
    return {lattice_.label(a), lattice_.label(b)};
  }

  /// Index of P applied to state i (P maps U_{lm} -> U_{-m,-l}, D_l -> D_{-l}).
  Index reflected(Index i) const {
    const auto s = state(i);
    return index(-s.second, -s.first);
  }

 private:
  Lattice lattice_;
  int eps_;
};

inline SparseHermitianOperator build_heff_two(const ModelParams& params, int eps) {
  const auto eff = effective_params(params, eps);
  const CompositeBasisTwo basis(params.L, eps);
  const Lattice& lat = basis.lattice();
  OperatorBuilder b(basis.dim());
  for (Index i = 0; i < basis.dim(); ++i) {
    const auto s = basis.state(i);
    const int l = s.first;
    const int m = s.second;
    if (s.is_double()) {
      double diag = 2.0 * composite_level(lat, params, eff.J_eff, l);
      if (l == 0) diag += 2.0 * eff.barrier_eff;
      b.add_diagonal(i, diag);
      continue;
    }
    double diag = composite_level(lat, params, eff.J_eff, l) + composite_level(lat, params, eff.J_eff, m);
    if (l == 0 || m == 0) diag += eff.barrier_eff;
    const bool neighbours = l - m == 1;
    if (neighbours) diag += eff.v_nn;
    b.add_diagonal(i, diag);

    // Each composite hops to a free neighbouring site; add each bond once
    // by only moving towards larger sites.
    if (l + 1 <= lat.max_site()) b.add(i, basis.pair_index(l + 1, m), -eff.J_eff);
    if (m + 1 <= lat.max_site() && m + 1 != l) b.add(i, basis.pair_index(l, m + 1), -eff.J_eff);

    if (neighbours && eps == 1) {
      b.add(i, basis.double_index(l), eff.t_double);
      b.add(i, basis.double_index(m), eff.t_double);
    }
  }
  return b.build();
}

/// Output of the perturbative oracle: an operator on the paired subspace.
struct PairedOperator {
  PairedSubspace basis;
  SparseHermitianOperator op;
};

/// Second-order degenerate perturbation theory on the paired subspace of H_4:
///   P (H0 + V) P + sum_{n outside P} P V |n><n| V P / (2U - E0(n))
/// with H0 the contact interactions and V the hopping plus barrier terms.
inline PairedOperator pt2_effective(const ModelParams& params) {
  params.require_interaction();
  const PairedSubspace paired(params.L);
  const Lattice& lat = paired.lattice();
  const double target = 2.0 * params.U;

  // Neighbouring configurations reached by one hop of one particle.
  auto for_each_hop = [&lat](const Config4& c, auto&& fn) {
    for (std::size_t p = 0; p < 4; ++p) {
      for (int step : {-1, 1}) {
        Config4 n = c;
        n[p] += step;
        if (lat.contains(n[p])) fn(n);
      }
    }
  };

  std::unordered_map<Index, cplx> row;
  OperatorBuilder b(paired.dim());
  for (Index p = 0; p < paired.dim(); ++p) {
    const Config4 c = paired.config(p);
    row.clear();
    double diag = interaction_energy(c, params.U);
    for (int x : c)
      if (x == 0) diag += params.mu;
    row[p] += diag;
    for_each_hop(c, [&](const Config4& n) {
      if (auto q = paired.find(n)) {
        row[*q] += -params.J;
        return;
      }
      const double gap = target - interaction_energy(n, params.U);
      if (gap == 0.0) throw NumericalFailure("degenerate intermediate state in perturbation sum");
      for_each_hop(n, [&](const Config4& back) {
        if (auto q = paired.find(back)) row[*q] += params.J * params.J / gap;
      });
    });
    for (const auto& [q, v] : row)
      if (q >= p) b.add(p, q, v);
  }
  return {paired, b.build()};
}

/// Expresses each CompositeBasisTwo vector in paired-subspace coordinates.
inline std::vector<std::vector<std::pair<Index, double>>> composite_embedding(const PairedSubspace& paired,
                                                                              const CompositeBasisTwo& basis) {
  std::vector<std::vector<std::pair<Index, double>>> columns(static_cast<std::size_t>(basis.dim()));
  const double e = basis.eps();
  for (Index i = 0; i < basis.dim(); ++i) {
    const auto s = basis.state(i);
    auto& col = columns[static_cast<std::size_t>(i)];
    if (s.is_double()) {
      col.emplace_back(paired.same_index(s.first, s.first), 1.0);
      continue;
    }
    const int l = s.first;
    const int m = s.second;
    col.emplace_back(paired.same_index(l, m), 0.5);
    col.emplace_back(paired.swapped_index(m, l), 0.5 * e);  // E_A |l,l,m,m> = |m,l,l,m>
    col.emplace_back(paired.swapped_index(l, m), 0.5 * e);  // E_B |l,l,m,m> = |l,m,m,l>
    col.emplace_back(paired.same_index(m, l), 0.5);
  }
  return columns;
}

/// Projects the oracle output onto the eps sector: S^T H_pt2 S.
inline Eigen::MatrixXcd symmetrized_pt2(const PairedOperator& pt2, const CompositeBasisTwo& basis) {
  const auto columns = composite_embedding(pt2.basis, basis);
  const Index n = basis.dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(pt2.basis.dim());
  Eigen::VectorXcd hs;
  for (Index j = 0; j < n; ++j) {
    s.setZero();
    for (const auto& [k, c] : columns[static_cast<std::size_t>(j)]) s[k] += c;
    pt2.op.multiply(s, hs);
    for (Index i = 0; i < n; ++i) {
      cplx acc{0.0, 0.0};
      for (const auto& [k, c] : columns[static_cast<std::size_t>(i)]) acc += c * hs[k];
      out(i, j) = acc;
    }
  }
  return out;
}

/// Largest elementwise deviation between build_heff_two and the projected
/// perturbative oracle.
inline double compare_heff(const ModelParams& params, int eps) {
  params.require_interaction();
  const CompositeBasisTwo basis(params.L, eps);
  const auto oracle = symmetrized_pt2(pt2_effective(params), basis);
  const auto closed_form = build_heff_two(params, eps).to_dense();
  return (oracle - closed_form).cwiseAbs().maxCoeff();
}

/// Restriction of a CompositeBasisTwo operator to one parity sector.
/// Column j of the isometry is (|i> + parity |P i>) / sqrt(2), or |i> for a
/// reflection-invariant state (even sector only).
class ParityBlock {
 public:
  ParityBlock(const SparseHermitianOperator& h, const CompositeBasisTwo& basis, int parity)
      : parity_(parity), full_dim_(basis.dim()), name_(basis.name() + (parity == 1 ? ":P+" : ":P-")) {
    require_sign(parity);
    if (h.dim() != basis.dim()) throw InvalidParameter("operator does not live on the composite basis");
    column_of_.assign(static_cast<std::size_t>(full_dim_), -1);
    for (Index i = 0; i < full_dim_; ++i) {
      const Index r = basis.reflected(i);
      if (r < i) continue;
      if (r == i) {
        if (parity != 1) continue;
        column_of_[static_cast<std::size_t>(i)] = static_cast<Index>(columns_.size());
        columns_.push_back({{i, 1.0}});
      } else {
        const double c = 1.0 / std::sqrt(2.0);
        column_of_[static_cast<std::size_t>(i)] = column_of_[static_cast<std::size_t>(r)] =
            static_cast<Index>(columns_.size());
        columns_.push_back({{i, c}, {r, parity * c}});
      }
    }

    // <a|H|b> over full-matrix entries of h, both triangles.
    std::map<std::pair<Index, Index>, cplx> acc;
    auto coeff = [this](Index full, Index col) {
      for (const auto& [k, c] : columns_[static_cast<std::size_t>(col)])
        if (k == full) return c;
      return 0.0;
    };
    auto visit = [&](Index r, Index c, cplx v) {
      const Index a = column_of_[static_cast<std::size_t>(r)];
      const Index b = column_of_[static_cast<std::size_t>(c)];
      if (a < 0 || b < 0 || a > b) return;
      acc[{a, b}] += coeff(r, a) * v * coeff(c, b);
    };
    for (const auto& t : h.entries()) {
      visit(t.row, t.col, t.value);
      if (t.row != t.col) visit(t.col, t.row, std::conj(t.value));
    }
    OperatorBuilder b(dim());
    for (const auto& [key, v] : acc) b.add(key.first, key.second, v);
    op_ = b.build();
  }

  Index dim() const { return static_cast<Index>(columns_.size()); }
  int parity() const { return parity_; }
  const SparseHermitianOperator& op() const { return op_; }
  std::string name() const { return name_; }

  StateVector restrict(const StateVector& full) const {
    if (full.dim() != full_dim_) throw InvalidParameter("state does not live on the composite basis");
    StateVector out{name_, Eigen::VectorXcd::Zero(dim())};
    for (Index j = 0; j < dim(); ++j)
      for (const auto& [k, c] : columns_[static_cast<std::size_t>(j)]) out.amp[j] += c * full.amp[k];
    return out;
  }

  StateVector expand(const StateVector& block, const std::string& full_name) const {
    if (block.dim() != dim()) throw InvalidParameter("state does not live on this parity block");
    StateVector out{full_name, Eigen::VectorXcd::Zero(full_dim_)};
    for (Index j = 0; j < dim(); ++j)
      for (const auto& [k, c] : columns_[static_cast<std::size_t>(j)]) out.amp[k] += c * block.amp[j];
    return out;
  }

 private:
  int parity_;
  Index full_dim_;
  std::string name_;
  std::vector<std::vector<std::pair<Index, double>>> columns_;
  std::vector<Index> column_of_;
  SparseHermitianOperator op_;
};

inline ParityBlock parity_block(const SparseHermitianOperator& h, const CompositeBasisTwo& basis, int parity) {
  return ParityBlock(h, basis, parity);
}

}  // namespace coboson
