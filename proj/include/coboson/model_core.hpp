#pragma once

// Lattice geometry, sparse Hermitian operators, state vectors and the
// single-particle tight-binding Hamiltonian.
//
// Units: energies in units of the hopping J, times in hbar/J, sites are
// integer labels l in [-(L-1)/2, (L-1)/2] with the barrier at l = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "coboson/errors.hpp"

namespace coboson {

using cplx = std::complex<double>;
using Index = std::ptrdiff_t;

inline constexpr double pi = std::numbers::pi;

/// Physical configuration shared by every Hamiltonian builder.
struct ModelParams {
  int L = 101;      ///< number of sites, odd, >= 5
  double J = 1.0;   ///< hopping energy, > 0
  double mu = 0.0;  ///< barrier height on site 0
  double U = 20.0;  ///< A-B contact interaction

  void validate() const {
    if (L < 5 || L % 2 == 0)
      throw InvalidParameter("L must be odd and >= 5, got " + std::to_string(L));
    if (!(J > 0.0) || !std::isfinite(J)) throw InvalidParameter("J must be finite and > 0");
    if (!std::isfinite(mu) || !std::isfinite(U)) throw InvalidParameter("mu and U must be finite");
  }

  void require_interaction() const {
    validate();
    if (U == 0.0) throw InvalidParameter("effective Hamiltonians need U != 0");
  }
};

/// Centered site labelling of an open chain.
class Lattice {
 public:
  explicit Lattice(int L) : L_(L) {
    if (L < 5 || L % 2 == 0)
      throw InvalidParameter("L must be odd and >= 5, got " + std::to_string(L));
  }

  int size() const { return L_; }
  int half() const { return (L_ - 1) / 2; }
  int min_site() const { return -half(); }
  int max_site() const { return half(); }
  bool contains(int l) const { return l >= -half() && l <= half(); }

  Index offset(int l) const {
    if (!contains(l)) throw InvalidParameter("site " + std::to_string(l) + " outside lattice");
    return static_cast<Index>(l + half());
  }
  int label(Index offset) const {
    if (offset < 0 || offset >= L_) throw InvalidParameter("offset outside lattice");
    return static_cast<int>(offset) - half();
  }

  /// Number of in-lattice nearest neighbours (open boundaries).
  int coordination(int l) const { return (l > -half() ? 1 : 0) + (l < half() ? 1 : 0); }

 private:
  int L_;
};

inline std::vector<int> site_range(int L) {
  const Lattice lattice(L);
  std::vector<int> sites;
  sites.reserve(static_cast<std::size_t>(L));
  for (int l = lattice.min_site(); l <= lattice.max_site(); ++l) sites.push_back(l);
  return sites;
}

struct Triplet {
  Index row;
  Index col;
  cplx value;
};

/// Hermitian operator stored as its upper triangle (row <= col); the lower
/// triangle is implied by conjugation. A CSR copy of the full matrix is kept
/// for matrix-vector products.
class SparseHermitianOperator {
 public:
  SparseHermitianOperator() = default;

  Index dim() const { return dim_; }
  const std::vector<Triplet>& entries() const { return entries_; }
  std::size_t nonzeros() const { return col_.size(); }

  /// y = H x
  void multiply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    if (x.size() != dim_) throw InvalidParameter("dimension mismatch in operator product");
    y.resize(dim_);
    const cplx* xs = x.data();
    for (Index i = 0; i < dim_; ++i) {
      cplx acc{0.0, 0.0};
      for (auto j = row_ptr_[static_cast<std::size_t>(i)]; j < row_ptr_[static_cast<std::size_t>(i) + 1]; ++j)
        acc += val_[j] * xs[col_[j]];
      y[i] = acc;
    }
  }

  Eigen::VectorXcd operator*(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y;
    multiply(x, y);
    return y;
  }

  /// Element <row|H|col>, zero when not stored.
  cplx element(Index row, Index col) const {
    if (row < 0 || col < 0 || row >= dim_ || col >= dim_) throw InvalidParameter("element index out of range");
    const auto begin = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(row)]);
    const auto end = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(row) + 1]);
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return {0.0, 0.0};
    return val_[static_cast<std::size_t>(it - col_.begin())];
  }

  Eigen::MatrixXcd to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (const auto& t : entries_) {
      m(t.row, t.col) = t.value;
      m(t.col, t.row) = std::conj(t.value);
    }
    return m;
  }

  bool is_real() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Triplet& t) { return t.value.imag() == 0.0; });
  }

  /// Gershgorin bounds on the spectrum.
  std::pair<double, double> spectral_bounds() const {
    if (dim_ == 0) return {0.0, 0.0};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Index i = 0; i < dim_; ++i) {
      double centre = 0.0;
      double radius = 0.0;
      for (auto j = row_ptr_[static_cast<std::size_t>(i)]; j < row_ptr_[static_cast<std::size_t>(i) + 1]; ++j) {
        if (col_[j] == i)
          centre = val_[j].real();
        else
          radius += std::abs(val_[j]);
      }
      lo = std::min(lo, centre - radius);
      hi = std::max(hi, centre + radius);
    }
    return {lo, hi};
  }

 private:
  friend class OperatorBuilder;

  Index dim_ = 0;
  std::vector<Triplet> entries_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_;
  std::vector<cplx> val_;
};

/// Accumulates matrix elements (duplicates are summed) and produces an
/// immutable SparseHermitianOperator. Adding (r, c) with r > c stores the
/// conjugate at (c, r); never add both halves of a pair.
class OperatorBuilder {
 public:
  explicit OperatorBuilder(Index dim) : dim_(dim) {
    if (dim < 0) throw InvalidParameter("negative operator dimension");
  }

  void add(Index row, Index col, cplx value) {
    if (row < 0 || col < 0 || row >= dim_ || col >= dim_) throw InvalidParameter("operator index out of range");
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw InvalidParameter("non-finite operator element");
    if (row > col) {
      std::swap(row, col);
      value = std::conj(value);
    }
    if (row == col && value.imag() != 0.0) throw InvalidParameter("diagonal element must be real");
    acc_[{row, col}] += value;
  }

  void add_diagonal(Index i, double value) { add(i, i, cplx{value, 0.0}); }

  SparseHermitianOperator build() const {
    SparseHermitianOperator op;
    op.dim_ = dim_;
    op.entries_.reserve(acc_.size());
    std::vector<std::vector<std::pair<Index, cplx>>> rows(static_cast<std::size_t>(dim_));
    for (const auto& [key, value] : acc_) {
      if (value == cplx{0.0, 0.0}) continue;
      const auto [r, c] = key;
      op.entries_.push_back({r, c, value});
      rows[static_cast<std::size_t>(r)].emplace_back(c, value);
      if (r != c) rows[static_cast<std::size_t>(c)].emplace_back(r, std::conj(value));
    }
    op.row_ptr_.assign(static_cast<std::size_t>(dim_) + 1, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto& row = rows[i];
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      op.row_ptr_[i + 1] = op.row_ptr_[i] + row.size();
      for (const auto& [c, v] : row) {
        op.col_.push_back(c);
        op.val_.push_back(v);
      }
    }
    return op;
  }

 private:
  Index dim_;
  std::map<std::pair<Index, Index>, cplx> acc_;
};

/// Complex amplitudes over a named basis.
struct StateVector {
  std::string basis;
  Eigen::VectorXcd amp;

  Index dim() const { return amp.size(); }
  double norm() const { return amp.norm(); }

  StateVector& normalize() {
    const double n = amp.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateInput("cannot normalize a zero or non-finite state");
    amp /= n;
    return *this;
  }
};

inline StateVector apply(const SparseHermitianOperator& op, const StateVector& v) {
  if (op.dim() != v.dim()) throw InvalidParameter("dimension mismatch: operator " + std::to_string(op.dim()) +
                                                  ", state " + std::to_string(v.dim()));
  return StateVector{v.basis, op * v.amp};
}

/// <v|H|v> including its (round-off) imaginary part.
inline cplx expectation_complex(const SparseHermitianOperator& op, const StateVector& v) {
  if (op.dim() != v.dim()) throw InvalidParameter("dimension mismatch in expectation");
  return v.amp.dot(op * v.amp);
}

inline double expectation(const SparseHermitianOperator& op, const StateVector& v) {
  return expectation_complex(op, v).real();
}

/// Single particle on the open chain: hopping -J, barrier mu on site 0.
inline SparseHermitianOperator build_h1(const ModelParams& params) {
  params.validate();
  const Lattice lattice(params.L);
  OperatorBuilder b(params.L);
  for (int l = lattice.min_site(); l < lattice.max_site(); ++l)
    b.add(lattice.offset(l), lattice.offset(l + 1), -params.J);
  if (params.mu != 0.0) b.add_diagonal(lattice.offset(0), params.mu);
  return b.build();
}

/// E(k) = -2 J_hop cos k. The sign of J_hop is kept, so composites with
/// J_eff < 0 get the flipped band.
inline double dispersion(double k, double J_hop) { return -2.0 * J_hop * std::cos(k); }

/// v_g = dE/dk = 2 J_hop sin k, in sites per hbar/J.
inline double group_velocity(double k, double J_hop) { return 2.0 * J_hop * std::sin(k); }

}  // namespace coboson
