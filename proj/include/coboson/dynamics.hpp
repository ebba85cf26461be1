#pragma once

// Wave-packet preparation and bunching measurements for the effective and
// full two-composite models.

#include <cmath>
#include <string>
#include <vector>

#include "coboson/effective.hpp"
#include "coboson/propagation.hpp"

namespace coboson {

/// Gaussian packet exp[-(l - c)^2 / 4 sigma^2 + i k l].
struct WavePacketSpec {
  int c = 26;          ///< centre site
  double k = pi / 2;   ///< quasimomentum
  double sigma = 10;   ///< width in sites

  /// Hard requirements only; see warnings() for the production envelope.
  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameter("packet width must be positive");
    if (!std::isfinite(k)) throw InvalidParameter("packet quasimomentum must be finite");
  }

  std::vector<std::string> warnings(int L) const {
    std::vector<std::string> out;
    if (sigma < 2.0 || sigma > L / 8.0) out.push_back("packet width outside [2, L/8]");
    if (std::abs(k) < pi / 6 - 1e-12 || std::abs(k) > 5 * pi / 6 + 1e-12)
      out.push_back("quasimomentum outside [pi/6, 5pi/6]");
    return out;
  }
};

/// Default packet centre |c| = (L + 1) / 4, rounded half up.
inline int auto_centre(int L) { return static_cast<int>(std::lround((L + 1) / 4.0)); }

inline Eigen::VectorXcd gaussian_amplitudes(const WavePacketSpec& packet, const std::vector<int>& sites) {
  packet.validate();
  Eigen::VectorXcd out(static_cast<Index>(sites.size()));
  const double w = 4.0 * packet.sigma * packet.sigma;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double d = sites[i] - packet.c;
    out[static_cast<Index>(i)] = std::polar(std::exp(-d * d / w), packet.k * sites[i]);
  }
  return out;
}

struct PacketPolicy {
  double max_overlap = 1e-3;  ///< sum_l p1(l) p2(l) of the two normalized envelopes
  int full_capacity = 13;     ///< largest L allowed in the four-particle space
};

/// The two packets: composite 1 at +c and composite 2 at -c, with momentum
/// signs chosen so both group velocities point at the barrier.
struct PacketPair {
  WavePacketSpec right;
  WavePacketSpec left;
  double overlap = 0.0;
  Eigen::VectorXcd right_amp;
  Eigen::VectorXcd left_amp;
};

inline PacketPair make_packet_pair(const ModelParams& params, double J_hop, const WavePacketSpec& packet,
                                   const PacketPolicy& policy) {
  params.validate();
  packet.validate();
  const Lattice lattice(params.L);
  const int c = std::abs(packet.c);
  if (c == 0 || c > lattice.max_site()) throw InvalidParameter("packet centre must be a nonzero in-lattice site");
  const double k = std::abs(packet.k);
  // v(k1) = 2 J_hop sin k1 must be negative for the packet on the right.
  const double k1 = J_hop < 0 ? k : -k;
  PacketPair pair;
  pair.right = {c, k1, packet.sigma};
  pair.left = {-c, -k1, packet.sigma};
  const auto sites = site_range(params.L);
  pair.right_amp = gaussian_amplitudes(pair.right, sites);
  pair.left_amp = gaussian_amplitudes(pair.left, sites);
  const Eigen::ArrayXd p1 = pair.right_amp.cwiseAbs2().array() / pair.right_amp.squaredNorm();
  const Eigen::ArrayXd p2 = pair.left_amp.cwiseAbs2().array() / pair.left_amp.squaredNorm();
  pair.overlap = (p1 * p2).sum();
  if (pair.overlap >= policy.max_overlap)
    throw InvalidParameter("packets overlap: coincidence weight " + std::to_string(pair.overlap));
  return pair;
}

/// Symmetrized sum_{l,m} G_right(l) G_left(m) |l,l,m,m> in CompositeBasisTwo.
inline StateVector initial_state_effective(const ModelParams& params, int eps, const WavePacketSpec& packet,
                                           const PacketPolicy& policy = {}) {
  const auto eff = effective_params(params, eps);
  const auto pair = make_packet_pair(params, eff.J_eff, packet, policy);
  const CompositeBasisTwo basis(params.L, eps);
  const Lattice& lat = basis.lattice();
  StateVector psi{basis.name(), Eigen::VectorXcd::Zero(basis.dim())};
  for (int l = lat.min_site(); l <= lat.max_site(); ++l) {
    for (int m = lat.min_site(); m <= lat.max_site(); ++m) {
      const cplx g = pair.right_amp[lat.offset(l)] * pair.left_amp[lat.offset(m)];
      if (l != m)
        psi.amp[basis.pair_index(l, m)] += 2.0 * g;
      else if (eps == 1)
        psi.amp[basis.double_index(l)] += 4.0 * g;
    }
  }
  if (!(psi.norm() > 0.0)) throw DegenerateInput("initial state vanishes after symmetrization");
  return psi.normalize();
}

/// The same construction in the distinguishable four-particle space.
inline StateVector initial_state_full(const ModelParams& params, int eps, const WavePacketSpec& packet,
                                      const PacketPolicy& policy = {}) {
  params.validate();
  if (params.L > policy.full_capacity)
    throw CapacityExceeded("four-particle space limited to L <= " + std::to_string(policy.full_capacity));
  const auto eff = effective_params(params, eps);
  const auto pair = make_packet_pair(params, eff.J_eff, packet, policy);
  const FourParticleBasis basis(params.L);
  const Lattice& lat = basis.lattice();
  StateVector psi{basis.name(), Eigen::VectorXcd::Zero(basis.dim())};
  for (int l = lat.min_site(); l <= lat.max_site(); ++l)
    for (int m = lat.min_site(); m <= lat.max_site(); ++m)
      psi.amp[basis.index({l, l, m, m})] = pair.right_amp[lat.offset(l)] * pair.left_amp[lat.offset(m)];
  return symmetrize(build_symmetry_ops(params.L), psi.normalize(), eps);
}

/// t = (3L + 1) / (4 |v_g|), v_g = 2 J_eff sin k.
inline double auto_time(const ModelParams& params, double k, const EffectiveParams& eff) {
  const double v = std::abs(group_velocity(k, eff.J_eff));
  if (!(v >= 1e-6 * params.J)) throw InvalidParameter("group velocity vanishes; cannot pick an evolution time");
  return (3.0 * params.L + 1.0) / (4.0 * v);
}

struct Bunching {
  double same = 0.0;      ///< both composites strictly on one side
  double opposite = 0.0;  ///< composites strictly on opposite sides
  double residual = 0.0;  ///< weight touching the barrier site (or unpaired, full model)

  double total() const { return same + opposite + residual; }
};

inline Bunching bunching(const CompositeBasisTwo& basis, const StateVector& v) {
  if (v.dim() != basis.dim()) throw InvalidParameter("state does not live on the composite basis");
  Bunching b;
  for (Index i = 0; i < basis.dim(); ++i) {
    const double w = std::norm(v.amp[i]);
    const auto s = basis.state(i);
    if (s.first == 0 || s.second == 0)
      b.residual += w;
    else if ((s.first > 0) == (s.second > 0))
      b.same += w;
    else
      b.opposite += w;
  }
  return b;
}

/// Side classification per configuration: all four coordinates on one side
/// is "same"; a two-two split with each side holding one A and one B is
/// "opposite"; anything else (a coordinate on the barrier, or an unpaired
/// split) is residual.
inline Bunching bunching_full(const FourParticleBasis& basis, const StateVector& v) {
  if (v.dim() != basis.dim()) throw InvalidParameter("state does not live on the four-particle basis");
  Bunching b;
  for (Index i = 0; i < basis.dim(); ++i) {
    const double w = std::norm(v.amp[i]);
    if (w == 0.0) continue;
    const auto [a1, b1, a2, b2] = basis.labels(i);
    if (a1 == 0 || b1 == 0 || a2 == 0 || b2 == 0) {
      b.residual += w;
      continue;
    }
    const int right_a = (a1 > 0) + (a2 > 0);
    const int right_b = (b1 > 0) + (b2 > 0);
    if ((right_a == 2 && right_b == 2) || (right_a == 0 && right_b == 0))
      b.same += w;
    else if (right_a == 1 && right_b == 1)
      b.opposite += w;
    else
      b.residual += w;
  }
  return b;
}

/// <P> on the composite basis.
inline double parity_expectation(const CompositeBasisTwo& basis, const StateVector& v) {
  if (v.dim() != basis.dim()) throw InvalidParameter("state does not live on the composite basis");
  cplx acc{0.0, 0.0};
  for (Index i = 0; i < basis.dim(); ++i) acc += std::conj(v.amp[basis.reflected(i)]) * v.amp[i];
  return acc.real() / v.amp.squaredNorm();
}

/// Expected number of composites per site.
inline std::vector<double> density_profile(const CompositeBasisTwo& basis, const StateVector& v) {
  if (v.dim() != basis.dim()) throw InvalidParameter("state does not live on the composite basis");
  const Lattice& lat = basis.lattice();
  std::vector<double> rho(static_cast<std::size_t>(lat.size()), 0.0);
  for (Index i = 0; i < basis.dim(); ++i) {
    const double w = std::norm(v.amp[i]);
    const auto s = basis.state(i);
    if (s.is_double()) {
      rho[static_cast<std::size_t>(lat.offset(s.first))] += 2.0 * w;
    } else {
      rho[static_cast<std::size_t>(lat.offset(s.first))] += w;
      rho[static_cast<std::size_t>(lat.offset(s.second))] += w;
    }
  }
  return rho;
}

}  // namespace coboson
