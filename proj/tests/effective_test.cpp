#include <random>

#include <gtest/gtest.h>

#include "coboson/effective.hpp"

using namespace coboson;

TEST(EffectiveParams, StrongRepulsionValues) {
  const auto fermi = effective_params({101, 1.0, 0.05, 20.0}, -1);
  EXPECT_NEAR(fermi.J_eff, -0.1, 1e-15);
  EXPECT_NEAR(fermi.barrier_eff, 0.1, 1e-15);
  EXPECT_NEAR(fermi.shift_one, 20.2, 1e-13);
  EXPECT_NEAR(fermi.v_nn, -0.2, 1e-15);
  EXPECT_EQ(fermi.t_double, 0.0);
  const auto bose = effective_params({101, 1.0, 0.05, 20.0}, 1);
  EXPECT_NEAR(bose.v_nn, 0.2, 1e-15);
  EXPECT_NEAR(bose.t_double, 0.2, 1e-15);
  EXPECT_THROW(effective_params({101, 1.0, 0.0, 20.0}, 2), InvalidParameter);
}

TEST(EffectiveParams, AttractiveInteractionFlipsHopping) {
  EXPECT_NEAR(effective_params({11, 1.0, 0.0, -10.0}, 1).J_eff, 0.2, 1e-15);
}

TEST(HeffSingle, TridiagonalWithBarrier) {
  const ModelParams params{11, 1.0, 0.3, 20.0};
  const auto h = build_heff_single(params);
  const Lattice lat(11);
  EXPECT_NEAR(h.element(lat.offset(0), lat.offset(0)).real(), 20.2 + 0.6, 1e-13);
  EXPECT_NEAR(h.element(lat.offset(2), lat.offset(2)).real(), 20.2, 1e-13);
  EXPECT_NEAR(h.element(lat.offset(2), lat.offset(3)).real(), 0.1, 1e-15);
  EXPECT_NEAR(h.element(lat.offset(5), lat.offset(5)).real(), 20.1, 1e-13);
}

TEST(CompositeBasisTwo, Dimensions) {
  EXPECT_EQ(CompositeBasisTwo(101, -1).dim(), 101 * 100 / 2);
  EXPECT_EQ(CompositeBasisTwo(101, 1).dim(), 101 * 100 / 2 + 101);
  EXPECT_THROW(CompositeBasisTwo(11, 0), InvalidParameter);
}

TEST(CompositeBasisTwo, StateIndexRoundTrip) {
  const CompositeBasisTwo basis(15, 1);
  for (Index i = 0; i < basis.dim(); ++i) {
    const auto s = basis.state(i);
    EXPECT_EQ(basis.index(s.first, s.second), i);
    EXPECT_EQ(basis.reflected(basis.reflected(i)), i);
  }
  EXPECT_EQ(basis.pair_index(2, -1), basis.pair_index(-1, 2));
}

TEST(HeffTwo, HermitianForBothStatistics) {
  for (int eps : {-1, 1}) {
    const auto h = build_heff_two({13, 1.0, 0.4, 20.0}, eps);
    const Eigen::MatrixXcd d = h.to_dense();
    EXPECT_LT((d - d.adjoint()).norm(), 1e-14);
    EXPECT_TRUE(h.is_real());
  }
}

TEST(HeffTwo, BulkDiagonalIsConstant) {
  const ModelParams params{21, 1.0, 0.5, 20.0};
  for (int eps : {-1, 1}) {
    const CompositeBasisTwo basis(21, eps);
    const auto h = build_heff_two(params, eps);
    const Lattice& lat = basis.lattice();
    for (Index i = 0; i < basis.pair_count(); ++i) {
      const auto s = basis.state(i);
      const bool edge = std::abs(s.first) == lat.half() || std::abs(s.second) == lat.half();
      if (s.first == 0 || s.second == 0 || std::abs(s.first - s.second) == 1 || edge) continue;
      EXPECT_NEAR(h.element(i, i).real(), 2.0 * (20.0 + 0.2), 1e-12);
    }
  }
}

TEST(HeffTwo, FermionicNeighbourStatesHaveTheDocumentedCouplings) {
  // U_{m+1,m} couples only to U_{m+2,m} and U_{m+1,m-1}, each with -J_eff.
  const ModelParams params{15, 1.0, 0.0, 20.0};
  const CompositeBasisTwo basis(15, -1);
  const auto h = build_heff_two(params, -1);
  const Eigen::MatrixXd d = h.to_dense().real();
  for (int m = -5; m <= 4; ++m) {
    const Index i = basis.pair_index(m + 1, m);
    int couplings = 0;
    for (Index j = 0; j < d.cols(); ++j)
      if (j != i && d(i, j) != 0.0) ++couplings;
    EXPECT_EQ(couplings, 2);
    EXPECT_NEAR(d(i, basis.pair_index(m + 2, m)), 0.1, 1e-15);
    EXPECT_NEAR(d(i, basis.pair_index(m + 1, m - 1)), 0.1, 1e-15);
    EXPECT_NEAR(d(i, i), 2.0 * 20.2 - 0.2, 1e-12);
  }
}

TEST(HeffTwo, BosonicDoubleOccupancyCoupling) {
  const ModelParams params{11, 1.0, 0.25, 20.0};
  const CompositeBasisTwo basis(11, 1);
  const auto h = build_heff_two(params, 1);
  EXPECT_NEAR(h.element(basis.double_index(2), basis.pair_index(3, 2)).real(), 0.2, 1e-15);
  EXPECT_NEAR(h.element(basis.double_index(2), basis.pair_index(2, 1)).real(), 0.2, 1e-15);
  EXPECT_EQ(h.element(basis.double_index(2), basis.pair_index(4, 2)), cplx(0.0));
  EXPECT_NEAR(h.element(basis.double_index(2), basis.double_index(2)).real(), 40.4, 1e-12);
  EXPECT_NEAR(h.element(basis.double_index(0), basis.double_index(0)).real(), 40.4 + 1.0, 1e-12);
}

TEST(Pt2, HandComputedMatrixElements) {
  // Far-apart composites: 2U + 8J^2/U on the diagonal, 2J^2/U for one composite hop.
  const ModelParams params{9, 1.0, 0.0, 20.0};
  const auto pt2 = pt2_effective(params);
  const auto& p = pt2.basis;
  const Index far = p.same_index(-3, 2);
  EXPECT_NEAR(pt2.op.element(far, far).real(), 40.4, 1e-13);
  EXPECT_NEAR(pt2.op.element(far, p.same_index(-2, 2)).real(), 0.1, 1e-14);
  // Neighbours exchange B partners through two virtual orderings.
  EXPECT_NEAR(pt2.op.element(p.same_index(0, 1), p.swapped_index(0, 1)).real(), 0.1, 1e-14);
}

TEST(Pt2, AgreesWithClosedFormEffectiveModel) {
  for (int eps : {-1, 1})
    for (double U : {-20.0, 10.0})
      for (double mu : {0.0, 0.5}) EXPECT_LE(compare_heff({7, 1.0, mu, U}, eps), 1e-12);
}

TEST(ParityBlock, DimensionsAtProductionSize) {
  const CompositeBasisTwo basis(101, 1);
  // Fixed points of the reflection: U_{l,-l} (50 of them) and D_0.
  Index fixed = 0;
  for (Index i = 0; i < basis.dim(); ++i)
    if (basis.reflected(i) == i) ++fixed;
  EXPECT_EQ(fixed, 51);
  const Index even = (basis.dim() + fixed) / 2;
  EXPECT_EQ(even, 2601);
  EXPECT_EQ(basis.dim() - even, 2550);

  const auto h = build_heff_two({101, 1.0, 0.05, 20.0}, 1);
  EXPECT_EQ(ParityBlock(h, basis, 1).dim(), 2601);
  EXPECT_EQ(ParityBlock(h, basis, -1).dim(), 2550);
}

TEST(ParityBlock, BlocksReproduceFullSpectrum) {
  const ModelParams params{11, 1.0, 0.3, 20.0};
  for (int eps : {-1, 1}) {
    const CompositeBasisTwo basis(11, eps);
    const auto h = build_heff_two(params, eps);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(h.to_dense().real());
    std::vector<double> merged;
    for (int parity : {1, -1}) {
      const ParityBlock block(h, basis, parity);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> part(block.op().to_dense());
      for (Index i = 0; i < part.eigenvalues().size(); ++i) merged.push_back(part.eigenvalues()[i]);
    }
    std::sort(merged.begin(), merged.end());
    ASSERT_EQ(static_cast<Index>(merged.size()), full.eigenvalues().size());
    for (std::size_t i = 0; i < merged.size(); ++i)
      EXPECT_NEAR(merged[i], full.eigenvalues()[static_cast<Index>(i)], 1e-10);
  }
}

TEST(ParityBlock, RestrictExpandRoundTrip) {
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  const CompositeBasisTwo basis(9, 1);
  const auto h = build_heff_two({9, 1.0, 0.0, 20.0}, 1);
  const ParityBlock block(h, basis, 1);
  StateVector v{basis.name(), Eigen::VectorXcd(basis.dim())};
  for (Index i = 0; i < basis.dim(); ++i) v.amp[i] = {g(rng), g(rng)};
  for (Index i = 0; i < basis.dim(); ++i) {
    const Index r = basis.reflected(i);
    if (r > i) v.amp[r] = v.amp[i];
  }
  v.normalize();
  const auto back = block.expand(block.restrict(v), basis.name());
  EXPECT_LT((back.amp - v.amp).norm(), 1e-12);
}

TEST(Bands, SingleCompositeSpectrumTracksBoundBand) {
  const ModelParams params{15, 1.0, 0.0, 20.0};
  const auto band = bound_band(params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eff(build_heff_single(params).to_dense().real());
  ASSERT_EQ(static_cast<Index>(band.energies.size()), eff.eigenvalues().size());
  for (std::size_t i = 0; i < band.energies.size(); ++i)
    EXPECT_NEAR(band.energies[i], eff.eigenvalues()[static_cast<Index>(i)], 5e-3);
}
