#include <random>

#include <gtest/gtest.h>

#include "coboson/model_core.hpp"

using namespace coboson;

namespace {

Eigen::VectorXcd random_vector(Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v[i] = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST(ModelParams, RejectsEvenOrTinyLattices) {
  EXPECT_THROW((ModelParams{100, 1.0, 0.0, 20.0}.validate()), InvalidParameter);
  EXPECT_THROW((ModelParams{3, 1.0, 0.0, 20.0}.validate()), InvalidParameter);
  EXPECT_NO_THROW((ModelParams{5, 1.0, 0.0, 20.0}.validate()));
}

TEST(ModelParams, RejectsNonPositiveHopping) {
  EXPECT_THROW((ModelParams{11, 0.0, 0.0, 20.0}.validate()), InvalidParameter);
  EXPECT_THROW((ModelParams{11, -1.0, 0.0, 20.0}.validate()), InvalidParameter);
}

TEST(ModelParams, InteractionRequiredForEffectiveTheory) {
  EXPECT_THROW((ModelParams{11, 1.0, 0.0, 0.0}.require_interaction()), InvalidParameter);
}

TEST(Lattice, LabelsAreCentredOnTheBarrier) {
  const Lattice lat(101);
  EXPECT_EQ(lat.min_site(), -50);
  EXPECT_EQ(lat.max_site(), 50);
  EXPECT_EQ(lat.offset(0), 50);
  EXPECT_EQ(lat.label(0), -50);
  for (int l = -50; l <= 50; ++l) EXPECT_EQ(lat.label(lat.offset(l)), l);
  EXPECT_THROW(lat.offset(51), InvalidParameter);
  EXPECT_EQ(lat.coordination(-50), 1);
  EXPECT_EQ(lat.coordination(0), 2);
  EXPECT_EQ(lat.coordination(50), 1);
}

TEST(BuildH1, SmallestChainIsTheExpectedMatrix) {
  const auto h = build_h1({5, 1.0, 0.5, 20.0});
  Eigen::MatrixXcd expected(5, 5);
  expected << 0, -1, 0, 0, 0,
              -1, 0, -1, 0, 0,
              0, -1, 0.5, -1, 0,
              0, 0, -1, 0, -1,
              0, 0, 0, -1, 0;
  EXPECT_LT((h.to_dense() - expected).norm(), 1e-15);
}

TEST(BuildH1, HermitianAndTridiagonal) {
  const auto h = build_h1({21, 1.3, 0.7, 20.0});
  const Eigen::MatrixXcd d = h.to_dense();
  EXPECT_LT((d - d.adjoint()).norm(), 1e-15);
  for (Index r = 0; r < d.rows(); ++r)
    for (Index c = 0; c < d.cols(); ++c)
      if (std::abs(r - c) > 1) {
        EXPECT_EQ(d(r, c), cplx(0.0));
      }
}

TEST(BuildH1, OpenChainSpectrumMatchesSineModes) {
  // mu = 0: E_n = -2J cos(n pi / (L + 1)).
  const int L = 15;
  const auto h = build_h1({L, 1.0, 0.0, 20.0});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.to_dense().real());
  for (int n = 1; n <= L; ++n)
    EXPECT_NEAR(solver.eigenvalues()[n - 1], -2.0 * std::cos(n * pi / (L + 1)), 1e-12);
}

TEST(SparseOperator, MultiplyMatchesDenseProduct) {
  std::mt19937 rng(7);
  OperatorBuilder b(6);
  b.add_diagonal(0, 1.5);
  b.add(0, 3, cplx{0.2, -0.7});
  b.add(4, 1, cplx{-1.0, 0.3});
  b.add(5, 5, 2.0);
  b.add(2, 5, 0.4);
  const auto h = b.build();
  const Eigen::MatrixXcd d = h.to_dense();
  EXPECT_LT((d - d.adjoint()).norm(), 1e-15);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXcd x = random_vector(6, rng);
    EXPECT_LT((h * x - d * x).norm(), 1e-13);
  }
  EXPECT_EQ(h.element(1, 4), cplx(-1.0, -0.3));
  EXPECT_EQ(h.element(4, 1), cplx(-1.0, 0.3));
}

TEST(SparseOperator, RejectsComplexDiagonal) {
  OperatorBuilder b(2);
  EXPECT_THROW(b.add(1, 1, cplx{0.0, 1.0}), InvalidParameter);
}

TEST(SparseOperator, ExpectationOfHermitianOperatorIsReal) {
  std::mt19937 rng(11);
  const auto h = build_h1({31, 1.0, 0.8, 20.0});
  for (int trial = 0; trial < 20; ++trial) {
    StateVector v{"chain", random_vector(31, rng)};
    v.normalize();
    EXPECT_LT(std::abs(expectation_complex(h, v).imag()), 1e-13);
  }
}

TEST(SparseOperator, GershgorinBoundsContainSpectrum) {
  const auto h = build_h1({41, 1.0, -0.6, 20.0});
  const auto [lo, hi] = h.spectral_bounds();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.to_dense().real());
  EXPECT_LE(lo, solver.eigenvalues().minCoeff());
  EXPECT_GE(hi, solver.eigenvalues().maxCoeff());
}

TEST(StateVector, NormalizeGivesUnitNorm) {
  std::mt19937 rng(3);
  StateVector v{"x", random_vector(50, rng) * 37.0};
  v.normalize();
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  StateVector zero{"x", Eigen::VectorXcd::Zero(4)};
  EXPECT_THROW(zero.normalize(), DegenerateInput);
}

TEST(Dispersion, GroupVelocityOfComposite) {
  EXPECT_NEAR(group_velocity(pi / 2, -0.1), -0.2, 1e-15);
  EXPECT_NEAR(dispersion(0.0, 1.0), -2.0, 1e-15);
}
