#include "croof/random.hpp"
#include "croof/references.hpp"
#include "croof/stiefel.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace croof;
using croof::testing::fd_real_gradient;
using croof::testing::relative_error;

namespace {

RealVector random_angles(const StiefelChart& chart, Rng& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  RealVector x(chart.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
  return x;
}

}  // namespace

TEST(Stiefel, Dimension) {
  EXPECT_EQ(dimSt(10, 7), 91);
  EXPECT_EQ(dimSt(12, 8), 128);
  EXPECT_EQ(dimSt(4, 4), 16);  // U(4) has real dimension 16
  EXPECT_EQ(dimSt(3, 1), 5);   // unit sphere in C^3
  EXPECT_THROW(dimSt(2, 3), std::invalid_argument);
  EXPECT_THROW(dimSt(2, 0), std::invalid_argument);
}

TEST(Stiefel, ChartLayout) {
  for (auto [k, r] : {std::pair{6, 2}, std::pair{5, 5}, std::pair{9, 4}, std::pair{1, 1}}) {
    const StiefelChart chart(k, r);
    EXPECT_EQ(2 * chart.angle_count() + r, chart.dim());
    EXPECT_EQ(static_cast<int>(chart.factors().size()), chart.angle_count());
    for (const auto& f : chart.factors()) {
      EXPECT_GE(f.row, 0);
      EXPECT_LT(f.row + 1, k);
    }
  }
}

TEST(Stiefel, ZeroAnglesGiveIdentityColumns) {
  const StiefelChart chart(5, 3);
  EXPECT_LT(max_abs(buildUnitary(RealVector::Zero(chart.dim()), chart) - ComplexMatrix::Identity(5, 3)), 1e-15);
}

TEST(Stiefel, BuildUnitaryIsOrthonormalAndRoundTrips) {
  Rng rng(40);
  for (int t = 0; t < 200; ++t) {
    const int r = std::uniform_int_distribution<int>(1, 6)(rng);
    const int k = r + std::uniform_int_distribution<int>(0, 5)(rng);
    const StiefelChart chart(k, r);
    const ComplexMatrix u = buildUnitary(random_angles(chart, rng), chart);
    ASSERT_EQ(u.rows(), k);
    ASSERT_EQ(u.cols(), r);
    EXPECT_LT(orthonormality_defect(u), 1e-12);
    EXPECT_LT(max_abs(buildUnitary(decomposeUnitary(u), chart) - u), 1e-10);
  }
}

TEST(Stiefel, DecomposeCoversHaarMatrices) {
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const ComplexMatrix u = randUnitaryMatrix(7, 3, rng);
    EXPECT_LT(max_abs(buildUnitary(decomposeUnitary(u), 7, 3) - u), 1e-10);
  }
  // sparse inputs exercise the b = 0 and a = 0 branches
  ComplexMatrix perm = ComplexMatrix::Zero(4, 4);
  perm(1, 0) = perm(3, 1) = perm(0, 2) = 1.0;
  perm(2, 3) = Complex(0.0, 1.0);
  EXPECT_LT(max_abs(buildUnitary(decomposeUnitary(perm), 4, 4) - perm), 1e-12);
  EXPECT_THROW(decomposeUnitary(ComplexMatrix::Ones(3, 2)), std::invalid_argument);
}

TEST(Stiefel, AnglesArePeriodic) {
  Rng rng(42);
  const StiefelChart chart(6, 3);
  const RealVector x = random_angles(chart, rng);
  const ComplexMatrix u = buildUnitary(x, chart);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    RealVector y = x;
    y(i) += 2.0 * std::numbers::pi * (i % 2 ? -1.0 : 1.0);
    EXPECT_LT(max_abs(buildUnitary(y, chart) - u), 1e-12) << "coordinate " << i;
  }
}

TEST(Stiefel, BuildUnitaryDerivativesMatchFiniteDifferences) {
  Rng rng(43);
  for (int t = 0; t < 50; ++t) {
    const int r = std::uniform_int_distribution<int>(1, 4)(rng);
    const int k = r + std::uniform_int_distribution<int>(0, 3)(rng);
    const StiefelChart chart(k, r);
    const RealVector x = random_angles(chart, rng);
    const auto du = grad_buildUnitary(x, chart);
    ASSERT_EQ(static_cast<int>(du.size()), chart.dim());
    for (int m = 0; m < chart.dim(); ++m) {
      RealVector p = x, q = x;
      p(m) += croof::testing::kFdStep;
      q(m) -= croof::testing::kFdStep;
      const ComplexMatrix fd = (buildUnitary(p, chart) - buildUnitary(q, chart)) / (2 * croof::testing::kFdStep);
      EXPECT_LT(relative_error(du[static_cast<std::size_t>(m)], fd), 1e-6) << "k=" << k << " r=" << r << " m=" << m;
    }
  }
}

TEST(Stiefel, ReverseSweepMatchesForwardContraction) {
  Rng rng(44);
  const StiefelChart chart(6, 3);
  for (int t = 0; t < 10; ++t) {
    const RealVector x = random_angles(chart, rng);
    const ComplexMatrix g = complex_gaussian(6, 3, rng);
    const RealVector fast = grad_eh_adapt(x, chart, [&](const ComplexMatrix&) { return g; });
    const auto du = grad_buildUnitary(x, chart);
    RealVector slow(chart.dim());
    for (int m = 0; m < chart.dim(); ++m) slow(m) = real_inner(du[static_cast<std::size_t>(m)], g);
    EXPECT_LT((fast - slow).norm(), 1e-12 * std::max(1.0, slow.norm()));
  }
}

TEST(Stiefel, AngleGradientMatchesFiniteDifferences) {
  Rng rng(45);
  struct Case {
    MeasureHandle measure;
    int dim;
  };
  const std::vector<Case> cases{{entropy_measure(SubsystemShape{2, 3}), 6}, {tangle_measure(), 8}, {meyer_wallach_measure(3), 8}};
  for (const auto& c : cases) {
    for (int t = 0; t < 50; ++t) {
      // rank 1 makes h(U(X)) constant, see PureStateHasFlatAngleObjective
      const int r = std::uniform_int_distribution<int>(2, 3)(rng);
      const int k = r + std::uniform_int_distribution<int>(0, 3)(rng);
      const auto obj = createEHFunctions(randDensityMatrix(c.dim, r, rng), k, r, c.measure);
      const RealVector x = random_angles(StiefelChart(k, r), rng);
      EXPECT_LT(relative_error(obj.gradient(x), fd_real_gradient(obj.value, x)), 1e-6) << c.measure.name << " sample " << t;
    }
  }
}

TEST(Stiefel, PureStateHasFlatAngleObjective) {
  Rng rng(47);
  const ComplexVector psi = randState(8, rng);
  const auto obj = createEHFunctions(psi * psi.adjoint(), 5, 1, tangle_measure());
  const RealVector x = random_angles(StiefelChart(5, 1), rng);
  EXPECT_NEAR(obj.value(x), tangle(psi), 1e-13);
  EXPECT_LT(obj.gradient(x).norm(), 1e-13);
}

TEST(Stiefel, ObjectiveConstructionChecksRank) {
  Rng rng(46);
  const ComplexMatrix rho = randDensityMatrix(4, 2, rng);
  EXPECT_THROW(createEHFunctions(rho, 4, 3, entropy_measure(SubsystemShape{2, 2})), std::invalid_argument);
  // truncating to fewer eigenpairs than the rank is allowed
  const auto obj = createEHFunctions(rho, 3, 1, entropy_measure(SubsystemShape{2, 2}));
  EXPECT_TRUE(std::isfinite(obj.value(RealVector::Zero(dimSt(3, 1)))));
}
