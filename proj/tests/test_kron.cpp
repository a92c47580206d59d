#include "kronfit/kron.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "kronfit/errors.hpp"
#include "kronfit/rng.hpp"
#include "oracle_helpers.hpp"

namespace kronfit {
namespace {

using testing::dense_spectral;
using testing::naive_kron;
using testing::naive_materialize;
using testing::random_point;
using testing::random_tangent;

TEST(DimVectorType, ValidationAndAccessors) {
  const DimVector d({2, 3, 4});
  EXPECT_EQ(d.k(), 3);
  EXPECT_EQ(d.total(), 24);
  EXPECT_EQ(d[1], 3);
  EXPECT_EQ(d.d_max(), 4);
  EXPECT_EQ(d.d_min(), 2);

  EXPECT_THROW(DimVector({}), InvalidInput);
  EXPECT_THROW(DimVector({2, 0}), InvalidInput);
  EXPECT_THROW(DimVector({-1}), InvalidInput);
  // 2^17 per mode over three modes overflows the 2^31 total cap.
  EXPECT_THROW(DimVector({1 << 17, 1 << 17, 1 << 17}), InvalidInput);
}

TEST(KronPointType, IdentityAndLogDet) {
  const DimVector dims({2, 3});
  const KronPoint id = KronPoint::identity(dims);
  EXPECT_TRUE(id.is_balanced());
  EXPECT_NEAR(id.log_det(), 0.0, 1e-14);

  Eigen::MatrixXd d2(2, 2);
  d2 << 2, 0, 0, 3;
  Eigen::MatrixXd d3 = Eigen::MatrixXd::Identity(3, 3);
  const KronPoint p = KronPoint::from_factors(
      {PDMat{SymMat{d2}}, PDMat{SymMat{d3}}});
  // log det (A (x) B) = (D/d1) log det A + (D/d2) log det B.
  EXPECT_NEAR(p.log_det(), 3.0 * std::log(6.0), 1e-12);
}

TEST(BalanceOp, ScalarExample) {
  const PDMat two_i{SymMat{(2.0 * Eigen::MatrixXd::Identity(2, 2)).eval()}};
  const KronPoint b = balance({two_i, PDMat::identity(2)});
  const double root2 = std::sqrt(2.0);
  EXPECT_LE((b.factor(0).mat() - root2 * Eigen::MatrixXd::Identity(2, 2))
                .norm(),
            1e-12);
  EXPECT_LE((b.factor(1).mat() - root2 * Eigen::MatrixXd::Identity(2, 2))
                .norm(),
            1e-12);
  EXPECT_TRUE(b.is_balanced());
}

TEST(BalanceOp, AlreadyBalancedIdentity) {
  const KronPoint b = balance({PDMat::identity(3), PDMat::identity(5)});
  EXPECT_LE((b.factor(0).mat() - Eigen::MatrixXd::Identity(3, 3)).norm(),
            1e-14);
  EXPECT_LE((b.factor(1).mat() - Eigen::MatrixXd::Identity(5, 5)).norm(),
            1e-14);
}

TEST(BalanceOp, PreservesProductAndEqualizesDets) {
  CounterRng rng(Seed{31, 0}, rng_domain::kTest);
  const DimVector dims({2, 4, 2});
  const KronPoint p = random_point(dims, rng);
  const KronPoint b = balance(p);

  const Eigen::MatrixXd before = naive_materialize(p);
  const Eigen::MatrixXd after = naive_materialize(b);
  EXPECT_LE((before - after).norm(), 1e-10 * before.norm());

  std::vector<double> per_factor;
  for (int a = 0; a < b.k(); ++a) {
    per_factor.push_back(std::exp(b.factor(a).log_det() / dims[a]));
  }
  for (int a = 1; a < b.k(); ++a) {
    EXPECT_NEAR(per_factor[a], per_factor[0],
                1e-10 * std::abs(per_factor[0]));
  }

  // Idempotence.
  const KronPoint bb = balance(b);
  for (int a = 0; a < b.k(); ++a) {
    EXPECT_LE((bb.factor(a).mat() - b.factor(a).mat()).norm(),
              1e-12 * b.factor(a).mat().norm());
  }
}

TEST(TangentVecType, ProjectsSymmetricTraceless) {
  const DimVector dims({3, 2});
  Eigen::MatrixXd raw(3, 3);
  raw << 1, 2, 0, 0, 5, 1, 0, 0, 3;
  const TangentVec h(dims, 0.5, {raw, Eigen::MatrixXd::Zero(2, 2)});
  const Eigen::MatrixXd& b0 = h.block(0);
  EXPECT_LE((b0 - b0.transpose()).norm(), 1e-14);
  EXPECT_LE(std::abs(b0.trace()), 1e-12 * b0.norm() + 1e-300);
  EXPECT_DOUBLE_EQ(h.h0(), 0.5);

  // norm^2 = h0^2 + sum of block squared norms.
  EXPECT_NEAR(h.norm() * h.norm(), 0.25 + b0.squaredNorm(), 1e-12);
}

TEST(TangentInnerOp, ClosedFormAndFlattenOracle) {
  const DimVector dims({2, 2});
  const TangentVec scalar_only(
      dims, 1.0, {Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)});
  EXPECT_NEAR(tangent_inner(scalar_only, scalar_only), 1.0, 1e-14);

  Eigen::MatrixXd ha(2, 2), kb(2, 2);
  ha << 1, 0, 0, -1;
  kb << 0, 1, 1, 0;
  const TangentVec h(dims, 0.0, {ha, Eigen::MatrixXd::Zero(2, 2)});
  const TangentVec k(dims, 0.0, {Eigen::MatrixXd::Zero(2, 2), kb});
  EXPECT_NEAR(tangent_inner(h, k), 0.0, 1e-14);

  CounterRng rng(Seed{32, 0}, rng_domain::kTest);
  const TangentVec u = random_tangent(dims, rng);
  const TangentVec v = random_tangent(dims, rng);
  double flat = u.h0() * v.h0();
  for (int a = 0; a < 2; ++a) {
    flat += u.block(a).cwiseProduct(v.block(a)).sum();
  }
  EXPECT_NEAR(tangent_inner(u, v), flat, 1e-12 * std::abs(flat) + 1e-12);
}

TEST(MaterializeOp, ClosedFormAndOracle) {
  const KronPoint id = KronPoint::identity(DimVector({2, 3}));
  EXPECT_LE((materialize(id).mat() - Eigen::MatrixXd::Identity(6, 6)).norm(),
            1e-14);

  Eigen::MatrixXd d1(2, 2);
  d1 << 2, 0, 0, 3;
  const KronPoint diag_point = KronPoint::from_factors(
      {PDMat{SymMat{d1}}, PDMat::identity(2)});
  Eigen::VectorXd expected(4);
  expected << 2, 2, 3, 3;
  EXPECT_LE((materialize(diag_point).mat() -
             Eigen::MatrixXd(expected.asDiagonal()))
                .norm(),
            1e-14);

  CounterRng rng(Seed{33, 0}, rng_domain::kTest);
  const KronPoint p = random_point(DimVector({2, 2}), rng);
  EXPECT_LE((materialize(p).mat() - naive_materialize(p)).norm(), 1e-12);
}

TEST(MaterializeOp, RejectsOversize) {
  // 2^13 per mode: total 2^26 exceeds the dense realization cap of 4096.
  const DimVector dims({1 << 13, 1 << 13});
  const KronPoint id = KronPoint::identity(dims);
  EXPECT_THROW(materialize(id), TooLarge);
}

TEST(ExpAtOp, ZeroTangentAndScalarDirection) {
  CounterRng rng(Seed{34, 0}, rng_domain::kTest);
  const DimVector dims({2, 3});
  const KronPoint p = balance(random_point(dims, rng));
  const KronPoint same = exp_at(p, TangentVec::zero(dims));
  for (int a = 0; a < p.k(); ++a) {
    EXPECT_LE((same.factor(a).mat() - p.factor(a).mat()).norm(),
              1e-12 * p.factor(a).mat().norm());
  }

  // Pure scalar direction from identity: exp(t e_0) = e^t I, factors
  // e^{t/k} I each.
  const double t = 0.7;
  const TangentVec h(dims, t,
                     {Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)});
  const KronPoint moved = exp_at(KronPoint::identity(dims), h);
  const double per_factor = std::exp(t / 2.0);
  EXPECT_LE((moved.factor(0).mat() -
             per_factor * Eigen::MatrixXd::Identity(2, 2))
                .norm(),
            1e-12);
  EXPECT_LE((moved.factor(1).mat() -
             per_factor * Eigen::MatrixXd::Identity(3, 3))
                .norm(),
            1e-12);
}

TEST(ExpAtOp, MatchesMaterializedExponential) {
  CounterRng rng(Seed{35, 0}, rng_domain::kTest);
  const DimVector dims({2, 2});
  const KronPoint theta = balance(random_point(dims, rng));
  const TangentVec h = random_tangent(dims, rng).scaled(0.3);

  const Eigen::MatrixXd got = naive_materialize(exp_at(theta, h));

  // Dense side: e^{h0} * (x)_a Theta_a^{1/2} e^{sqrt(d_a) H_a} Theta_a^{1/2}.
  std::vector<Eigen::MatrixXd> mats;
  for (int a = 0; a < dims.k(); ++a) {
    const Eigen::MatrixXd root = dense_spectral(
        theta.factor(a).mat(), [](double v) { return std::sqrt(v); });
    const Eigen::MatrixXd inner = dense_spectral(
        (std::sqrt(static_cast<double>(dims[a])) * h.block(a)).eval(),
        [](double v) { return std::exp(v); });
    mats.push_back(root * inner * root);
  }
  const Eigen::MatrixXd want = std::exp(h.h0()) * naive_kron(mats);
  EXPECT_LE((got - want).norm(), 1e-12 * want.norm() * 10);
}

TEST(GeodesicDistanceOp, ClosedFormCases) {
  CounterRng rng(Seed{36, 0}, rng_domain::kTest);
  const DimVector dims({2, 2});
  const KronPoint p = balance(random_point(dims, rng));
  EXPECT_NEAR(geodesic_distance(p, p), 0.0, 1e-10);

  // d(e^t I, I) = |t|.
  const double t = 1.3;
  const KronPoint scaled = KronPoint::from_factors(
      {PDMat::identity(2).scaled(std::exp(t / 2.0)),
       PDMat::identity(2).scaled(std::exp(t / 2.0))});
  EXPECT_NEAR(geodesic_distance(scaled, KronPoint::identity(dims)), t, 1e-12);
}

TEST(GeodesicDistanceOp, MatchesMaterializedOracle) {
  CounterRng rng(Seed{37, 0}, rng_domain::kTest);
  for (int rep = 0; rep < 5; ++rep) {
    const DimVector dims({4, 4});
    const KronPoint a = random_point(dims, rng);
    const KronPoint b = random_point(dims, rng);

    const Eigen::MatrixXd ma = naive_materialize(a);
    const Eigen::MatrixXd mb = naive_materialize(b);
    const Eigen::MatrixXd w =
        dense_spectral(mb, [](double v) { return 1.0 / std::sqrt(v); });
    const Eigen::MatrixXd rel_log = dense_spectral(
        (w * ma * w).eval(), [](double v) { return std::log(v); });
    const double want = rel_log.norm() / std::sqrt(16.0);

    EXPECT_NEAR(geodesic_distance(a, b), want,
                1e-10 * std::max(1.0, want));
    EXPECT_NEAR(geodesic_distance(a, b), geodesic_distance(b, a), 1e-10);

    const Eigen::VectorXd eigs =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(rel_log)
            .eigenvalues();
    const double want_op =
        std::max(std::abs(eigs(0)), std::abs(eigs(eigs.size() - 1)));
    EXPECT_NEAR(d_op_distance(a, b), want_op,
                1e-10 * std::max(1.0, want_op));
  }
}

TEST(DOpDistanceOp, ClosedFormCases) {
  const DimVector dims({2, 2});
  const KronPoint id = KronPoint::identity(dims);
  EXPECT_NEAR(d_op_distance(id, id), 0.0, 1e-12);

  const KronPoint four = KronPoint::from_factors(
      {PDMat::identity(2).scaled(2.0), PDMat::identity(2).scaled(2.0)});
  EXPECT_NEAR(d_op_distance(four, id), std::log(4.0), 1e-12);
}

TEST(GeodesicDistanceOp, UnitSpeedAndCongruenceInvariance) {
  CounterRng rng(Seed{38, 0}, rng_domain::kTest);
  const DimVector dims({2, 3});
  const KronPoint theta = balance(random_point(dims, rng));
  TangentVec h = random_tangent(dims, rng);
  h = h.scaled(1.0 / h.norm());
  const double t = 0.4;
  EXPECT_NEAR(geodesic_distance(exp_at(theta, h.scaled(t)), theta), t, 1e-8);

  // Factorwise congruence by PD matrices is an isometry.
  const KronPoint other = balance(random_point(dims, rng));
  std::vector<PDMat> ca, cb;
  for (int a = 0; a < dims.k(); ++a) {
    const Eigen::MatrixXd g = testing::random_gaussian(dims[a], dims[a], rng);
    Eigen::MatrixXd m = g * g.transpose() / dims[a];
    m.diagonal().array() += 0.5;
    ca.push_back(PDMat{SymMat{
        (m * theta.factor(a).mat() * m).eval()}});
    cb.push_back(PDMat{SymMat{(m * other.factor(a).mat() * m).eval()}});
  }
  const KronPoint theta_c = KronPoint::from_factors(ca);
  const KronPoint other_c = KronPoint::from_factors(cb);
  EXPECT_NEAR(geodesic_distance(theta_c, other_c),
              geodesic_distance(theta, other), 1e-8);
  EXPECT_NEAR(d_op_distance(theta_c, other_c), d_op_distance(theta, other),
              1e-8);
}

TEST(GeodesicDistanceOp, DimMismatchRejected) {
  const KronPoint a = KronPoint::identity(DimVector({2, 2}));
  const KronPoint b = KronPoint::identity(DimVector({2, 3}));
  EXPECT_THROW(geodesic_distance(a, b), InvalidInput);
  EXPECT_THROW(d_op_distance(a, b), InvalidInput);
  EXPECT_THROW(tangent_inner(TangentVec::zero(DimVector({2, 2})),
                             TangentVec::zero(DimVector({3, 2}))),
               InvalidInput);
}

}  // namespace
}  // namespace kronfit
