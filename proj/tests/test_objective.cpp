#include "kronfit/objective.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "kronfit/errors.hpp"
#include "kronfit/rng.hpp"
#include "oracle_helpers.hpp"

namespace kronfit {
namespace {

using testing::fd_directional;
using testing::fd_second_directional;
using testing::naive_materialize;
using testing::naive_partial_trace_one;
using testing::naive_partial_trace_two;
using testing::naive_second_moment;
using testing::random_dataset;
using testing::random_point;
using testing::random_tangent;
using testing::rel_err;

// Synthetic dataset with exactly uniform second moment rho = I/D: the D
// scaled basis vectors sqrt(D) e_u as samples.
Dataset exact_identity_marginals(const DimVector& dims) {
  const std::int64_t total = dims.total();
  std::vector<double> data(static_cast<std::size_t>(total) * total, 0.0);
  const double scale = std::sqrt(static_cast<double>(total));
  for (std::int64_t u = 0; u < total; ++u) {
    data[static_cast<std::size_t>(u) * total + u] = scale;
  }
  return Dataset(dims, std::move(data));
}

// Direct implementation of the Hessian block formula from the whitened
// marginals, independent of the library's operator plumbing.
TangentVec naive_hessian_apply(const Dataset& x, const KronPoint& theta,
                               const TangentVec& h) {
  const Dataset w = whiten(x, theta);
  const DimVector& dims = w.dims();
  const int k = dims.k();
  const double tr_w = trace_rho(w);

  std::vector<Eigen::MatrixXd> marginals, centered;
  for (int a = 0; a < k; ++a) {
    Eigen::MatrixXd m = naive_partial_trace_one(w, a);
    marginals.push_back(m);
    m.diagonal().array() -= tr_w / dims[a];
    centered.push_back(std::sqrt(static_cast<double>(dims[a])) * m);
  }

  double out0 = tr_w * h.h0();
  std::vector<Eigen::MatrixXd> out;
  for (int a = 0; a < k; ++a) {
    out.push_back(0.5 * dims[a] *
                      (marginals[a] * h.block(a) + h.block(a) * marginals[a]) +
                  h.h0() * centered[a]);
    out0 += centered[a].cwiseProduct(h.block(a)).sum();
  }
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const Eigen::MatrixXd rho_ab = naive_partial_trace_two(w, a, b);
      const int da = dims[a], db = dims[b];
      const double weight = std::sqrt(static_cast<double>(da) * db);
      for (int i = 0; i < da; ++i) {
        for (int j = 0; j < da; ++j) {
          out[a](i, j) += weight * rho_ab.block(i * db, j * db, db, db)
                                       .cwiseProduct(h.block(b))
                                       .sum();
          out[b] += weight * h.block(a)(i, j) *
                    rho_ab.block(i * db, j * db, db, db);
        }
      }
    }
  }
  return TangentVec(dims, out0, out);
}

TEST(FValueOp, ClosedFormCases) {
  CounterRng rng(Seed{71, 0}, rng_domain::kTest);
  const DimVector dims({2, 3});
  const Dataset x = random_dataset(dims, 4, rng);
  EXPECT_NEAR(f_value(x, KronPoint::identity(dims)), trace_rho(x), 1e-13);

  const double c = 2.5;
  const KronPoint scaled = KronPoint::from_factors(
      {PDMat::identity(2).scaled(std::pow(c, 0.5)),
       PDMat::identity(3).scaled(std::pow(c, 0.5))});
  EXPECT_NEAR(f_value(x, scaled), c * trace_rho(x) - std::log(c),
              1e-12 * std::max(1.0, c * trace_rho(x)));
}

TEST(FValueOp, MatchesMaterializedOracle) {
  CounterRng rng(Seed{72, 0}, rng_domain::kTest);
  const DimVector dims({4, 4});
  const Dataset x = random_dataset(dims, 3, rng);
  const KronPoint theta = random_point(dims, rng);

  const Eigen::MatrixXd dense = naive_materialize(theta);
  const Eigen::MatrixXd rho = naive_second_moment(x);
  const Eigen::MatrixXd log_dense =
      testing::dense_spectral(dense, [](double v) { return std::log(v); });
  const double want =
      rho.cwiseProduct(dense).sum() - log_dense.trace() / 16.0;
  EXPECT_LE(rel_err(f_value(x, theta), want), 1e-10);
}

TEST(FAlphaValueOp, ReducesAndMatchesOracle) {
  CounterRng rng(Seed{73, 0}, rng_domain::kTest);
  const DimVector dims({4, 4});
  const Dataset x = random_dataset(dims, 3, rng);
  const KronPoint theta = random_point(dims, rng);

  EXPECT_EQ(f_alpha_value(x, theta, ObjectiveConfig{0.0}), f_value(x, theta));
  EXPECT_NEAR(
      f_alpha_value(x, KronPoint::identity(dims), ObjectiveConfig{1.0}),
      trace_rho(x), 1e-13);

  const double alpha = 0.3;
  const Eigen::MatrixXd dense = naive_materialize(theta);
  Eigen::MatrixXd rho_alpha = (1.0 - alpha) * naive_second_moment(x);
  rho_alpha.diagonal().array() += alpha * trace_rho(x) / 16.0;
  const Eigen::MatrixXd log_dense =
      testing::dense_spectral(dense, [](double v) { return std::log(v); });
  const double want =
      rho_alpha.cwiseProduct(dense).sum() - log_dense.trace() / 16.0;
  EXPECT_LE(rel_err(f_alpha_value(x, theta, ObjectiveConfig{alpha}), want),
            1e-10);

  EXPECT_THROW(f_alpha_value(x, theta, ObjectiveConfig{-0.1}), InvalidInput);
  EXPECT_THROW(f_alpha_value(x, theta, ObjectiveConfig{1.1}), InvalidInput);
}

TEST(GradientOp, VanishesAtExactStationaryPoint) {
  const DimVector dims({2, 3});
  const Dataset x = exact_identity_marginals(dims);
  const TangentVec g =
      gradient(x, KronPoint::identity(dims), ObjectiveConfig{});
  EXPECT_LE(std::abs(g.h0()), 1e-12);
  for (int a = 0; a < dims.k(); ++a) {
    EXPECT_LE(g.block(a).norm(), 1e-12);
  }
}

TEST(GradientOp, RankOneSpikeClosedForm) {
  // x = 2 (e1 (x) e1), theta = I: both marginals e1 e1^T, tr rho = 1.
  std::vector<double> data(4, 0.0);
  data[0] = 2.0;
  const Dataset x(DimVector({2, 2}), data);
  const TangentVec g =
      gradient(x, KronPoint::identity(x.dims()), ObjectiveConfig{});
  const double half_root2 = std::sqrt(2.0) / 2.0;
  Eigen::MatrixXd want(2, 2);
  want << half_root2, 0, 0, -half_root2;
  EXPECT_LE((g.block(0) - want).norm(), 1e-12);
  EXPECT_LE((g.block(1) - want).norm(), 1e-12);
  EXPECT_NEAR(g.h0(), 0.0, 1e-14);
}

TEST(GradientOp, MatchesFiniteDifferences) {
  CounterRng rng(Seed{74, 0}, rng_domain::kTest);
  const double alphas[] = {0.0, 0.3, 1.0};
  const std::vector<std::vector<int>> shapes = {{2, 3}, {3, 2, 2}};
  for (const auto& shape : shapes) {
    const DimVector dims(shape);
    const Dataset x = random_dataset(dims, 5, rng);
    const KronPoint theta = balance(random_point(dims, rng));
    for (double alpha : alphas) {
      const TangentVec g = gradient(x, theta, ObjectiveConfig{alpha});
      for (int rep = 0; rep < 3; ++rep) {
        TangentVec h = random_tangent(dims, rng);
        h = h.scaled(1.0 / h.norm());
        const double analytic = tangent_inner(g, h);
        const double numeric = fd_directional(x, theta, h, alpha, 1e-5);
        ASSERT_LE(rel_err(analytic, numeric), 1e-6)
            << "alpha=" << alpha << " analytic=" << analytic
            << " numeric=" << numeric;
      }
    }
  }
}

TEST(GradientOp, ScalarComponentIsTraceResidual) {
  CounterRng rng(Seed{75, 0}, rng_domain::kTest);
  const DimVector dims({3, 2});
  const Dataset x = random_dataset(dims, 4, rng);
  const KronPoint theta = random_point(dims, rng);
  const TangentVec g = gradient(x, theta, ObjectiveConfig{});
  EXPECT_NEAR(g.h0(), trace_rho(whiten(x, theta)) - 1.0, 1e-12);
}

TEST(GradientOp, WhitenedEquivalence) {
  CounterRng rng(Seed{76, 0}, rng_domain::kTest);
  const DimVector dims({2, 2, 2});
  const Dataset x = random_dataset(dims, 5, rng);
  const KronPoint theta = balance(random_point(dims, rng));
  const TangentVec at_theta = gradient(x, theta, ObjectiveConfig{});
  const TangentVec at_identity = gradient(
      whiten(x, theta), KronPoint::identity(dims), ObjectiveConfig{});
  EXPECT_NEAR(at_theta.h0(), at_identity.h0(), 1e-10);
  for (int a = 0; a < dims.k(); ++a) {
    EXPECT_LE((at_theta.block(a) - at_identity.block(a)).norm(), 1e-10);
  }
}

TEST(FValueOp, GeodesicallyConvex) {
  CounterRng rng(Seed{77, 0}, rng_domain::kTest);
  const DimVector dims({2, 3});
  const Dataset x = random_dataset(dims, 6, rng);
  const KronPoint theta = balance(random_point(dims, rng));
  for (int rep = 0; rep < 5; ++rep) {
    TangentVec h = random_tangent(dims, rng);
    h = h.scaled(1.0 / h.norm());
    EXPECT_GE(fd_second_directional(x, theta, h, 1e-3), -1e-10);
  }
}

TEST(HessianApplyOp, IdentityOnExactUniformData) {
  const DimVector dims({2, 3});
  const Dataset x = exact_identity_marginals(dims);
  CounterRng rng(Seed{78, 0}, rng_domain::kTest);
  for (int rep = 0; rep < 5; ++rep) {
    const TangentVec h = random_tangent(dims, rng);
    const TangentVec out =
        hessian_apply(x, KronPoint::identity(dims), h);
    EXPECT_NEAR(out.h0(), h.h0(), 1e-12);
    for (int a = 0; a < dims.k(); ++a) {
      ASSERT_LE((out.block(a) - h.block(a)).norm(),
                1e-12 * std::max(1.0, h.block(a).norm()));
    }
  }
}

TEST(HessianApplyOp, MatchesNaiveDenseFormula) {
  CounterRng rng(Seed{79, 0}, rng_domain::kTest);
  const DimVector dims({2, 3, 2});
  const Dataset x = random_dataset(dims, 4, rng);
  const KronPoint theta = balance(random_point(dims, rng));
  for (int rep = 0; rep < 5; ++rep) {
    const TangentVec h = random_tangent(dims, rng);
    const TangentVec got = hessian_apply(x, theta, h);
    const TangentVec want = naive_hessian_apply(x, theta, h);
    ASSERT_NEAR(got.h0(), want.h0(), 1e-11 * std::max(1.0, std::abs(want.h0())));
    for (int a = 0; a < dims.k(); ++a) {
      ASSERT_LE((got.block(a) - want.block(a)).norm(),
                1e-11 * std::max(1.0, want.block(a).norm()));
    }
  }
}

TEST(HessianApplyOp, KrausPathMatchesDenseOracle) {
  // d_a * d_b = 576 exceeds the dense-pair limit, forcing the Kraus-sum
  // evaluation of the cross term.
  CounterRng rng(Seed{80, 0}, rng_domain::kTest);
  const DimVector dims({24, 24});
  const Dataset x = random_dataset(dims, 2, rng);
  const KronPoint theta = KronPoint::identity(dims);
  const TangentVec h = random_tangent(dims, rng);
  const TangentVec got = hessian_apply(x, theta, h);
  const TangentVec want = naive_hessian_apply(x, theta, h);
  EXPECT_NEAR(got.h0(), want.h0(), 1e-10 * std::max(1.0, std::abs(want.h0())));
  for (int a = 0; a < dims.k(); ++a) {
    EXPECT_LE((got.block(a) - want.block(a)).norm(),
              1e-10 * std::max(1.0, want.block(a).norm()));
  }
}

TEST(HessianApplyOp, QuadraticFormMatchesSecondDifferences) {
  CounterRng rng(Seed{81, 0}, rng_domain::kTest);
  const DimVector dims({2, 2, 2});
  const Dataset x = random_dataset(dims, 5, rng);
  const KronPoint theta = balance(random_point(dims, rng));
  for (int rep = 0; rep < 5; ++rep) {
    TangentVec h = random_tangent(dims, rng);
    h = h.scaled(1.0 / h.norm());
    const double analytic = tangent_inner(h, hessian_apply(x, theta, h));
    const double numeric = fd_second_directional(x, theta, h, 5e-4);
    ASSERT_LE(rel_err(analytic, numeric), 1e-4)
        << "analytic=" << analytic << " numeric=" << numeric;
  }
}

TEST(HessianApplyOp, SelfAdjoint) {
  CounterRng rng(Seed{82, 0}, rng_domain::kTest);
  const DimVector dims({3, 2});
  const Dataset x = random_dataset(dims, 4, rng);
  const KronPoint theta = balance(random_point(dims, rng));
  for (int rep = 0; rep < 20; ++rep) {
    const TangentVec h = random_tangent(dims, rng);
    const TangentVec k = random_tangent(dims, rng);
    const double hk = tangent_inner(hessian_apply(x, theta, h), k);
    const double kh = tangent_inner(h, hessian_apply(x, theta, k));
    ASSERT_LE(rel_err(hk, kh), 1e-10);
  }
}

TEST(HessianMinEigOp, ExactUniformDataGivesOne) {
  const DimVector dims({2, 3});
  const Dataset x = exact_identity_marginals(dims);
  EXPECT_NEAR(hessian_min_eig(x, KronPoint::identity(dims)), 1.0, 1e-6);
}

TEST(HessianMinEigOp, IdentityModelStronglyConvex) {
  const DimVector dims({4, 4});
  const Dataset x = Dataset::sample_model(KronPoint::identity(dims), 100,
                                          Seed{106, 0});
  EXPECT_GE(hessian_min_eig(x, KronPoint::identity(dims)), 0.5);
}

TEST(HessianMinEigOp, DegenerateMarginalDirectionGivesZero) {
  // All samples lie in the first mode-0 slice, so the mode-0 marginal has
  // a null direction and the Hessian a flat one.
  CounterRng rng(Seed{83, 0}, rng_domain::kTest);
  const DimVector dims({2, 2});
  std::vector<double> data;
  for (int i = 0; i < 3; ++i) {
    data.push_back(rng.next_gaussian());
    data.push_back(rng.next_gaussian());
    data.push_back(0.0);
    data.push_back(0.0);
  }
  const Dataset x(dims, std::move(data));
  const double min_eig = hessian_min_eig(x, KronPoint::identity(dims));
  EXPECT_LE(std::abs(min_eig), 1e-3);
}

TEST(ObjectiveOps, InputValidation) {
  CounterRng rng(Seed{84, 0}, rng_domain::kTest);
  const Dataset x = random_dataset(DimVector({2, 2}), 2, rng);
  const KronPoint wrong = KronPoint::identity(DimVector({2, 3}));
  EXPECT_THROW(f_value(x, wrong), InvalidInput);
  EXPECT_THROW(gradient(x, wrong, ObjectiveConfig{}), InvalidInput);
  EXPECT_THROW(
      hessian_apply(x, wrong, TangentVec::zero(DimVector({2, 3}))),
      InvalidInput);
  EXPECT_THROW(
      hessian_min_eig(x, KronPoint::identity(x.dims()), 0.0), InvalidInput);
}

}  // namespace
}  // namespace kronfit
