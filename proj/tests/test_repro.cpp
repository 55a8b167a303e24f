#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "conekit/repro.hpp"

using namespace conekit;

namespace {

// Plain double-precision rebuild of the qutrit example straight from the
// displayed matrices, sharing nothing with the exact-constant route.
struct PlainPeres {
  std::array<double, 4> w{3257.0 / 6884.0, 450.0 / 1721.0, 450.0 / 1721.0, 27.0 / 6884.0};
  std::array<Eigen::Matrix3d, 4> k;
  std::array<Eigen::Matrix3d, 4> a;
  std::array<Eigen::Matrix3d, 4> b;

  PlainPeres() {
    const double c = std::sqrt(131.0 / 2.0) / 6.0;
    k[0] << 1, 0, 0, 0, 1, 0, 0, 0, 0;
    k[0] /= std::sqrt(2.0);
    k[1] << 0, c, 0, c, 0, -3.0 / 5.0, 1.0 / 30.0, 0, 0;
    k[1] /= 2.0;
    k[2] << c, 0, 3.0 / 5.0, 0, -c, 0, 0, 1.0 / 30.0, 0;
    k[2] /= 2.0;
    k[3] << 0, 1, 0, -1, 0, 0, 0, 0, 1;
    k[3] /= std::sqrt(3.0);
    const double r3 = std::sqrt(3.0), r21 = std::sqrt(21.0);
    const std::array<Eigen::Vector3d, 3> vs{Eigen::Vector3d(-1, r3, r21) / 5.0, Eigen::Vector3d(2, 0, r21) / 5.0,
                                            Eigen::Vector3d(-1, -r3, r21) / 5.0};
    a[0].setIdentity();
    for (int i = 0; i < 3; ++i) a[i + 1] = 2.0 * vs[i] * vs[i].transpose() - Eigen::Matrix3d::Identity();
    const double f = 28.0 / 97.0;
    b[0].setIdentity();
    b[1] << 0.5, f, -f, f, 1.0 / 6, -1.0 / 6, -f, -1.0 / 6, -1.0 / 3;
    b[2] << 0, 0, 0, 0, 2.0 / 3, 1.0 / 3, 0, 1.0 / 3, -1.0 / 3;
    b[3] << 0.5, -f, f, -f, 1.0 / 6, -1.0 / 6, f, -1.0 / 6, -1.0 / 3;
  }

  Eigen::Matrix3d t(const Eigen::Matrix3d& x) const {
    Eigen::Matrix3d out = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 4; ++i) out += w[i] * k[i] * x * k[i].transpose();
    return out;
  }

  double trace_bta() const {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += (b[i] * t(a[i])).trace();
    return s;
  }

  // 9 x 9 Choi matrix with (i, a; j, b) = T(E_ij)(a, b).
  Eigen::Matrix<double, 9, 9> choi() const {
    Eigen::Matrix<double, 9, 9> c;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
        e(i, j) = 1.0;
        c.block<3, 3>(3 * i, 3 * j) = t(e);
      }
    return c;
  }
};

// Threshold of the square-cone central map from its defining formula, with
// the sign patterns (one minus entry) enumerated independently of the library.
double alpha_oracle(const Mat& phi) {
  const Eigen::Vector2d one(1, 1), flip(1, -1);
  double best = std::max((phi * one).norm(), (phi * flip).norm());
  for (int pos = 0; pos < 4; ++pos) {
    Eigen::Matrix2d h = Eigen::Matrix2d::Ones();
    h(pos / 2, pos % 2) = -1.0;
    const Mat g = phi * h * phi.transpose();
    Eigen::JacobiSVD<Mat> svd(g);
    best = std::max(best, std::sqrt(svd.singularValues().sum()));
  }
  return best;
}

// Smallest lambda accepted by the Lorentz-leg decision procedure.
double alpha_by_bisection(const Mat& phi) {
  double lo = 0.0, hi = 10.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (square_cone_max_ea(mid, phi, 1e-12) ? hi : lo) = mid;
  }
  return hi;
}

Mat phi1() {
  Mat m(2, 2);
  m << 1.0, 0.0, 0.0, 0.2;
  return m;
}

Mat phi2() {
  Mat m(2, 2);
  m << 1.0, 0.3, 0.0, 0.5;
  return m;
}

}  // namespace

TEST(Peres, TraceBtaMatchesPlainOracle) {
  const PlainPeres plain;
  const double oracle = plain.trace_bta();
  EXPECT_LT(oracle, -1e-6);
  EXPECT_NEAR(oracle, kPeresTraceBTA, kRegressionTol);
  const PeresData d = PeresData::make();
  EXPECT_NEAR(d.trace_bta(), oracle, kRegressionTol);
  EXPECT_NEAR((d.b_matrix() * d.t_matrix() * d.a_matrix()).trace(), oracle, kRegressionTol);
}

TEST(Peres, ChoiAndPartialTransposeArePsd) {
  const PlainPeres plain;
  const auto c = plain.choi();
  Eigen::Matrix<double, 9, 9> pt;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a)
      for (int j = 0; j < 3; ++j)
        for (int b = 0; b < 3; ++b) pt(3 * i + a, 3 * j + b) = c(3 * i + b, 3 * j + a);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> e1(c), e2(pt);
  EXPECT_GE(e1.eigenvalues().minCoeff(), -1e-10);
  EXPECT_GE(e2.eigenvalues().minCoeff(), -1e-10);

  const PeresData d = PeresData::make();
  const CMat lib = choi_matrix([&](const CMat& x) { return d.apply_t(x); }, 3);
  EXPECT_LE((lib.real() - c).norm(), 1e-14);
  EXPECT_LE((partial_transpose(lib, 3).real() - pt).norm(), 1e-14);
}

TEST(Peres, ExactDataMatchesDisplayedMatrices) {
  const PlainPeres plain;
  const PeresData d = PeresData::make();
  exact::Rational s(0);
  for (const auto& w : d.weights) s += w;
  EXPECT_EQ(s, exact::Rational(1));
  for (int i = 0; i < 4; ++i) {
    EXPECT_LE((exact::to_cmat(d.kraus[i]).real() * std::sqrt(d.weights[i].numerator() * 1.0 / d.weights[i].denominator()) -
               plain.k[i] * std::sqrt(plain.w[i]))
                  .norm(),
              1e-15);
    EXPECT_LE((exact::to_cmat(d.b_ops[i]).real() - plain.b[i]).norm(), 1e-15);
    EXPECT_LE((d.a_ops()[i].real() - plain.a[i]).norm(), 1e-14);
  }
}

TEST(Peres, PipelinePasses) {
  const auto rep = peres_pipeline(42, 2000);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.label << ": " << c.computed;
  EXPECT_TRUE(rep.overall);
  EXPECT_EQ(rep.name, "peres");
}

TEST(Nonconvexity, AlphaMatchesFormulaOracle) {
  EXPECT_NEAR(alpha_oracle(phi1()), kAlphaPhi1, kRegressionTol);
  EXPECT_NEAR(alpha_oracle(phi2()), kAlphaPhi2, kRegressionTol);
  EXPECT_NEAR(alpha_oracle(phi1() + phi2()), kAlphaPhiSum, kRegressionTol);
  EXPECT_GT(kAlphaPhiSum - kAlphaPhi1 - kAlphaPhi2, 1e-4);
  Rng rng(601);
  for (int t = 0; t < 100; ++t) {
    const Mat phi = rng.normal_mat(rng.integer(1, 4), 2);
    ASSERT_NEAR(square_cone_alpha(phi), alpha_oracle(phi), 1e-12 * (1.0 + phi.norm()));
  }
}

TEST(Nonconvexity, AlphaIsTheDecisionThreshold) {
  for (const Mat& phi : {phi1(), phi2(), Mat(phi1() + phi2())})
    EXPECT_NEAR(alpha_by_bisection(phi), square_cone_alpha(phi), 1e-6);
  Rng rng(602);
  for (int t = 0; t < 20; ++t) {
    const Mat phi = rng.normal_mat(rng.integer(1, 3), 2);
    ASSERT_NEAR(alpha_by_bisection(phi), square_cone_alpha(phi), 1e-6 * (1.0 + phi.norm()));
  }
}

TEST(Nonconvexity, ReportPasses) {
  const auto rep = nonconvexity_check();
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.label;
  EXPECT_TRUE(rep.overall);
}

TEST(Nonassociativity, MembershipFlipsAtOne) {
  for (int n = 2; n <= 6; ++n) {
    EXPECT_FALSE(right_associated_member(1.0 - 1e-6, n)) << n;
    EXPECT_TRUE(right_associated_member(1.0 + 1e-6, n)) << n;
    EXPECT_TRUE(right_associated_member(3.0, n)) << n;
  }
  EXPECT_THROW(nonassociativity_check(1), Error);
  EXPECT_THROW(nonassociativity_check(7), Error);
}

TEST(Nonassociativity, SuitePasses) {
  const auto rep = nonassociativity_suite();
  EXPECT_EQ(rep.checks.size(), 5u * 6u);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.label;
  EXPECT_TRUE(rep.overall);
}

TEST(SquareCone, SuitePasses) {
  const auto rep = square_cone_check(100, 42);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.label << ": " << c.computed;
  EXPECT_TRUE(rep.overall);
}

TEST(PsdFactorization, DominatedFamilyIsDominated) {
  Rng rng(603);
  for (int t = 0; t < 100; ++t) {
    const auto fam = detail::sample_dominated_family(rng.integer(2, 3), 3, rng);
    ASSERT_GT(min_eig(fam[0]), 0.0);
    for (std::size_t i = 1; i < fam.size(); ++i) {
      ASSERT_GE(min_eig(CMat(fam[0] + fam[i])), -1e-12);
      ASSERT_GE(min_eig(CMat(fam[0] - fam[i])), -1e-12);
    }
  }
}

TEST(PsdFactorization, SuitePasses) {
  const auto rep = psd_factorization_check(100, 42, 400);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.label << ": " << c.computed;
  EXPECT_TRUE(rep.overall);
}

TEST(ReproReport, CompareRelations) {
  ReproReport r;
  r.compare("eq", "==", 1.0, 1.0 + 1e-9, 1e-8, "");
  r.compare("le", "<=", 1.0, 1.0, 0.0, "");
  r.compare("lt", "<", 0.0, -1e-5, 1e-6, "");
  EXPECT_TRUE(r.overall);
  r.compare("gt", ">", 0.0, 1e-7, 1e-6, "");
  EXPECT_FALSE(r.overall);
  EXPECT_FALSE(r.checks.back().pass);
  EXPECT_THROW(r.compare("bad", "~", 0, 0, 0, ""), Error);
}
