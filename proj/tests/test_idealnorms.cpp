#include <gtest/gtest.h>

#include "conekit/idealnorms.hpp"

using namespace conekit;

namespace {

constexpr double kTol = 1e-7;

SpaceDescriptor space(Family f, int d) { return {f, d}; }

SpaceDescriptor random_space(Rng& rng, int dim) {
  const Family fs[] = {Family::L1, Family::L2, Family::Linf};
  return space(fs[rng.integer(0, 2)], dim);
}

template <class F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::SolverFailure;
}

bool nuclear_supported(const OperatorMatrix& u) {
  return (u.dom.family == Family::L2 && u.cod.family == Family::L2) || (u.dom.polytope() && u.cod.polytope());
}

// Largest row-norm of u X^{-1} over unit columns x_1, x_2 in the plane: the
// Hilbert factorization constant for u: l1^2 -> linf^2 by direct search.
double gamma2_l1_linf_search(const Mat& u) {
  auto cost = [&](double a, double b) {
    Mat x(2, 2);
    x << std::cos(a), std::cos(b), std::sin(a), std::sin(b);
    if (std::abs(x.determinant()) < 1e-9) return 1e300;
    const Mat y = u * x.inverse();
    return std::max(y.row(0).norm(), y.row(1).norm());
  };
  double best = 1e300, ba = 0, bb = 0;
  for (int i = 0; i < 300; ++i)
    for (int j = 0; j < 300; ++j) {
      const double c = cost(M_PI * i / 300, M_PI * j / 300);
      if (c < best) best = c, ba = M_PI * i / 300, bb = M_PI * j / 300;
    }
  for (double step = M_PI / 300; step > 1e-12;) {
    bool moved = false;
    for (int da = -1; da <= 1; ++da)
      for (int db = -1; db <= 1; ++db) {
        const double c = cost(ba + da * step, bb + db * step);
        if (c < best) best = c, ba += da * step, bb += db * step, moved = true;
      }
    if (!moved) step *= 0.5;
  }
  return best;
}

// sup of hs(u c)^2 over contractions c: l2^n -> dom equals
// max <G, X> over X >= 0 with a^T X a <= 1 for each extreme functional a of
// the dual ball (X = c c^T). Solved here by a log-barrier Newton method on
// the n(n+1)/2 entries of X; returns sqrt of the final feasible value.
double refined_pietsch_sup(const OperatorMatrix& u) {
  const int n = u.dom.dim;
  const Mat g = u.entries.transpose() * u.entries;
  std::vector<Vec> funs;
  if (u.dom.family == Family::Linf)
    for (int i = 0; i < n; ++i) funs.push_back(Vec::Unit(n, i));
  else
    funs = sign_representatives(n);
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) idx.push_back({i, j});
  const int d = static_cast<int>(idx.size());
  auto basis = [&](int k) {
    Mat e = Mat::Zero(n, n);
    e(idx[k].first, idx[k].second) = e(idx[k].second, idx[k].first) = 1.0;
    return e;
  };
  double worst = 0.0;
  for (const auto& a : funs) worst = std::max(worst, a.squaredNorm());
  Mat x = Mat::Identity(n, n) / (2.0 * worst);
  auto feasible = [&](const Mat& y) {
    if (Eigen::LLT<Mat>(y).info() != Eigen::Success) return false;
    for (const auto& a : funs)
      if (a.dot(y * a) >= 1.0) return false;
    return true;
  };
  auto barrier = [&](const Mat& y, double mu) {
    double f = (g.cwiseProduct(y)).sum() + mu * std::log(y.determinant());
    for (const auto& a : funs) f += mu * std::log(1.0 - a.dot(y * a));
    return f;
  };
  for (double mu = 1.0; mu > 1e-13; mu *= 0.2) {
    for (int it = 0; it < 100; ++it) {
      const Mat xi = x.inverse();
      Vec grad(d);
      Mat hess = Mat::Zero(d, d);
      for (int k = 0; k < d; ++k) {
        const Mat ek = basis(k);
        grad(k) = (g.cwiseProduct(ek)).sum() + mu * (xi * ek).trace();
        for (const auto& a : funs) grad(k) -= mu * a.dot(ek * a) / (1.0 - a.dot(x * a));
        for (int l = 0; l < d; ++l) {
          const Mat el = basis(l);
          hess(k, l) -= mu * (xi * ek * xi * el).trace();
          for (const auto& a : funs) {
            const double r = 1.0 - a.dot(x * a);
            hess(k, l) -= mu * a.dot(ek * a) * a.dot(el * a) / (r * r);
          }
        }
      }
      const Vec step = -hess.ldlt().solve(grad);
      if (grad.dot(step) < 1e-15 * (1.0 + std::abs(barrier(x, mu)))) break;
      Mat dx = Mat::Zero(n, n);
      for (int k = 0; k < d; ++k) dx += step(k) * basis(k);
      double t = 1.0;
      const double f0 = barrier(x, mu);
      while (t > 1e-12 && (!feasible(x + t * dx) || barrier(x + t * dx, mu) < f0 + 0.25 * t * grad.dot(step))) t *= 0.5;
      if (t <= 1e-12) break;
      x += t * dx;
    }
  }
  return std::sqrt(std::max(0.0, (g.cwiseProduct(x)).sum()));
}

}  // namespace

TEST(Hs, Examples) {
  EXPECT_NEAR(hs(OperatorMatrix(Mat::Identity(4, 4), space(Family::L2, 4), space(Family::L2, 4))), 2.0, 1e-14);
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = 4;
  EXPECT_NEAR(hs(OperatorMatrix(d, space(Family::L2, 2), space(Family::L2, 2))), 5.0, 1e-14);
  Vec x(3), y(2);
  x << 1, 2, 2;
  y << 3, 4;
  EXPECT_NEAR(hs(OperatorMatrix(y * x.transpose(), space(Family::L2, 3), space(Family::L2, 2))), 15.0, 1e-13);
  EXPECT_EQ(error_of([] { hs(OperatorMatrix(Mat::Identity(2, 2), space(Family::L1, 2), space(Family::L2, 2))); }),
            ErrorCode::Unsupported);
}

TEST(Nuclear, Examples) {
  EXPECT_NEAR(nuclear(OperatorMatrix(Mat::Identity(2, 2), space(Family::L2, 2), space(Family::L2, 2))), 2.0, 1e-14);
  Mat h(2, 2);
  h << 1, 1, 1, -1;
  // Oracle: the feasible set {|w|_{l1 -> linf} <= 1} is the box |w_ij| <= 1,
  // so the linear program is maximized at a sign matrix.
  double oracle = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    Mat w(2, 2);
    for (int k = 0; k < 4; ++k) w(k / 2, k % 2) = (mask >> k) & 1 ? 1.0 : -1.0;
    oracle = std::max(oracle, (h * w).trace());
  }
  EXPECT_DOUBLE_EQ(oracle, 4.0);
  EXPECT_NEAR(nuclear(OperatorMatrix(h, space(Family::Linf, 2), space(Family::L1, 2))), oracle, kTol);
}

TEST(Nuclear, RankOneEqualsProductOfNorms) {
  Rng rng(201);
  const Family poly[] = {Family::L1, Family::Linf};
  for (int t = 0; t < 20; ++t) {
    const auto dom = space(poly[rng.integer(0, 1)], rng.integer(1, 4));
    const auto cod = space(poly[rng.integer(0, 1)], rng.integer(1, 4));
    const Vec y = rng.normal_vec(cod.dim);
    const Vec f = rng.normal_vec(dom.dim);
    const double expected = vec_norm(y, cod) * vec_norm(f, dual_space(dom));
    ASSERT_NEAR(nuclear(OperatorMatrix(y * f.transpose(), dom, cod)), expected, kTol * (1.0 + expected));
  }
}

TEST(Nuclear, MixedEndpointsUnsupported) {
  EXPECT_EQ(error_of([] { nuclear(OperatorMatrix(Mat::Identity(2, 2), space(Family::L2, 2), space(Family::L1, 2))); }),
            ErrorCode::Unsupported);
}

TEST(Pi2, Examples) {
  Vec d(3);
  d << 0.5, -2.0, 1.5;
  EXPECT_NEAR(pi2(OperatorMatrix(Mat(d.asDiagonal()), space(Family::Linf, 3), space(Family::L2, 3))), d.norm(), kTol);
  EXPECT_NEAR(pi2(OperatorMatrix(Mat::Identity(5, 5), space(Family::L2, 5), space(Family::L2, 5))), std::sqrt(5.0),
              1e-14);
  Rng rng(202);
  for (int m = 1; m <= 4; ++m) {
    const OperatorMatrix v(rng.normal_mat(m, 2), space(Family::Linf, 2), space(Family::L2, m));
    EXPECT_NEAR(pi2(v), op_norm(v), 1e-6 * (1.0 + op_norm(v)));
  }
  EXPECT_EQ(error_of([] { pi2(OperatorMatrix(Mat::Identity(2, 2), space(Family::L2, 2), space(Family::L1, 2))); }),
            ErrorCode::Unsupported);
  EXPECT_EQ(error_of([] { pi2(OperatorMatrix(Mat::Ones(1, 13), space(Family::L1, 13), space(Family::L2, 1))); }),
            ErrorCode::DimensionTooLarge);
}

TEST(Gamma2, IdentityOnL1IsSqrtN) {
  for (int n = 1; n <= 6; ++n)
    EXPECT_NEAR(gamma2(OperatorMatrix(Mat::Identity(n, n), space(Family::L1, n), space(Family::L1, n))),
                std::sqrt(static_cast<double>(n)), 1e-6)
        << n;
}

TEST(Gamma2, EuclideanDomainIsOperatorNorm) {
  Rng rng(203);
  for (int t = 0; t < 20; ++t) {
    const OperatorMatrix u(rng.normal_mat(3, 2), space(Family::L2, 2), random_space(rng, 3));
    ASSERT_DOUBLE_EQ(gamma2(u), op_norm(u));
  }
}

TEST(Gamma2, SignMatrixAgainstSearch) {
  Mat h(2, 2);
  h << 1, 1, 1, -1;
  const double oracle = gamma2_l1_linf_search(h);
  EXPECT_NEAR(oracle, std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(gamma2(OperatorMatrix(h, space(Family::L1, 2), space(Family::Linf, 2))), oracle, 1e-6);
}

TEST(Gamma2Star, Examples) {
  Rng rng(204);
  const Mat v = rng.normal_mat(3, 3);
  EXPECT_NEAR(gamma2_star(OperatorMatrix(v, space(Family::L2, 3), space(Family::L2, 3))), svd(v).sigma.sum(), 1e-12);
  for (int t = 0; t < 10; ++t) {
    const auto dom = random_space(rng, rng.integer(1, 3));
    const auto cod = random_space(rng, rng.integer(1, 3));
    const OperatorMatrix r(rng.normal_vec(cod.dim) * rng.normal_vec(dom.dim).transpose(), dom, cod);
    const double on = op_norm(r);
    ASSERT_NEAR(gamma2_star(r), on, kTol * (1.0 + on)) << dom.name() << " -> " << cod.name();
  }
  EXPECT_EQ(gamma2_star(OperatorMatrix(Mat::Zero(2, 3), space(Family::L1, 3), space(Family::Linf, 2))), 0.0);
}

TEST(IdealNormProperty, NormChain) {
  Rng rng(205);
  for (int t = 0; t < 120; ++t) {
    const int n = rng.integer(1, 4);
    const int m = rng.integer(1, 4);
    const OperatorMatrix u(rng.normal_mat(m, n), random_space(rng, n), random_space(rng, m));
    const double op = op_norm(u);
    const double g2 = gamma2(u);
    const double g2s = gamma2_star(u);
    const double tol = kTol * (1.0 + op);
    ASSERT_LE(op, g2 + tol);
    ASSERT_LE(op, g2s + tol);
    if (u.cod.family == Family::L2) {
      ASSERT_LE(g2, pi2(u) + tol);
    }
    if (nuclear_supported(u)) {
      const double nuc = nuclear(u);
      ASSERT_LE(g2s, nuc + kTol * (1.0 + nuc));
      if (u.cod.family == Family::L2) {
        ASSERT_LE(pi2(u), nuc + kTol * (1.0 + nuc));
      }
    }
  }
}

TEST(IdealNormProperty, TraceDuality) {
  Rng rng(206);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(1, 4);
    const int m = rng.integer(1, 4);
    const auto x = random_space(rng, n);
    const auto y = random_space(rng, m);
    const OperatorMatrix u(rng.normal_mat(m, n), x, y);
    const OperatorMatrix w(rng.normal_mat(n, m), y, x);
    const double pairing = std::abs((u.entries * w.entries).trace());
    const double bound = gamma2(u) * gamma2_star(w);
    ASSERT_LE(pairing, bound + kTol * (1.0 + bound));
  }
}

TEST(IdealNormProperty, PietschDominatesContractions) {
  Rng rng(207);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(1, 4);
    const int m = rng.integer(1, 4);
    const int k = rng.integer(1, 4);
    const auto dom = random_space(rng, n);
    const OperatorMatrix u(rng.normal_mat(m, n), dom, space(Family::L2, m));
    Mat c = rng.normal_mat(n, k);
    c /= op_norm(OperatorMatrix(c, space(Family::L2, k), dom));
    const double p = pi2(u);
    ASSERT_GE(p, hs(OperatorMatrix(u.entries * c, space(Family::L2, k), u.cod)) - kTol * (1.0 + p));
  }
}

TEST(IdealNormProperty, PietschSupremumIsAttained) {
  Rng rng(208);
  for (int t = 0; t < 10; ++t) {
    const int n = rng.integer(1, 3);
    const int m = rng.integer(1, 3);
    const auto dom = space(t % 2 ? Family::L1 : Family::Linf, n);
    const OperatorMatrix u(rng.normal_mat(m, n), dom, space(Family::L2, m));
    const double p = pi2(u);
    const double sup = refined_pietsch_sup(u);
    ASSERT_LE(sup, p + 1e-7 * (1.0 + p));
    ASSERT_NEAR(sup, p, 1e-5 * (1.0 + p)) << dom.name() << " m=" << m;
  }
}

TEST(IdealNormProperty, Gamma2ThroughHilbertSpaceIsBoundedByFactors) {
  Rng rng(209);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 4);
    const int k = rng.integer(1, 4);
    const int m = rng.integer(1, 4);
    const auto x = random_space(rng, n);
    const auto y = random_space(rng, m);
    const OperatorMatrix a(rng.normal_mat(k, n), x, space(Family::L2, k));
    const OperatorMatrix b(rng.normal_mat(m, k), space(Family::L2, k), y);
    const double bound = op_norm(a) * op_norm(b);
    ASSERT_LE(gamma2(OperatorMatrix(b.entries * a.entries, x, y)), bound + kTol * (1.0 + bound));
  }
}

TEST(IdealNormProperty, Gamma2IdealInequality) {
  Rng rng(210);
  for (int t = 0; t < 100; ++t) {
    const int d[4] = {rng.integer(1, 3), rng.integer(1, 3), rng.integer(1, 3), rng.integer(1, 3)};
    const SpaceDescriptor s[4] = {random_space(rng, d[0]), random_space(rng, d[1]), random_space(rng, d[2]),
                                  random_space(rng, d[3])};
    const OperatorMatrix a(rng.normal_mat(d[1], d[0]), s[0], s[1]);
    const OperatorMatrix u(rng.normal_mat(d[2], d[1]), s[1], s[2]);
    const OperatorMatrix b(rng.normal_mat(d[3], d[2]), s[2], s[3]);
    const double bound = op_norm(b) * gamma2(u) * op_norm(a);
    ASSERT_LE(gamma2(OperatorMatrix(b.entries * u.entries * a.entries, s[0], s[3])), bound + kTol * (1.0 + bound));
  }
}

TEST(PietschFactorization, ReconstructsAndCertifiesPi2) {
  Rng rng(211);
  for (int t = 0; t < 60; ++t) {
    const int n = rng.integer(1, 4);
    const int m = rng.integer(1, 4);
    const auto dom = random_space(rng, n);
    const OperatorMatrix v(rng.normal_mat(m, n), dom, space(Family::L2, m));
    const auto f = pietsch_factorization(v);
    const double p = pi2(v);
    ASSERT_LE((f.product() - v.entries).norm(), 1e-6 * (1.0 + v.entries.norm())) << dom.name();
    ASSERT_LE(op_norm(f.inner), 1.0 + 1e-9);
    ASSERT_LE(op_norm(f.outer), 1.0 + 1e-9);
    ASSERT_NEAR(f.diag.norm(), p, 1e-6 * (1.0 + p));
  }
}
