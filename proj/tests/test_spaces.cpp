#include <gtest/gtest.h>

#include "conekit/spaces.hpp"

using namespace conekit;

namespace {

const SpaceDescriptor kL1_2 = SpaceDescriptor::l1(2);
const SpaceDescriptor kL2_2 = SpaceDescriptor::l2(2);
const SpaceDescriptor kLinf_2 = SpaceDescriptor::linf(2);

SpaceDescriptor random_space(Rng& rng, int dim) {
  switch (rng.integer(0, 2)) {
    case 0: return SpaceDescriptor::l1(dim);
    case 1: return SpaceDescriptor::l2(dim);
    default: return SpaceDescriptor::linf(dim);
  }
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

}  // namespace

TEST(VecNorm, Examples) {
  Vec x(2);
  x << 1, -1;
  EXPECT_DOUBLE_EQ(vec_norm(x, kL1_2), 2.0);
  EXPECT_DOUBLE_EQ(vec_norm(x, kL2_2), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(vec_norm(x, kLinf_2), 1.0);
  EXPECT_EQ(error_of([&] { vec_norm(x, SpaceDescriptor::l1(3)); }), ErrorCode::DimensionMismatch);
}

TEST(DualSpace, Examples) {
  EXPECT_EQ(dual_space(SpaceDescriptor::l1(3)), SpaceDescriptor::linf(3));
  EXPECT_EQ(dual_space(SpaceDescriptor::l2(5)), SpaceDescriptor::l2(5));
  EXPECT_EQ(dual_space(SpaceDescriptor::linf(2)), SpaceDescriptor::l1(2));
}

TEST(BallExtremePoints, L1AndLinf) {
  const auto l1 = ball_extreme_points(kL1_2);
  ASSERT_EQ(l1.size(), 4u);
  const auto linf = ball_extreme_points(kLinf_2);
  ASSERT_EQ(linf.size(), 4u);
  for (const auto& p : l1) EXPECT_DOUBLE_EQ(vec_norm(p, kL1_2), 1.0);
  for (const auto& p : linf) EXPECT_DOUBLE_EQ(vec_norm(p, kLinf_2), 1.0);
  auto contains = [](const std::vector<Vec>& pts, double a, double b) {
    for (const auto& p : pts)
      if (p(0) == a && p(1) == b) return true;
    return false;
  };
  EXPECT_TRUE(contains(l1, 1, 0) && contains(l1, -1, 0) && contains(l1, 0, 1) && contains(l1, 0, -1));
  EXPECT_TRUE(contains(linf, 1, 1) && contains(linf, 1, -1) && contains(linf, -1, 1) && contains(linf, -1, -1));
  EXPECT_EQ(ball_extreme_points(SpaceDescriptor::linf(5)).size(), 32u);
}

TEST(BallExtremePoints, Errors) {
  EXPECT_EQ(error_of([] { ball_extreme_points(SpaceDescriptor::l2(3)); }), ErrorCode::Unsupported);
  EXPECT_EQ(error_of([] { ball_extreme_points(SpaceDescriptor::linf(15)); }), ErrorCode::DimensionTooLarge);
}

TEST(OpNorm, Examples) {
  EXPECT_NEAR(op_norm(OperatorMatrix(Mat::Identity(3, 3), SpaceDescriptor::l2(3), SpaceDescriptor::l2(3))), 1.0,
              1e-14);
  Mat h(2, 2);
  h << 1, 1, 1, -1;
  EXPECT_NEAR(op_norm(OperatorMatrix(h, kL1_2, kLinf_2)), 1.0, 1e-14);
  EXPECT_NEAR(op_norm(OperatorMatrix(Mat::Identity(2, 2), kLinf_2, kL2_2)), std::sqrt(2.0), 1e-14);
}

TEST(OpNorm, ShapeMustMatchDescriptors) {
  EXPECT_EQ(error_of([] { OperatorMatrix(Mat::Zero(2, 3), SpaceDescriptor::l1(2), SpaceDescriptor::l1(2)); }),
            ErrorCode::DimensionMismatch);
}

TEST(OpNormProperty, AdjointDuality) {
  Rng rng(101);
  for (int t = 0; t < 400; ++t) {
    const int n = rng.integer(1, 6);
    const int m = rng.integer(1, 6);
    const OperatorMatrix u(rng.normal_mat(m, n), random_space(rng, n), random_space(rng, m));
    const double a = op_norm(u);
    const double b = op_norm(u.adjoint());
    ASSERT_NEAR(a, b, 1e-10 * std::max(1.0, a)) << u.dom.name() << " -> " << u.cod.name();
  }
}

TEST(OpNormProperty, Submultiplicative) {
  Rng rng(102);
  for (int t = 0; t < 500; ++t) {
    const int n = rng.integer(1, 5);
    const int k = rng.integer(1, 5);
    const int m = rng.integer(1, 5);
    const auto x = random_space(rng, n);
    const auto y = random_space(rng, k);
    const auto z = random_space(rng, m);
    const OperatorMatrix v(rng.normal_mat(k, n), x, y);
    const OperatorMatrix u(rng.normal_mat(m, k), y, z);
    const OperatorMatrix uv(u.entries * v.entries, x, z);
    ASSERT_LE(op_norm(uv), op_norm(u) * op_norm(v) * (1.0 + 1e-12) + 1e-12);
  }
}

TEST(OpNormProperty, MatchesExtremePointMaximumAndDominatesBallSamples) {
  Rng rng(103);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.integer(1, 5);
    const int m = rng.integer(1, 5);
    const SpaceDescriptor dom = rng.uniform() < 0.5 ? SpaceDescriptor::l1(n) : SpaceDescriptor::linf(n);
    const OperatorMatrix u(rng.normal_mat(m, n), dom, random_space(rng, m));
    const double norm = op_norm(u);
    double ext = 0.0;
    for (const auto& x : ball_extreme_points(dom)) ext = std::max(ext, vec_norm(u.entries * x, u.cod));
    ASSERT_NEAR(norm, ext, 1e-12 * std::max(1.0, norm));
    for (int s = 0; s < 50; ++s) {
      Vec x = rng.normal_vec(n);
      x /= vec_norm(x, dom);
      ASSERT_LE(vec_norm(u.entries * x, u.cod), norm * (1.0 + 1e-12));
    }
  }
}
