#ifndef CONEKIT_SPACES_HPP
#define CONEKIT_SPACES_HPP

#include <string>
#include <vector>

#include "conekit/numerics.hpp"

namespace conekit {

enum class Family { L1, L2, Linf };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::L1: return "l1";
    case Family::L2: return "l2";
    case Family::Linf: return "linf";
  }
  return "?";
}

struct SpaceDescriptor {
  Family family = Family::L2;
  int dim = 1;

  SpaceDescriptor() = default;
  SpaceDescriptor(Family f, int d) : family(f), dim(d) {
    if (d < 1) throw Error(ErrorCode::DimensionMismatch, "space dimension must be positive");
  }

  static SpaceDescriptor l1(int d) { return {Family::L1, d}; }
  static SpaceDescriptor l2(int d) { return {Family::L2, d}; }
  static SpaceDescriptor linf(int d) { return {Family::Linf, d}; }

  bool polytope() const { return family != Family::L2; }
  std::string name() const { return std::string(to_string(family)) + "(" + std::to_string(dim) + ")"; }

  friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;
};

/// Largest dimension for which sign vectors are enumerated.
inline constexpr int kSignEnumerationCap = 14;

inline double vec_norm(const Vec& x, const SpaceDescriptor& s) {
  if (x.size() != s.dim) throw Error(ErrorCode::DimensionMismatch, "vector length does not match " + s.name());
  switch (s.family) {
    case Family::L1: return x.lpNorm<1>();
    case Family::L2: return x.norm();
    case Family::Linf: return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

inline SpaceDescriptor dual_space(const SpaceDescriptor& s) {
  switch (s.family) {
    case Family::L1: return SpaceDescriptor::linf(s.dim);
    case Family::L2: return SpaceDescriptor::l2(s.dim);
    case Family::Linf: return SpaceDescriptor::l1(s.dim);
  }
  return s;
}

/// Sign vectors with first coordinate +1 (one representative per +/- pair).
inline std::vector<Vec> sign_representatives(int n) {
  if (n > kSignEnumerationCap)
    throw Error(ErrorCode::DimensionTooLarge, "sign enumeration beyond dimension 14");
  std::vector<Vec> out;
  const unsigned long count = 1UL << (n - 1);
  out.reserve(count);
  for (unsigned long mask = 0; mask < count; ++mask) {
    Vec s = Vec::Ones(n);
    for (int i = 1; i < n; ++i)
      if (mask & (1UL << (i - 1))) s(i) = -1.0;
    out.push_back(s);
  }
  return out;
}

/// Extreme points of the unit ball, one per +/- pair. The ball is symmetric,
/// so the full set is this list together with its negatives.
inline std::vector<Vec> extreme_representatives(const SpaceDescriptor& s) {
  switch (s.family) {
    case Family::L1: {
      std::vector<Vec> out;
      for (int i = 0; i < s.dim; ++i) out.push_back(Vec::Unit(s.dim, i));
      return out;
    }
    case Family::Linf: return sign_representatives(s.dim);
    case Family::L2: break;
  }
  throw Error(ErrorCode::Unsupported, "the Euclidean ball has no finite extreme point set");
}

inline std::vector<Vec> ball_extreme_points(const SpaceDescriptor& s) {
  std::vector<Vec> out;
  if (s.family == Family::L1) {
    for (int i = 0; i < s.dim; ++i) {
      out.push_back(Vec::Unit(s.dim, i));
      out.push_back(-Vec::Unit(s.dim, i));
    }
    return out;
  }
  const auto half = extreme_representatives(s);
  for (const auto& v : half) out.push_back(v);
  for (const auto& v : half) out.push_back(-v);
  return out;
}

/// Matrix whose columns are the extreme representatives of the ball.
inline Mat extreme_matrix(const SpaceDescriptor& s) {
  const auto pts = extreme_representatives(s);
  Mat out(s.dim, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = pts[j];
  return out;
}

/// A linear map u: dom -> cod stored as a cod.dim x dom.dim matrix.
struct OperatorMatrix {
  Mat entries;
  SpaceDescriptor dom;
  SpaceDescriptor cod;

  OperatorMatrix() = default;
  OperatorMatrix(Mat m, SpaceDescriptor d, SpaceDescriptor c) : entries(std::move(m)), dom(d), cod(c) {
    if (entries.rows() != cod.dim || entries.cols() != dom.dim)
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix shape does not match " + dom.name() + " -> " + cod.name());
  }

  /// The adjoint u^T: cod* -> dom*.
  OperatorMatrix adjoint() const { return {entries.transpose(), dual_space(cod), dual_space(dom)}; }
};

inline double op_norm(const OperatorMatrix& u) {
  const Mat& a = u.entries;
  if (a.size() == 0) return 0.0;
  switch (u.dom.family) {
    case Family::L1: {
      double best = 0.0;
      for (int j = 0; j < a.cols(); ++j) best = std::max(best, vec_norm(a.col(j), u.cod));
      return best;
    }
    case Family::L2: {
      if (u.cod.family == Family::L2) return spectral_norm(a);
      if (u.cod.family == Family::Linf) return a.rowwise().norm().maxCoeff();
      double best = 0.0;
      for (const auto& f : sign_representatives(u.cod.dim)) best = std::max(best, (a.transpose() * f).norm());
      return best;
    }
    case Family::Linf: {
      if (u.cod.family == Family::Linf) return a.rowwise().lpNorm<1>().maxCoeff();
      double best = 0.0;
      for (const auto& s : sign_representatives(u.dom.dim)) best = std::max(best, vec_norm(a * s, u.cod));
      return best;
    }
  }
  return 0.0;
}

}  // namespace conekit

#endif  // CONEKIT_SPACES_HPP
