#ifndef CONEKIT_LORENTZMAPS_HPP
#define CONEKIT_LORENTZMAPS_HPP

/// \file lorentzmaps.hpp
/// Maps between Lorentz cones: positivity, automorphisms, the Sinkhorn
/// normal form, the maxEA eigenvalue criterion, entanglement breaking tests,
/// retracts of sliced cones and extreme positive maps into cones over linf.

#include <cstdint>
#include <vector>

#include "conekit/cones.hpp"

namespace conekit {

inline constexpr double kLorentzTol = 1e-9;

namespace detail {

inline bool lorentz_like(const ConeDescriptor& c) {
  return c.kind == ConeKind::Lorentz || (c.kind == ConeKind::ConeOver && c.space.family == Family::L2);
}

inline void require_lorentz_map(const ConeMap& p) {
  if (!lorentz_like(p.dom) || !lorentz_like(p.cod))
    throw Error(ErrorCode::Unsupported, "expected a map between Lorentz cones, got " + p.dom.name() + " -> " + p.cod.name());
}

inline Vec e0(int dim) { return Vec::Unit(dim, 0); }

}  // namespace detail

inline bool is_lorentz_positive(const Mat& p, double tol = kLorentzTol) { return detail::lorentz_positive(p, tol); }

inline bool is_lorentz_positive(const ConeMap& p, double tol = kLorentzTol) {
  detail::require_lorentz_map(p);
  return detail::lorentz_positive(p.matrix, tol);
}

/// True when P maps every nonzero element of L_n into the interior of L_m,
/// with the S-procedure margin above margin * scale.
inline bool is_lorentz_interior(const Mat& p, double margin = 1e-10) {
  return detail::interior_from(detail::lorentz_positivity(p), margin);
}

// ---------------------------------------------------------------------------
// Automorphisms

/// Boost of rapidity alpha in the (e0, e1) plane of R^{n+1}.
inline Mat boost(int n, double alpha) {
  Mat b = Mat::Identity(n + 1, n + 1);
  b(0, 0) = b(1, 1) = std::cosh(alpha);
  b(0, 1) = b(1, 0) = std::sinh(alpha);
  return b;
}

/// Symmetric boost sending z in the interior of L_k to sqrt(z^T J z) e0.
inline Mat boost_to_e0(const Vec& z) {
  const int dim = static_cast<int>(z.size());
  const Vec x = z.tail(dim - 1);
  const double r = x.norm();
  Mat b = Mat::Identity(dim, dim);
  if (r == 0.0) return b;
  if (!(z(0) > r)) throw Error(ErrorCode::NotInterior, "vector is not in the interior of the Lorentz cone");
  const Vec d = x / r;
  const double beta = std::atanh(r / z(0));
  const double ch = std::cosh(beta);
  const double sh = std::sinh(beta);
  b(0, 0) = ch;
  b.block(0, 1, 1, dim - 1) = -sh * d.transpose();
  b.block(1, 0, dim - 1, 1) = -sh * d;
  b.block(1, 1, dim - 1, dim - 1) += (ch - 1.0) * d * d.transpose();
  return b;
}

struct LorentzAutomorphism {
  double c = 1.0;
  Mat u1;
  Mat u2;
  double alpha = 0.0;

  Mat matrix() const {
    const int n = static_cast<int>(u1.rows());
    return c * direct_sum(1.0, u1) * boost(n, alpha) * direct_sum(1.0, u2);
  }
};

inline Mat nearest_orthogonal(const Mat& m) {
  const Svd s = svd(m);
  return s.u * s.v.transpose();
}

inline LorentzAutomorphism decompose_automorphism(const Mat& a, double tol = 1e-9) {
  if (a.rows() != a.cols() || a.rows() < 2)
    throw Error(ErrorCode::DimensionMismatch, "automorphism must be square of size >= 2");
  const int n = static_cast<int>(a.rows()) - 1;
  const Mat j = lorentz_form(n);
  const Mat g = a.transpose() * j * a;
  const double c2 = g(0, 0);
  if (!(c2 > 0.0) || (g - c2 * j).norm() > tol * a.squaredNorm() || a(0, 0) <= 0.0)
    throw Error(ErrorCode::NotAutomorphism, "matrix is not a scaled orthochronous Lorentz transformation");
  LorentzAutomorphism out;
  out.c = std::sqrt(c2);
  const Mat ah = a / out.c;
  const double ch = std::max(1.0, ah(0, 0));
  out.alpha = std::acosh(ch);
  const double sh = std::sinh(out.alpha);
  const Mat spatial = ah.bottomRightCorner(n, n);
  const Vec row = ah.block(0, 1, 1, n).transpose();
  if (sh < 1e-12 || row.norm() < 1e-12) {
    out.alpha = 0.0;
    out.u1 = nearest_orthogonal(spatial);
    out.u2 = Mat::Identity(n, n);
    return out;
  }
  // Row 0 of u2 is the normalized spatial part of the first row.
  const Vec r2 = row / row.norm();
  Mat u2 = Mat::Identity(n, n);
  const Vec diff = Vec::Unit(n, 0) - r2;
  if (diff.norm() > 1e-14) {
    const Vec h = diff / diff.norm();
    u2 -= 2.0 * h * h.transpose();
  }
  Vec scale = Vec::Ones(n);
  scale(0) = 1.0 / ch;
  out.u2 = u2;
  out.u1 = nearest_orthogonal(spatial * u2.transpose() * scale.asDiagonal());
  return out;
}

/// Random automorphism c (1 + u1) P_alpha (1 + u2) with |alpha| <= max_rapidity.
inline Mat random_automorphism(int n, Rng& rng, double max_rapidity = 1.5, bool unit_scale = false) {
  const double c = unit_scale ? 1.0 : std::exp(rng.uniform(-0.5, 0.5));
  const double alpha = rng.uniform(-max_rapidity, max_rapidity);
  const Mat u1 = rng.orthogonal(n);
  const Mat u2 = rng.orthogonal(n);
  return c * direct_sum(1.0, u1) * boost(n, alpha) * direct_sum(1.0, u2);
}

// ---------------------------------------------------------------------------
// Sinkhorn normal form

struct SinkhornForm {
  Mat a;  // automorphism of L_n (input side)
  Mat b;  // automorphism of L_m (output side)
  Vec v;  // diagonal, nonnegative, descending
  double residual = 0.0;
  int iterations = 0;

  /// 1 (+) Diag(v) as an (m+1) x (n+1) matrix.
  Mat central(int m, int n) const {
    Mat d = Mat::Zero(m + 1, n + 1);
    d(0, 0) = 1.0;
    for (int i = 0; i < v.size(); ++i) d(i + 1, i + 1) = v(i);
    return d;
  }
};

inline constexpr double kSinkhornTol = 1e-12;
inline constexpr int kSinkhornMaxIter = 10000;

namespace detail {

/// Alternating boost normalization; the caller guarantees P is interior.
inline SinkhornForm sinkhorn_core(const Mat& p, double tol, int max_iter) {
  const int m = static_cast<int>(p.rows()) - 1;
  const int n = static_cast<int>(p.cols()) - 1;
  Mat q = p;
  Mat bacc = Mat::Identity(m + 1, m + 1);
  Mat aacc = Mat::Identity(n + 1, n + 1);
  int it = 0;
  auto off_out = [&] { return q.col(0).tail(m).norm() / q(0, 0); };
  auto off_in = [&] { return q.row(0).tail(n).norm() / q(0, 0); };
  for (; it < max_iter; ++it) {
    if (q(0, 0) <= 0.0) throw Error(ErrorCode::NoConvergence, "normalization lost positivity");
    if (off_out() <= tol && off_in() <= tol) break;
    const Mat bstep = boost_to_e0(q.col(0));
    q = bstep * q;
    bacc = bstep * bacc;
    const Mat astep = boost_to_e0(q.row(0).transpose());
    q = q * astep;
    aacc = aacc * astep;
    const double t = q(0, 0);
    q /= t;
    bacc /= t;
  }
  if (it >= max_iter) throw Error(ErrorCode::NoConvergence, "normalization did not converge");
  const double t = q(0, 0);
  q /= t;
  bacc /= t;
  const Svd s = svd(q.bottomRightCorner(m, n));
  SinkhornForm out;
  out.b = direct_sum(1.0, s.u.transpose()) * bacc;
  out.a = aacc * direct_sum(1.0, s.v);
  out.v = s.sigma;
  out.iterations = it;
  out.residual = (out.b * p * out.a - out.central(m, n)).norm();
  return out;
}

}  // namespace detail

inline SinkhornForm sinkhorn_normal_form(const Mat& p, double tol = kSinkhornTol, int max_iter = kSinkhornMaxIter) {
  if (p.rows() < 2 || p.cols() < 2) throw Error(ErrorCode::DimensionMismatch, "Lorentz maps need n, m >= 1");
  if (!is_lorentz_interior(p)) throw Error(ErrorCode::NotInterior, "map is not in the interior of the positive maps");
  return detail::sinkhorn_core(p, tol, max_iter);
}

inline SinkhornForm sinkhorn_normal_form(const ConeMap& p, double tol = kSinkhornTol, int max_iter = kSinkhornMaxIter) {
  detail::require_lorentz_map(p);
  return sinkhorn_normal_form(p.matrix, tol, max_iter);
}

// ---------------------------------------------------------------------------
// maxEA criterion

struct MaxEaResult {
  bool verdict = false;
  Vec eigenvalues;  // timelike eigenvalue first, the rest descending
  bool via_normal_form = false;
};

inline MaxEaResult max_ea_criterion(const Mat& p, double tol = 1e-7) {
  const auto pos = detail::lorentz_positivity(p);
  if (!detail::positive_from(pos, p, kLorentzTol)) throw Error(ErrorCode::NotPositive, "map is not Lorentz positive");
  const int m = static_cast<int>(p.rows()) - 1;
  const int n = static_cast<int>(p.cols()) - 1;
  const Mat prod = lorentz_form(m) * p * lorentz_form(n) * p.transpose();
  MaxEaResult out;
  out.eigenvalues = Vec::Zero(m + 1);
  bool done = false;
  if (detail::interior_from(pos, 1e-8)) {
    try {
      const SinkhornForm sf = detail::sinkhorn_core(p, kSinkhornTol, kSinkhornMaxIter);
      const Vec v2 = sf.v.array().square();
      const double kappa = prod.trace() / (1.0 + v2.sum());
      out.eigenvalues(0) = kappa;
      for (int i = 0; i < v2.size(); ++i) out.eigenvalues(i + 1) = kappa * v2(i);
      out.via_normal_form = true;
      done = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergence) throw;
    }
  }
  if (!done) {
    Eigen::EigenSolver<Mat> es(prod, false);
    std::vector<double> ev(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) ev[i] = es.eigenvalues()(i).real();
    std::sort(ev.begin(), ev.end(), std::greater<>());
    for (int i = 0; i <= m; ++i) out.eigenvalues(i) = ev[i];
  }
  const double lead = out.eigenvalues(0);
  const double scaled = tol * std::max(1.0, std::abs(lead));
  const double rest = out.eigenvalues.tail(m).sum();
  out.verdict = out.eigenvalues.minCoeff() >= -scaled && lead >= rest - scaled;
  return out;
}

inline MaxEaResult max_ea_criterion(const ConeMap& p, double tol = 1e-7) {
  detail::require_lorentz_map(p);
  return max_ea_criterion(p.matrix, tol);
}

// ---------------------------------------------------------------------------
// Entanglement breaking maps between Lorentz cones

struct EbResult {
  bool verdict = false;
  double trace_norm = 0.0;  // sum |v_i| of the last normal form computed
  double epsilon = 0.0;     // regularization used for that normal form
};

inline EbResult is_eb_lorentz_detail(const Mat& p, double tol = 1e-7) {
  const auto pos = detail::lorentz_positivity(p);
  if (!detail::positive_from(pos, p, kLorentzTol)) throw Error(ErrorCode::NotPositive, "map is not Lorentz positive");
  EbResult out;
  if (detail::interior_from(pos, 1e-8)) {
    const SinkhornForm sf = detail::sinkhorn_core(p, kSinkhornTol, kSinkhornMaxIter);
    out.trace_norm = sf.v.lpNorm<1>();
    out.verdict = out.trace_norm <= 1.0 + tol;
    return out;
  }
  const double scale = std::max(1.0, p.norm());
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    Mat pe = p;
    pe(0, 0) += eps * scale;
    const SinkhornForm sf = detail::sinkhorn_core(pe, 1e-11, kSinkhornMaxIter);
    out.trace_norm = sf.v.lpNorm<1>();
    out.epsilon = eps;
    if (out.trace_norm > 1.0 + tol) {
      out.verdict = false;
      return out;
    }
  }
  out.verdict = true;
  return out;
}

inline bool is_eb_lorentz(const Mat& p, double tol = 1e-7) { return is_eb_lorentz_detail(p, tol).verdict; }

inline bool is_eb_lorentz(const ConeMap& p, double tol = 1e-7) {
  detail::require_lorentz_map(p);
  return is_eb_lorentz(p.matrix, tol);
}

// ---------------------------------------------------------------------------
// Retract of L_n cut by a subspace

struct Retract {
  Mat alpha;  // k x (n+1): coordinates of S in R^k, zero on the orthogonal complement
  Mat beta;   // (n+1) x k: image in S
  bool single_ray = false;
};

inline Retract retract_maps(const Mat& basis, double tol = 1e-10) {
  const int dim = static_cast<int>(basis.rows());
  if (dim < 2) throw Error(ErrorCode::DimensionMismatch, "ambient space must have dimension >= 2");
  Eigen::ColPivHouseholderQR<Mat> qr(basis);
  const int k = static_cast<int>(qr.rank());
  if (k == 0) throw Error(ErrorCode::DegenerateIntersection, "subspace is zero");
  const Mat q = Mat(qr.householderQ()).leftCols(k);
  const Mat kform = q.transpose() * lorentz_form(dim - 1) * q;
  const Vec h = q.transpose() * detail::e0(dim);
  const SymEig ke = sym_eig(SymMatrix(kform));
  const double kscale = std::max(1.0, ke.values.cwiseAbs().maxCoeff());
  Retract out;
  if (ke.values(0) <= tol * kscale) {
    // Negative semidefinite form: the cone meets S at most in the kernel.
    const int last = k - 1;
    if (k >= 2 && ke.values(last - 1) > -tol * kscale)
      throw Error(ErrorCode::DegenerateIntersection, "degenerate form on the subspace");
    if (std::abs(ke.values(last)) > tol * kscale)
      throw Error(ErrorCode::DegenerateIntersection, "subspace meets the cone only at the origin");
    Vec y = ke.vectors.col(last);
    if (h.dot(y) < 0.0) y = -y;
    const Vec x = q * y;
    if (x(0) <= tol) throw Error(ErrorCode::DegenerateIntersection, "subspace meets the cone only at the origin");
    out.single_ray = true;
    out.beta = Mat::Zero(dim, k);
    out.beta.col(0) = x;
    out.alpha = Mat::Zero(k, dim);
    out.alpha.row(0) = x.transpose() / x.squaredNorm();
    return out;
  }
  if (k >= 2 && ke.values(1) > -tol * kscale)
    throw Error(ErrorCode::DegenerateIntersection, "form on the subspace is not Lorentzian");
  // Center of the ellipsoidal base {h^T y = 1} and its principal axes.
  const Mat kinv = kform.inverse();
  const Vec kh = kinv * h;
  const double s = 1.0 / h.dot(kh);
  const Vec center = s * kh;
  Mat frame(k, k);
  frame.col(0) = center;
  if (k > 1) {
    Eigen::FullPivLU<Mat> lu(h.transpose());
    Mat w = lu.kernel();
    w = Eigen::HouseholderQR<Mat>(w).householderQ() * Mat::Identity(k, k - 1);
    const SymEig me = sym_eig(SymMatrix(-(w.transpose() * kform * w)));
    for (int i = 0; i < k - 1; ++i) {
      const double mu = me.values(i);
      if (mu <= 0.0) throw Error(ErrorCode::DegenerateIntersection, "ellipsoidal base is degenerate");
      frame.col(i + 1) = std::sqrt(s / mu) * (w * me.vectors.col(i));
    }
  }
  out.beta = q * frame;
  out.alpha = frame.inverse() * q.transpose();
  return out;
}

// ---------------------------------------------------------------------------
// Extreme positive maps from L_k into the cone over linf^n

/// Random extreme point of the dual-normalized maps L_k -> C(linf^n): rows
/// (1, 0), sign rows (s_i, 0) and unit rows (0, a_i) in random order.
inline ConeMap extreme_pos0(int k, int n, std::uint64_t seed) {
  if (k < 1 || n < 1) throw Error(ErrorCode::DimensionMismatch, "extreme_pos0 needs k, n >= 1");
  Rng rng(seed);
  const int n1 = rng.integer(0, n);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.integer(0, i)]);
  Mat q = Mat::Zero(n + 1, k + 1);
  q(0, 0) = 1.0;
  for (int r = 0; r < n; ++r) {
    const int row = order[r] + 1;
    if (r < n1) {
      q(row, 0) = rng.sign();
    } else {
      q.block(row, 1, 1, k) = rng.unit_vec(k).transpose();
    }
  }
  return {q, ConeDescriptor::lorentz(k), ConeDescriptor::over(SpaceDescriptor::linf(n))};
}

/// A point (x, b) of the convex set K_w = {1 +- x >= |b +- w|}.
struct KwPoint {
  double x;
  Vec b;
};

inline std::vector<KwPoint> kw_extreme_sampler(const Vec& w, int count, std::uint64_t seed) {
  const double wn = w.norm();
  if (!(wn < 1.0)) throw Error(ErrorCode::InvalidW, "K_w needs |w| < 1");
  const int k = static_cast<int>(w.size());
  Rng rng(seed);
  std::vector<KwPoint> out;
  if (count >= 1) out.push_back({1.0, w});
  if (count >= 2) out.push_back({-1.0, -w});
  Mat t = Mat::Identity(k, k);
  if (wn > 0.0) {
    const Vec wh = w / wn;
    const Mat proj = wh * wh.transpose();
    t = proj + std::sqrt(1.0 - wn * wn) * (Mat::Identity(k, k) - proj);
  }
  while (static_cast<int>(out.size()) < count) {
    const Vec b = t * rng.unit_vec(k);
    out.push_back({b.dot(w), b});
  }
  return out;
}

}  // namespace conekit

#endif  // CONEKIT_LORENTZMAPS_HPP
