#ifndef CONEKIT_CONES_HPP
#define CONEKIT_CONES_HPP

/// \file cones.hpp
/// Lorentz cones, cones over l1/l2/linf spaces and PSD cones in a real
/// orthonormal Hermitian coordinate system; maps and 2-tensors between them.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "conekit/spaces.hpp"

namespace conekit {

enum class ConeKind { Lorentz, ConeOver, Psd };

struct ConeDescriptor {
  ConeKind kind = ConeKind::Lorentz;
  int n = 1;                // Lorentz: spatial dimension; Psd: matrix size
  SpaceDescriptor space{};  // ConeOver only

  static ConeDescriptor lorentz(int n) {
    if (n < 1) throw Error(ErrorCode::DimensionMismatch, "Lorentz cone needs n >= 1");
    return {ConeKind::Lorentz, n, SpaceDescriptor::l2(n)};
  }
  static ConeDescriptor over(const SpaceDescriptor& s) { return {ConeKind::ConeOver, s.dim, s}; }
  static ConeDescriptor psd(int d) {
    if (d < 1) throw Error(ErrorCode::DimensionMismatch, "PSD cone needs d >= 1");
    return {ConeKind::Psd, d, SpaceDescriptor{}};
  }

  int ambient_dim() const { return kind == ConeKind::Psd ? n * n : n + 1; }

  /// Normed space whose cone this is (Lorentz(n) is the cone over l2(n)).
  bool is_normed() const { return kind != ConeKind::Psd; }

  std::string name() const {
    switch (kind) {
      case ConeKind::Lorentz: return "lorentz(" + std::to_string(n) + ")";
      case ConeKind::ConeOver: return "cone_over_" + space.name();
      case ConeKind::Psd: return "psd(" + std::to_string(n) + ")";
    }
    return "?";
  }

  friend bool operator==(const ConeDescriptor& a, const ConeDescriptor& b) {
    if (a.kind != b.kind || a.n != b.n) return false;
    return a.kind != ConeKind::ConeOver || a.space == b.space;
  }
};

inline ConeDescriptor dual_cone(const ConeDescriptor& c) {
  if (c.kind == ConeKind::ConeOver) return ConeDescriptor::over(dual_space(c.space));
  return c;
}

// ---------------------------------------------------------------------------
// PSD coordinates: I/sqrt(d), then for each pair j<k the symmetric and the
// antisymmetric generalized Gell-Mann matrix, then the diagonal ones.

inline std::vector<CMat> psd_basis(int d) {
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(d * d));
  out.push_back(CMat::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMat s = CMat::Zero(d, d);
      s(j, k) = s(k, j) = r;
      out.push_back(s);
      CMat a = CMat::Zero(d, d);
      a(j, k) = cplx(0.0, -r);
      a(k, j) = cplx(0.0, r);
      out.push_back(a);
    }
  for (int l = 1; l < d; ++l) {
    CMat g = CMat::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (int j = 0; j < l; ++j) g(j, j) = norm;
    g(l, l) = -l * norm;
    out.push_back(g);
  }
  return out;
}

/// Coordinates of a Hermitian matrix in the PSD basis.
inline Vec psd_vec(const CMat& h) {
  const int d = static_cast<int>(h.rows());
  const auto basis = psd_basis(d);
  Vec out(d * d);
  for (int k = 0; k < d * d; ++k) out(k) = (basis[k].adjoint() * h).trace().real();
  return out;
}

inline CMat psd_unvec(const Vec& x, int d) {
  if (x.size() != d * d) throw Error(ErrorCode::DimensionMismatch, "PSD coordinate vector has wrong length");
  const auto basis = psd_basis(d);
  CMat out = CMat::Zero(d, d);
  for (int k = 0; k < d * d; ++k) out += x(k) * basis[k];
  return out;
}

/// Real matrix of a linear map on Hermitian matrices in PSD coordinates.
inline Mat superoperator_matrix(const std::function<CMat(const CMat&)>& f, int d_in, int d_out) {
  const auto in = psd_basis(d_in);
  const auto out = psd_basis(d_out);
  Mat m(d_out * d_out, d_in * d_in);
  for (int l = 0; l < d_in * d_in; ++l) {
    const CMat img = f(in[l]);
    for (int k = 0; k < d_out * d_out; ++k) m(k, l) = (out[k].adjoint() * img).trace().real();
  }
  return m;
}

// ---------------------------------------------------------------------------

inline bool member(const Vec& x, const ConeDescriptor& c, double tol = kPsdTol) {
  if (x.size() != c.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "vector length does not match " + c.name());
  if (c.kind == ConeKind::Psd) return min_eig(psd_unvec(x, c.n)) >= -tol;
  return x(0) >= vec_norm(x.tail(c.n), c.space) - tol;
}

/// A linear map between the ambient spaces of two cones.
struct ConeMap {
  Mat matrix;
  ConeDescriptor dom;
  ConeDescriptor cod;

  ConeMap() = default;
  ConeMap(Mat m, ConeDescriptor d, ConeDescriptor c) : matrix(std::move(m)), dom(d), cod(c) {
    if (matrix.rows() != cod.ambient_dim() || matrix.cols() != dom.ambient_dim())
      throw Error(ErrorCode::DimensionMismatch, "map shape does not match " + dom.name() + " -> " + cod.name());
  }

  /// The transpose, a map between the dual cones in reverse order.
  ConeMap transpose() const { return {matrix.transpose(), dual_cone(cod), dual_cone(dom)}; }
};

/// second * first.
inline ConeMap compose(const ConeMap& second, const ConeMap& first) {
  if (!(second.dom == first.cod)) throw Error(ErrorCode::DimensionMismatch, "maps are not composable");
  return {second.matrix * first.matrix, first.dom, second.cod};
}

/// A 2-tensor stored as a matrix with rows indexed by leg a and columns by leg b.
struct Tensor2 {
  Mat entries;
  ConeDescriptor a;
  ConeDescriptor b;

  Tensor2() = default;
  Tensor2(Mat e, ConeDescriptor la, ConeDescriptor lb) : entries(std::move(e)), a(la), b(lb) {
    if (entries.rows() != a.ambient_dim() || entries.cols() != b.ambient_dim())
      throw Error(ErrorCode::DimensionMismatch, "tensor shape does not match its legs");
  }

  Tensor2 swapped() const { return {entries.transpose(), b, a}; }
};

inline Mat lorentz_form(int n) {
  Mat j = -Mat::Identity(n + 1, n + 1);
  j(0, 0) = 1.0;
  return j;
}

inline Tensor2 identity_tensor(int n) {
  const auto l = ConeDescriptor::lorentz(n);
  return {Mat::Identity(n + 1, n + 1), l, l};
}

inline ConeMap j_map(int n) {
  const auto l = ConeDescriptor::lorentz(n);
  return {lorentz_form(n), l, l};
}

inline Tensor2 j_hat(int n) {
  const auto l = ConeDescriptor::lorentz(n);
  return {lorentz_form(n), l, l};
}

// ---------------------------------------------------------------------------
// Bloch ball: (t, x, y, z) -> (t I + x sx + y sy + z sz) / 2.

inline CMat bloch_forward(const Vec& p) {
  if (p.size() != 4) throw Error(ErrorCode::DimensionMismatch, "Bloch vectors have four coordinates");
  CMat h(2, 2);
  h(0, 0) = cplx(0.5 * (p(0) + p(3)), 0.0);
  h(1, 1) = cplx(0.5 * (p(0) - p(3)), 0.0);
  h(0, 1) = cplx(0.5 * p(1), -0.5 * p(2));
  h(1, 0) = cplx(0.5 * p(1), 0.5 * p(2));
  return h;
}

inline Vec bloch_inverse(const CMat& h) {
  if (h.rows() != 2 || h.cols() != 2) throw Error(ErrorCode::DimensionMismatch, "Bloch inverse needs a 2x2 matrix");
  Vec p(4);
  p(0) = (h(0, 0) + h(1, 1)).real();
  p(3) = (h(0, 0) - h(1, 1)).real();
  p(1) = (h(0, 1) + h(1, 0)).real();
  p(2) = (h(1, 0) - h(0, 1)).imag();
  return p;
}

/// The Bloch isomorphism as a map Lorentz(3) -> Psd(2) in PSD coordinates.
inline ConeMap bloch_map() {
  return {Mat::Identity(4, 4) / std::sqrt(2.0), ConeDescriptor::lorentz(3), ConeDescriptor::psd(2)};
}

// ---------------------------------------------------------------------------

namespace detail {

/// Quantities deciding positivity of a map P: L_n -> L_m.
struct LorentzPositivity {
  double image_slack;    // t - |x| of P e0
  double coimage_slack;  // t - |x| of P^T e0
  double sproc;          // max over lambda >= 0 of lambda_min(P^T J P - lambda J)
  double lambda;         // maximizer
  double scale;          // max(1, |P^T J P|)
};

inline double cone_slack(const Vec& v) { return v(0) - v.tail(v.size() - 1).norm(); }

/// Golden-section search for the concave function lambda -> lambda_min(G - lambda J).
/// The search stops early once the value reaches stop_above.
inline LorentzPositivity lorentz_positivity(const Mat& p, double stop_above = std::numeric_limits<double>::infinity()) {
  const int m = static_cast<int>(p.rows()) - 1;
  const int n = static_cast<int>(p.cols()) - 1;
  const Mat g = p.transpose() * lorentz_form(m) * p;
  const Mat jn = lorentz_form(n);
  auto f = [&](double lam) { return min_eig(Mat(g - lam * jn)); };
  const double gn = g.size() ? spectral_norm(g) : 0.0;
  double lo = 0.0;
  double hi = gn + 1.0;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + gn) && std::max(f1, f2) < stop_above; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  double best_l = f1 > f2 ? x1 : x2;
  double best = std::max(f1, f2);
  const double f0 = f(0.0);
  if (f0 > best) {
    best = f0;
    best_l = 0.0;
  }
  Vec e0m = Vec::Zero(m + 1);
  e0m(0) = 1.0;
  Vec e0n = Vec::Zero(n + 1);
  e0n(0) = 1.0;
  return {cone_slack(p * e0n), cone_slack(p.transpose() * e0m), best, best_l, std::max(1.0, gn)};
}

inline bool positive_from(const LorentzPositivity& r, const Mat& p, double tol) {
  const double pn = std::max(1.0, p.norm());
  return r.image_slack >= -tol * pn && r.coimage_slack >= -tol * pn && r.sproc >= -tol * r.scale;
}

inline bool interior_from(const LorentzPositivity& r, double margin) {
  return r.image_slack > 0.0 && r.sproc > margin * r.scale;
}

inline bool lorentz_positive(const Mat& p, double tol) { return positive_from(lorentz_positivity(p), p, tol); }

}  // namespace detail

/// Membership of z in L_n (x)max C, where leg a is Lorentz(n). C may be a
/// Lorentz cone or a cone over l1/linf/l2.
inline bool max_member_lorentz(const Tensor2& z, const ConeDescriptor& c, double tol = kPsdTol) {
  if (z.a.kind != ConeKind::Lorentz) throw Error(ErrorCode::Unsupported, "first leg must be a Lorentz cone");
  if (!(z.b == c)) throw Error(ErrorCode::DimensionMismatch, "second leg does not match the target cone");
  if (c.kind == ConeKind::Psd) throw Error(ErrorCode::Unsupported, "maximal tensor membership with a PSD leg");
  if (c.kind == ConeKind::Lorentz || c.space.family == Family::L2)
    return detail::lorentz_positive(z.entries.transpose(), tol);
  // Slice positivity f -> z^T f from L_n into C_X holds iff z (1, g) lies in
  // L_n for every extreme functional g of the dual ball.
  const auto funs = ball_extreme_points(dual_space(c.space));
  Vec h(c.n + 1);
  h(0) = 1.0;
  const double scale = std::max(1.0, z.entries.norm());
  for (const auto& g : funs) {
    h.tail(c.n) = g;
    if (detail::cone_slack(z.entries * h) < -tol * scale) return false;
  }
  return true;
}

/// A random element of the cone; with probability about one in five it lies
/// on the boundary.
inline Vec sample_member(const ConeDescriptor& c, Rng& rng) {
  if (c.kind == ConeKind::Psd) {
    const int rank = rng.integer(1, c.n);
    const CMat g = rng.normal_cmat(c.n, rank);
    return psd_vec(g * g.adjoint());
  }
  Vec out(c.n + 1);
  out.tail(c.n) = rng.normal_vec(c.n);
  const double base = vec_norm(out.tail(c.n), c.space);
  out(0) = rng.uniform() < 0.2 ? base : base * (1.0 + rng.uniform());
  return out;
}

}  // namespace conekit

#endif  // CONEKIT_CONES_HPP
