#ifndef CONEKIT_IDEALNORMS_HPP
#define CONEKIT_IDEALNORMS_HPP

/// \file idealnorms.hpp
/// Operator ideal norms over l1/l2/linf spaces: Hilbert-Schmidt, nuclear,
/// 2-summing, Hilbert-factorization and its trace dual.

#include <string>
#include <vector>

#include "conekit/sdp.hpp"
#include "conekit/spaces.hpp"

namespace conekit {

/// Solver tolerance passed to every norm SDP.
inline constexpr double kNormSolveTol = 1e-9;
/// Default tolerance for comparing a norm value against a threshold.
inline constexpr double kNormCompareTol = 1e-6;

/// Diagnostics for one norm evaluation.
struct NormInfo {
  std::string method = "closed_form";
  std::string status = "Optimal";
  int iterations = 0;
  double gap = 0.0;
  double psd_slack = 0.0;
};

namespace detail {

inline SdpSolution solve_norm_sdp(const SdpProblem& p, NormInfo* info, const std::string& method) {
  const SdpSolution sol = sdp_solve(p, kNormSolveTol);
  if (info) {
    info->method = method;
    info->status = to_string(sol.status);
    info->iterations = sol.iterations;
    info->gap = sol.gap;
    info->psd_slack = sol.psd_slack;
  }
  const double rel = std::abs(sol.value - sol.dual_bound) / (1.0 + std::abs(sol.value));
  const bool usable = sol.status == SdpStatus::Optimal || (sol.status == SdpStatus::MaxIterations && rel < 1e-7);
  if (!usable) throw Error(ErrorCode::SolverFailure, method + " SDP ended with status " + to_string(sol.status));
  return sol;
}

inline void set_closed_form(NormInfo* info, const std::string& method) {
  if (info) *info = NormInfo{method, "Optimal", 0, 0.0, 0.0};
}

/// Functionals spanning the dual-ball extreme points of a polytope space,
/// one row per +/- pair.
inline Mat dual_extreme_rows(const SpaceDescriptor& s) { return extreme_matrix(dual_space(s)).transpose(); }

/// Adds free off-diagonal variables for the principal block [offset, offset + size).
inline int add_free_offdiagonals(SdpProblem& p, int block, int offset, int size, int first_var) {
  int var = first_var;
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j) p.add_coefficient(var++, block, offset + i, offset + j, 1.0);
  return var;
}

inline int offdiag_count(int size) { return size * (size - 1) / 2; }

}  // namespace detail

inline double hs(const OperatorMatrix& u) {
  if (u.dom.family != Family::L2 || u.cod.family != Family::L2)
    throw Error(ErrorCode::Unsupported, "Hilbert-Schmidt norm needs Euclidean endpoints");
  return u.entries.norm();
}

/// Nuclear norm. Euclidean pairs use the trace norm; polytope pairs use the
/// linear program max Tr(u w) over ||w: cod -> dom|| <= 1.
inline double nuclear(const OperatorMatrix& u, NormInfo* info = nullptr) {
  if (u.dom.family == Family::L2 && u.cod.family == Family::L2) {
    detail::set_closed_form(info, "trace_norm");
    return trace_norm(u.entries);
  }
  if (!u.dom.polytope() || !u.cod.polytope())
    throw Error(ErrorCode::Unsupported, "nuclear norm between " + u.dom.name() + " and " + u.cod.name());
  const Mat cod_pts = extreme_matrix(u.cod);               // columns y_j in the ball of cod
  const Mat dom_fun = detail::dual_extreme_rows(u.dom);    // rows f_i in the ball of dom*
  if (u.entries.isZero(0.0)) {
    detail::set_closed_form(info, "zero");
    return 0.0;
  }
  const int n = u.dom.dim;
  const int m = u.cod.dim;
  const int p = static_cast<int>(dom_fun.rows());
  const int q = static_cast<int>(cod_pts.cols());
  // w is n x m, variable index w(a, b) -> a * m + b.
  SdpProblem prob(n * m, {SdpBlock{BlockKind::Nonneg, 2 * p * q}});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < m; ++b) prob.set_objective(a * m + b, -u.entries(b, a));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) {
      const int row = 2 * (i * q + j);
      prob.add_constant(0, row, row, 1.0);
      prob.add_constant(0, row + 1, row + 1, 1.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < m; ++b) {
          const double coef = dom_fun(i, a) * cod_pts(b, j);
          if (coef == 0.0) continue;
          prob.add_coefficient(a * m + b, 0, row, row, -coef);
          prob.add_coefficient(a * m + b, 0, row + 1, row + 1, coef);
        }
    }
  const SdpSolution sol = detail::solve_norm_sdp(prob, info, "nuclear_lp");
  return std::max(0.0, -sol.value);
}

/// 2-summing norm for maps into a Euclidean space.
inline double pi2(const OperatorMatrix& u, NormInfo* info = nullptr) {
  if (u.cod.family != Family::L2) throw Error(ErrorCode::Unsupported, "2-summing norm needs a Euclidean codomain");
  if (u.dom.family == Family::L2) {
    detail::set_closed_form(info, "hilbert_schmidt");
    return hs(u);
  }
  const int n = u.dom.dim;
  if (u.entries.isZero(0.0)) {
    detail::set_closed_form(info, "zero");
    return 0.0;
  }
  const Mat gram = u.entries.transpose() * u.entries;
  if (u.dom.family == Family::Linf) {
    // min sum(lambda) s.t. Diag(lambda) - u^T u >= 0
    SdpProblem prob(n, {SdpBlock{BlockKind::Psd, n}});
    for (int i = 0; i < n; ++i) {
      prob.set_objective(i, 1.0);
      prob.add_coefficient(i, 0, i, i, 1.0);
      for (int j = i; j < n; ++j) prob.add_constant(0, i, j, -gram(i, j));
    }
    const SdpSolution sol = detail::solve_norm_sdp(prob, info, "pietsch_diagonal_sdp");
    return std::sqrt(std::max(0.0, sol.value));
  }
  constexpr int kL1Cap = 12;
  if (n > kL1Cap) throw Error(ErrorCode::DimensionTooLarge, "2-summing norm on l1 beyond dimension 12");
  const auto signs = sign_representatives(n);
  const int k = static_cast<int>(signs.size());
  // min sum(mu) s.t. sum mu_s s s^T - u^T u >= 0, mu >= 0
  SdpProblem prob(k, {SdpBlock{BlockKind::Psd, n}, SdpBlock{BlockKind::Nonneg, k}});
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) prob.add_constant(0, i, j, -gram(i, j));
  for (int s = 0; s < k; ++s) {
    prob.set_objective(s, 1.0);
    prob.add_coefficient(s, 1, s, s, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) prob.add_coefficient(s, 0, i, j, signs[s](i) * signs[s](j));
  }
  const SdpSolution sol = detail::solve_norm_sdp(prob, info, "pietsch_sign_sdp");
  return std::sqrt(std::max(0.0, sol.value));
}

/// Hilbert-factorization norm. With a Euclidean endpoint it is the operator
/// norm; for polytope pairs it is the Gram SDP over extreme points.
inline double gamma2(const OperatorMatrix& u, NormInfo* info = nullptr) {
  if (!u.dom.polytope() || !u.cod.polytope()) {
    detail::set_closed_form(info, "operator_norm");
    return op_norm(u);
  }
  const Mat dom_pts = extreme_matrix(u.dom);               // x_j, columns
  const Mat cod_fun = detail::dual_extreme_rows(u.cod);    // y*_i, rows
  const int p = static_cast<int>(dom_pts.cols());
  const int q = static_cast<int>(cod_fun.rows());
  if (p + q > kMaxPsdBlockDim)
    throw Error(ErrorCode::DimensionTooLarge, "extreme-point Gram block exceeds 64");
  if (u.entries.isZero(0.0)) {
    detail::set_closed_form(info, "zero");
    return 0.0;
  }
  const Mat cross = cod_fun * u.entries * dom_pts;  // q x p
  // Block [[A, cross^T], [cross, B]] with diag = c, free off-diagonals.
  const int vars = 1 + detail::offdiag_count(p) + detail::offdiag_count(q);
  SdpProblem prob(vars, {SdpBlock{BlockKind::Psd, p + q}});
  prob.set_objective(0, 1.0);
  for (int i = 0; i < p + q; ++i) prob.add_coefficient(0, 0, i, i, 1.0);
  int next = detail::add_free_offdiagonals(prob, 0, 0, p, 1);
  detail::add_free_offdiagonals(prob, 0, p, q, next);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < p; ++j)
      if (cross(i, j) != 0.0) prob.add_constant(0, j, p + i, cross(i, j));
  const SdpSolution sol = detail::solve_norm_sdp(prob, info, "gram_sdp");
  return std::max(0.0, sol.value);
}

/// Trace dual of gamma2: max Tr(v w) over w: cod -> dom with gamma2(w) <= 1.
inline double gamma2_star(const OperatorMatrix& v, NormInfo* info = nullptr) {
  const SpaceDescriptor& x = v.dom;
  const SpaceDescriptor& y = v.cod;
  if (x.family == Family::L2 && y.family == Family::L2) {
    detail::set_closed_form(info, "trace_norm");
    return trace_norm(v.entries);
  }
  // w: y -> x. Row functionals on x-side, points on y-side; Euclidean sides
  // use a fixed identity block instead.
  const bool x_fixed = x.family == Family::L2;
  const bool y_fixed = y.family == Family::L2;
  const Mat fun = x_fixed ? Mat::Identity(x.dim, x.dim) : detail::dual_extreme_rows(x);
  const Mat pts = y_fixed ? Mat::Identity(y.dim, y.dim) : extreme_matrix(y);
  const int p = static_cast<int>(fun.rows());
  const int q = static_cast<int>(pts.cols());
  if (p + q > kMaxPsdBlockDim)
    throw Error(ErrorCode::DimensionTooLarge, "extreme-point Gram block exceeds 64");
  if (v.entries.isZero(0.0)) {
    detail::set_closed_form(info, "zero");
    return 0.0;
  }
  const int n = x.dim;
  const int m = y.dim;
  const int wvars = n * m;  // w(a, b) -> a * m + b
  const int vars = wvars + (x_fixed ? 0 : detail::offdiag_count(p)) + (y_fixed ? 0 : detail::offdiag_count(q));
  SdpProblem prob(vars, {SdpBlock{BlockKind::Psd, p + q}});
  for (int i = 0; i < p + q; ++i) prob.add_constant(0, i, i, 1.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < m; ++b) {
      const int var = a * m + b;
      prob.set_objective(var, -v.entries(b, a));
      for (int i = 0; i < p; ++i) {
        if (fun(i, a) == 0.0) continue;
        for (int j = 0; j < q; ++j) {
          const double coef = fun(i, a) * pts(b, j);
          if (coef != 0.0) prob.add_coefficient(var, 0, i, p + j, coef);
        }
      }
    }
  int next = wvars;
  if (!x_fixed) next = detail::add_free_offdiagonals(prob, 0, 0, p, next);
  if (!y_fixed) detail::add_free_offdiagonals(prob, 0, p, q, next);
  const SdpSolution sol = detail::solve_norm_sdp(prob, info, "gram_support_sdp");
  return std::max(0.0, -sol.value);
}

/// v = outer * diag * inner with inner: dom -> linf^N of norm <= 1,
/// diag: linf^N -> l2^N diagonal, outer: l2^N -> cod of norm <= 1.
struct PietschFactorization {
  OperatorMatrix inner;
  Vec diag;
  OperatorMatrix outer;

  Mat product() const { return outer.entries * diag.asDiagonal() * inner.entries; }
};

inline PietschFactorization pietsch_factorization(const OperatorMatrix& v) {
  if (v.cod.family != Family::L2) throw Error(ErrorCode::Unsupported, "Pietsch factorization needs a Euclidean codomain");
  const int n = v.dom.dim;
  const int m = v.cod.dim;
  auto pinv_diag = [](const Vec& d) {
    Vec out = Vec::Zero(d.size());
    const double cut = 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff());
    for (int i = 0; i < d.size(); ++i)
      if (std::abs(d(i)) > cut) out(i) = 1.0 / d(i);
    return out;
  };
  if (v.dom.family == Family::L2) {
    // v = U S V^T; inner = V^T: l2 -> linf (rows unit), diag = S, outer = U.
    const Svd s = svd(v.entries);
    const int r = static_cast<int>(s.sigma.size());
    Vec d = Vec::Zero(n);
    d.head(r) = s.sigma;
    Mat outer = Mat::Zero(m, n);
    outer.leftCols(std::min(m, n)) = s.u.leftCols(std::min(m, n));
    return {OperatorMatrix(s.v.transpose(), v.dom, SpaceDescriptor::linf(n)), d,
            OperatorMatrix(outer, SpaceDescriptor::l2(n), v.cod)};
  }
  if (v.dom.family == Family::Linf) {
    const Mat gram = v.entries.transpose() * v.entries;
    Vec lambda = Vec::Zero(n);
    if (!v.entries.isZero(0.0)) {
      SdpProblem prob(n, {SdpBlock{BlockKind::Psd, n}});
      for (int i = 0; i < n; ++i) {
        prob.set_objective(i, 1.0);
        prob.add_coefficient(i, 0, i, i, 1.0);
        for (int j = i; j < n; ++j) prob.add_constant(0, i, j, -gram(i, j));
      }
      lambda = detail::solve_norm_sdp(prob, nullptr, "pietsch_diagonal_sdp").point.cwiseMax(0.0);
    }
    const Vec d = lambda.cwiseSqrt();
    Mat outer = v.entries * pinv_diag(d).asDiagonal();
    const double on = spectral_norm(outer);
    if (on > 1.0) outer /= on;
    const Vec dd = d * std::max(1.0, on);
    return {OperatorMatrix(Mat::Identity(n, n), v.dom, SpaceDescriptor::linf(n)), dd,
            OperatorMatrix(outer, SpaceDescriptor::l2(n), v.cod)};
  }
  // l1 domain: measure on sign vectors; inner evaluates x against each sign vector.
  const auto signs = sign_representatives(n);
  const int k = static_cast<int>(signs.size());
  Mat eval(k, n);
  for (int s = 0; s < k; ++s) eval.row(s) = signs[s].transpose();
  Vec mu = Vec::Zero(k);
  if (!v.entries.isZero(0.0)) {
    const Mat gram = v.entries.transpose() * v.entries;
    SdpProblem prob(k, {SdpBlock{BlockKind::Psd, n}, SdpBlock{BlockKind::Nonneg, k}});
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) prob.add_constant(0, i, j, -gram(i, j));
    for (int s = 0; s < k; ++s) {
      prob.set_objective(s, 1.0);
      prob.add_coefficient(s, 1, s, s, 1.0);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) prob.add_coefficient(s, 0, i, j, signs[s](i) * signs[s](j));
    }
    mu = detail::solve_norm_sdp(prob, nullptr, "pietsch_sign_sdp").point.cwiseMax(0.0);
  }
  const Vec d = mu.cwiseSqrt();
  const Mat scaled = d.asDiagonal() * eval;  // k x n
  Mat outer = v.entries * Eigen::CompleteOrthogonalDecomposition<Mat>(scaled).pseudoInverse();
  const double on = outer.size() ? spectral_norm(outer) : 0.0;
  if (on > 1.0) outer /= on;
  const Vec dd = d * std::max(1.0, on);
  return {OperatorMatrix(eval, v.dom, SpaceDescriptor::linf(k)), dd,
          OperatorMatrix(outer, SpaceDescriptor::l2(k), v.cod)};
}

}  // namespace conekit

#endif  // CONEKIT_IDEALNORMS_HPP
