#ifndef CONEKIT_SDP_HPP
#define CONEKIT_SDP_HPP

/// \file sdp.hpp
/// Dense primal-dual interior-point solver for linear matrix inequalities
///
///     minimize  c^T y   subject to  F0 + sum_i y_i F_i  >= 0  (blockwise)
///
/// Blocks are either PSD blocks or nonnegative-orthant blocks (diagonal).
/// Internally the problem is the dual of the standard form
///     min <C, X>  s.t.  <A_i, X> = b_i,  X >= 0
/// with C = F0, A_i = -F_i, b = -c, solved by an infeasible-start
/// predictor-corrector method in the HKM direction.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "conekit/numerics.hpp"

namespace conekit {

enum class SdpStatus { Optimal, Infeasible, Unbounded, MaxIterations };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::Unbounded: return "Unbounded";
    case SdpStatus::MaxIterations: return "MaxIterations";
  }
  return "Unknown";
}

enum class BlockKind { Psd, Nonneg };

struct SdpBlock {
  BlockKind kind;
  int dim;
};

/// One symmetric matrix entry; off-diagonal entries are mirrored.
struct SdpEntry {
  int row;
  int col;
  double value;
};

inline constexpr int kMaxPsdBlockDim = 64;

class SdpProblem {
 public:
  SdpProblem(int num_vars, std::vector<SdpBlock> blocks)
      : m_(num_vars), blocks_(std::move(blocks)), c_(Vec::Zero(num_vars)), f0_(blocks_.size()),
        f_(blocks_.size(), std::vector<std::vector<SdpEntry>>(static_cast<std::size_t>(num_vars))) {
    if (num_vars < 0) throw Error(ErrorCode::DimensionMismatch, "negative variable count");
    int psd = 0;
    for (const auto& b : blocks_) {
      if (b.dim < 1) throw Error(ErrorCode::DimensionMismatch, "empty SDP block");
      if (b.kind == BlockKind::Psd) psd += b.dim;
    }
    if (psd > kMaxPsdBlockDim)
      throw Error(ErrorCode::DimensionTooLarge, "total PSD block dimension " + std::to_string(psd) + " exceeds 64");
  }

  int num_vars() const { return m_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<SdpBlock>& blocks() const { return blocks_; }
  const Vec& objective() const { return c_; }
  const std::vector<SdpEntry>& constant(int block) const { return f0_[block]; }
  const std::vector<SdpEntry>& coefficient(int var, int block) const { return f_[block][var]; }

  void set_objective(int var, double c) { c_(var) = c; }

  void add_constant(int block, int row, int col, double value) {
    f0_[block].push_back(normalized(block, row, col, value));
  }

  void add_coefficient(int var, int block, int row, int col, double value) {
    if (var < 0 || var >= m_) throw Error(ErrorCode::DimensionMismatch, "variable index out of range");
    f_[block][var].push_back(normalized(block, row, col, value));
  }

  /// Dense value of F0 + sum y_i F_i on one block (diagonal matrix for orthant blocks).
  Mat block_value(int block, const Vec& y) const {
    const int d = blocks_[block].dim;
    Mat out = Mat::Zero(d, d);
    for (const auto& e : f0_[block]) add_entry(out, e, 1.0);
    for (int i = 0; i < m_; ++i)
      if (y(i) != 0.0)
        for (const auto& e : f_[block][i]) add_entry(out, e, y(i));
    return out;
  }

  /// Smallest eigenvalue over all blocks of F0 + sum y_i F_i.
  double min_slack(const Vec& y) const {
    double best = std::numeric_limits<double>::infinity();
    for (int b = 0; b < num_blocks(); ++b) {
      const Mat v = block_value(b, y);
      best = std::min(best, blocks_[b].kind == BlockKind::Psd ? min_eig(v) : v.diagonal().minCoeff());
    }
    return best;
  }

  static void add_entry(Mat& out, const SdpEntry& e, double scale) {
    out(e.row, e.col) += scale * e.value;
    if (e.row != e.col) out(e.col, e.row) += scale * e.value;
  }

 private:
  SdpEntry normalized(int block, int row, int col, double value) const {
    if (block < 0 || block >= num_blocks()) throw Error(ErrorCode::DimensionMismatch, "block index out of range");
    const int d = blocks_[block].dim;
    if (row < 0 || col < 0 || row >= d || col >= d) throw Error(ErrorCode::DimensionMismatch, "entry out of range");
    if (blocks_[block].kind == BlockKind::Nonneg && row != col)
      throw Error(ErrorCode::DimensionMismatch, "orthant blocks take diagonal entries only");
    return row <= col ? SdpEntry{row, col, value} : SdpEntry{col, row, value};
  }

  int m_;
  std::vector<SdpBlock> blocks_;
  Vec c_;
  std::vector<std::vector<SdpEntry>> f0_;
  std::vector<std::vector<std::vector<SdpEntry>>> f_;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::MaxIterations;
  double value = 0.0;       // c^T y at the returned point
  Vec point;                // y
  double psd_slack = 0.0;   // min eigenvalue of F0 + sum y_i F_i
  double dual_bound = 0.0;  // -<F0, X>, a lower bound on the optimum when X is feasible
  std::vector<Mat> dual;    // X per block (orthant blocks as column vectors)
  int iterations = 0;
  double gap = 0.0;
};

namespace detail {

struct Triple {
  int r;
  int c;
  double v;
};

// Block state: PSD blocks store dim x dim matrices, orthant blocks store dim x 1 vectors.
struct SdpWork {
  const SdpProblem& p;
  int m;
  int nb;
  std::vector<Mat> C;
  // Expanded (both triangles) standard-form constraint matrices A_i = -F_i, per block per variable.
  std::vector<std::vector<std::vector<Triple>>> A;
  std::vector<std::vector<int>> active;
  // Orthant rows: for each block and index k, list of (var, coefficient).
  std::vector<std::vector<std::vector<std::pair<int, double>>>> rows;
  Vec b;

  explicit SdpWork(const SdpProblem& prob) : p(prob), m(prob.num_vars()), nb(prob.num_blocks()) {
    C.resize(nb);
    A.assign(nb, std::vector<std::vector<Triple>>(m));
    active.resize(nb);
    rows.resize(nb);
    b = -p.objective();
    for (int k = 0; k < nb; ++k) {
      const auto& blk = p.blocks()[k];
      const bool psd = blk.kind == BlockKind::Psd;
      Mat f0 = p.block_value(k, Vec::Zero(m));
      C[k] = psd ? f0 : Mat(f0.diagonal());
      if (!psd) rows[k].resize(blk.dim);
      for (int i = 0; i < m; ++i) {
        Mat dense = Mat::Zero(blk.dim, blk.dim);
        for (const auto& e : p.coefficient(i, k)) SdpProblem::add_entry(dense, e, -1.0);
        auto& list = A[k][i];
        for (int c = 0; c < blk.dim; ++c)
          for (int r = 0; r < blk.dim; ++r)
            if (dense(r, c) != 0.0) list.push_back({r, c, dense(r, c)});
        if (!list.empty()) active[k].push_back(i);
        if (!psd)
          for (const auto& t : list) rows[k][t.r].push_back({i, t.v});
      }
    }
  }

  bool psd(int k) const { return p.blocks()[k].kind == BlockKind::Psd; }

  static double inner(const std::vector<Triple>& a, const Mat& x, bool psd_block) {
    double s = 0.0;
    if (psd_block)
      for (const auto& t : a) s += t.v * x(t.c, t.r);
    else
      for (const auto& t : a) s += t.v * x(t.r, 0);
    return s;
  }

  Vec apply(const std::vector<Mat>& X) const {
    Vec out = Vec::Zero(m);
    for (int k = 0; k < nb; ++k)
      for (int i : active[k]) out(i) += inner(A[k][i], X[k], psd(k));
    return out;
  }

  std::vector<Mat> adjoint(const Vec& y) const {
    std::vector<Mat> out(nb);
    for (int k = 0; k < nb; ++k) {
      out[k] = Mat::Zero(C[k].rows(), C[k].cols());
      for (int i : active[k]) {
        if (y(i) == 0.0) continue;
        if (psd(k))
          for (const auto& t : A[k][i]) out[k](t.r, t.c) += y(i) * t.v;
        else
          for (const auto& t : A[k][i]) out[k](t.r, 0) += y(i) * t.v;
      }
    }
    return out;
  }
};

inline double frob_dot(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

inline double frob_norm(const std::vector<Mat>& a) { return std::sqrt(frob_dot(a, a)); }

// Largest step keeping X + alpha dX inside the cone (infinity if unbounded).
inline double max_step(const Mat& X, const Mat& dX, bool psd_block) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!psd_block) {
    double a = inf;
    for (int i = 0; i < X.rows(); ++i)
      if (dX(i, 0) < 0) a = std::min(a, -X(i, 0) / dX(i, 0));
    return a;
  }
  Eigen::LLT<Mat> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto L = llt.matrixL();
  Mat w = L.solve(dX);
  w = L.solve(w.transpose()).transpose();
  const double lmin = min_eig(w);
  return lmin < 0 ? -1.0 / lmin : inf;
}

}  // namespace detail

/// Solves the LMI problem. Never throws for numerical reasons; the status
/// field distinguishes optimal, infeasible, unbounded and capped runs.
inline SdpSolution sdp_solve(const SdpProblem& p, double tol = 1e-8, int max_iter = 500) {
  using detail::frob_dot;
  using detail::frob_norm;
  detail::SdpWork w(p);
  const int m = w.m;
  const int nb = w.nb;

  int n = 0;
  double normA = 0.0;
  double xi_scale = 0.0;
  for (int k = 0; k < nb; ++k) n += p.blocks()[k].dim;
  for (int i = 0; i < m; ++i) {
    double a2 = 0.0;
    for (int k = 0; k < nb; ++k)
      for (const auto& t : w.A[k][i]) a2 += t.v * t.v;
    const double ai = std::sqrt(a2);
    normA = std::max(normA, ai);
    xi_scale = std::max(xi_scale, (1.0 + std::abs(w.b(i))) / (1.0 + ai));
  }
  const double normC = frob_norm(w.C);
  const double normB = w.b.norm();
  const double sqn = std::sqrt(static_cast<double>(n));
  const double xi = std::max({10.0, sqn, sqn * xi_scale});
  const double eta = std::max({10.0, sqn, normA, normC});

  std::vector<Mat> X(nb), Z(nb);
  for (int k = 0; k < nb; ++k) {
    const int d = p.blocks()[k].dim;
    if (w.psd(k)) {
      X[k] = xi * Mat::Identity(d, d);
      Z[k] = eta * Mat::Identity(d, d);
    } else {
      X[k] = Vec::Constant(d, xi);
      Z[k] = Vec::Constant(d, eta);
    }
  }
  Vec y = Vec::Zero(m);

  SdpSolution sol;
  sol.status = SdpStatus::MaxIterations;
  int stalls = 0;

  auto finish = [&](SdpStatus status, int iters) {
    sol.status = status;
    sol.point = y;
    sol.value = p.objective().dot(y);
    sol.psd_slack = p.min_slack(y);
    sol.dual = X;
    sol.dual_bound = -frob_dot(w.C, X);
    sol.iterations = iters;
    sol.gap = frob_dot(X, Z);
    return sol;
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    const Vec AX = w.apply(X);
    const Vec rp = w.b - AX;
    const std::vector<Mat> ATy = w.adjoint(y);
    std::vector<Mat> Rd(nb);
    for (int k = 0; k < nb; ++k) Rd[k] = w.C[k] - Z[k] - ATy[k];

    const double pobj = frob_dot(w.C, X);
    const double dobj = w.b.dot(y);
    const double xz = frob_dot(X, Z);
    const double mu = xz / n;
    const double pinf = rp.norm() / (1.0 + normB);
    const double dinf = frob_norm(Rd) / (1.0 + normC);
    const double relgap = std::max(xz, std::abs(pobj - dobj)) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (pinf < tol && dinf < tol && relgap < tol) return finish(SdpStatus::Optimal, iter);
    if (pobj < 0 && AX.norm() / -pobj < 1e-9 && frob_norm(X) > 1e6 * xi)
      return finish(SdpStatus::Infeasible, iter);
    if (dobj > 0) {
      std::vector<Mat> ray(nb);
      for (int k = 0; k < nb; ++k) ray[k] = ATy[k] + Z[k];
      if (frob_norm(ray) / dobj < 1e-9 && y.norm() > 1e6) return finish(SdpStatus::Unbounded, iter);
    }

    // Inverse of Z per block and the Schur complement M_ij = Tr(A_i X A_j Z^-1).
    std::vector<Mat> Zinv(nb);
    bool ok = true;
    for (int k = 0; k < nb; ++k) {
      if (w.psd(k)) {
        Eigen::LLT<Mat> llt(Z[k]);
        if (llt.info() != Eigen::Success) {
          ok = false;
          break;
        }
        Zinv[k] = llt.solve(Mat::Identity(Z[k].rows(), Z[k].cols()));
        Zinv[k] = 0.5 * (Zinv[k] + Zinv[k].transpose());
      } else {
        Zinv[k] = Z[k].cwiseInverse();
      }
    }
    if (!ok) return finish(SdpStatus::MaxIterations, iter);

    Mat M = Mat::Zero(m, m);
    for (int k = 0; k < nb; ++k) {
      const auto& act = w.active[k];
      if (!w.psd(k)) {
        const Vec ratio = X[k].cwiseProduct(Zinv[k]);
        for (std::size_t r = 0; r < w.rows[k].size(); ++r) {
          const auto& row = w.rows[k][r];
          for (const auto& [i, ai] : row)
            for (const auto& [j, aj] : row) M(i, j) += ai * aj * ratio(static_cast<Eigen::Index>(r));
        }
        continue;
      }
      const Mat& Xk = X[k];
      const Mat& Zi = Zinv[k];
      const int d = static_cast<int>(Xk.rows());
      std::vector<Mat> G(m);
      std::vector<char> dense(m, 0);
      for (int i : act) {
        if (static_cast<int>(w.A[k][i].size()) > 2 * d) {
          dense[i] = 1;
          Mat T = Mat::Zero(d, d);
          for (const auto& t : w.A[k][i]) T.row(t.r) += t.v * Zi.row(t.c);
          G[i] = Xk * T;
        }
      }
      for (std::size_t a = 0; a < act.size(); ++a) {
        const int i = act[a];
        const auto& Ai = w.A[k][i];
        for (std::size_t bidx = a; bidx < act.size(); ++bidx) {
          const int j = act[bidx];
          const auto& Aj = w.A[k][j];
          double s = 0.0;
          if (dense[j]) {
            for (const auto& t : Ai) s += t.v * G[j](t.c, t.r);
          } else if (dense[i]) {
            for (const auto& t : Aj) s += t.v * G[i](t.c, t.r);
          } else {
            // Tr(A_i X A_j Zinv) = sum A_i(a,b) X(b,a') A_j(a',b') Zinv(b',a)
            for (const auto& ti : Ai)
              for (const auto& tj : Aj) s += ti.v * tj.v * Xk(ti.c, tj.r) * Zi(tj.c, ti.r);
          }
          M(i, j) += s;
          if (i != j) M(j, i) += s;
        }
      }
    }

    Eigen::LLT<Mat> schur(M);
    Eigen::LDLT<Mat> schur_ldlt;
    const bool use_llt = schur.info() == Eigen::Success;
    if (!use_llt) {
      schur_ldlt.compute(M + 1e-14 * (1.0 + M.diagonal().cwiseAbs().maxCoeff()) * Mat::Identity(m, m));
      if (schur_ldlt.info() != Eigen::Success) return finish(SdpStatus::MaxIterations, iter);
    }
    auto solve = [&](const Vec& rhs) -> Vec { return use_llt ? Vec(schur.solve(rhs)) : Vec(schur_ldlt.solve(rhs)); };

    // Direction for complementarity target Rc = sigma mu I - XZ - corr.
    auto direction = [&](double sigma_mu, const std::vector<Mat>* dXa, const std::vector<Mat>* dZa,
                         std::vector<Mat>& dX, Vec& dy, std::vector<Mat>& dZ) {
      std::vector<Mat> hX(nb);
      for (int k = 0; k < nb; ++k) {
        if (w.psd(k)) {
          Mat h = sigma_mu * Zinv[k] - X[k] - X[k] * Rd[k] * Zinv[k];
          if (dXa) h -= (*dXa)[k] * (*dZa)[k] * Zinv[k];
          hX[k] = h;
        } else {
          Vec h = (Vec::Constant(X[k].rows(), sigma_mu) - X[k].cwiseProduct(Z[k]) - X[k].cwiseProduct(Rd[k]))
                      .cwiseProduct(Zinv[k]);
          if (dXa) h -= (*dXa)[k].cwiseProduct((*dZa)[k]).cwiseProduct(Zinv[k]);
          hX[k] = h;
        }
      }
      dy = solve(rp - w.apply(hX));
      const std::vector<Mat> ATdy = w.adjoint(dy);
      dX.assign(nb, Mat());
      dZ.assign(nb, Mat());
      for (int k = 0; k < nb; ++k) {
        dZ[k] = Rd[k] - ATdy[k];
        if (w.psd(k)) {
          Mat d = hX[k] + X[k] * ATdy[k] * Zinv[k];
          dX[k] = 0.5 * (d + d.transpose());
        } else {
          dX[k] = hX[k] + X[k].cwiseProduct(ATdy[k]).cwiseProduct(Zinv[k]);
        }
      }
    };

    auto steps = [&](const std::vector<Mat>& dX, const std::vector<Mat>& dZ) {
      double ap = std::numeric_limits<double>::infinity();
      double ad = ap;
      for (int k = 0; k < nb; ++k) {
        ap = std::min(ap, detail::max_step(X[k], dX[k], w.psd(k)));
        ad = std::min(ad, detail::max_step(Z[k], dZ[k], w.psd(k)));
      }
      return std::pair<double, double>{ap, ad};
    };

    std::vector<Mat> dXa, dZa;
    Vec dya;
    direction(0.0, nullptr, nullptr, dXa, dya, dZa);
    auto [apa, ada] = steps(dXa, dZa);
    apa = std::min(1.0, apa);
    ada = std::min(1.0, ada);
    double xz_aff = 0.0;
    for (int k = 0; k < nb; ++k)
      xz_aff += (X[k] + apa * dXa[k]).cwiseProduct(Z[k] + ada * dZa[k]).sum();
    const double mu_aff = std::max(0.0, xz_aff / n);
    double sigma = std::pow(mu_aff / mu, 3);
    sigma = std::clamp(sigma, 0.0, 1.0);

    std::vector<Mat> dX, dZ;
    Vec dy;
    direction(sigma * mu, &dXa, &dZa, dX, dy, dZ);
    auto [ap, ad] = steps(dX, dZ);
    const double gamma = iter == 0 ? 0.9 : 0.98;
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);

    if (ap < 1e-12 && ad < 1e-12) {
      if (++stalls >= 5) return finish(SdpStatus::MaxIterations, iter);
    } else {
      stalls = 0;
    }

    for (int k = 0; k < nb; ++k) {
      X[k] += ap * dX[k];
      Z[k] += ad * dZ[k];
      if (w.psd(k)) {
        X[k] = 0.5 * (X[k] + X[k].transpose());
        Z[k] = 0.5 * (Z[k] + Z[k].transpose());
      }
    }
    y += ad * dy;
  }
  return finish(SdpStatus::MaxIterations, max_iter);
}

}  // namespace conekit

#endif  // CONEKIT_SDP_HPP
