#ifndef CONEKIT_NUMERICS_HPP
#define CONEKIT_NUMERICS_HPP

/// \file numerics.hpp
/// Dense linear algebra wrappers and a portable seeded random source.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "conekit/errors.hpp"

namespace conekit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

/// Global PSD tolerance; membership accepts min eigenvalue >= -kPsdTol * (1 + |M|).
inline constexpr double kPsdTol = 1e-9;

class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Mat& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "SymMatrix needs a square matrix");
    m_ = 0.5 * (m + m.transpose());
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Mat m_;
};

class HermMatrix {
 public:
  HermMatrix() = default;
  explicit HermMatrix(const CMat& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "HermMatrix needs a square matrix");
    m_ = 0.5 * (m + m.adjoint());
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMat& mat() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

 private:
  CMat m_;
};

struct SymEig {
  Vec values;    // descending
  Mat vectors;   // columns orthonormal, matching values
};

struct HermEig {
  Vec values;    // descending
  CMat vectors;  // columns orthonormal, matching values
};

struct Svd {
  Mat u;      // rows x rows, orthogonal
  Vec sigma;  // min(rows, cols), descending
  Mat v;      // cols x cols, orthogonal
};

inline SymEig sym_eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m.mat());
  const int n = m.dim();
  SymEig out{Vec(n), Mat(n, n)};
  for (int i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

inline HermEig herm_eig(const HermMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m.mat());
  const int n = m.dim();
  HermEig out{Vec(n), CMat(n, n)};
  for (int i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

inline Svd svd(const Mat& m) {
  Eigen::JacobiSVD<Mat> s(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Svd{s.matrixU(), s.singularValues(), s.matrixV()};
}

inline Vec singular_values(const Mat& m) {
  if (m.size() == 0) return Vec();
  return Eigen::JacobiSVD<Mat>(m).singularValues();
}

inline double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

inline double trace_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m).sum();
}

/// Smallest eigenvalue of the symmetric part of a square matrix.
inline double min_eig(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double min_eig(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline bool is_psd(const Mat& m, double tol = kPsdTol) {
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  return min_eig(m) >= -tol * (1.0 + scale);
}

/// Block-diagonal sum a (+) b.
inline Mat direct_sum(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// t (+) m, the map (s, x) -> (t s, m x).
inline Mat direct_sum(double t, const Mat& m) {
  Mat head(1, 1);
  head(0, 0) = t;
  return direct_sum(head, m);
}

/// Splitmix64 step; used to derive independent per-trial seeds from a base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seeded generator. Distributions are computed from raw engine output so that
/// sequences do not depend on the standard library's distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(eng_() % span);
  }

  double sign() { return (eng_() >> 63) ? 1.0 : -1.0; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  Vec normal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  Mat normal_mat(int rows, int cols) {
    Mat m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  CMat normal_cmat(int rows, int cols) {
    CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) {
        const double re = normal();
        m(i, j) = cplx(re, normal());
      }
    return m;
  }

  Vec unit_vec(int n) {
    Vec v = normal_vec(n);
    double nv = v.norm();
    while (nv == 0.0) {
      v = normal_vec(n);
      nv = v.norm();
    }
    return v / nv;
  }

  /// Haar-distributed orthogonal matrix (QR with sign correction).
  Mat orthogonal(int n) {
    if (n == 0) return Mat(0, 0);
    Eigen::HouseholderQR<Mat> qr(normal_mat(n, n));
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR();
    for (int i = 0; i < n; ++i)
      if (r(i, i) < 0) q.col(i) = -q.col(i);
    return q;
  }

  CMat unitary(int n) {
    Eigen::HouseholderQR<CMat> qr(normal_cmat(n, n));
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR();
    for (int i = 0; i < n; ++i) {
      const double a = std::abs(r(i, i));
      if (a > 0) q.col(i) *= r(i, i) / a;
    }
    return q;
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace conekit

#endif  // CONEKIT_NUMERICS_HPP
