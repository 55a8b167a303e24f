#ifndef CONEKIT_CLASSIFY_HPP
#define CONEKIT_CLASSIFY_HPP

/// \file classify.hpp
/// Map-class verdicts for central maps via ideal norms, and sampled checks for
/// general maps through positive legs into and out of Lorentz cones.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "conekit/idealnorms.hpp"
#include "conekit/lorentzmaps.hpp"

namespace conekit {

inline constexpr double kClassifyTol = 1e-6;

/// lambda (+) u acting as (t, x) -> (lambda t, u x) between cones over normed spaces.
struct CentralMap {
  double lambda = 1.0;
  OperatorMatrix u;

  ConeMap to_cone_map() const {
    return {direct_sum(lambda, u.entries), ConeDescriptor::over(u.dom), ConeDescriptor::over(u.cod)};
  }
};

enum class Verdict { True, False, Unsupported };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Unsupported: return "unsupported";
  }
  return "?";
}

enum class MapClass { Positive, EB, LorFact, LorEB, LorEAIntoLorentz, MaxEA };

inline const char* to_string(MapClass c) {
  switch (c) {
    case MapClass::Positive: return "Positive";
    case MapClass::EB: return "EB";
    case MapClass::LorFact: return "LorFact";
    case MapClass::LorEB: return "LorEB";
    case MapClass::LorEAIntoLorentz: return "LorEAIntoLorentz";
    case MapClass::MaxEA: return "MaxEA";
  }
  return "?";
}

struct ClassEntry {
  MapClass cls = MapClass::Positive;
  Verdict verdict = Verdict::Unsupported;
  double value = 0.0;      // certifying norm value (NaN when unsupported)
  double threshold = 0.0;  // lambda
  double tolerance = 0.0;
  std::string norm;        // which norm certifies the class
  std::string anchor;      // the characterization used
  std::string note;        // reason for Unsupported, if any
};

struct ClassificationReport {
  double lambda = 0.0;
  std::vector<ClassEntry> entries;

  const ClassEntry& at(MapClass c) const {
    for (const auto& e : entries)
      if (e.cls == c) return e;
    throw Error(ErrorCode::Unsupported, std::string("class missing from report: ") + to_string(c));
  }
};

inline ClassificationReport classify_central(const CentralMap& m, double tol = kClassifyTol) {
  ClassificationReport rep;
  rep.lambda = m.lambda;
  const bool cod_euclid = m.u.cod.family == Family::L2;
  const bool both_euclid = cod_euclid && m.u.dom.family == Family::L2;
  auto run = [&](MapClass cls, const char* norm, const char* anchor, bool supported, const char* why, auto&& fn) {
    ClassEntry e;
    e.cls = cls;
    e.threshold = m.lambda;
    e.tolerance = tol;
    e.norm = norm;
    e.anchor = anchor;
    e.value = std::numeric_limits<double>::quiet_NaN();
    if (!supported) {
      e.note = why;
    } else {
      try {
        e.value = fn();
        e.verdict = e.value <= m.lambda + tol ? Verdict::True : Verdict::False;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::Unsupported && err.code() != ErrorCode::DimensionTooLarge &&
            err.code() != ErrorCode::SolverFailure)
          throw;
        e.note = err.what();
      }
    }
    rep.entries.push_back(std::move(e));
  };
  run(MapClass::Positive, "op", "central map positive iff ||u|| <= lambda", true, "", [&] { return op_norm(m.u); });
  run(MapClass::EB, "nuc", "central map entanglement breaking iff Nuc(u) <= lambda", true, "",
      [&] { return nuclear(m.u); });
  run(MapClass::LorFact, "gamma2", "central map Lorentz factorizable iff gamma2(u) <= lambda", true, "",
      [&] { return gamma2(m.u); });
  run(MapClass::LorEB, "gamma2star", "central map Lorentz entanglement breaking iff gamma2*(u) <= lambda", true, "",
      [&] { return gamma2_star(m.u); });
  run(MapClass::LorEAIntoLorentz, "pi2", "central map into a Lorentz cone is LorEA2 iff pi2(u) <= lambda",
      cod_euclid, "codomain is not Euclidean", [&] { return pi2(m.u); });
  run(MapClass::MaxEA, "hs", "central map between Lorentz cones is maxEA2 iff hs(u) <= lambda", both_euclid,
      "domain and codomain must both be Euclidean", [&] { return hs(m.u); });
  return rep;
}

// ---------------------------------------------------------------------------
// Positive legs

namespace detail {

/// Boundary vector (1, unit) of L_n.
inline Vec lorentz_ray(int n, Rng& rng) {
  Vec x(n + 1);
  x(0) = 1.0;
  x.tail(n) = rng.unit_vec(n);
  return x;
}

/// Positive map L_k -> L_m. Extreme draws are rank one or automorphism
/// dressings of 1 (+) partial isometry; the others use a strict contraction.
inline Mat lorentz_leg(int m, int k, Rng& rng, bool extreme) {
  if (extreme && rng.uniform() < 0.2) return lorentz_ray(m, rng) * lorentz_ray(k, rng).transpose();
  const int r = std::min(m, k);
  Mat u = rng.orthogonal(m).leftCols(r) * rng.orthogonal(k).leftCols(r).transpose();
  if (!extreme) u *= rng.uniform();
  return random_automorphism(m, rng, 1.0, true) * direct_sum(1.0, u) * random_automorphism(k, rng, 1.0, true);
}

inline Mat adjoint_action(const CMat& v) {
  return superoperator_matrix([&](const CMat& x) { return CMat(v * x * v.adjoint()); }, static_cast<int>(v.cols()),
                              static_cast<int>(v.rows()));
}

}  // namespace detail

/// Random A in Pos(L_k, C) as an ambient(C) x (k+1) matrix. About 70% of the
/// draws are extreme-type maps; the rest are perturbed by a positive rank one term.
inline Mat sample_positive_into(const ConeDescriptor& c, int k, Rng& rng) {
  if (k < 1) throw Error(ErrorCode::DimensionMismatch, "Lorentz leg needs k >= 1");
  const bool extreme = rng.uniform() < 0.7;
  Mat p;
  if (c.kind == ConeKind::Lorentz || (c.kind == ConeKind::ConeOver && c.space.family == Family::L2)) {
    p = detail::lorentz_leg(c.n, k, rng, extreme);
  } else if (c.kind == ConeKind::Psd) {
    const Mat q = detail::lorentz_leg(3, k, rng, extreme);
    CMat v = rng.normal_cmat(c.n, 2);
    v /= v.norm();
    p = detail::adjoint_action(v) * bloch_map().matrix * q;
  } else if (c.space.family == Family::Linf) {
    p = extreme_pos0(k, c.n, rng.bits()).matrix * random_automorphism(k, rng, 1.0, true);
  } else {
    // Cone over l1: central contractions dressed by automorphisms, or rank one rays.
    const int n = c.n;
    if (extreme && rng.uniform() < 0.3) {
      Vec x = Vec::Zero(n + 1);
      x(0) = 1.0;
      x(rng.integer(1, n)) = rng.sign();
      p = x * detail::lorentz_ray(k, rng).transpose();
    } else {
      Mat u = rng.normal_mat(n, k);
      u /= op_norm(OperatorMatrix(u, SpaceDescriptor::l2(k), SpaceDescriptor::l1(n)));
      if (!extreme) u *= rng.uniform();
      p = direct_sum(1.0, u) * random_automorphism(k, rng, 1.0, true);
    }
  }
  if (!extreme) {
    const Vec x = sample_member(c, rng);
    const Vec f = sample_member(ConeDescriptor::lorentz(k), rng);
    const double scale = p.norm() / std::max(1e-300, x.norm() * f.norm());
    p += 0.1 * rng.uniform() * scale * x * f.transpose();
  }
  return p;
}

/// Random B in Pos(C, L_k) as a (k+1) x ambient(C) matrix.
inline Mat sample_positive_from(const ConeDescriptor& c, int k, Rng& rng) {
  return sample_positive_into(dual_cone(c), k, rng).transpose();
}

// ---------------------------------------------------------------------------
// Sampled checks for general maps

namespace detail {

/// Entanglement breaking test for a positive map between Lorentz cones from
/// the spectrum of J P J P^T: the map is EB iff the square roots of the
/// spacelike eigenvalues sum to at most the square root of the largest one.
/// Returns nothing when the comparison is within the margin.
inline std::optional<bool> eb_by_spectrum(const Mat& p, double margin = 1e-3) {
  const int m = static_cast<int>(p.rows()) - 1;
  const int n = static_cast<int>(p.cols()) - 1;
  const Mat prod = lorentz_form(m) * p * lorentz_form(n) * p.transpose();
  Eigen::EigenSolver<Mat> es(prod, false);
  std::vector<double> ev(static_cast<std::size_t>(m + 1));
  const double scale = std::max(1e-300, p.squaredNorm());
  for (int i = 0; i <= m; ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-6 * scale) return std::nullopt;
    ev[i] = std::max(0.0, z.real());
  }
  std::sort(ev.begin(), ev.end(), std::greater<>());
  if (ev[0] <= 1e-8 * scale) return std::nullopt;
  double rest = 0.0;
  for (int i = 1; i <= m; ++i) rest += std::sqrt(ev[i]);
  const double lead = std::sqrt(ev[0]);
  if (rest <= lead * (1.0 - margin)) return true;
  if (rest >= lead * (1.0 + margin)) return false;
  return std::nullopt;
}

inline bool lorentz_like_dim(const ConeDescriptor& c, int k) { return lorentz_like(c) && c.n == k; }

}  // namespace detail

struct FalsifyResult {
  bool witness_found = false;
  int trial = -1;      // index of the lowest failing trial
  Mat a;               // leg L_k -> dom
  Mat b;               // leg cod -> L_k
  double trace_norm = 0.0;
  std::string reason;  // "not_eb" or "not_positive"
  int trials_run = 0;
  int inconclusive = 0;  // trials where the normal form did not converge
  int k = 0;
};

/// Searches for positive legs A: L_k -> dom, B: cod -> L_k with B P A not
/// entanglement breaking, k = min ambient dimension - 1. A witness disproves
/// Lorentz entanglement breaking; finding none proves nothing.
inline FalsifyResult lor_eb_falsify(const ConeMap& p, int trials, std::uint64_t seed) {
  FalsifyResult out;
  const int k = std::min(p.dom.ambient_dim(), p.cod.ambient_dim()) - 1;
  out.k = k;
  if (k < 1) return out;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    Mat a, b;
    if (t == 0 && detail::lorentz_like_dim(p.dom, k)) a = Mat::Identity(k + 1, k + 1);
    else a = sample_positive_into(p.dom, k, rng);
    if (t == 0 && detail::lorentz_like_dim(p.cod, k)) b = Mat::Identity(k + 1, k + 1);
    else b = sample_positive_from(p.cod, k, rng);
    const Mat comp = b * p.matrix * a;
    ++out.trials_run;
    std::string reason;
    double tn = 0.0;
    const auto pos = detail::lorentz_positivity(comp, 0.0);
    if (!detail::positive_from(pos, comp, kLorentzTol)) {
      reason = "not_positive";
    } else {
      const auto fast = detail::eb_by_spectrum(comp);
      if (fast.has_value()) {
        if (!*fast) {
          reason = "not_eb";
          tn = is_eb_lorentz_detail(comp).trace_norm;
        }
      } else {
        try {
          const EbResult r = is_eb_lorentz_detail(comp);
          if (!r.verdict) {
            reason = "not_eb";
            tn = r.trace_norm;
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoConvergence) throw;
          ++out.inconclusive;
        }
      }
    }
    if (!reason.empty()) {
      out.witness_found = true;
      out.trial = t;
      out.a = a;
      out.b = b;
      out.trace_norm = tn;
      out.reason = reason;
      return out;
    }
  }
  return out;
}

struct ProductCheckResult {
  bool pass = true;
  int trial = -1;      // first violating trial
  int which = -1;      // 0 for P, 1 for Q
  Mat s;               // violating leg
  int trials_run = 0;
};

/// Sampled check that P and Q (maps C -> Lorentz(m)) stay maxEA2 after
/// precomposition with positive legs S: L_k -> C, k = ambient(C) - 1.
inline ProductCheckResult lor_ea_product_check(const ConeMap& p, const ConeMap& q, int trials, std::uint64_t seed) {
  if (!(p.dom == q.dom)) throw Error(ErrorCode::DimensionMismatch, "maps must share a domain cone");
  if (!detail::lorentz_like(p.cod) || !detail::lorentz_like(q.cod))
    throw Error(ErrorCode::Unsupported, "codomains must be Lorentz cones");
  ProductCheckResult out;
  const int k = p.dom.ambient_dim() - 1;
  if (k < 1) return out;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    Mat s;
    if (t == 0 && detail::lorentz_like(p.dom)) s = Mat::Identity(k + 1, k + 1);
    else s = sample_positive_into(p.dom, k, rng);
    ++out.trials_run;
    for (int which = 0; which < 2; ++which) {
      const Mat comp = (which == 0 ? p.matrix : q.matrix) * s;
      bool ok;
      try {
        ok = max_ea_criterion(comp).verdict;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositive) throw;
        ok = false;
      }
      if (!ok) {
        out.pass = false;
        out.trial = t;
        out.which = which;
        out.s = s;
        return out;
      }
    }
  }
  return out;
}

/// Sampled corroboration that B^T A is Lorentz entanglement breaking, for
/// A: C_A -> Lorentz(m) and B: dual(C_B) -> Lorentz(m).
inline FalsifyResult factorization_lor_eb(const ConeMap& a, const ConeMap& b, int trials, std::uint64_t seed) {
  if (!(a.cod == b.cod)) throw Error(ErrorCode::DimensionMismatch, "legs must share the Lorentz codomain");
  const ConeMap comp{b.matrix.transpose() * a.matrix, a.dom, dual_cone(b.dom)};
  return lor_eb_falsify(comp, trials, seed);
}

// ---------------------------------------------------------------------------
// Central maps out of the cone over the square

/// The four sign patterns whose central maps 1 (+) H generate the entangled
/// extreme rays of the maximal tensor square of the cone over linf^2.
inline std::vector<Mat> square_cone_patterns() {
  std::vector<Mat> out;
  for (const auto& h : {std::array<double, 4>{-1, 1, 1, 1}, std::array<double, 4>{1, -1, 1, 1},
                        std::array<double, 4>{1, 1, -1, 1}, std::array<double, 4>{1, 1, 1, -1}}) {
    Mat m(2, 2);
    m << h[0], h[1], h[2], h[3];
    out.push_back(m);
  }
  return out;
}

/// lambda (+) phi in maxEA2(C_{linf^2}, L_n), decided through Lorentz legs:
/// positivity of lambda (+) phi and entanglement breaking of
/// lambda^2 (+) phi H phi^T for every sign pattern H.
inline bool square_cone_max_ea(double lambda, const Mat& phi, double tol = 1e-7) {
  if (phi.cols() != 2) throw Error(ErrorCode::DimensionMismatch, "phi must act on linf^2");
  const int n = static_cast<int>(phi.rows());
  if (op_norm(OperatorMatrix(phi, SpaceDescriptor::linf(2), SpaceDescriptor::l2(n))) > lambda * (1.0 + tol) + tol)
    return false;
  for (const Mat& h : square_cone_patterns()) {
    const Mat central = direct_sum(lambda * lambda, Mat(phi * h * phi.transpose()));
    try {
      if (!is_eb_lorentz(central, tol)) return false;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotPositive) throw;
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Factorizations through maxEA2 maps

struct TwoSummingFactorization {
  Mat p;  // 1 (+) outer: L_N -> L_m
  Mat q;  // (1 (+) diag)(1 (+) inner) S: L_k -> L_N
};

/// For v: X -> l2(m) with pi2(v) <= 1 and a positive leg S: L_k -> C_X,
/// builds P positive and Q maxEA2 with (1 (+) v) S = P Q.
inline TwoSummingFactorization two_summing_factorization(const OperatorMatrix& v, const Mat& s) {
  if (s.rows() != v.dom.dim + 1) throw Error(ErrorCode::DimensionMismatch, "leg does not land in the domain cone");
  const PietschFactorization pf = pietsch_factorization(v);
  TwoSummingFactorization out;
  out.p = direct_sum(1.0, pf.outer.entries);
  out.q = direct_sum(1.0, Mat(pf.diag.asDiagonal())) * direct_sum(1.0, pf.inner.entries) * s;
  return out;
}

/// For v: l2(n) -> l2(m) and t >= hs(v) > 0, t (+) v = P Q with
/// P = t (1 (+) U) positive and Q = 1 (+) Sigma V^T / t maxEA2.
inline TwoSummingFactorization euclidean_pi2_factorization(const OperatorMatrix& v, double t) {
  if (v.dom.family != Family::L2 || v.cod.family != Family::L2)
    throw Error(ErrorCode::Unsupported, "Euclidean factorization needs l2 domain and codomain");
  if (!(t > 0.0)) throw Error(ErrorCode::DimensionMismatch, "threshold must be positive");
  const Svd sv = svd(v.entries);
  const int n = v.dom.dim;
  const int m = v.cod.dim;
  const int r = std::min(m, n);
  TwoSummingFactorization out;
  out.p = t * direct_sum(1.0, Mat(sv.u.leftCols(r)));
  out.q = direct_sum(1.0, Mat(sv.sigma.head(r).asDiagonal() * sv.v.leftCols(r).transpose() / t));
  return out;
}

}  // namespace conekit

#endif  // CONEKIT_CLASSIFY_HPP
