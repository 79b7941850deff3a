#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qg/errors.hpp"
#include "qg/graph.hpp"
#include "qg/quotient.hpp"
#include "qg/tolerances.hpp"

namespace qg {

struct SecularMatrix {
  double k = 0.0;
  Matrix m;  // 2E x 2E, singular iff k^2 is an eigenvalue
};

/// M(k) = A P(k) + B Q(k), where P, Q map the coefficient vector
/// (a_1, b_1, ..., a_E, b_E) of the ansatz f_j = a_j sin(kx) + b_j cos(kx)
/// to the trace vectors Psi and Psi'.
inline SecularMatrix secular_matrix(const MetricGraph& g, double k) {
  if (k <= 0.0) throw NonpositiveK("secular matrix requires k > 0");
  const int e = g.edge_count();
  Matrix p = Matrix::Zero(2 * e, 2 * e), q = Matrix::Zero(2 * e, 2 * e);
  for (int j = 0; j < e; ++j) {
    const double l = g.edge_lengths[static_cast<std::size_t>(j)];
    const double s = std::sin(k * l), c = std::cos(k * l);
    p(2 * j, 2 * j + 1) = 1.0;            // f_j(0) = b_j
    p(2 * j + 1, 2 * j) = s;              // f_j(l) = a_j sin + b_j cos
    p(2 * j + 1, 2 * j + 1) = c;
    q(2 * j, 2 * j) = k;                  // f_j'(0) = k a_j
    q(2 * j + 1, 2 * j) = -k * c;         // -f_j'(l)
    q(2 * j + 1, 2 * j + 1) = k * s;
  }
  return {k, g.coupling.A * p + g.coupling.B * q};
}

struct SpectrumEntry {
  double k = 0.0;
  int multiplicity = 1;
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;  // strictly increasing in k
  double k_min = 0.0, k_max = 0.0;
  bool includes_zero_mode = false;
  int zero_multiplicity = 0;

  int total_multiplicity() const {
    int t = 0;
    for (const auto& en : entries) t += en.multiplicity;
    return t;
  }
};

struct ScanOptions {
  double step = 0.0;  // 0: auto, pi * min edge length / 200
  double refine_tol = K_REFINE_TOL;
  double mult_svtol = MULT_SVTOL;
  double merge_tol = K_MERGE_TOL;
  int threads = 0;  // 0: hardware concurrency, capped by QG_THREADS
};

/// Optional per-sample record for plotting: k, |det| of the row-normalized
/// secular matrix, and its smallest singular value.
struct ScanSample {
  double k = 0.0;
  double absdet = 0.0;
  double sigma_min = 0.0;
};

namespace detail {

/// Determinant magnitude scales with k through the derivative rows; dividing
/// each row by its norm removes that and keeps the scan O(1).
inline Matrix row_normalized(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double n = out.row(i).norm();
    if (n > 0.0) out.row(i) /= n;
  }
  return out;
}

inline double normalized_absdet(const MetricGraph& g, double k) {
  return std::abs(row_normalized(secular_matrix(g, k).m).determinant());
}

inline double auto_step(const MetricGraph& g) {
  const double min_l = *std::min_element(g.edge_lengths.begin(), g.edge_lengths.end());
  return min_l * std::numbers::pi / 200.0;
}

inline int scan_threads(int requested) {
  int t = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (const char* env = std::getenv("QG_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < t) t = cap;
  }
  return t;
}

/// Golden-section minimization of phi on [lo, hi] down to interval width tol.
template <class F>
double golden_min(const F& phi, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = phi(x2);
    }
  }
  return 0.5 * (a + b);
}

/// Zero-mode count via the affine ansatz f_j = a_j x + b_j, which replaces
/// the sin/cos ansatz when k = 0.
inline int zero_mode_multiplicity(const MetricGraph& g) {
  const int e = g.edge_count();
  Matrix p = Matrix::Zero(2 * e, 2 * e), q = Matrix::Zero(2 * e, 2 * e);
  for (int j = 0; j < e; ++j) {
    const double l = g.edge_lengths[static_cast<std::size_t>(j)];
    p(2 * j, 2 * j + 1) = 1.0;
    p(2 * j + 1, 2 * j) = l;
    p(2 * j + 1, 2 * j + 1) = 1.0;
    q(2 * j, 2 * j) = 1.0;
    q(2 * j + 1, 2 * j) = -1.0;
  }
  const Matrix m0 = row_normalized(g.coupling.A * p + g.coupling.B * q);
  Eigen::JacobiSVD<Matrix> svd(m0);
  const auto& sv = svd.singularValues();
  const double cutoff = sv(0) * MULT_SVTOL;
  int nullity = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) < cutoff) ++nullity;
  return nullity;
}

}  // namespace detail

/// All eigenvalue wavenumbers in (k_min, k_max], found by a dense |det| scan
/// with golden-section refinement of bracketed minima; multiplicities from
/// the singular-value nullity of M(k*). Zero modes are reported separately
/// when k_min = 0.
inline Spectrum eigenvalues_in_window(const MetricGraph& g, double k_min, double k_max,
                                      const ScanOptions& opts = {},
                                      std::vector<ScanSample>* samples = nullptr) {
  if (k_min < 0.0 || k_min >= k_max)
    throw Error("window must satisfy 0 <= k_min < k_max");
  const double h = opts.step > 0.0 ? opts.step : detail::auto_step(g);

  Spectrum spec;
  spec.k_min = k_min;
  spec.k_max = k_max;
  if (k_min == 0.0) {
    spec.zero_multiplicity = detail::zero_mode_multiplicity(g);
    spec.includes_zero_mode = spec.zero_multiplicity > 0;
  }

  // Sample grid; one extra step past k_max so a root at the boundary is
  // bracketed.
  const auto n_samples =
      static_cast<std::size_t>(std::ceil((k_max - k_min) / h)) + 2;
  std::vector<double> ks(n_samples), dets(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    double k = k_min + static_cast<double>(i) * h;
    if (k <= 0.0) k = h * 1e-6;  // secular matrix needs k > 0
    ks[i] = k;
  }
  const int threads = detail::scan_threads(opts.threads);
  if (threads <= 1 || n_samples < 64) {
    for (std::size_t i = 0; i < n_samples; ++i)
      dets[i] = detail::normalized_absdet(g, ks[i]);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = static_cast<std::size_t>(t); i < n_samples;
             i += static_cast<std::size_t>(threads))
          dets[i] = detail::normalized_absdet(g, ks[i]);
      });
    }
    for (auto& th : pool) th.join();
  }

  if (samples) {
    samples->clear();
    for (std::size_t i = 0; i < n_samples; ++i) {
      Eigen::JacobiSVD<Matrix> svd(detail::row_normalized(secular_matrix(g, ks[i]).m));
      samples->push_back({ks[i], dets[i], svd.singularValues().minCoeff()});
    }
  }

  const auto phi = [&](double k) { return detail::normalized_absdet(g, k); };
  std::vector<SpectrumEntry> found;
  for (std::size_t i = 1; i + 1 < n_samples; ++i) {
    if (!(dets[i] <= dets[i - 1] && dets[i] <= dets[i + 1])) continue;
    const double k_star = detail::golden_min(phi, ks[i - 1], ks[i + 1], opts.refine_tol);
    Eigen::JacobiSVD<Matrix> svd(detail::row_normalized(secular_matrix(g, k_star).m));
    const auto& sv = svd.singularValues();
    const double cutoff = sv(0) * opts.mult_svtol;
    int nullity = 0;
    for (Eigen::Index s = 0; s < sv.size(); ++s)
      if (sv(s) < cutoff) ++nullity;
    if (nullity == 0) continue;  // shallow |det| dip, not a root
    if (k_star <= k_min + opts.merge_tol || k_star > k_max + opts.merge_tol) continue;
    found.push_back({std::min(k_star, k_max), nullity});
  }

  std::sort(found.begin(), found.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.k < b.k; });
  for (const auto& en : found) {
    if (!spec.entries.empty()) {
      SpectrumEntry& last = spec.entries.back();
      const double gap = en.k - last.k;
      if (gap <= opts.merge_tol) {
        // Same root bracketed twice; the nullity already counts multiplicity.
        last.multiplicity = std::max(last.multiplicity, en.multiplicity);
        continue;
      }
      if (gap < 2.0 * h)
        throw WindowTooCoarse("detected roots closer than twice the scan step; "
                              "shrink the step to at most " +
                                  std::to_string(gap / 4.0),
                              gap / 4.0);
    }
    spec.entries.push_back(en);
  }
  return spec;
}

/// Multiset union of the quotient spectra, each multiplicity scaled by the
/// irrep dimension r(rho).
inline Spectrum direct_sum_spectrum(const std::vector<QuotientGraph>& quotients,
                                    double k_min, double k_max,
                                    const ScanOptions& opts = {}) {
  Spectrum out;
  out.k_min = k_min;
  out.k_max = k_max;
  std::vector<SpectrumEntry> all;
  for (const auto& q : quotients) {
    const Spectrum s = eigenvalues_in_window(q.to_metric_graph(), k_min, k_max, opts);
    for (const auto& en : s.entries)
      all.push_back({en.k, en.multiplicity * q.multiplicity});
    out.zero_multiplicity += s.zero_multiplicity * q.multiplicity;
  }
  out.includes_zero_mode = out.zero_multiplicity > 0;
  std::sort(all.begin(), all.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.k < b.k; });
  for (const auto& en : all) {
    if (!out.entries.empty() && en.k - out.entries.back().k <= opts.merge_tol)
      out.entries.back().multiplicity += en.multiplicity;
    else
      out.entries.push_back(en);
  }
  return out;
}

struct RootPairing {
  std::optional<double> k_full;
  std::optional<double> k_quotient;
  int mult_full = 0;
  int mult_quotient = 0;
  std::string irrep_label;  // labels of contributing quotients
  double dk = 0.0;
  bool in_verdict = true;  // false near the window boundary
  bool ok = false;
};

struct VerificationReport {
  Spectrum full;
  Spectrum quotient_sum;
  QuotientSet quotients;
  std::vector<RootPairing> pairs;
  bool pass = false;
};

/// End-to-end check of the direct-sum decomposition: the full-graph spectrum
/// must equal the multiplicity-weighted union of the quotient spectra.
inline VerificationReport verify_theorem(const MetricGraph& g, const SymmetryAction& act,
                                         const std::vector<Representation>& irreps,
                                         double k_min, double k_max,
                                         const ScanOptions& opts = {}) {
  VerificationReport rep;
  rep.quotients = build_all_quotients(g, act, irreps);
  rep.full = eigenvalues_in_window(g, k_min, k_max, opts);
  rep.quotient_sum = direct_sum_spectrum(rep.quotients.quotients, k_min, k_max, opts);

  // Label each quotient root with the irreps whose spectra contain it.
  std::vector<std::pair<double, std::string>> labels;
  for (const auto& q : rep.quotients.quotients) {
    const Spectrum s = eigenvalues_in_window(q.to_metric_graph(), k_min, k_max, opts);
    for (const auto& en : s.entries) labels.emplace_back(en.k, q.irrep_label);
  }

  std::size_t i = 0, j = 0;
  const auto& fe = rep.full.entries;
  const auto& qe = rep.quotient_sum.entries;
  bool all_ok = true;
  while (i < fe.size() || j < qe.size()) {
    RootPairing pr;
    const bool take_full = i < fe.size();
    const bool take_quot = j < qe.size();
    const bool matched = take_full && take_quot &&
                         std::abs(fe[i].k - qe[j].k) <= K_MATCH_TOL;
    if (matched || (take_full && (!take_quot || fe[i].k < qe[j].k - K_MATCH_TOL))) {
      pr.k_full = fe[i].k;
      pr.mult_full = fe[i].multiplicity;
    }
    if (matched || (take_quot && (!take_full || qe[j].k < fe[i].k - K_MATCH_TOL))) {
      pr.k_quotient = qe[j].k;
      pr.mult_quotient = qe[j].multiplicity;
      for (const auto& [k, lab] : labels) {
        if (std::abs(k - qe[j].k) <= K_MATCH_TOL) {
          if (!pr.irrep_label.empty()) pr.irrep_label += "+";
          pr.irrep_label += lab;
        }
      }
    }
    if (pr.k_full) ++i;
    if (pr.k_quotient) ++j;
    pr.dk = (pr.k_full && pr.k_quotient) ? std::abs(*pr.k_full - *pr.k_quotient) : 0.0;
    pr.ok = pr.k_full && pr.k_quotient && pr.mult_full == pr.mult_quotient;
    const double k_ref = pr.k_full ? *pr.k_full : *pr.k_quotient;
    pr.in_verdict = k_ref > k_min + K_MATCH_TOL && k_ref < k_max - K_MATCH_TOL;
    if (pr.in_verdict && !pr.ok) all_ok = false;
    rep.pairs.push_back(std::move(pr));
  }
  rep.pass = all_ok;
  return rep;
}

}  // namespace qg
