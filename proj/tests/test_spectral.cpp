#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qg/spectral.hpp"

using namespace qg;

namespace {

constexpr double kPi = std::numbers::pi;

/// Independent scalar oracle: roots of k tan(k) = c by bisection of
/// g(k) = k sin k - c cos k on the branch intervals.
std::vector<double> robin_segment_roots(double c, double k_max) {
  const auto g = [&](double k) { return k * std::sin(k) - c * std::cos(k); };
  std::vector<double> roots;
  for (int n = 0;; ++n) {
    double lo, hi;
    if (c >= 0.0) {
      lo = n * kPi + 1e-13;
      hi = n * kPi + kPi / 2.0 - 1e-13;
    } else {
      lo = n * kPi + kPi / 2.0 + 1e-13;
      hi = (n + 1) * kPi - 1e-13;
    }
    if (lo > k_max) break;
    if (g(lo) * g(hi) > 0.0) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(lo) * g(mid) <= 0.0 ? hi : lo) = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (root > 1e-9 && root <= k_max) roots.push_back(root);
  }
  return roots;
}

void check_spectrum(const Spectrum& s, const std::vector<std::pair<double, int>>& expect,
                    double tol = K_MATCH_TOL) {
  REQUIRE(s.entries.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(std::abs(s.entries[i].k - expect[i].first) < tol);
    CHECK(s.entries[i].multiplicity == expect[i].second);
  }
}

MetricGraph neumann_neumann_segment() {
  return segment_graph(1.0, {BoundaryKind::Neumann}, {BoundaryKind::Neumann});
}

MetricGraph neumann_dirichlet_segment() {
  return segment_graph(1.0, {BoundaryKind::Neumann}, {BoundaryKind::Dirichlet});
}

}  // namespace

TEST_CASE("secular determinants of single segments match closed forms") {
  // Neumann-Neumann: det M(k) = k^2 sin(k).
  const MetricGraph nn = neumann_neumann_segment();
  for (double k : {0.7, 1.9, 4.4}) {
    const Complex det = secular_matrix(nn, k).m.determinant();
    CHECK(std::abs(det - Complex(k * k * std::sin(k))) < 1e-12 * k * k);
  }
  // Neumann-Dirichlet: det M(k) = k cos(k).
  const MetricGraph nd = neumann_dirichlet_segment();
  for (double k : {0.7, 1.9, 4.4}) {
    const Complex det = secular_matrix(nd, k).m.determinant();
    CHECK(std::abs(det - Complex(k * std::cos(k))) < 1e-12 * k);
  }
  CHECK_THROWS_AS(secular_matrix(nn, 0.0), NonpositiveK);
}

TEST_CASE("standard star secular matrix is doubly degenerate at pi/2") {
  const MetricGraph g = star_graph_standard(1.0);
  const SecularMatrix sm = secular_matrix(g, kPi / 2.0);
  Eigen::JacobiSVD<Matrix> svd(sm.m);
  const auto& sv = svd.singularValues();
  int nullity = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) < 1e-10 * sv(0)) ++nullity;
  CHECK(nullity == 2);
}

TEST_CASE("segment spectra against closed forms") {
  const Spectrum nn = eigenvalues_in_window(neumann_neumann_segment(), 0.0, 10.0);
  CHECK(nn.includes_zero_mode);
  CHECK(nn.zero_multiplicity == 1);
  check_spectrum(nn, {{kPi, 1}, {2 * kPi, 1}, {3 * kPi, 1}});

  const Spectrum nd = eigenvalues_in_window(neumann_dirichlet_segment(), 0.0, 10.0);
  CHECK(!nd.includes_zero_mode);
  check_spectrum(nd, {{kPi / 2, 1}, {3 * kPi / 2, 1}, {5 * kPi / 2, 1}});
}

TEST_CASE("Neumann-Robin segment roots solve k tan k = c") {
  const double c = 1.0;  // alpha = 3 gives the coefficient alpha/3 = 1
  const MetricGraph g = segment_graph(1.0, {BoundaryKind::Neumann}, {BoundaryKind::Robin, c});
  const Spectrum s = eigenvalues_in_window(g, 0.0, 10.0);
  const std::vector<double> oracle = robin_segment_roots(c, 10.0);
  REQUIRE(s.entries.size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    CHECK(std::abs(s.entries[i].k - oracle[i]) < K_MATCH_TOL);
    // Residual form of the boundary condition at every reported root.
    const double k = s.entries[i].k;
    CHECK(std::abs(k * std::tan(k) - c) < 1e-6);
  }
}

TEST_CASE("full standard star spectrum: {n pi: 1} union {(n+1/2) pi: 2}") {
  const Spectrum s = eigenvalues_in_window(star_graph_standard(1.0), 0.0, 10.0);
  check_spectrum(s, {{kPi / 2, 2},
                     {kPi, 1},
                     {3 * kPi / 2, 2},
                     {2 * kPi, 1},
                     {5 * kPi / 2, 2},
                     {3 * kPi, 1}});
  CHECK(s.zero_multiplicity == 1);  // the constant function
}

TEST_CASE("direct sum spectrum merges with scaled multiplicities") {
  QuotientGraph nn{"trivial", 1, {1.0},
                   segment_coupling({BoundaryKind::Neumann}, {BoundaryKind::Neumann})};
  QuotientGraph nd{"orthogonal", 2, {1.0},
                   segment_coupling({BoundaryKind::Neumann}, {BoundaryKind::Dirichlet})};
  const Spectrum s = direct_sum_spectrum({nn, nd}, 0.0, 10.0);
  check_spectrum(s, {{kPi / 2, 2},
                     {kPi, 1},
                     {3 * kPi / 2, 2},
                     {2 * kPi, 1},
                     {5 * kPi / 2, 2},
                     {3 * kPi, 1}});

  CHECK(direct_sum_spectrum({}, 0.0, 10.0).entries.empty());

  const Spectrum one = direct_sum_spectrum({nn}, 0.0, 10.0);
  const Spectrum own = eigenvalues_in_window(nn.to_metric_graph(), 0.0, 10.0);
  REQUIRE(one.entries.size() == own.entries.size());
  for (std::size_t i = 0; i < one.entries.size(); ++i)
    CHECK(one.entries[i].k == doctest::Approx(own.entries[i].k));
}

TEST_CASE("window additivity when the split point is not a root") {
  const MetricGraph g = star_graph_standard(1.0);
  const double a = 7.0, b = 12.0;
  const Spectrum left = eigenvalues_in_window(g, 0.0, a);
  const Spectrum right = eigenvalues_in_window(g, a, b);
  const Spectrum whole = eigenvalues_in_window(g, 0.0, b);
  REQUIRE(left.entries.size() + right.entries.size() == whole.entries.size());
  std::size_t i = 0;
  for (const auto& en : left.entries)
    CHECK(en.k == doctest::Approx(whole.entries[i++].k).epsilon(1e-9));
  for (const auto& en : right.entries)
    CHECK(en.k == doctest::Approx(whole.entries[i++].k).epsilon(1e-9));
}

TEST_CASE("spectra are invariant under edge relabeling") {
  const MetricGraph g = star_graph_delta(1.0, 1.7);
  // Relabel edges by the cycle 0 -> 1 -> 2 -> 0.
  Matrix perm = Matrix::Zero(3, 3);
  perm(1, 0) = perm(2, 1) = perm(0, 2) = 1.0;
  const Matrix phat = hat_matrix(perm);
  const MetricGraph relabeled{{1.0, 1.0, 1.0},
                              {g.coupling.A * phat, g.coupling.B * phat}};
  const Spectrum s1 = eigenvalues_in_window(g, 0.0, 12.0);
  const Spectrum s2 = eigenvalues_in_window(relabeled, 0.0, 12.0);
  REQUIRE(s1.entries.size() == s2.entries.size());
  for (std::size_t i = 0; i < s1.entries.size(); ++i) {
    CHECK(std::abs(s1.entries[i].k - s2.entries[i].k) < K_MATCH_TOL);
    CHECK(s1.entries[i].multiplicity == s2.entries[i].multiplicity);
  }
}

TEST_CASE("coarse scans over near-degenerate roots are rejected") {
  // Two decoupled segments: roots at pi and at the k tan k = 0.5 branch
  // near pi, about 0.15 apart.
  Matrix a = Matrix::Zero(4, 4), b = Matrix::Zero(4, 4);
  const CouplingPair nn = segment_coupling({BoundaryKind::Neumann}, {BoundaryKind::Neumann});
  const CouplingPair nr =
      segment_coupling({BoundaryKind::Neumann}, {BoundaryKind::Robin, 0.5});
  a.topLeftCorner(2, 2) = nn.A;
  b.topLeftCorner(2, 2) = nn.B;
  a.bottomRightCorner(2, 2) = nr.A;
  b.bottomRightCorner(2, 2) = nr.B;
  const MetricGraph g{{1.0, 1.0}, {a, b}};
  // At step 0.08 both |det| dips are still resolved as separate brackets,
  // but the refined roots end up closer than two grid cells apart.
  ScanOptions coarse;
  coarse.step = 0.08;
  CHECK_THROWS_AS(eigenvalues_in_window(g, 2.8, 3.5, coarse), WindowTooCoarse);
  ScanOptions fine;
  fine.step = 0.01;
  const Spectrum s = eigenvalues_in_window(g, 2.8, 3.5, fine);
  CHECK(s.entries.size() == 2);
}

TEST_CASE("invalid windows are rejected") {
  const MetricGraph g = neumann_neumann_segment();
  CHECK_THROWS_AS(eigenvalues_in_window(g, 5.0, 5.0), Error);
  CHECK_THROWS_AS(eigenvalues_in_window(g, -1.0, 5.0), Error);
}

TEST_CASE("theorem verification: standard star under S3") {
  const FiniteGroup s3 = s3_group();
  const VerificationReport rep = verify_theorem(star_graph_standard(1.0),
                                                natural_action(s3), s3_irreps(s3), 0.0, 20.0);
  CHECK(rep.pass);
  for (const auto& pr : rep.pairs)
    if (pr.in_verdict) CHECK(pr.ok);
}

TEST_CASE("theorem verification: delta star under the C3 subgroup") {
  // C3 is a subgroup of the full S3 symmetry; the theorem applies to it too.
  const FiniteGroup c3 = cyclic_group(3);
  const VerificationReport rep = verify_theorem(star_graph_delta(1.0, 1.0),
                                                natural_action(c3), cyclic_irreps(c3),
                                                0.0, 20.0);
  CHECK(rep.pass);
}

TEST_CASE("theorem verification: preferred orientation under C3") {
  const FiniteGroup c3 = cyclic_group(3);
  const VerificationReport rep =
      verify_theorem(star_graph_preferred_orientation(1.0), natural_action(c3),
                     cyclic_irreps(c3), 0.0, 20.0);
  CHECK(rep.pass);
  // Quotient spectrum is {n pi} union the k tan k = +-sqrt(3) branches.
  std::vector<double> expected;
  for (int n = 1; n * kPi <= 20.0; ++n) expected.push_back(n * kPi);
  for (double root : robin_segment_roots(std::sqrt(3.0), 20.0)) expected.push_back(root);
  for (double root : robin_segment_roots(-std::sqrt(3.0), 20.0)) expected.push_back(root);
  std::sort(expected.begin(), expected.end());
  REQUIRE(rep.quotient_sum.entries.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(std::abs(rep.quotient_sum.entries[i].k - expected[i]) < K_MATCH_TOL);
}

TEST_CASE("verification detects a broken symmetry") {
  const FiniteGroup s3 = s3_group();
  MetricGraph g = star_graph_standard(1.0);
  g.edge_lengths[2] = 1.5;
  CHECK_THROWS_AS(verify_theorem(g, natural_action(s3), s3_irreps(s3), 0.0, 10.0),
                  NotSymmetric);
}
