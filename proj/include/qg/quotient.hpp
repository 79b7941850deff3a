#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>
#include <algorithm>
#include <string>
#include <vector>

#include "qg/errors.hpp"
#include "qg/graph.hpp"
#include "qg/representation.hpp"
#include "qg/tolerances.hpp"

namespace qg {

/// Orbits of the edge action, each sorted ascending; orbit order is by
/// smallest member, which is also the representative.
struct OrbitDecomposition {
  std::vector<std::vector<int>> orbits;
  std::vector<int> representatives;
};

inline OrbitDecomposition orbits(const SymmetryAction& act) {
  const int e = act.edge_count();
  std::vector<bool> assigned(static_cast<std::size_t>(e), false);
  OrbitDecomposition out;
  for (int j = 0; j < e; ++j) {
    if (assigned[static_cast<std::size_t>(j)]) continue;
    std::vector<int> orbit;
    for (const auto& p : act.edge_action) {
      const int i = p(j);
      if (!assigned[static_cast<std::size_t>(i)]) {
        assigned[static_cast<std::size_t>(i)] = true;
        orbit.push_back(i);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.representatives.push_back(orbit.front());
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

/// Orthonormal basis of the simultaneous kernel of
/// I_r ⊗ pi(g) − rho(g)^T ⊗ I_E over all g, split per orbit.
/// Basis columns are grouped by orbit: the first per_orbit_dims[0] columns
/// are supported on orbit 0, and so on.
struct KernelSpace {
  const Representation* irrep = nullptr;
  Matrix basis;  // (r*E) x d, orthonormal columns
  std::vector<int> per_orbit_dims;

  Eigen::Index dim() const { return basis.cols(); }
};

namespace detail {

/// Null space with an absolute singular-value cutoff (matrix entries here
/// are O(1) integers or roots of unity).
inline Matrix null_space_basis_abs(const Matrix& m, double tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

}  // namespace detail

inline KernelSpace kernel_space(const Representation& rho, const Representation& pi,
                                const OrbitDecomposition& orb) {
  if (rho.group != pi.group)
    throw DimensionMismatch("representations are over different groups");
  const int r = rho.dim;
  const int e = pi.dim;
  const int n = pi.group->order();
  const Matrix ir = Matrix::Identity(r, r);
  const Matrix ie = Matrix::Identity(e, e);

  // One factorization of the stacked per-element blocks.
  Matrix stacked(static_cast<Eigen::Index>(n) * r * e, static_cast<Eigen::Index>(r) * e);
  for (int g = 0; g < n; ++g)
    stacked.middleRows(static_cast<Eigen::Index>(g) * r * e, static_cast<Eigen::Index>(r) * e) =
        kronecker(ir, pi[g]) - kronecker(rho[g].transpose(), ie);
  const Matrix full = detail::null_space_basis_abs(stacked, KERNEL_SVTOL);

  KernelSpace ks;
  ks.irrep = &rho;
  ks.basis.resize(static_cast<Eigen::Index>(r) * e, full.cols());
  Eigen::Index col = 0;
  for (const auto& orbit : orb.orbits) {
    // Vectors of the kernel supported on V_rho ⊗ X_i: coefficients c with
    // the rows of `full` outside this orbit's coordinates vanishing.
    std::vector<bool> in_orbit(static_cast<std::size_t>(e), false);
    for (int j : orbit) in_orbit[static_cast<std::size_t>(j)] = true;
    std::vector<Eigen::Index> outside;
    for (int s = 0; s < r; ++s)
      for (int j = 0; j < e; ++j)
        if (!in_orbit[static_cast<std::size_t>(j)])
          outside.push_back(static_cast<Eigen::Index>(s) * e + j);
    Matrix coeffs;
    if (outside.empty()) {
      coeffs = Matrix::Identity(full.cols(), full.cols());
    } else {
      Matrix restricted(static_cast<Eigen::Index>(outside.size()), full.cols());
      for (std::size_t i = 0; i < outside.size(); ++i)
        restricted.row(static_cast<Eigen::Index>(i)) = full.row(outside[i]);
      coeffs = detail::null_space_basis_abs(restricted, KERNEL_SVTOL);
    }
    const Matrix part = full * coeffs;  // orthonormal: both factors are
    ks.per_orbit_dims.push_back(static_cast<int>(part.cols()));
    ks.basis.middleCols(col, part.cols()) = part;
    col += part.cols();
  }
  if (col != full.cols())
    throw Error("kernel space does not decompose over orbits");
  return ks;
}

/// Convenience overload deriving orbits from the permutation matrices of pi.
inline KernelSpace kernel_space(const Representation& rho, const Representation& pi) {
  SymmetryAction act;
  act.group = pi.group;
  for (const auto& m : pi.matrices) {
    std::vector<int> imgs(static_cast<std::size_t>(pi.dim), -1);
    for (int j = 0; j < pi.dim; ++j)
      for (int i = 0; i < pi.dim; ++i)
        if (std::abs(m(i, j) - Complex(1.0)) < 0.5) imgs[static_cast<std::size_t>(j)] = i;
    act.edge_action.emplace_back(std::move(imgs));
  }
  return kernel_space(rho, pi, orbits(act));
}

struct ThetaMatrices {
  Matrix theta;      // (r*E) x d
  Matrix theta_hat;  // (2*r*E) x (2*d)
};

inline ThetaMatrices theta_matrices(const KernelSpace& ks) {
  if (ks.dim() == 0) throw EmptyKernel("kernel space is empty for this irrep");
  return {ks.basis, kronecker(ks.basis, Matrix::Identity(2, 2))};
}

/// Normalized coupling pair: A~ = (A+iB)^{-1} A, B~ = (A+iB)^{-1} B, so
/// A~ + i B~ = I.
inline std::pair<Matrix, Matrix> tilde_pair(const CouplingPair& c) {
  const Complex im(0.0, 1.0);
  Eigen::FullPivLU<Matrix> lu(c.A + im * c.B);
  if (!lu.isInvertible())
    throw SingularMatrix("A + iB is singular; coupling pair is not self-adjoint");
  return {lu.solve(c.A), lu.solve(c.B)};
}

inline CouplingPair quotient_coupling(const Matrix& theta_hat, const Matrix& a_tilde,
                                      const Matrix& b_tilde, int r) {
  const Matrix ir = Matrix::Identity(r, r);
  const Matrix lift_a = kronecker(ir, a_tilde);
  if (lift_a.rows() != theta_hat.rows())
    throw DimensionMismatch("theta_hat does not conform with I_r ⊗ A~");
  return {theta_hat.adjoint() * lift_a * theta_hat,
          theta_hat.adjoint() * kronecker(ir, b_tilde) * theta_hat};
}

struct QuotientGraph {
  std::string irrep_label;
  int multiplicity = 1;  // r(rho): number of copies in the direct sum
  std::vector<double> edge_lengths;
  CouplingPair coupling;

  MetricGraph to_metric_graph() const { return {edge_lengths, coupling}; }
};

struct QuotientSet {
  std::vector<QuotientGraph> quotients;
  std::vector<std::string> skipped;  // irreps with empty kernel
};

inline QuotientSet build_all_quotients(const MetricGraph& g, const SymmetryAction& act,
                                       const std::vector<Representation>& irreps) {
  const SymmetryReport sym = check_pi_symmetric(g, act);
  if (!sym.pass()) {
    std::string what = "graph is not pi-symmetric";
    if (!sym.lengths_ok) what += " (edge lengths not orbit-constant)";
    if (!sym.coupling_ok)
      what += " (coupling not invariant under group element " +
              std::to_string(sym.failing_element) + ")";
    throw NotSymmetric(what);
  }
  for (const auto& rho : irreps)
    if (!is_irreducible(rho))
      throw ReducibleInput("representation '" + rho.label + "' is not irreducible");

  const Representation pi = permutation_representation(*act.group, act.edge_action);
  const OrbitDecomposition orb = orbits(act);
  const auto [a_tilde, b_tilde] = tilde_pair(g.coupling);

  QuotientSet out;
  for (const auto& rho : irreps) {
    const KernelSpace ks = kernel_space(rho, pi, orb);
    if (ks.dim() == 0) {
      out.skipped.push_back(rho.label);
      continue;
    }
    const ThetaMatrices th = theta_matrices(ks);
    QuotientGraph q;
    q.irrep_label = rho.label;
    q.multiplicity = rho.dim;
    for (std::size_t i = 0; i < orb.orbits.size(); ++i)
      for (int rep = 0; rep < ks.per_orbit_dims[i]; ++rep)
        q.edge_lengths.push_back(
            g.edge_lengths[static_cast<std::size_t>(orb.representatives[i])]);
    q.coupling = quotient_coupling(th.theta_hat, a_tilde, b_tilde, rho.dim);
    out.quotients.push_back(std::move(q));
  }
  return out;
}

/// Gauge-independent comparison of coupling conditions: two pairs define the
/// same constraint set iff the projectors onto range([A B]^H) agree.
inline bool conditions_equivalent(const CouplingPair& c1, const CouplingPair& c2,
                                  double tol = TOL_COUPLING) {
  if (c1.A.rows() != c2.A.rows())
    throw DimensionMismatch("coupling pairs of different sizes");
  const auto row_space_projector = [](const CouplingPair& c) {
    Matrix joined(c.A.rows(), c.A.cols() + c.B.cols());
    joined << c.A, c.B;
    Eigen::JacobiSVD<Matrix> svd(joined, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? sv(0) * RANK_TOL : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff) ++rank;
    const Matrix w = svd.matrixV().leftCols(rank);
    return Matrix(w * w.adjoint());
  };
  return (row_space_projector(c1) - row_space_projector(c2)).cwiseAbs().maxCoeff() < tol;
}

// --- one-edge segment helpers -------------------------------------------

enum class BoundaryKind { Neumann, Dirichlet, Robin, Coupled };

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::Coupled;
  Complex robin_coeff = 0.0;  // outward derivative = coeff * value
};

/// Coupling pair of a single segment (0, l) with independent conditions at
/// the two ends. Robin means f'(0) = c f(0) at the left end and
/// -f'(l) = c f(l) at the right end.
inline CouplingPair segment_coupling(const BoundaryCondition& left,
                                     const BoundaryCondition& right) {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  const auto fill = [&](Eigen::Index row, const BoundaryCondition& bc) {
    switch (bc.kind) {
      case BoundaryKind::Dirichlet:
        a(row, row) = 1.0;
        break;
      case BoundaryKind::Neumann:
        b(row, row) = 1.0;
        break;
      case BoundaryKind::Robin:
        a(row, row) = bc.robin_coeff;
        b(row, row) = -1.0;
        break;
      case BoundaryKind::Coupled:
        throw Error("coupled boundary has no segment builder");
    }
  };
  fill(0, left);
  fill(1, right);
  return {std::move(a), std::move(b)};
}

inline MetricGraph segment_graph(double length, const BoundaryCondition& left,
                                 const BoundaryCondition& right) {
  return {{length}, segment_coupling(left, right)};
}

/// Classifies the two ends of a one-edge coupling pair, when the constraint
/// set decouples per end. Gauge independent: works on the row span.
inline std::pair<BoundaryCondition, BoundaryCondition> classify_segment_ends(
    const CouplingPair& c) {
  if (c.A.rows() != 2) throw DimensionMismatch("expected a one-edge coupling pair");
  Matrix joined_t(4, 2);
  joined_t << c.A.transpose(), c.B.transpose();  // columns span the constraints
  const auto end_condition = [&](Eigen::Index value_row, Eigen::Index deriv_row,
                                 Eigen::Index other_value, Eigen::Index other_deriv) {
    Matrix restricted(2, 2);
    restricted.row(0) = joined_t.row(other_value);
    restricted.row(1) = joined_t.row(other_deriv);
    const Matrix coeffs = detail::null_space_basis_abs(
        restricted / std::max(1.0, joined_t.cwiseAbs().maxCoeff()), RANK_TOL * 10);
    BoundaryCondition bc;
    if (coeffs.cols() != 1) return bc;  // Coupled (or degenerate)
    const Vector u = joined_t * coeffs.col(0);
    const double scale = u.cwiseAbs().maxCoeff();
    const Complex uv = u(value_row), ud = u(deriv_row);
    if (std::abs(uv) < TOL_COUPLING * scale) {
      bc.kind = BoundaryKind::Neumann;
    } else if (std::abs(ud) < TOL_COUPLING * scale) {
      bc.kind = BoundaryKind::Dirichlet;
    } else {
      bc.kind = BoundaryKind::Robin;
      bc.robin_coeff = -uv / ud;
    }
    return bc;
  };
  // Trace ordering: (f(0), f(l), f'(0), -f'(l)).
  return {end_condition(0, 2, 1, 3), end_condition(1, 3, 0, 2)};
}

}  // namespace qg
