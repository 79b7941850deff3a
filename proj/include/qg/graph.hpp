#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <string>
#include <vector>

#include "qg/errors.hpp"
#include "qg/group.hpp"
#include "qg/representation.hpp"
#include "qg/tolerances.hpp"

namespace qg {

/// Global vertex-coupling matrices in the interleaved endpoint ordering
/// Psi = (f_1(0), f_1(l_1), f_2(0), f_2(l_2), ...), with outgoing
/// derivatives (-f' at the x = l end) in Psi'.
struct CouplingPair {
  Matrix A;
  Matrix B;

  Eigen::Index size() const { return A.rows(); }
};

struct MetricGraph {
  std::vector<double> edge_lengths;
  CouplingPair coupling;

  int edge_count() const { return static_cast<int>(edge_lengths.size()); }
};

/// A finite group acting on edge indices; edge_action[g] permutes
/// {0,...,E-1} and must be a homomorphic image of the group.
struct SymmetryAction {
  const FiniteGroup* group = nullptr;
  std::vector<Permutation> edge_action;

  int edge_count() const {
    return edge_action.empty() ? 0 : edge_action.front().size();
  }

  bool is_valid() const {
    if (!group || static_cast<int>(edge_action.size()) != group->order()) return false;
    const int n = group->order();
    if (!(edge_action[static_cast<std::size_t>(group->identity)] ==
          Permutation::identity(edge_count())))
      return false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (!(edge_action[static_cast<std::size_t>(group->mul(a, b))] ==
              edge_action[static_cast<std::size_t>(a)].compose(
                  edge_action[static_cast<std::size_t>(b)])))
          return false;
    return true;
  }
};

/// Action of a permutation group on edges indexed like its own points.
inline SymmetryAction natural_action(const FiniteGroup& g) {
  return SymmetryAction{&g, g.elements};
}

struct CouplingReport {
  bool hermitian_ok = false;
  double hermitian_residual = 0.0;
  bool rank_ok = false;
  Eigen::Index rank = 0;

  bool pass() const { return hermitian_ok && rank_ok; }
};

/// Self-adjointness checks on a coupling pair: A B† = B A† and maximal rank
/// of the joined block (A B).
inline CouplingReport validate_coupling(const CouplingPair& c) {
  if (c.A.rows() != c.A.cols() || c.B.rows() != c.B.cols() ||
      c.A.rows() != c.B.rows())
    throw DimensionMismatch("coupling matrices must be square and equal-sized");
  if (c.A.rows() % 2 != 0)
    throw DimensionMismatch("coupling matrices must have even size");
  CouplingReport rep;
  const Matrix herm = c.A * c.B.adjoint() - c.B * c.A.adjoint();
  rep.hermitian_residual = herm.size() > 0 ? herm.cwiseAbs().maxCoeff() : 0.0;
  rep.hermitian_ok = rep.hermitian_residual < TOL_COUPLING;

  Matrix joined(c.A.rows(), c.A.cols() + c.B.cols());
  joined << c.A, c.B;
  Eigen::JacobiSVD<Matrix> svd(joined);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? sv(0) * RANK_TOL : 0.0;
  rep.rank = (sv.array() > cutoff).count();
  rep.rank_ok = rep.rank == c.A.rows();
  return rep;
}

/// M ⊗ I_2, lifting an edge-indexed matrix to interleaved endpoint traces.
inline Matrix hat_matrix(const Matrix& m) {
  return kronecker(m, Matrix::Identity(2, 2));
}

namespace detail {

/// Orthonormal basis of the null space of m (columns), via SVD with a
/// relative singular-value cutoff.
inline Matrix null_space_basis(const Matrix& m, double rel_tol = RANK_TOL) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? sv(0) * rel_tol : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

/// Orthogonal projector onto the solution space {(Psi, Psi'): A Psi + B Psi' = 0}.
inline Matrix solution_space_projector(const CouplingPair& c) {
  Matrix joined(c.A.rows(), c.A.cols() + c.B.cols());
  joined << c.A, c.B;
  const Matrix n = null_space_basis(joined);
  return n * n.adjoint();
}

}  // namespace detail

struct SymmetryReport {
  bool lengths_ok = false;
  bool coupling_ok = false;
  int failing_element = -1;  // first group element breaking coupling invariance
  std::vector<std::pair<int, int>> length_mismatches;  // (edge, image edge)

  bool pass() const { return lengths_ok && coupling_ok; }
};

/// Checks the two symmetry requirements: orbit-constant edge lengths, and
/// invariance of the coupling constraint set under diag(pi_hat(g), pi_hat(g)).
/// The constraint-set form is basis independent, so it is tested through the
/// projector onto the null space of (A B).
inline SymmetryReport check_pi_symmetric(const MetricGraph& g, const SymmetryAction& act) {
  if (act.edge_count() != g.edge_count())
    throw DimensionMismatch("action degree differs from edge count");
  SymmetryReport rep;
  rep.lengths_ok = true;
  for (std::size_t gi = 0; gi < act.edge_action.size(); ++gi) {
    const Permutation& p = act.edge_action[gi];
    for (int j = 0; j < g.edge_count(); ++j) {
      const int i = p(j);
      if (std::abs(g.edge_lengths[static_cast<std::size_t>(j)] -
                   g.edge_lengths[static_cast<std::size_t>(i)]) > 0.0) {
        rep.lengths_ok = false;
        rep.length_mismatches.emplace_back(j, i);
      }
    }
  }

  const Representation pi = permutation_representation(*act.group, act.edge_action);
  const Matrix proj = detail::solution_space_projector(g.coupling);
  rep.coupling_ok = true;
  for (int gi = 0; gi < act.group->order(); ++gi) {
    const Matrix pihat = hat_matrix(pi[gi]);
    Matrix d = Matrix::Zero(2 * pihat.rows(), 2 * pihat.cols());
    d.topLeftCorner(pihat.rows(), pihat.cols()) = pihat;
    d.bottomRightCorner(pihat.rows(), pihat.cols()) = pihat;
    const double resid = (d * proj * d.adjoint() - proj).cwiseAbs().maxCoeff();
    if (resid > TOL_COUPLING) {
      rep.coupling_ok = false;
      if (rep.failing_element < 0) rep.failing_element = gi;
    }
  }
  return rep;
}

/// Edge actions are permutations of directed-edge indices, so mapping an
/// edge to its reverse is not expressible in this model.
inline bool detect_reversed_edges(const SymmetryAction&) { return false; }

namespace detail {

/// Neumann rows for the loose ends (x = 0) of a 3-star, shared by the
/// builders below: rows 0..2 of B pick f_j'(0).
inline void star_neumann_loose_ends(Matrix& a, Matrix& b) {
  a.topRows(3).setZero();
  b.topRows(3).setZero();
  b(0, 0) = 1.0;
  b(1, 2) = 1.0;
  b(2, 4) = 1.0;
}

}  // namespace detail

/// Equilateral 3-star, Neumann loose ends, standard (continuity plus
/// Kirchhoff) coupling at the center. Matches the published global (A, B).
inline MetricGraph star_graph_standard(double length) {
  if (length <= 0.0) throw Error("edge length must be positive");
  Matrix a = Matrix::Zero(6, 6), b = Matrix::Zero(6, 6);
  detail::star_neumann_loose_ends(a, b);
  a(3, 1) = 1.0;
  a(3, 3) = -1.0;
  a(4, 1) = 1.0;
  a(4, 5) = -1.0;
  b(5, 1) = 1.0;
  b(5, 3) = 1.0;
  b(5, 5) = 1.0;
  return MetricGraph{{length, length, length}, {std::move(a), std::move(b)}};
}

/// As star_graph_standard but with a delta coupling of strength alpha at the
/// center; alpha = 0 reproduces the standard star exactly.
inline MetricGraph star_graph_delta(double length, double alpha) {
  MetricGraph g = star_graph_standard(length);
  g.coupling.A(5, 1) = -alpha;
  return g;
}

/// Equilateral 3-star with the preferred-orientation center coupling
/// A_v = U - I, B_v = i(U + I), U the 3-cycle; Neumann loose ends.
inline MetricGraph star_graph_preferred_orientation(double length) {
  if (length <= 0.0) throw Error("edge length must be positive");
  const Complex im(0.0, 1.0);
  Matrix a = Matrix::Zero(6, 6), b = Matrix::Zero(6, 6);
  detail::star_neumann_loose_ends(a, b);
  a(3, 1) = -1.0;
  a(3, 3) = 1.0;
  a(4, 3) = -1.0;
  a(4, 5) = 1.0;
  a(5, 1) = 1.0;
  a(5, 5) = -1.0;
  b(3, 1) = im;
  b(3, 3) = im;
  b(4, 3) = im;
  b(4, 5) = im;
  b(5, 1) = im;
  b(5, 5) = im;
  return MetricGraph{{length, length, length}, {std::move(a), std::move(b)}};
}

}  // namespace qg
