#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "qg/errors.hpp"
#include "qg/group.hpp"
#include "qg/tolerances.hpp"

namespace qg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Kronecker product with the usual block layout: block (i,j) equals
/// c_ij * D.
inline Matrix kronecker(const Matrix& c, const Matrix& d) {
  Matrix out(c.rows() * d.rows(), c.cols() * d.cols());
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      out.block(i * d.rows(), j * d.cols(), d.rows(), d.cols()) = c(i, j) * d;
  return out;
}

/// A matrix representation of a finite group: one dim x dim complex matrix
/// per group element, in the group's element order.
struct Representation {
  const FiniteGroup* group = nullptr;
  int dim = 0;
  std::vector<Matrix> matrices;
  std::string label;

  const Matrix& operator[](int g) const {
    return matrices[static_cast<std::size_t>(g)];
  }

  /// Homomorphism property and identity image, to TOL_REP.
  bool is_valid(double tol = TOL_REP) const {
    if (!group || static_cast<int>(matrices.size()) != group->order()) return false;
    for (const auto& m : matrices)
      if (m.rows() != dim || m.cols() != dim) return false;
    if (((*this)[group->identity] - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol)
      return false;
    for (int a = 0; a < group->order(); ++a)
      for (int b = 0; b < group->order(); ++b)
        if (((*this)[group->mul(a, b)] - (*this)[a] * (*this)[b]).cwiseAbs().maxCoeff() > tol)
          return false;
    return true;
  }
};

/// Per-element character values, in group element order.
struct Character {
  std::vector<Complex> values;
};

/// The permutation matrices of the group's own action: entry (g(j), j) = 1.
/// For S3 on three points this is the defining representation.
inline Representation permutation_representation(const FiniteGroup& g) {
  Representation rep;
  rep.group = &g;
  rep.dim = g.degree();
  rep.label = "permutation";
  for (const auto& p : g.elements) {
    Matrix m = Matrix::Zero(rep.dim, rep.dim);
    for (int j = 0; j < rep.dim; ++j) m(p(j), j) = 1.0;
    rep.matrices.push_back(std::move(m));
  }
  return rep;
}

/// Like permutation_representation but for an arbitrary per-element action
/// (used for edge actions that may differ from the group's defining points).
inline Representation permutation_representation(const FiniteGroup& g,
                                                 const std::vector<Permutation>& action) {
  if (static_cast<int>(action.size()) != g.order())
    throw DimensionMismatch("action size differs from group order");
  Representation rep;
  rep.group = &g;
  rep.dim = action.front().size();
  rep.label = "permutation";
  for (const auto& p : action) {
    Matrix m = Matrix::Zero(rep.dim, rep.dim);
    for (int j = 0; j < rep.dim; ++j) m(p(j), j) = 1.0;
    rep.matrices.push_back(std::move(m));
  }
  return rep;
}

inline Character character_of(const Representation& rho) {
  Character chi;
  for (const auto& m : rho.matrices) chi.values.push_back(m.trace());
  return chi;
}

/// (1/|G|) sum_g conj(chi1(g)) chi2(g).
inline Complex char_inner(const Character& chi1, const Character& chi2,
                          const FiniteGroup& g) {
  if (static_cast<int>(chi1.values.size()) != g.order() ||
      static_cast<int>(chi2.values.size()) != g.order())
    throw DimensionMismatch("character length differs from group order");
  Complex acc = 0.0;
  for (int i = 0; i < g.order(); ++i)
    acc += std::conj(chi1.values[static_cast<std::size_t>(i)]) *
           chi2.values[static_cast<std::size_t>(i)];
  return acc / static_cast<double>(g.order());
}

inline bool is_irreducible(const Representation& rho) {
  const Character chi = character_of(rho);
  return std::abs(char_inner(chi, chi, *rho.group) - Complex(1.0)) < TOL_CHAR;
}

/// Multiplicity of the irreducible rho in pi via the character inner product.
inline int multiplicity(const Representation& pi, const Representation& rho) {
  const Complex v = char_inner(character_of(pi), character_of(rho), *pi.group);
  const double rounded = std::round(v.real());
  if (std::abs(v - Complex(rounded)) > TOL_CHAR || rounded < 0.0)
    throw NotNearInteger("character inner product is not a nonnegative integer");
  return static_cast<int>(rounded);
}

namespace detail {

inline Representation one_dim_rep(const FiniteGroup& g, std::vector<Complex> vals,
                                  std::string label) {
  Representation rep;
  rep.group = &g;
  rep.dim = 1;
  rep.label = std::move(label);
  for (const Complex& v : vals) {
    Matrix m(1, 1);
    m(0, 0) = v;
    rep.matrices.push_back(std::move(m));
  }
  return rep;
}

inline int permutation_parity(const Permutation& p) {
  int swaps = 0;
  std::vector<int> imgs = p.images;
  for (int i = 0; i < p.size(); ++i) {
    while (imgs[static_cast<std::size_t>(i)] != i) {
      std::swap(imgs[static_cast<std::size_t>(i)],
                imgs[static_cast<std::size_t>(imgs[static_cast<std::size_t>(i)])]);
      ++swaps;
    }
  }
  return swaps % 2 == 0 ? 1 : -1;
}

}  // namespace detail

/// The three irreducibles of S3 in the group's element order: trivial,
/// signum, and the two-dimensional orthogonal representation with the
/// published matrices (basis e2-e1, e3-e1 inside the defining space).
inline std::vector<Representation> s3_irreps(const FiniteGroup& s3) {
  if (s3.order() != 6 || s3.degree() != 3)
    throw UnsupportedGroup("expected S3 on three points");
  std::vector<Representation> irreps;
  std::vector<Complex> triv(6, 1.0);
  irreps.push_back(detail::one_dim_rep(s3, triv, "trivial"));
  std::vector<Complex> sgn;
  for (const auto& p : s3.elements)
    sgn.push_back(static_cast<double>(detail::permutation_parity(p)));
  irreps.push_back(detail::one_dim_rep(s3, sgn, "signum"));

  Representation orth;
  orth.group = &s3;
  orth.dim = 2;
  orth.label = "orthogonal";
  const auto m = [](double a, double b, double c, double d) {
    Matrix out(2, 2);
    out << a, b, c, d;
    return out;
  };
  // Matrices keyed by one-line notation, then emitted in element order.
  const std::vector<std::pair<Permutation, Matrix>> table = {
      {Permutation({0, 1, 2}), m(1, 0, 0, 1)},
      {Permutation({1, 0, 2}), m(-1, -1, 0, 1)},
      {Permutation({2, 1, 0}), m(1, 0, -1, -1)},
      {Permutation({0, 2, 1}), m(0, 1, 1, 0)},
      {Permutation({1, 2, 0}), m(-1, -1, 1, 0)},
      {Permutation({2, 0, 1}), m(0, 1, -1, -1)}};
  orth.matrices.resize(6);
  for (const auto& [perm, mat] : table) {
    const int idx = s3.index_of(perm);
    if (idx < 0) throw UnsupportedGroup("group is not S3 on three points");
    orth.matrices[static_cast<std::size_t>(idx)] = mat;
  }
  irreps.push_back(std::move(orth));
  return irreps;
}

/// The n one-dimensional irreducibles of C_n: rho_m(a^j) = exp(2 pi i m j / n).
inline std::vector<Representation> cyclic_irreps(const FiniteGroup& cn) {
  const int n = cn.order();
  // Identify each element as a power of a fixed generator.
  int gen = cn.identity;
  for (int g = 0; g < n; ++g) {
    int pow = g, count = 1;
    while (pow != cn.identity) {
      pow = cn.mul(pow, g);
      ++count;
    }
    if (count == n) {
      gen = g;
      break;
    }
  }
  if (n > 1 && gen == cn.identity) throw UnsupportedGroup("group is not cyclic");
  std::vector<int> exponent(static_cast<std::size_t>(n), 0);
  int cur = cn.identity;
  for (int j = 0; j < n; ++j) {
    exponent[static_cast<std::size_t>(cur)] = j;
    cur = cn.mul(cur, gen);
  }
  std::vector<Representation> irreps;
  for (int mIdx = 0; mIdx < n; ++mIdx) {
    std::vector<Complex> vals(static_cast<std::size_t>(n));
    for (int g = 0; g < n; ++g) {
      const double phase = 2.0 * std::numbers::pi * mIdx *
                           exponent[static_cast<std::size_t>(g)] / n;
      vals[static_cast<std::size_t>(g)] = std::polar(1.0, phase);
    }
    irreps.push_back(detail::one_dim_rep(cn, vals, "rho" + std::to_string(mIdx + 1)));
  }
  return irreps;
}

}  // namespace qg
