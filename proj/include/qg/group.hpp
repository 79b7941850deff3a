#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qg/errors.hpp"
#include "qg/permutation.hpp"

namespace qg {

inline constexpr int DEFAULT_GROUP_CAP = 720;

/// A finite permutation group with a precomputed multiplication table.
/// Element order is the construction order; all per-element arrays in the
/// library index into `elements`.
struct FiniteGroup {
  std::vector<Permutation> elements;
  std::vector<std::vector<int>> cayley;  // cayley[g][h] = index of g*h
  std::vector<int> inverses;
  int identity = -1;

  int order() const { return static_cast<int>(elements.size()); }
  int degree() const { return elements.empty() ? 0 : elements.front().size(); }

  int mul(int g, int h) const {
    return cayley[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)];
  }
  int inv(int g) const { return inverses[static_cast<std::size_t>(g)]; }

  int index_of(const Permutation& p) const {
    for (int i = 0; i < order(); ++i)
      if (elements[static_cast<std::size_t>(i)] == p) return i;
    return -1;
  }
};

namespace detail {

inline void fill_tables(FiniteGroup& g) {
  const int n = g.order();
  g.cayley.assign(static_cast<std::size_t>(n),
                  std::vector<int>(static_cast<std::size_t>(n), -1));
  std::map<std::vector<int>, int> lookup;
  for (int i = 0; i < n; ++i) lookup[g.elements[static_cast<std::size_t>(i)].images] = i;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Permutation prod = g.elements[static_cast<std::size_t>(a)].compose(
          g.elements[static_cast<std::size_t>(b)]);
      const auto it = lookup.find(prod.images);
      if (it == lookup.end()) throw Error("element list is not closed");
      g.cayley[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = it->second;
    }
  }
  g.identity = -1;
  const Permutation id = Permutation::identity(g.degree());
  for (int i = 0; i < n; ++i)
    if (g.elements[static_cast<std::size_t>(i)] == id) g.identity = i;
  if (g.identity < 0) throw Error("identity element missing");
  g.inverses.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.mul(a, b) == g.identity && g.mul(b, a) == g.identity)
        g.inverses[static_cast<std::size_t>(a)] = b;
}

}  // namespace detail

/// Breadth-first closure of a generating set. Elements are ordered with the
/// generators first (as given, duplicates removed), then products in BFS
/// discovery order. The identity appears wherever the closure produces it,
/// except for the empty generating set where it is the sole element.
inline FiniteGroup group_from_generators(const std::vector<Permutation>& generators,
                                         int degree_if_empty = 1,
                                         int cap = DEFAULT_GROUP_CAP) {
  FiniteGroup g;
  if (generators.empty()) {
    g.elements.push_back(Permutation::identity(degree_if_empty));
    detail::fill_tables(g);
    return g;
  }
  const int n = generators.front().size();
  for (const auto& p : generators) {
    if (p.size() != n) throw DimensionMismatch("generators act on different sets");
    if (!p.is_valid()) throw Error("generator is not a bijection");
  }
  std::map<std::vector<int>, int> seen;
  std::vector<Permutation> elems;
  for (const auto& p : generators) {
    if (seen.emplace(p.images, static_cast<int>(elems.size())).second)
      elems.push_back(p);
  }
  // BFS over right-multiplication by generators.
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& gen : generators) {
      Permutation prod = elems[head].compose(gen);
      if (seen.emplace(prod.images, static_cast<int>(elems.size())).second) {
        elems.push_back(std::move(prod));
        if (static_cast<int>(elems.size()) > cap)
          throw ClosureOverflow("group closure exceeds cap of " + std::to_string(cap));
      }
    }
  }
  // The closure of a finite set of bijections under composition contains the
  // identity and inverses; add the identity explicitly in case the loop above
  // stopped exactly at it (it cannot, but keeps the invariant obvious).
  const Permutation id = Permutation::identity(n);
  if (seen.find(id.images) == seen.end()) elems.push_back(id);
  g.elements = std::move(elems);
  detail::fill_tables(g);
  return g;
}

/// Rebuild a group with its elements listed in a caller-chosen order.
/// Used by golden tests to pin the S3 order of the published tables.
inline FiniteGroup reorder_elements(const FiniteGroup& g,
                                    const std::vector<Permutation>& order) {
  if (static_cast<int>(order.size()) != g.order())
    throw DimensionMismatch("reorder list size differs from group order");
  FiniteGroup out;
  for (const auto& p : order) {
    if (g.index_of(p) < 0) throw Error("reorder element not in group");
    out.elements.push_back(p);
  }
  detail::fill_tables(out);
  return out;
}

/// Partition of element indices into conjugacy classes; classes ordered by
/// their smallest member, members ascending.
inline std::vector<std::vector<int>> conjugacy_classes(const FiniteGroup& g) {
  const int n = g.order();
  std::vector<bool> assigned(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> classes;
  for (int a = 0; a < n; ++a) {
    if (assigned[static_cast<std::size_t>(a)]) continue;
    std::vector<int> cls;
    for (int x = 0; x < n; ++x) {
      const int b = g.mul(g.mul(g.inv(x), a), x);
      if (!assigned[static_cast<std::size_t>(b)]) {
        assigned[static_cast<std::size_t>(b)] = true;
        cls.push_back(b);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

/// S3 acting on 3 points, elements in the order of the published table:
/// [123], [213], [321], [132], [231], [312] (one-line images, 0-based here).
inline FiniteGroup s3_group() {
  const std::vector<Permutation> order = {
      Permutation({0, 1, 2}), Permutation({1, 0, 2}), Permutation({2, 1, 0}),
      Permutation({0, 2, 1}), Permutation({1, 2, 0}), Permutation({2, 0, 1})};
  FiniteGroup closure = group_from_generators({order[1], order[3]});
  return reorder_elements(closure, order);
}

/// Cyclic group C_n generated by the n-cycle i -> i+1 (mod n), elements
/// ordered e, a, a^2, ..., a^{n-1}.
inline FiniteGroup cyclic_group(int n) {
  if (n < 1) throw Error("cyclic group order must be positive");
  std::vector<Permutation> order;
  for (int j = 0; j < n; ++j) {
    std::vector<int> imgs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) imgs[static_cast<std::size_t>(i)] = (i + j) % n;
    order.emplace_back(std::move(imgs));
  }
  FiniteGroup closure = group_from_generators({order[n > 1 ? 1 : 0]});
  return reorder_elements(closure, order);
}

/// Exhaustive structural check: associativity, two-sided inverses, identity
/// row/column. Cheap for |G| <= 24, still fine at the 720 cap.
inline bool group_axioms_hold(const FiniteGroup& g) {
  const int n = g.order();
  for (int a = 0; a < n; ++a) {
    if (g.mul(g.identity, a) != a || g.mul(a, g.identity) != a) return false;
    if (g.mul(a, g.inv(a)) != g.identity || g.mul(g.inv(a), a) != g.identity)
      return false;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) return false;
  return true;
}

}  // namespace qg
