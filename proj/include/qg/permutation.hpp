#pragma once

#include <cstddef>
#include <vector>

#include "qg/errors.hpp"

namespace qg {

/// A permutation of {0,...,n-1} stored as its image list: i maps to images[i].
struct Permutation {
  std::vector<int> images;

  Permutation() = default;
  explicit Permutation(std::vector<int> imgs) : images(std::move(imgs)) {}

  static Permutation identity(int n) {
    std::vector<int> imgs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) imgs[static_cast<std::size_t>(i)] = i;
    return Permutation(std::move(imgs));
  }

  int size() const { return static_cast<int>(images.size()); }
  int operator()(int i) const { return images[static_cast<std::size_t>(i)]; }

  bool is_valid() const {
    const int n = size();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : images) {
      if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
  }

  /// Composition acting left-to-right as functions: (a*b)(i) = a(b(i)).
  Permutation compose(const Permutation& rhs) const {
    if (size() != rhs.size()) throw DimensionMismatch("permutation sizes differ");
    std::vector<int> imgs(images.size());
    for (int i = 0; i < size(); ++i)
      imgs[static_cast<std::size_t>(i)] = (*this)(rhs(i));
    return Permutation(std::move(imgs));
  }

  Permutation inverse() const {
    std::vector<int> imgs(images.size());
    for (int i = 0; i < size(); ++i)
      imgs[static_cast<std::size_t>((*this)(i))] = i;
    return Permutation(std::move(imgs));
  }

  bool operator==(const Permutation& other) const { return images == other.images; }
};

}  // namespace qg
