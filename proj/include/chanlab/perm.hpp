#pragma once

// Permutations of {0,...,p-1}, set partitions and the non-crossing combinatorics
// used by the Weingarten moment formulas.
//
// Composition convention: (a * b)(i) = a(b(i)).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fraction.hpp"

namespace chanlab {

inline constexpr int kMaxEnumerationDegree = 8;

class Permutation {
 public:
  Permutation() = default;

  // Identity on p points.
  explicit Permutation(int p) : img_(static_cast<std::size_t>(p)) {
    require(p >= 0, ErrorCode::invalid_permutation, "negative degree");
    std::iota(img_.begin(), img_.end(), 0);
  }

  // images[i] = image of i, 0-based.
  static Permutation from_images(std::vector<int> images) {
    std::vector<char> seen(images.size(), 0);
    for (int v : images) {
      require(v >= 0 && static_cast<std::size_t>(v) < images.size() && !seen[v],
              ErrorCode::invalid_permutation, "images are not a bijection");
      seen[v] = 1;
    }
    Permutation out;
    out.img_ = std::move(images);
    return out;
  }

  // Cycles given with 1-based labels, e.g. {{1,2},{3}} on p = 3.
  static Permutation from_cycles(int p, const std::vector<std::vector<int>>& cycles) {
    Permutation out(p);
    std::vector<char> seen(static_cast<std::size_t>(p), 0);
    for (const auto& c : cycles) {
      for (std::size_t k = 0; k < c.size(); ++k) {
        const int a = c[k] - 1;
        const int b = c[(k + 1) % c.size()] - 1;
        require(a >= 0 && a < p && b >= 0 && b < p && !seen[a], ErrorCode::invalid_permutation,
                "bad cycle entry");
        seen[a] = 1;
        out.img_[a] = b;
      }
    }
    return out;
  }

  int degree() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return img_; }

  Permutation inverse() const {
    Permutation out(degree());
    for (int i = 0; i < degree(); ++i) out.img_[img_[i]] = i;
    return out;
  }

  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    require(a.degree() == b.degree(), ErrorCode::dimension_mismatch, "permutation degrees differ");
    Permutation out;
    out.img_.resize(b.img_.size());
    for (std::size_t i = 0; i < b.img_.size(); ++i) out.img_[i] = a.img_[b.img_[i]];
    return out;
  }

  int cycle_count() const {
    std::vector<char> seen(img_.size(), 0);
    int n = 0;
    for (std::size_t i = 0; i < img_.size(); ++i) {
      if (seen[i]) continue;
      ++n;
      for (int j = static_cast<int>(i); !seen[j]; j = img_[j]) seen[j] = 1;
    }
    return n;
  }

  // Minimal number of transpositions, p - #cycles.
  int length() const { return degree() - cycle_count(); }

  // Cycles in 0-based labels, each starting at its smallest element.
  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(img_.size(), 0);
    for (std::size_t i = 0; i < img_.size(); ++i) {
      if (seen[i]) continue;
      std::vector<int> c;
      for (int j = static_cast<int>(i); !seen[j]; j = img_[j]) {
        seen[j] = 1;
        c.push_back(j);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  // Cycle lengths, nonincreasing.
  std::vector<int> cycle_type() const {
    std::vector<int> t;
    for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
    std::sort(t.begin(), t.end(), std::greater<>());
    return t;
  }

  bool is_involution() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[img_[i]] != static_cast<int>(i)) return false;
    return true;
  }

  // 1-based cycle notation, fixed points included: "(1 2)(3)".
  std::string to_string() const {
    std::string s;
    for (const auto& c : cycles()) {
      s += '(';
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) s += ' ';
        s += std::to_string(c[k] + 1);
      }
      s += ')';
    }
    return s.empty() ? "()" : s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> img_;
};

// Partition of {0,...,p-1}; labels are canonical (blocks numbered by first element).
class SetPartition {
 public:
  SetPartition() = default;

  explicit SetPartition(std::vector<int> labels) : label_(std::move(labels)) { canonicalize(); }

  static SetPartition of_permutation(const Permutation& a) {
    std::vector<int> lab(static_cast<std::size_t>(a.degree()), -1);
    int b = 0;
    for (int i = 0; i < a.degree(); ++i) {
      if (lab[i] >= 0) continue;
      for (int j = i; lab[j] < 0; j = a(j)) lab[j] = b;
      ++b;
    }
    SetPartition out;
    out.label_ = std::move(lab);
    out.blocks_ = b;
    return out;
  }

  int size() const { return static_cast<int>(label_.size()); }
  int block_count() const { return blocks_; }
  int block_of(int i) const { return label_[static_cast<std::size_t>(i)]; }

  std::vector<std::vector<int>> blocks() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(blocks_));
    for (int i = 0; i < size(); ++i) out[label_[i]].push_back(i);
    return out;
  }

  // Finest partition coarser than both.
  friend SetPartition join(const SetPartition& x, const SetPartition& y) {
    require(x.size() == y.size(), ErrorCode::dimension_mismatch, "partition sizes differ");
    const int n = x.size();
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const auto* part : {&x, &y}) {
      std::vector<int> first(static_cast<std::size_t>(part->blocks_), -1);
      for (int i = 0; i < n; ++i) {
        int& f = first[part->label_[i]];
        if (f < 0)
          f = i;
        else
          parent[find(i)] = find(f);
      }
    }
    std::vector<int> lab(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) lab[i] = find(i);
    return SetPartition(std::move(lab));
  }

  bool is_noncrossing() const {
    const int n = size();
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c)
          for (int e = c + 1; e < n; ++e)
            if (label_[a] == label_[c] && label_[b] == label_[e] && label_[a] != label_[b])
              return false;
    return true;
  }

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  void canonicalize() {
    std::vector<int> remap;
    std::vector<int> seen_label;
    blocks_ = 0;
    for (int& v : label_) {
      auto it = std::find(seen_label.begin(), seen_label.end(), v);
      if (it == seen_label.end()) {
        seen_label.push_back(v);
        remap.push_back(blocks_++);
        v = remap.back();
      } else {
        v = remap[static_cast<std::size_t>(it - seen_label.begin())];
      }
    }
  }

  std::vector<int> label_;
  int blocks_ = 0;
};

// All p! permutations in lexicographic order of image vectors; 1 <= p <= 8.
inline std::vector<Permutation> enumerate_symmetric_group(int p) {
  require(p >= 1 && p <= kMaxEnumerationDegree, ErrorCode::degree_out_of_range,
          "enumeration needs 1 <= p <= 8, got " + std::to_string(p));
  std::vector<int> img(static_cast<std::size_t>(p));
  std::iota(img.begin(), img.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation::from_images(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

inline std::int64_t catalan(int n) {
  require(n >= 0 && n <= 30, ErrorCode::overflow, "catalan index must be in [0, 30]");
  unsigned __int128 c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return static_cast<std::int64_t>(c);
}

// Moebius function of the non-crossing partition lattice, multiplicative over cycles.
inline std::int64_t mobius(const Permutation& s) {
  std::int64_t m = 1;
  for (const auto& c : s.cycles()) {
    const int k = static_cast<int>(c.size()) - 1;
    const std::int64_t f = catalan(k);
    if (__builtin_mul_overflow(m, (k % 2 ? -f : f), &m))
      throw Error(ErrorCode::overflow, "moebius product");
  }
  return m;
}

// |a v b| for the join of the cycle partitions, equal to p - #blocks.
inline int join_rank(const Permutation& a, const Permutation& b) {
  return a.degree() -
         join(SetPartition::of_permutation(a), SetPartition::of_permutation(b)).block_count();
}

inline int join_block_count(const Permutation& a, const Permutation& b) {
  return join(SetPartition::of_permutation(a), SetPartition::of_permutation(b)).block_count();
}

// True when a lies on a geodesic from the identity to s.
inline bool is_geodesic(const Permutation& a, const Permutation& s) {
  return a.length() + (a.inverse() * s).length() == s.length();
}

// Involutions on a geodesic to s (non-crossing partitions into blocks of size 1 or 2
// when s is a full cycle).
inline std::vector<Permutation> enumerate_nc12(const Permutation& s) {
  std::vector<Permutation> out;
  for (auto& a : enumerate_symmetric_group(s.degree()))
    if (a.is_involution() && is_geodesic(a, s)) out.push_back(std::move(a));
  return out;
}

// i -> i - 1 (mod p): the cycle (p p-1 ... 1) in 1-based notation.
inline Permutation full_cycle(int p) {
  require(p >= 1, ErrorCode::invalid_permutation, "full cycle needs p >= 1");
  std::vector<int> img(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) img[i] = (i + p - 1) % p;
  return Permutation::from_images(std::move(img));
}

// full_cycle(p) acting separately on {0..p-1} and {p..2p-1}.
inline Permutation double_cycle(int p) {
  require(p >= 1, ErrorCode::invalid_permutation, "double cycle needs p >= 1");
  std::vector<int> img(static_cast<std::size_t>(2 * p));
  for (int i = 0; i < p; ++i) {
    img[i] = (i + p - 1) % p;
    img[p + i] = p + (i + p - 1) % p;
  }
  return Permutation::from_images(std::move(img));
}

enum class SeriesKind { a, b, c };

// Coefficients of the expansions
//   a: s(s+1)...(s+p-1)           = sum_k a_{k,p} s^{p-k}
//   b: sum over involutions        = sum_k b_{k,p} s^{p-k}
//   c: sum over NC12 involutions   = sum_k c_{k,p} s^{p-k}
inline Fraction series_coefficient(SeriesKind kind, int k, int p) {
  require(k >= 0 && p >= 0, ErrorCode::invalid_parameter, "k and p must be nonnegative");
  switch (kind) {
    case SeriesKind::a: {
      if (k == 0) return Fraction(1);
      if (k >= p) return Fraction(0);
      std::vector<Fraction> prev(static_cast<std::size_t>(k + 1), Fraction(0));
      prev[0] = 1;
      for (int q = 1; q <= p; ++q) {
        std::vector<Fraction> cur(prev.size(), Fraction(0));
        cur[0] = 1;
        for (int j = 1; j <= k; ++j) cur[j] = Fraction(q - 1) * prev[j - 1] + prev[j];
        prev = std::move(cur);
      }
      return prev[k];
    }
    case SeriesKind::b: {
      if (2 * k > p) return Fraction(0);
      Fraction r(1);
      for (int j = 0; j < 2 * k; ++j) r *= Fraction(p - j);
      for (int j = 1; j <= k; ++j) r = r / Fraction(2 * j);
      return r;
    }
    case SeriesKind::c: {
      if (2 * k > p) return Fraction(0);
      Fraction binom(1);
      for (int j = 0; j < 2 * k; ++j) binom = binom * Fraction(p - j) / Fraction(j + 1);
      return binom * Fraction(catalan(k));
    }
  }
  return Fraction(0);
}

}  // namespace chanlab
