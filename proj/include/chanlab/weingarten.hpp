#pragma once

// Exact unitary Weingarten function on the class algebra of S_p and the moment
// formulas for random Stinespring channels built on it.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "perm.hpp"

namespace chanlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxWeingartenDegree = 6;

inline std::string to_fraction_string(const Rational& r) {
  const BigInt n = boost::multiprecision::numerator(r);
  const BigInt d = boost::multiprecision::denominator(r);
  return d == 1 ? n.str() : n.str() + "/" + d.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rpow(const Rational& x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// x (x+1) ... (x+p-1)
inline Rational rising_factorial(const Rational& x, int p) {
  Rational r = 1;
  for (int i = 0; i < p; ++i) r *= x + i;
  return r;
}

// Partitions of p in nonincreasing part order, listed reverse-lexicographically
// starting from (p) and ending at (1,...,1).
inline std::vector<std::vector<int>> integer_partitions(int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rem, int cap) -> void {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(rem, cap); k >= 1; --k) {
      cur.push_back(k);
      self(self, rem - k, k);
      cur.pop_back();
    }
  };
  rec(rec, p, p);
  return out;
}

// S_p with per-element cycle data; cached per degree.
struct GroupData {
  int p = 0;
  std::vector<Permutation> elements;
  std::vector<int> cycles;        // #sigma
  std::vector<int> class_of;      // index into classes
  std::vector<std::vector<int>> classes;
  std::vector<std::int64_t> class_size;
  std::map<std::vector<int>, int> class_index;
  std::map<std::vector<int>, int> element_index;  // images -> position

  int index_of(const Permutation& s) const { return element_index.at(s.images()); }
};

inline std::shared_ptr<const GroupData> group_data(int p) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const GroupData>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(p); it != cache.end()) return it->second;
  auto g = std::make_shared<GroupData>();
  g->p = p;
  g->elements = enumerate_symmetric_group(p);
  g->classes = integer_partitions(p);
  for (std::size_t c = 0; c < g->classes.size(); ++c)
    g->class_index[g->classes[c]] = static_cast<int>(c);
  g->class_size.assign(g->classes.size(), 0);
  for (std::size_t i = 0; i < g->elements.size(); ++i) {
    const auto& e = g->elements[i];
    g->cycles.push_back(e.cycle_count());
    const int c = g->class_index.at(e.cycle_type());
    g->class_of.push_back(c);
    ++g->class_size[c];
    g->element_index[e.images()] = static_cast<int>(i);
  }
  cache[p] = g;
  return g;
}

class WeingartenTable {
 public:
  WeingartenTable(int p, std::int64_t n, std::vector<std::vector<int>> classes,
                  std::vector<Rational> values)
      : p_(p), n_(n), classes_(std::move(classes)), values_(std::move(values)) {
    for (std::size_t c = 0; c < classes_.size(); ++c)
      index_[classes_[c]] = static_cast<int>(c);
  }

  int degree() const { return p_; }
  std::int64_t dimension() const { return n_; }
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  const Rational& by_class(int c) const { return values_[static_cast<std::size_t>(c)]; }
  const Rational& by_type(const std::vector<int>& type) const { return values_[index_.at(type)]; }
  const Rational& operator()(const Permutation& s) const { return by_type(s.cycle_type()); }

 private:
  int p_;
  std::int64_t n_;
  std::vector<std::vector<int>> classes_;
  std::vector<Rational> values_;
  std::map<std::vector<int>, int> index_;
};

namespace detail {

// Solves M x = b exactly; throws singular_gram on a zero pivot column.
inline std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> m,
                                         std::vector<Rational> b) {
  const std::size_t k = b.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < k && m[piv][col] == 0) ++piv;
    if (piv == k) throw Error(ErrorCode::singular_gram, "class Gram matrix is singular");
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < k; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = 0; r < k; ++r) b[r] /= m[r][r];
  return b;
}

inline std::shared_ptr<const WeingartenTable> build_weingarten(int p, std::int64_t n) {
  const auto g = group_data(p);
  const std::size_t k = g->classes.size();
  // Representative of each class.
  std::vector<int> rep(k, -1);
  for (std::size_t i = 0; i < g->elements.size(); ++i)
    if (rep[g->class_of[i]] < 0) rep[g->class_of[i]] = static_cast<int>(i);

  std::vector<Rational> npow(static_cast<std::size_t>(p + 1));
  npow[0] = 1;
  for (int e = 1; e <= p; ++e) npow[e] = npow[e - 1] * n;

  // row mu: sum over tau in class lambda of n^{#(sigma_mu tau^-1)}
  std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k, Rational(0)));
  for (std::size_t mu = 0; mu < k; ++mu) {
    const Permutation& s = g->elements[rep[mu]];
    std::vector<std::int64_t> count(static_cast<std::size_t>(k * (p + 1)), 0);
    for (std::size_t t = 0; t < g->elements.size(); ++t) {
      const int c = (s * g->elements[t].inverse()).cycle_count();
      ++count[g->class_of[t] * (p + 1) + c];
    }
    for (std::size_t la = 0; la < k; ++la)
      for (int c = 0; c <= p; ++c)
        if (count[la * (p + 1) + c]) m[mu][la] += npow[c] * count[la * (p + 1) + c];
  }
  std::vector<Rational> rhs(k, Rational(0));
  rhs[g->class_index.at(std::vector<int>(static_cast<std::size_t>(p), 1))] = 1;
  return std::make_shared<const WeingartenTable>(p, n, g->classes, solve_exact(m, rhs));
}

}  // namespace detail

// Exact Wg_n on S_p, memoized per (p, n).
inline std::shared_ptr<const WeingartenTable> weingarten_table(int p, std::int64_t n) {
  require(p >= 1 && p <= kMaxWeingartenDegree, ErrorCode::degree_out_of_range,
          "weingarten degree must be in [1, 6], got " + std::to_string(p));
  require(n >= p, ErrorCode::singular_gram,
          "Gram matrix singular for n < p (n=" + std::to_string(n) + ", p=" + std::to_string(p) +
              ")");
  static std::mutex mu;
  static std::map<std::pair<int, std::int64_t>, std::shared_ptr<const WeingartenTable>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find({p, n}); it != cache.end()) return it->second;
  }
  auto t = detail::build_weingarten(p, n);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::make_pair(p, n), t).first->second;
}

inline double weingarten_asymptotic(const Permutation& s, std::int64_t n) {
  require(n >= 1, ErrorCode::invalid_parameter, "n must be positive");
  return static_cast<double>(mobius(s)) *
         std::pow(static_cast<double>(n), -(s.degree() + s.length()));
}

enum class MomentTarget {
  lambda1,
  lambda2,
  lambda3,
  trace_a,
  trace_b,
  trace_c,
  entry_a,
  entry_b2,
  entry_c2,
};

inline const char* to_string(MomentTarget t) {
  switch (t) {
    case MomentTarget::lambda1: return "lambda1";
    case MomentTarget::lambda2: return "lambda2";
    case MomentTarget::lambda3: return "lambda3";
    case MomentTarget::trace_a: return "trA";
    case MomentTarget::trace_b: return "trB";
    case MomentTarget::trace_c: return "trC";
    case MomentTarget::entry_a: return "entryA";
    case MomentTarget::entry_b2: return "entryB2";
    case MomentTarget::entry_c2: return "entryC2";
  }
  return "unknown";
}

inline MomentTarget moment_target_from_string(const std::string& s) {
  for (auto t : {MomentTarget::lambda1, MomentTarget::lambda2, MomentTarget::lambda3,
                 MomentTarget::trace_a, MomentTarget::trace_b, MomentTarget::trace_c,
                 MomentTarget::entry_a, MomentTarget::entry_b2, MomentTarget::entry_c2})
    if (s == to_string(t)) return t;
  throw Error(ErrorCode::invalid_parameter, "unknown moment target '" + s + "'");
}

struct MomentQuery {
  std::int64_t d = 0;
  std::int64_t s = 0;
  int p = 0;
  MomentTarget target = MomentTarget::lambda1;
};

namespace detail {

inline void check_moment_args(std::int64_t d, std::int64_t s, int p, int max_p, int wg_degree) {
  require(d >= 1 && s >= 1, ErrorCode::invalid_parameter, "d and s must be positive");
  require(p >= 1 && p <= max_p, ErrorCode::degree_out_of_range,
          "moment order must be in [1, " + std::to_string(max_p) + "], got " + std::to_string(p));
  require(d * s >= wg_degree, ErrorCode::singular_gram,
          "need ds >= " + std::to_string(wg_degree));
}

// Accumulates integer multiplicities of s^a d^b Wg(class) before exact evaluation.
class MonomialCounter {
 public:
  void add(int s_exp, int d_exp, int cls, std::int64_t mult = 1) {
    counts_[std::make_tuple(s_exp, d_exp, cls)] += mult;
  }
  Rational evaluate(std::int64_t d, std::int64_t s, const WeingartenTable& wg) const {
    Rational total = 0;
    for (const auto& [key, mult] : counts_) {
      const auto& [a, b, c] = key;
      total += rpow(Rational(s), a) * rpow(Rational(d), b) * wg.by_class(c) * mult;
    }
    return total;
  }

 private:
  std::map<std::tuple<int, int, int>, std::int64_t> counts_;
};

}  // namespace detail

// E[lambda_i^p] for the random Stinespring channel with parameters (d, s).
inline Rational moment_lambda(int i, std::int64_t d, std::int64_t s, int p) {
  require(i >= 1 && i <= 3, ErrorCode::invalid_parameter, "lambda index must be 1, 2 or 3");
  detail::check_moment_args(d, s, p, kMaxWeingartenDegree, p);
  const auto g = group_data(p);
  const auto wg = weingarten_table(p, d * s);
  const std::size_t n = g->elements.size();
  detail::MonomialCounter acc;
  if (i == 1) {
    for (std::size_t b = 0; b < n; ++b) acc.add(0, g->cycles[b], g->class_of[b]);
    return rising_factorial(Rational(s), p) * acc.evaluate(d, s, *wg);
  }
  std::vector<Permutation> inv;
  std::vector<SetPartition> orbit;
  for (const auto& e : g->elements) {
    inv.push_back(e.inverse());
    orbit.push_back(SetPartition::of_permutation(e));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Permutation ab_inv = g->elements[a] * inv[b];
      const int cls = g->class_of[g->index_of(ab_inv)];
      const int dexp = (i == 2) ? (g->elements[a] * g->elements[b]).cycle_count()
                                : join(orbit[a], orbit[b]).block_count();
      acc.add(g->cycles[a], dexp, cls);
    }
  }
  return acc.evaluate(d, s, *wg);
}

// E[Tr X^p] for X in {A, B, C}, which in {'A', 'B', 'C'}.
inline Rational moment_trace_matrix(char which, std::int64_t d, std::int64_t s, int p) {
  require(which == 'A' || which == 'B' || which == 'C', ErrorCode::invalid_parameter,
          "trace target must be A, B or C");
  detail::check_moment_args(d, s, p, 5, p);
  const auto g = group_data(p);
  const auto wg = weingarten_table(p, d * s);
  const Permutation gam = full_cycle(p);
  const Permutation gam_inv = gam.inverse();
  const std::size_t n = g->elements.size();
  detail::MonomialCounter acc;
  for (std::size_t a = 0; a < n; ++a) {
    const Permutation& al = g->elements[a];
    for (std::size_t b = 0; b < n; ++b) {
      const Permutation& be = g->elements[b];
      const Permutation be_inv = be.inverse();
      const int cls = g->class_of[g->index_of(al * be_inv)];
      int blocks = 0;
      switch (which) {
        case 'A': blocks = join_block_count(gam_inv * al * gam, be); break;
        case 'B': blocks = join_block_count(gam_inv * al, gam_inv * be); break;
        default: blocks = join_block_count(gam_inv * al, gam_inv * be_inv); break;
      }
      acc.add(g->cycles[a], blocks, cls);
    }
  }
  return acc.evaluate(d, s, *wg);
}

// Entry moments: E[A_ij^p], E[|B_ij|^{2p}], E[|C_ij|^{2p}] (i != j for the latter two).
inline Rational moment_entry(const std::string& which, std::int64_t d, std::int64_t s, int p) {
  if (which == "A") {
    detail::check_moment_args(d, s, p, kMaxWeingartenDegree, 1);
    return rising_factorial(Rational(s), p) / rising_factorial(Rational(d * s), p);
  }
  require(which == "B2" || which == "C2", ErrorCode::invalid_parameter,
          "entry target must be A, B2 or C2");
  detail::check_moment_args(d, s, p, 3, 2 * p);
  const auto g = group_data(2 * p);
  const auto wg = weingarten_table(2 * p, d * s);
  Rational sum = 0;
  for (std::size_t i = 0; i < g->elements.size(); ++i) {
    const auto& e = g->elements[i];
    bool parity = true;
    for (int k = 0; k < 2 * p && parity; ++k) parity = (e(k) % 2) == (k % 2);
    if (parity) sum += wg->by_class(g->class_of[i]);
  }
  BigInt fact = 1;
  for (int k = 2; k <= p; ++k) fact *= k;
  return Rational(fact) * rising_factorial(Rational(s), p) * sum;
}

inline Rational evaluate(const MomentQuery& q) {
  switch (q.target) {
    case MomentTarget::lambda1: return moment_lambda(1, q.d, q.s, q.p);
    case MomentTarget::lambda2: return moment_lambda(2, q.d, q.s, q.p);
    case MomentTarget::lambda3: return moment_lambda(3, q.d, q.s, q.p);
    case MomentTarget::trace_a: return moment_trace_matrix('A', q.d, q.s, q.p);
    case MomentTarget::trace_b: return moment_trace_matrix('B', q.d, q.s, q.p);
    case MomentTarget::trace_c: return moment_trace_matrix('C', q.d, q.s, q.p);
    case MomentTarget::entry_a: return moment_entry("A", q.d, q.s, q.p);
    case MomentTarget::entry_b2: return moment_entry("B2", q.d, q.s, q.p);
    case MomentTarget::entry_c2: return moment_entry("C2", q.d, q.s, q.p);
  }
  return Rational(0);
}

// Moments of Gamma(s, 1).
inline Rational gamma_moment(const Rational& s, int p) {
  require(p >= 0 && p <= kMaxEnumerationDegree, ErrorCode::degree_out_of_range, "p must be <= 8");
  return rising_factorial(s, p);
}

// Moments of N(s, s): sum over partitions into blocks of size 1 or 2 of s^{#blocks}.
inline Rational normal_ss_moment(const Rational& s, int p) {
  require(p >= 0 && p <= kMaxEnumerationDegree, ErrorCode::degree_out_of_range, "p must be <= 8");
  if (p == 0) return 1;
  Rational total = 0;
  for (const auto& a : enumerate_symmetric_group(p))
    if (a.is_involution()) total += rpow(s, a.cycle_count());
  return total;
}

// Moments of the semicircle law with mean m and variance v.
inline Rational semicircle_moment(const Rational& m, const Rational& v, int p) {
  require(p >= 0 && p <= kMaxEnumerationDegree, ErrorCode::degree_out_of_range, "p must be <= 8");
  if (p == 0) return 1;
  Rational total = 0;
  for (const auto& a : enumerate_nc12(full_cycle(p))) {
    const int pairs = a.length();
    total += rpow(m, p - 2 * pairs) * rpow(v, pairs);
  }
  return total;
}

}  // namespace chanlab
