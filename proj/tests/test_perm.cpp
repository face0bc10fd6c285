#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "chanlab/perm.hpp"

using namespace chanlab;

namespace {

// Motzkin numbers from M_{n+1} = M_n + sum_{k=0}^{n-1} M_k M_{n-1-k}.
std::vector<std::int64_t> motzkin(int n) {
  std::vector<std::int64_t> m{1};
  for (int q = 0; q < n; ++q) {
    std::int64_t next = m[q];
    for (int k = 0; k < q; ++k) next += m[k] * m[q - 1 - k];
    m.push_back(next);
  }
  return m;
}

std::int64_t binom(int n, int k) {
  std::int64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace

TEST(Permutation, EnumerationSizes) {
  EXPECT_EQ(enumerate_symmetric_group(1).size(), 1u);
  EXPECT_EQ(enumerate_symmetric_group(1)[0], Permutation(1));
  EXPECT_EQ(enumerate_symmetric_group(3).size(), 6u);
  auto s5 = enumerate_symmetric_group(5);
  EXPECT_EQ(s5.size(), 120u);
  EXPECT_EQ(std::set<Permutation>(s5.begin(), s5.end()).size(), 120u);
  EXPECT_EQ(enumerate_symmetric_group(8).size(), 40320u);
}

TEST(Permutation, EnumerationBounds) {
  EXPECT_THROW(enumerate_symmetric_group(9), Error);
  EXPECT_THROW(enumerate_symmetric_group(0), Error);
  try {
    enumerate_symmetric_group(9);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degree_out_of_range);
  }
}

TEST(Permutation, RejectsNonBijection) {
  EXPECT_THROW(Permutation::from_images({0, 0, 1}), Error);
  EXPECT_THROW(Permutation::from_images({0, 3, 1}), Error);
}

TEST(Permutation, CycleCountExamples) {
  EXPECT_EQ(Permutation(3).cycle_count(), 3);
  EXPECT_EQ(full_cycle(4).cycle_count(), 1);
  EXPECT_EQ(Permutation::from_cycles(3, {{1, 2}, {3}}).cycle_count(), 2);
}

TEST(Permutation, CyclesPlusLengthIsDegree) {
  for (int p = 1; p <= 6; ++p)
    for (const auto& s : enumerate_symmetric_group(p)) EXPECT_EQ(s.cycle_count() + s.length(), p);
}

TEST(Permutation, CompositionAppliesRightFactorFirst) {
  const auto a = Permutation::from_cycles(3, {{1, 2}});
  const auto b = Permutation::from_cycles(3, {{2, 3}});
  const auto ab = a * b;
  for (int i = 0; i < 3; ++i) EXPECT_EQ(ab(i), a(b(i)));
  EXPECT_EQ(ab, Permutation::from_cycles(3, {{1, 2, 3}}));
}

TEST(Permutation, InverseAndToString) {
  for (const auto& s : enumerate_symmetric_group(4)) EXPECT_EQ(s * s.inverse(), Permutation(4));
  EXPECT_EQ(Permutation::from_cycles(3, {{1, 2}}).to_string(), "(1 2)(3)");
}

TEST(Catalan, Values) {
  EXPECT_EQ(catalan(0), 1);
  EXPECT_EQ(catalan(3), 5);
  EXPECT_EQ(catalan(4), 14);
  std::vector<std::int64_t> c{1};
  for (int n = 0; n < 30; ++n) {
    std::int64_t next = 0;
    for (int k = 0; k <= n; ++k) next += c[k] * c[n - k];
    c.push_back(next);
  }
  for (int n = 0; n <= 30; ++n) EXPECT_EQ(catalan(n), c[n]) << n;
  EXPECT_THROW(catalan(31), Error);
}

TEST(Mobius, Examples) {
  EXPECT_EQ(mobius(Permutation(4)), 1);
  EXPECT_EQ(mobius(Permutation::from_cycles(3, {{1, 2}})), -1);
  EXPECT_EQ(mobius(Permutation::from_cycles(3, {{1, 2, 3}})), 2);
  EXPECT_EQ(mobius(Permutation::from_cycles(4, {{1, 2}, {3, 4}})), 1);
  EXPECT_EQ(mobius(full_cycle(4)), -5);
}

TEST(JoinRank, Examples) {
  const auto a = Permutation::from_cycles(3, {{1, 2}});
  const auto b = Permutation::from_cycles(3, {{2, 3}});
  EXPECT_EQ(join_rank(a, b), 2);
  EXPECT_EQ(join_rank(a, a), a.length());
  EXPECT_EQ(join_rank(Permutation(3), Permutation(3)), 0);
  EXPECT_THROW(join_rank(Permutation(3), Permutation(4)), Error);
}

TEST(JoinRank, DominatesLengths) {
  const auto g = enumerate_symmetric_group(4);
  for (const auto& a : g)
    for (const auto& b : g) EXPECT_GE(join_rank(a, b), std::max(a.length(), b.length()));
}

TEST(SetPartition, JoinByBruteForceClosure) {
  // Blocks of the join are the connected components of the union of both relations.
  const auto g = enumerate_symmetric_group(4);
  for (const auto& a : g) {
    for (const auto& b : g) {
      std::vector<int> comp{0, 1, 2, 3};
      bool changed = true;
      while (changed) {
        changed = false;
        for (int i = 0; i < 4; ++i) {
          for (int j : {a(i), b(i)}) {
            const int m = std::min(comp[i], comp[j]);
            if (comp[i] != m || comp[j] != m) {
              comp[i] = comp[j] = m;
              changed = true;
            }
          }
        }
      }
      EXPECT_EQ(join(SetPartition::of_permutation(a), SetPartition::of_permutation(b)),
                SetPartition(comp));
    }
  }
}

TEST(Geodesic, Examples) {
  const auto g3 = full_cycle(3);
  EXPECT_TRUE(is_geodesic(Permutation(3), g3));
  EXPECT_TRUE(is_geodesic(Permutation::from_cycles(3, {{1, 3}}), g3));
  EXPECT_FALSE(is_geodesic(Permutation::from_cycles(4, {{1, 3}, {2, 4}}), full_cycle(4)));
}

TEST(Geodesic, FullCycleGeodesicsAreNonCrossing) {
  for (int p = 1; p <= 6; ++p) {
    const auto g = full_cycle(p);
    int count = 0;
    for (const auto& a : enumerate_symmetric_group(p)) {
      if (!is_geodesic(a, g)) continue;
      ++count;
      EXPECT_TRUE(SetPartition::of_permutation(a).is_noncrossing()) << a.to_string();
    }
    EXPECT_EQ(count, catalan(p)) << p;
  }
}

TEST(FullCycle, Convention) {
  const auto g = full_cycle(3);
  EXPECT_EQ(g(0), 2);  // 1 -> 3
  EXPECT_EQ(g(1), 0);  // 2 -> 1
  EXPECT_EQ(g(2), 1);  // 3 -> 2
  EXPECT_EQ(full_cycle(5).cycle_count(), 1);
  const auto dg = double_cycle(3);
  EXPECT_EQ(dg.degree(), 6);
  EXPECT_EQ(dg.cycle_count(), 2);
  EXPECT_EQ(dg(3), 5);
}

TEST(NC12, Examples) {
  EXPECT_EQ(enumerate_nc12(full_cycle(3)).size(), 4u);
  EXPECT_EQ(enumerate_nc12(full_cycle(4)).size(), 9u);
  const auto id = enumerate_nc12(Permutation(4));
  ASSERT_EQ(id.size(), 1u);
  EXPECT_EQ(id[0], Permutation(4));
}

TEST(NC12, MotzkinCounts) {
  const auto m = motzkin(8);
  for (int p = 1; p <= 8; ++p)
    EXPECT_EQ(static_cast<std::int64_t>(enumerate_nc12(full_cycle(p)).size()), m[p]) << p;
}

TEST(NC12, MultiplicativeOverCycles) {
  const auto m = motzkin(8);
  for (int p = 1; p <= 6; ++p) {
    for (const auto& s : enumerate_symmetric_group(p)) {
      std::int64_t expected = 1;
      for (int len : s.cycle_type()) expected *= m[len];
      EXPECT_EQ(static_cast<std::int64_t>(enumerate_nc12(s).size()), expected) << s.to_string();
    }
  }
  EXPECT_THROW(enumerate_nc12(Permutation(9)), Error);
}

TEST(SeriesCoefficients, Examples) {
  EXPECT_EQ(series_coefficient(SeriesKind::b, 1, 2), Fraction(1));
  EXPECT_EQ(series_coefficient(SeriesKind::c, 1, 3), Fraction(3));
  for (int p = 1; p <= 6; ++p) EXPECT_EQ(series_coefficient(SeriesKind::a, p, p), Fraction(0));
}

TEST(SeriesCoefficients, MatchEnumeration) {
  for (int p = 1; p <= 7; ++p) {
    std::map<int, std::int64_t> by_len, inv_by_len, nc_by_len;
    for (const auto& s : enumerate_symmetric_group(p)) {
      ++by_len[s.length()];
      if (s.is_involution()) ++inv_by_len[s.length()];
    }
    for (const auto& s : enumerate_nc12(full_cycle(p))) ++nc_by_len[s.length()];
    for (int k = 0; k <= p; ++k) {
      EXPECT_EQ(series_coefficient(SeriesKind::a, k, p), Fraction(by_len[k])) << k << "," << p;
      EXPECT_EQ(series_coefficient(SeriesKind::b, k, p), Fraction(inv_by_len[k])) << k << "," << p;
      EXPECT_EQ(series_coefficient(SeriesKind::c, k, p), Fraction(nc_by_len[k])) << k << "," << p;
    }
  }
}

TEST(SeriesCoefficients, OverflowIsDetected) {
  EXPECT_THROW(series_coefficient(SeriesKind::a, 30, 60), Error);
}

TEST(Lemmas, ParityAndExcess) {
  for (int p = 1; p <= 5; ++p) {
    const auto g = enumerate_symmetric_group(p);
    std::vector<Permutation> inv;
    for (const auto& x : g) inv.push_back(x.inverse());
    for (std::size_t i1 = 0; i1 < g.size(); ++i1) {
      for (std::size_t i2 = 0; i2 < g.size(); ++i2) {
        const int base = (inv[i1] * g[i2]).length();
        for (std::size_t a = 0; a < g.size(); ++a) {
          const int excess = (inv[i1] * g[a]).length() + (inv[a] * g[i2]).length() - base;
          ASSERT_GE(excess, 0);
          ASSERT_EQ(excess % 2, 0);
        }
      }
    }
  }
}

TEST(Lemmas, OptimizationBoundOne) {
  for (int p = 1; p <= 5; ++p) {
    const auto s = full_cycle(p);
    const auto s_inv = s.inverse();
    const auto g = enumerate_symmetric_group(p);
    for (const auto& a : g) {
      for (const auto& b : g) {
        const int v = a.length() + 2 * (a * b.inverse()).length() +
                      join_rank(s_inv * a, s_inv * b.inverse());
        const bool tight = (a == b) && a.is_involution() && is_geodesic(a, s);
        if (tight)
          EXPECT_EQ(v, s.length());
        else
          EXPECT_GE(v, s.length() + 2);
      }
    }
  }
}

TEST(Lemmas, OptimizationBoundTwo) {
  for (int p = 1; p <= 5; ++p) {
    const auto s = full_cycle(p);
    const auto s_inv = s.inverse();
    const int rhs2 = (s * s).length();
    const auto g = enumerate_symmetric_group(p);
    for (const auto& a : g)
      for (const auto& b : g)
        EXPECT_GE(2 * ((a * b.inverse()).length() + join_rank(s_inv * a, s_inv * b.inverse())),
                  rhs2);
  }
}

TEST(Lemmas, BinomialAnnihilation) {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> coef(-9, 9);
  std::uniform_int_distribution<int> den(1, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const int deg = trial % 5;
    std::vector<Fraction> f;
    for (int k = 0; k <= deg; ++k) f.emplace_back(coef(rng), den(rng));
    for (int n = deg + 1; n <= 10; ++n) {
      Fraction total(0);
      for (int q = 0; q <= n; ++q) {
        Fraction fq(0), pw(1);
        for (const auto& c : f) {
          fq += c * pw;
          pw *= Fraction(q);
        }
        const std::int64_t sign = ((n - q) % 2) ? -1 : 1;
        total += Fraction(sign * binom(n, q)) * fq;
      }
      EXPECT_EQ(total, Fraction(0)) << "deg " << deg << " n " << n;
    }
  }
}

TEST(Fraction, Arithmetic) {
  EXPECT_EQ(Fraction(1, 2) + Fraction(1, 3), Fraction(5, 6));
  EXPECT_EQ(Fraction(2, -4), Fraction(-1, 2));
  EXPECT_EQ(Fraction(3, 4) * Fraction(4, 3), Fraction(1));
  EXPECT_EQ(Fraction(1, 2) / Fraction(1, 4), Fraction(2));
  EXPECT_EQ(Fraction(5, 6).str(), "5/6");
  EXPECT_THROW(Fraction(1, 0), Error);
  EXPECT_THROW(Fraction(INT64_MAX) * Fraction(2), Error);
}
