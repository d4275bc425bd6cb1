#pragma once

// Test-side oracles.  None of these call into the library solvers.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

inline mpz_class fact(long n) {
  mpz_class r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

// n!! for odd n >= -1.
inline mpz_class dfact(long n) {
  mpz_class r = 1;
  for (long i = n; i > 1; i -= 2) r *= i;
  return r;
}

inline mpq_class q(long p, long d) {
  mpq_class r(p, d);
  r.canonicalize();
  return r;
}

// Closed intersection numbers from the DVV recursion, seeded with
// <tau_0^3>_0 = 1 and <tau_1>_1 = 1/24, with tau_0 removed by the string
// equation.
class Dvv {
 public:
  mpq_class operator()(int g, std::vector<int> a) {
    std::sort(a.begin(), a.end());
    return eval(g, a);
  }

 private:
  std::map<std::pair<int, std::vector<int>>, mpq_class> memo_;

  mpq_class eval(int g, const std::vector<int>& a) {
    long n = static_cast<long>(a.size());
    if (g < 0 || 2 * g - 2 + n <= 0) return 0;
    long sum = 0;
    for (int x : a) {
      if (x < 0) return 0;
      sum += x;
    }
    if (sum != 3 * g - 3 + n) return 0;
    auto key = std::make_pair(g, a);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    mpq_class r = compute(g, a);
    memo_.emplace(key, r);
    return r;
  }

  static std::vector<int> without(const std::vector<int>& a, std::size_t j) {
    std::vector<int> r;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != j) r.push_back(a[i]);
    return r;
  }

  static std::vector<int> with(std::vector<int> a, std::initializer_list<int> extra) {
    for (int x : extra) a.push_back(x);
    std::sort(a.begin(), a.end());
    return a;
  }

  mpq_class compute(int g, const std::vector<int>& a) {
    if (g == 0 && a == std::vector<int>{0, 0, 0}) return 1;
    if (g == 1 && a == std::vector<int>{1}) return q(1, 24);
    if (a.front() == 0) {
      std::vector<int> rest = without(a, 0);
      mpq_class r = 0;
      for (std::size_t j = 0; j < rest.size(); ++j) {
        if (rest[j] == 0) continue;
        std::vector<int> b = rest;
        --b[j];
        std::sort(b.begin(), b.end());
        r += eval(g, b);
      }
      return r;
    }
    // <tau_{k+1} tau_S>_g with k + 1 the largest index.
    int k = a.back() - 1;
    std::vector<int> S = without(a, a.size() - 1);
    mpq_class r = 0;
    for (std::size_t j = 0; j < S.size(); ++j) {
      std::vector<int> b = without(S, j);
      b = with(b, {k + S[j]});
      r += mpq_class(dfact(2 * k + 2 * S[j] + 1)) / mpq_class(dfact(2 * S[j] - 1)) * eval(g, b);
    }
    for (int x = 0; x <= k - 1; ++x) {
      int y = k - 1 - x;
      mpq_class w = mpq_class(dfact(2 * x + 1) * dfact(2 * y + 1)) / 2;
      r += w * eval(g - 1, with(S, {x, y}));
      std::size_t n = S.size();
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> I, J;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? I : J).push_back(S[i]);
        for (int g1 = 0; g1 <= g; ++g1) {
          mpq_class left = eval(g1, with(I, {x}));
          if (left == 0) continue;
          r += w * left * eval(g - g1, with(J, {y}));
        }
      }
    }
    return r / mpq_class(dfact(2 * k + 3));
  }
};

// (sum 2a_i - l + 1)! / prod (2a_i - 1)!! for a_i >= 1.
inline mpq_class open_genus0_formula(const std::vector<int>& a) {
  long top = 1;
  mpz_class den = 1;
  for (int x : a) {
    top += 2 * x - 1;
    den *= dfact(2 * x - 1);
  }
  return mpq_class(fact(top)) / mpq_class(den);
}

// Counts the stable trees smoothing to the disk with k boundary and l
// interior labels, by splitting label sets directly.  Each tree is rooted at
// the vertex holding boundary label 1; every other vertex is determined by
// the label set beyond its parent edge.  The result maps (edges, boundary
// edges) to the number of trees, the disk itself included at (0, 0).
class GraphCount {
 public:
  GraphCount(int k, int l) : n_(k + l), bmask_((1u << k) - 1), imask_(((1u << (k + l)) - 1) & ~((1u << k) - 1)) {}

  std::map<std::pair<int, int>, long> distribution() { return open_planted(full(), false); }

 private:
  using ED = std::map<std::pair<int, int>, long>;
  // (open children, closed children, edges, boundary edges)
  using Dist = std::map<std::array<int, 4>, long>;

  int n_;
  unsigned bmask_;
  unsigned imask_;
  std::map<std::pair<unsigned, bool>, ED> open_memo_;
  std::map<unsigned, ED> closed_memo_;
  std::map<std::array<unsigned, 3>, Dist> part_memo_;

  unsigned full() const { return (1u << n_) - 1; }

  // Unordered set partitions of m into child subtrees.  A vertex without own
  // labels passes its kind as forbid_full, since a single child of the same
  // kind holding everything would recurse forever; such a vertex is unstable.
  enum Forbid : unsigned { none, full_open, full_closed };

  const Dist& partitions(unsigned m, bool allow_open, Forbid forbid_full = none) {
    std::array<unsigned, 3> key{m, allow_open ? 1u : 0u, forbid_full};
    if (auto it = part_memo_.find(key); it != part_memo_.end()) return it->second;
    Dist d;
    if (m == 0) {
      d[{0, 0, 0, 0}] = 1;
    } else {
      unsigned low = m & (~m + 1);
      unsigned others = m ^ low;
      for (unsigned sub = others;; sub = (sub - 1) & others) {
        unsigned block = sub | low;
        Dist rest = partitions(m ^ block, allow_open);
        if (allow_open && !(block == m && forbid_full == full_open)) {
          ED o = open_planted(block, true);
          for (const auto& [eb, c] : o)
            for (const auto& [s, c2] : rest)
              d[{s[0] + 1, s[1], s[2] + eb.first + 1, s[3] + eb.second + 1}] += c * c2;
        }
        if ((block & bmask_) == 0 && !(block == m && forbid_full == full_closed)) {
          ED cl = closed_planted(block);
          for (const auto& [eb, c] : cl)
            for (const auto& [s, c2] : rest)
              d[{s[0], s[1] + 1, s[2] + eb.first + 1, s[3] + eb.second}] += c * c2;
        }
        if (sub == 0) break;
      }
    }
    return part_memo_.emplace(key, std::move(d)).first->second;
  }

  // Closed vertex with a parent edge.
  ED closed_planted(unsigned m) {
    if (auto it = closed_memo_.find(m); it != closed_memo_.end()) return it->second;
    ED r;
    for (unsigned own = m;; own = (own - 1) & m) {
      for (const auto& [s, c] : partitions(m ^ own, false, own ? none : full_closed))
        if (std::popcount(own) + s[1] + 1 >= 3) r[{s[2], s[3]}] += c;
      if (own == 0) break;
    }
    closed_memo_[m] = r;
    return r;
  }

  // Open vertex, with a parent boundary edge or as the root holding label 1.
  ED open_planted(unsigned m, bool parent) {
    auto key = std::make_pair(m, parent);
    if (auto it = open_memo_.find(key); it != open_memo_.end()) return it->second;
    ED r;
    for (unsigned own = m;; own = (own - 1) & m) {
      if (parent || (own & 1u)) {
        for (const auto& [s, c] : partitions(m ^ own, true, own ? none : full_open)) {
          int kv = std::popcount(own & bmask_) + s[0] + (parent ? 1 : 0);
          int lv = std::popcount(own & imask_) + s[1];
          if (kv + 2 * lv >= 3) r[{s[2], s[3]}] += c;
        }
      }
      if (own == 0) break;
    }
    open_memo_[key] = r;
    return r;
  }
};

}  // namespace oracle
