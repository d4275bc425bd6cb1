#include "disktau/closed_theory.hpp"

#include "disktau/bracket.hpp"
#include "disktau/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

namespace disktau {

Rational closed_genus0(const std::vector<int>& a) {
  const long l = static_cast<long>(a.size());
  if (l < 3) return 0;
  for (int x : a)
    if (x < 0) return 0;
  if (sum_of(a) != l - 3) return 0;
  Integer r = factorial(l - 3);
  for (int x : a) r /= factorial(x);
  return Rational(r);
}

namespace {

class ClosedSolver {
 public:
  // Coefficient of the monomial in F^c (bracket over symmetry factor).
  const UCoeffs& coefficient(const TSMonomial& m) {
    static const UCoeffs empty;
    if (m.s_exp() != 0) return empty;
    const int l = static_cast<int>(m.t_degree());
    const int three_g = static_cast<int>(m.index_sum()) + 3 - l;
    if (three_g < 0 || three_g % 3 != 0) return empty;
    const int g = three_g / 3;
    if (2 * g - 2 + l <= 0) return empty;
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    Rational v = solve(m, g);
    UCoeffs c;
    if (v != 0) c.push_back(UCoeff{2 * g - 2, v});
    return memo_.emplace(m, std::move(c)).first->second;
  }

  Rational bracket(const std::vector<int>& a) {
    TSMonomial m = TSMonomial::from_insertions(a);
    return total(coefficient(m)) * Rational(m.symmetry_factor());
  }

  const DiffOperator& op(int n, unsigned N) {
    auto key = std::make_pair(n, N);
    auto it = ops_.find(key);
    if (it == ops_.end()) it = ops_.emplace(key, make_closed_L(n, N).combined()).first;
    return it->second;
  }

  LazySeries potential() {
    return [this](const TSMonomial& m) -> UCoeffs { return coefficient(m); };
  }

 private:
  // Coefficient of m in F^c from the L_{b-1} constraint at m / t_b, where b is
  // the smallest positive index (0 when there is none).
  Rational solve(const TSMonomial& mono, int g) {
    const int b = pivot_index(mono);
    const int n = b - 1;
    TSMonomial m = *mono.quotient(TSMonomial::t(b));
    // Only multipliers t_i dividing m contribute to the coefficient of m.
    const unsigned N = static_cast<unsigned>(std::max(static_cast<int>(m.max_index().value_or(0)) + n, b));
    UCoeffs r = conjugator_.apply(op(n, N), m, 0);
    Rational value = coefficient_at(r, 2 * g - 2);
    value /= leading_coefficient(n) * (m.t_exp(b) + 1);
    return value;
  }

  std::unordered_map<TSMonomial, UCoeffs, TSMonomialHash> memo_;
  std::map<std::pair<int, unsigned>, DiffOperator> ops_;
  Conjugator conjugator_{[this](const TSMonomial& m) -> UCoeffs { return coefficient(m); }};
};

std::recursive_mutex& solver_mutex() {
  static std::recursive_mutex m;
  return m;
}

ClosedSolver& solver() {
  static ClosedSolver s;
  return s;
}

}  // namespace

Rational closed_bracket_auto(const std::vector<int>& a) {
  for (int x : a)
    if (x < 0) return 0;
  std::lock_guard<std::recursive_mutex> lock(solver_mutex());
  return solver().bracket(a);
}

Rational closed_bracket(int g, const std::vector<int>& a) {
  auto genus = genus_of_closed(a);
  if (!genus || *genus != g) return 0;
  return closed_bracket_auto(a);
}

LazySeries closed_potential() {
  LazySeries inner = solver().potential();
  return [inner](const TSMonomial& m) {
    std::lock_guard<std::recursive_mutex> lock(solver_mutex());
    return inner(m);
  };
}

FormalSeries build_Fc(unsigned D, unsigned N) {
  FormalSeries f(D, N);
  LazySeries fc = closed_potential();
  for_each_monomial(D, N, false, [&](const TSMonomial& m) {
    for (const auto& x : fc(m)) f.add_term(m.with_u(x.u), x.c);
  });
  return f;
}

UCoeffs double_bracket(const LazySeries& f, const TSMonomial& x, const TSMonomial& m) {
  UCoeffs r = f(m * x);
  if (r.empty()) return r;
  Integer factor = derivative_factor(m, x);
  for (auto& c : r) c.c *= factor;
  return r;
}

UCoeffs double_bracket_product(const LazySeries& f, const TSMonomial& x, const LazySeries& g,
                               const TSMonomial& y, const TSMonomial& m) {
  UCoeffs out;
  for (const auto& d : divisors(m)) {
    UCoeffs left = double_bracket(f, x, d);
    if (left.empty()) continue;
    UCoeffs right = double_bracket(g, y, *m.quotient(d));
    for (const auto& c : multiply(left, right)) accumulate(out, c.u, c.c);
  }
  return out;
}

namespace {

void add_scaled(UCoeffs& into, const UCoeffs& x, const Rational& c, int shift = 0) {
  for (const auto& v : x) accumulate(into, v.u + shift, v.c * c);
}

bool same(const UCoeffs& a, const UCoeffs& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].u != b[i].u || a[i].c != b[i].c) return false;
  return true;
}

}  // namespace

std::pair<UCoeffs, UCoeffs> closed_kdv_sides(int n, const TSMonomial& at) {
  LazySeries fc = closed_potential();
  const TSMonomial m = at.ts_part();
  auto tn = [](int i, unsigned p = 1) { return TSMonomial::t(static_cast<std::size_t>(i), p); };
  UCoeffs lhs;
  add_scaled(lhs, double_bracket(fc, tn(n) * tn(0, 2), m), 2 * n + 1, -2);
  UCoeffs rhs;
  add_scaled(rhs, double_bracket_product(fc, tn(n - 1) * tn(0), fc, tn(0, 3), m), 1);
  add_scaled(rhs, double_bracket_product(fc, tn(n - 1) * tn(0, 2), fc, tn(0, 2), m), 2);
  add_scaled(rhs, double_bracket(fc, tn(n - 1) * tn(0, 4), m), Rational(1, 4));
  return {lhs, rhs};
}

SeriesCheck closed_kdv_report(int n, unsigned D, unsigned N) {
  if (n < 1) throw PreconditionError("closed KdV needs n >= 1");
  SeriesCheck report;
  report.name = "closed-kdv n=" + std::to_string(n);
  for_each_monomial(D, N, false, [&](const TSMonomial& m) {
    auto [lhs, rhs] = closed_kdv_sides(n, m);
    ++report.monomials_checked;
    if (!same(lhs, rhs)) report.failures.push_back({m, lhs, rhs});
  });
  return report;
}

bool check_closed_kdv(int n, unsigned D, unsigned N) { return closed_kdv_report(n, D, N).pass(); }

SeriesCheck closed_virasoro_report(int n, unsigned D, unsigned N) {
  SeriesCheck report;
  report.name = "closed-virasoro n=" + std::to_string(n);
  LazySeries fc = closed_potential();
  const DiffOperator op = make_closed_L(n, N + static_cast<unsigned>(std::max(n, 0)) + 2);
  for_each_monomial(D, N, false, [&](const TSMonomial& m) {
    UCoeffs r = conjugated_coefficient(op, fc, m);
    ++report.monomials_checked;
    if (!r.empty()) report.failures.push_back({m, r, {}});
  });
  return report;
}

}  // namespace disktau
