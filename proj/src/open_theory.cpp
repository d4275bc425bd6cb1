#include "disktau/open_theory.hpp"

#include "disktau/bracket.hpp"
#include "disktau/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>

namespace disktau {

namespace {

// Genus of the open bracket indexed by a t/s monomial, if it is stable.
std::optional<int> open_genus(const TSMonomial& m) {
  const int l = static_cast<int>(m.t_degree());
  const int k = static_cast<int>(m.s_exp());
  const int three_g = 2 * static_cast<int>(m.index_sum()) + 3 - k - 2 * l;
  if (three_g < 0 || three_g % 3 != 0) return std::nullopt;
  const int g = three_g / 3;
  if (2 * g - 2 + k + 2 * l <= 0) return std::nullopt;
  return g;
}

std::recursive_mutex& open_mutex() {
  static std::recursive_mutex m;
  return m;
}

Rational closed_value(const LazySeries& fc, const TSMonomial& m) {
  return total(fc(m)) * Rational(m.symmetry_factor());
}

class OpenVirasoroSolver {
 public:
  const UCoeffs& coefficient(const TSMonomial& m) {
    static const UCoeffs empty;
    auto g = open_genus(m);
    if (!g) return empty;
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    Rational v = solve(m, *g);
    UCoeffs c;
    if (v != 0) c.push_back(UCoeff{*g - 1, v});
    return memo_.emplace(m, std::move(c)).first->second;
  }

  LazySeries potential() {
    return [this](const TSMonomial& m) -> UCoeffs { return coefficient(m); };
  }

 private:
  const DiffOperator& op(bool open, int n, unsigned N) {
    auto key = std::make_tuple(open, n, N);
    auto it = ops_.find(key);
    if (it == ops_.end())
      it = ops_.emplace(key, (open ? make_open_L(n, N) : make_closed_L(n, N)).combined()).first;
    return it->second;
  }

  Rational solve(const TSMonomial& mono, int g) {
    if (mono.t_degree() == 0) return (mono.s_exp() == 3 && g == 0) ? Rational(1, 6) : Rational(0);
    const int b = pivot_index(mono);
    const int n = b - 1;
    const TSMonomial m = *mono.quotient(TSMonomial::t(b));
    // Only multipliers t_i dividing m contribute to the coefficient of m.
    const unsigned N = static_cast<unsigned>(std::max(static_cast<int>(m.max_index().value_or(0)) + n, b));
    Rational rest = coefficient_at(full_.apply(op(true, n, N), m, 0), g - 1);
    if (m.s_exp() == 0) rest -= coefficient_at(closed_.apply(op(false, n, N), m, 0), g - 1);
    return rest / (leading_coefficient(n) * (m.t_exp(b) + 1));
  }

  std::unordered_map<TSMonomial, UCoeffs, TSMonomialHash> memo_;
  std::map<std::tuple<bool, int, unsigned>, DiffOperator> ops_;
  Conjugator full_{lazy_sum(closed_potential(), potential())};
  Conjugator closed_{closed_potential()};
};

class OpenKdvSolver {
 public:
  // Bracket value (not divided by the symmetry factor).
  Rational bracket(const TSMonomial& m) {
    auto g = open_genus(m);
    if (!g) return 0;
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    Rational v = solve(m, *g);
    memo_.emplace(m, v);
    return v;
  }

  LazySeries potential() {
    return [this](const TSMonomial& m) -> UCoeffs {
      auto g = open_genus(m);
      if (!g) return {};
      Rational v = bracket(m);
      if (v == 0) return {};
      return {UCoeff{*g - 1, v / Rational(m.symmetry_factor())}};
    };
  }

 private:
  Rational solve(const TSMonomial& mono, int g) {
    const unsigned k = mono.s_exp();
    if (mono.t_degree() == 0) return (k == 3 && g == 0) ? 1 : 0;
    if (mono.t_exp(0) > 0) {
      // String equation removes one tau_0.
      TSMonomial rest = *mono.quotient(TSMonomial::t(0));
      Rational sum = (rest.t_degree() == 0 && k == 1) ? 1 : 0;
      for (std::size_t i = 1; i < rest.t_len(); ++i) {
        unsigned e = rest.t_exp(i);
        if (e == 0) continue;
        TSMonomial lowered = rest.quotient(TSMonomial::t(i))->times_t(i - 1);
        sum += e * bracket(lowered);
      }
      return sum;
    }
    const int n = static_cast<int>(*mono.max_index());
    const TSMonomial rest = *mono.quotient(TSMonomial::t(n));
    const TSMonomial rest_t = *rest.quotient(TSMonomial::s(k));
    LazySeries fc = closed_potential();
    const TSMonomial down = TSMonomial::t(n - 1);
    Rational sum = 0;
    for (const auto& part : divisors(rest_t)) {
      const TSMonomial other = *rest_t.quotient(part);
      Integer ways = 1;
      for (std::size_t i = 0; i < rest_t.t_len(); ++i) ways *= binomial(rest_t.t_exp(i), part.t_exp(i));
      Rational term = closed_value(fc, down * TSMonomial::t(0) * part) *
                      bracket(TSMonomial::t(0) * other * TSMonomial::s(k));
      for (unsigned k1 = 0; k1 <= k; ++k1)
        term += 2 * Rational(binomial(k, k1)) * bracket(down * part * TSMonomial::s(k1)) *
                bracket(other * TSMonomial::s(k - k1 + 1));
      sum += Rational(ways) * term;
    }
    sum += 2 * bracket(down * rest_t * TSMonomial::s(k + 1));
    if (k == 0) sum -= Rational(1, 2) * closed_value(fc, down * TSMonomial::t(0, 2) * rest_t);
    return sum / (2 * n + 1);
  }

  std::unordered_map<TSMonomial, Rational, TSMonomialHash> memo_;
};

OpenVirasoroSolver& virasoro_solver() {
  static OpenVirasoroSolver s;
  return s;
}

OpenKdvSolver& kdv_solver() {
  static OpenKdvSolver s;
  return s;
}

std::optional<TSMonomial> open_monomial(const std::vector<int>& a, int k) {
  if (k < 0) return std::nullopt;
  for (int x : a)
    if (x < 0) return std::nullopt;
  return TSMonomial::from_insertions(a, static_cast<unsigned>(k));
}

}  // namespace

Rational open_genus0_closed_form(const std::vector<int>& a) {
  long twice = 0;
  for (int x : a) {
    if (x < 1) throw PreconditionError("closed form needs every a_i >= 1; use open_genus0_bracket");
    twice += 2L * x;
  }
  Integer r = factorial(twice - static_cast<long>(a.size()) + 1);
  for (int x : a) r /= double_factorial(2L * x - 1);
  return Rational(r);
}

Rational open_genus0_bracket(const std::vector<int>& a, int k) {
  auto g = genus_of_open(a, k);
  if (!g || *g != 0) return 0;
  const int l = static_cast<int>(a.size());
  if (k + 2 * l - 2 <= 0) return 0;
  std::vector<int> s = sorted(a);
  if (s.empty() || s.front() >= 1) return open_genus0_closed_form(s);
  static std::mutex mutex;
  static std::map<std::pair<std::vector<int>, int>, Rational> memo;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = memo.find({s, k});
    if (it != memo.end()) return it->second;
  }
  std::vector<int> rest(s.begin() + 1, s.end());
  Rational v = 0;
  if (rest.empty()) {
    v = (k == 1) ? 1 : 0;
  } else {
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (rest[j] == 0) continue;
      std::vector<int> lowered = rest;
      --lowered[j];
      v += open_genus0_bracket(lowered, k);
    }
  }
  std::lock_guard<std::mutex> lock(mutex);
  memo.emplace(std::make_pair(s, k), v);
  return v;
}

Rational open_bracket_virasoro(const std::vector<int>& a, int k) {
  auto m = open_monomial(a, k);
  if (!m) return 0;
  std::lock_guard<std::recursive_mutex> lock(open_mutex());
  return total(virasoro_solver().coefficient(*m)) * Rational(m->symmetry_factor());
}

Rational open_bracket_kdv(const std::vector<int>& a, int k) {
  auto m = open_monomial(a, k);
  if (!m) return 0;
  std::lock_guard<std::recursive_mutex> lock(open_mutex());
  return kdv_solver().bracket(*m);
}

Rational open_bracket(int g, const std::vector<int>& a, int k) {
  auto genus = genus_of_open(a, k);
  if (!genus || *genus != g) return 0;
  if (g == 0) return open_genus0_bracket(a, k);
  return open_bracket_virasoro(a, k);
}

std::string bracket_status(Sector sector, int g, const std::vector<int>& a, int k) {
  if (sector == Sector::closed || g == 0) return "proved";
  if (sorted(a) == std::vector<int>{1} && k == 0) return "proved";
  return "conjectural (open Virasoro/KdV determination)";
}

LazySeries open_potential() {
  LazySeries inner = virasoro_solver().potential();
  return [inner](const TSMonomial& m) {
    std::lock_guard<std::recursive_mutex> lock(open_mutex());
    return inner(m);
  };
}

LazySeries open_potential_kdv() {
  LazySeries inner = kdv_solver().potential();
  return [inner](const TSMonomial& m) {
    std::lock_guard<std::recursive_mutex> lock(open_mutex());
    return inner(m);
  };
}

LazySeries closed_genus0_potential() {
  return [](const TSMonomial& m) -> UCoeffs {
    if (m.s_exp() != 0) return {};
    Rational v = closed_genus0(m.insertions());
    if (v == 0) return {};
    return {UCoeff{-2, v / Rational(m.symmetry_factor())}};
  };
}

LazySeries open_genus0_potential() {
  return [](const TSMonomial& m) -> UCoeffs {
    Rational v = open_genus0_bracket(m.insertions(), static_cast<int>(m.s_exp()));
    if (v == 0) return {};
    return {UCoeff{-1, v / Rational(m.symmetry_factor())}};
  };
}

namespace {

FormalSeries build_from(const LazySeries& f, unsigned D, unsigned N) {
  FormalSeries out(D, N);
  for_each_monomial(D, N, true, [&](const TSMonomial& m) {
    for (const auto& x : f(m)) out.add_term(m.with_u(x.u), x.c);
  });
  return out;
}

}  // namespace

FormalSeries build_Fo(unsigned D, unsigned N) {
  LazySeries fo = [](const TSMonomial& m) -> UCoeffs {
    auto g = open_genus(m);
    if (!g) return {};
    Rational v = open_bracket(*g, m.insertions(), static_cast<int>(m.s_exp()));
    if (v == 0) return {};
    return {UCoeff{*g - 1, v / Rational(m.symmetry_factor())}};
  };
  return build_from(fo, D, N);
}

FormalSeries build_Fo_via_kdv(unsigned D, unsigned N) { return build_from(open_potential_kdv(), D, N); }

FormalSeries build_Z(unsigned D, unsigned N) { return series_exp(build_Fc(D, N) + build_Fo(D, N)); }

namespace {

bool same(const UCoeffs& a, const UCoeffs& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].u != b[i].u || a[i].c != b[i].c) return false;
  return true;
}

void add_scaled(UCoeffs& into, const UCoeffs& x, const Rational& c) {
  for (const auto& v : x) accumulate(into, v.u, v.c * c);
}

}  // namespace

SeriesCheck open_string_report(unsigned D, unsigned N) {
  SeriesCheck report;
  report.name = "open-string";
  LazySeries fo = open_potential();
  for_each_monomial(D, N, true, [&](const TSMonomial& m) {
    UCoeffs lhs = double_bracket(fo, TSMonomial::t(0), m);
    UCoeffs rhs;
    for (std::size_t i = 0; i + 1 <= N; ++i) {
      auto q = m.quotient(TSMonomial::t(i + 1));
      if (q) add_scaled(rhs, double_bracket(fo, TSMonomial::t(i), *q), 1);
    }
    if (m == TSMonomial::s()) accumulate(rhs, -1, 1);
    ++report.monomials_checked;
    if (!same(lhs, rhs)) report.failures.push_back({m, lhs, rhs});
  });
  return report;
}

SeriesCheck open_dilaton_report(unsigned D, unsigned N) {
  SeriesCheck report;
  report.name = "open-dilaton";
  LazySeries fo = open_potential();
  for_each_monomial(D, N, true, [&](const TSMonomial& m) {
    UCoeffs lhs = double_bracket(fo, TSMonomial::t(1), m);
    UCoeffs rhs;
    // t_i dF/dt_i and s dF/ds are Euler operators: they scale the coefficient of m.
    long twice = 2L * m.s_exp();
    for (std::size_t i = 0; i < m.t_len(); ++i) twice += static_cast<long>((2 * i + 1) * m.t_exp(i));
    Rational weight = frac(twice, 3);
    add_scaled(rhs, fo(m), weight);
    if (m.is_one()) accumulate(rhs, 0, Rational(1, 2));
    ++report.monomials_checked;
    if (!same(lhs, rhs)) report.failures.push_back({m, lhs, rhs});
  });
  return report;
}

SeriesCheck open_virasoro_report(int n, unsigned D, unsigned N) {
  SeriesCheck report;
  report.name = "open-virasoro n=" + std::to_string(n);
  LazySeries full = lazy_sum(closed_potential(), open_potential());
  const DiffOperator op = make_open_L(n, N + static_cast<unsigned>(std::max(n, 0)) + 2).combined();
  for_each_monomial(D, N, true, [&](const TSMonomial& m) {
    UCoeffs r = conjugated_coefficient(op, full, m);
    ++report.monomials_checked;
    if (!r.empty()) report.failures.push_back({m, r, {}});
  });
  return report;
}

}  // namespace disktau
