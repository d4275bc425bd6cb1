#include "disktau/operators.hpp"

#include "disktau/errors.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace disktau {

std::size_t DiffOperator::max_index() const {
  std::size_t r = 0;
  for (const auto& t : terms) {
    if (auto i = t.multiplier.max_index()) r = std::max(r, *i);
    if (auto i = t.derivative.max_index()) r = std::max(r, *i);
  }
  return r;
}

DiffOperator DiffOperator::combined() const {
  DiffOperator out;
  out.name = name;
  for (const auto& t : terms) {
    auto it = std::find_if(out.terms.begin(), out.terms.end(), [&](const DiffTerm& o) {
      return o.u_power == t.u_power && o.multiplier == t.multiplier && o.derivative == t.derivative;
    });
    if (it == out.terms.end() || it == out.terms.begin())
      out.terms.push_back(t);
    else
      it->coeff += t.coeff;
  }
  for (std::size_t i = out.terms.size(); i-- > 1;)
    if (out.terms[i].coeff == 0) out.terms.erase(out.terms.begin() + static_cast<long>(i));
  return out;
}

namespace {

std::string derivative_string(const TSMonomial& d) {
  std::string out;
  for (std::size_t i = 0; i < d.t_len(); ++i) {
    unsigned e = d.t_exp(i);
    if (e == 0) continue;
    out += " d/dt" + std::to_string(i);
    if (e > 1) out += "^" + std::to_string(e);
  }
  if (d.s_exp() > 0) {
    out += " d/ds";
    if (d.s_exp() > 1) out += "^" + std::to_string(d.s_exp());
  }
  return out;
}

}  // namespace

std::string DiffOperator::to_string() const {
  std::string out = name.empty() ? std::string() : name + " =";
  bool first = true;
  for (const auto& t : terms) {
    std::string piece = disktau::to_string(t.coeff);
    if (t.u_power != 0) piece += " u^" + std::to_string(t.u_power);
    if (!t.multiplier.is_one()) piece += " " + t.multiplier.to_string();
    piece += derivative_string(t.derivative);
    out += (first && name.empty()) ? piece : " + " + piece;
    first = false;
  }
  return out;
}

Rational leading_coefficient(int n) {
  if (n < -1) throw DomainError("L_n needs n >= -1");
  if (n == -1) return 1;
  if (n == 0) return Rational(3, 2);
  Rational c(double_factorial(2 * n + 3), 1);
  c /= Rational(Integer(1) << (n + 1));
  return c;
}

DiffOperator make_closed_L(int n, unsigned N) {
  if (n < -1) throw DomainError("L_n needs n >= -1");
  if (static_cast<long>(N) < n + 1) throw PreconditionError("descendent cap below n + 1");
  DiffOperator op;
  op.name = "L_" + std::to_string(n);
  op.terms.push_back({-leading_coefficient(n), 0, TSMonomial(), TSMonomial::t(n + 1)});
  if (n == -1) {
    op.terms.push_back({Rational(1, 2), -2, TSMonomial::t(0, 2), TSMonomial()});
    for (unsigned i = 0; i + 1 <= N; ++i)
      op.terms.push_back({1, 0, TSMonomial::t(i + 1), TSMonomial::t(i)});
    return op;
  }
  const Rational denom(Integer(1) << (n + 1));
  for (unsigned i = 0; i + n <= N; ++i) {
    Integer p = 1;
    for (int j = 0; j <= n; ++j) p *= 2 * static_cast<long>(i) + 2 * j + 1;
    op.terms.push_back({Rational(p) / denom, 0, TSMonomial::t(i), TSMonomial::t(i + n)});
  }
  if (n == 0) op.terms.push_back({Rational(1, 16), 0, TSMonomial(), TSMonomial()});
  for (int i = 0; i <= n - 1; ++i) {
    Integer p = (i % 2 == 0) ? -1 : 1;
    for (int j = 0; j <= n; ++j) p *= -2 * i - 1 + 2 * j;
    Rational c = Rational(p) / denom / 2;
    op.terms.push_back({c, 2, TSMonomial(), TSMonomial::t(i) * TSMonomial::t(n - 1 - i)});
  }
  return op;
}

DiffOperator make_open_L(int n, unsigned N) {
  DiffOperator op = make_closed_L(n, N);
  op.name = "OL_" + std::to_string(n);
  if (n == -1) {
    op.terms.push_back({1, -1, TSMonomial::s(), TSMonomial()});
    return op;
  }
  op.terms.push_back({1, n, TSMonomial::s(), TSMonomial::s(n + 1)});
  op.terms.push_back({frac(3 * n + 3, 4), n, TSMonomial(), TSMonomial::s(n)});
  return op;
}

Integer derivative_factor(const TSMonomial& base, const TSMonomial& d) {
  Integer r = 1;
  for (std::size_t i = 0; i < d.t_len(); ++i)
    for (unsigned j = 1; j <= d.t_exp(i); ++j) r *= base.t_exp(i) + j;
  for (unsigned j = 1; j <= d.s_exp(); ++j) r *= base.s_exp() + j;
  return r;
}

namespace {

void apply_term(const DiffTerm& term, const FormalSeries& f, FormalSeries& out) {
  for (const auto& [m, c] : f.terms()) {
    auto rest = m.quotient(term.derivative);
    if (!rest) continue;
    Integer factor = derivative_factor(*rest, term.derivative);
    TSMonomial r = (*rest * term.multiplier);
    out.add_term(r.with_u(r.u_exp() + term.u_power), c * term.coeff * factor);
  }
}

}  // namespace

FormalSeries apply_operator(const DiffOperator& op, const FormalSeries& f) {
  if (op.max_index() > f.caps().descendent)
    throw CapError(op.name + " uses descendent indices above the series cap");
  FormalSeries out(f.caps());
  for (const auto& term : op.terms) apply_term(term, f, out);
  return out;
}

FormalSeries apply_commutator(const DiffOperator& a, const DiffOperator& b, const FormalSeries& f) {
  return apply_operator(a, apply_operator(b, f)) - apply_operator(b, apply_operator(a, f));
}


CommutatorReport commutator_check(int n, int m, unsigned N, unsigned D) {
  if (n < -1 || m < -1) throw DomainError("L_n needs n >= -1");
  if (D < 4 || N < 2 || static_cast<long>(N) < std::max(n, m) + 1 ||
      static_cast<long>(N) < n + m + 1)
    throw PreconditionError("caps too small for the commutator window");
  CommutatorReport report;
  report.n = n;
  report.m = m;
  SeriesCaps caps{D, N};
  DiffOperator ln = make_open_L(n, N);
  DiffOperator lm = make_open_L(m, N);
  std::optional<DiffOperator> lnm;
  if (n != m) lnm = make_open_L(n + m, N);
  for_each_monomial(D - 4, N - 2, true, [&](const TSMonomial& mono) {
    FormalSeries f = FormalSeries::monomial(caps, mono);
    FormalSeries lhs = apply_commutator(ln, lm, f);
    FormalSeries rhs(caps);
    if (lnm) rhs = series_scale(apply_operator(*lnm, f), n - m);
    ++report.basis_checked;
    if (!(lhs == rhs)) {
      FormalSeries diff = lhs - rhs;
      auto terms = diff.sorted_terms();
      report.failures.push_back(mono.to_string() + ": differs at " + terms.front().first.to_string() +
                                " by " + disktau::to_string(terms.front().second));
    }
  });
  return report;
}

void accumulate(UCoeffs& into, int u, const Rational& c) {
  if (c == 0) return;
  auto it = std::lower_bound(into.begin(), into.end(), u,
                             [](const UCoeff& x, int key) { return x.u < key; });
  if (it != into.end() && it->u == u) {
    it->c += c;
    if (it->c == 0) into.erase(it);
  } else {
    into.insert(it, UCoeff{u, c});
  }
}

UCoeffs multiply(const UCoeffs& a, const UCoeffs& b) {
  UCoeffs r;
  for (const auto& x : a)
    for (const auto& y : b) accumulate(r, x.u + y.u, x.c * y.c);
  return r;
}

Rational total(const UCoeffs& a) {
  Rational r = 0;
  for (const auto& x : a) r += x.c;
  return r;
}

Rational coefficient_at(const UCoeffs& a, int u) {
  for (const auto& x : a)
    if (x.u == u) return x.c;
  return 0;
}

void all_divisors(const TSMonomial& m, std::vector<TSMonomial>& out) {
  out.clear();
  const std::size_t len = m.t_len();
  auto rec = [&](auto&& self, std::size_t var, const TSMonomial& cur) -> void {
    if (var == len) {
      out.push_back(cur);
      for (unsigned k = 1; k <= m.s_exp(); ++k) out.push_back(cur.times_s(k));
      return;
    }
    self(self, var + 1, cur);
    for (unsigned p = 1; p <= m.t_exp(var); ++p) self(self, var + 1, cur.times_t(var, p));
  };
  rec(rec, 0, TSMonomial());
}

std::vector<TSMonomial> divisors(const TSMonomial& m) {
  std::vector<TSMonomial> out;
  all_divisors(m, out);
  return out;
}

int pivot_index(const TSMonomial& m) {
  for (std::size_t i = 1; i < m.t_len(); ++i)
    if (m.t_exp(i) > 0) return static_cast<int>(i);
  return 0;
}

LazySeries lazy_from_series(const FormalSeries& f) {
  auto index = std::make_shared<std::unordered_map<TSMonomial, UCoeffs, TSMonomialHash>>();
  for (const auto& [m, c] : f.terms()) accumulate((*index)[m.ts_part()], m.u_exp(), c);
  return [index](const TSMonomial& m) -> UCoeffs {
    auto it = index->find(m);
    return it == index->end() ? UCoeffs{} : it->second;
  };
}

LazySeries lazy_sum(LazySeries a, LazySeries b) {
  return [a = std::move(a), b = std::move(b)](const TSMonomial& m) {
    UCoeffs r = a(m);
    for (const auto& x : b(m)) accumulate(r, x.u, x.c);
    return r;
  };
}

namespace {

std::vector<BlockPartition> compute_partitions(const TSMonomial& d) {
  std::vector<TSMonomial> candidates;
  all_divisors(d, candidates);
  candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                  [](const TSMonomial& x) { return x.degree() == 0; }),
                   candidates.end());
  std::sort(candidates.begin(), candidates.end(),
            [](const TSMonomial& a, const TSMonomial& b) { return b < a; });
  Integer top = d.symmetry_factor();
  std::vector<BlockPartition> out;
  std::vector<TSMonomial> chosen;
  std::function<void(const TSMonomial&, std::size_t)> rec = [&](const TSMonomial& left,
                                                                std::size_t from) {
    if (left.degree() == 0) {
      Integer denom = 1;
      std::size_t run = 0;
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        denom *= chosen[i].symmetry_factor();
        run = (i > 0 && chosen[i] == chosen[i - 1]) ? run + 1 : 1;
        denom *= run;
      }
      out.push_back({top / denom, chosen});
      return;
    }
    for (std::size_t i = from; i < candidates.size(); ++i) {
      auto next = left.quotient(candidates[i]);
      if (!next) continue;
      chosen.push_back(candidates[i]);
      rec(*next, i);
      chosen.pop_back();
    }
  };
  rec(d, 0);
  return out;
}

}  // namespace

const std::vector<BlockPartition>& block_partitions(const TSMonomial& d) {
  static std::mutex mutex;
  static std::map<TSMonomial, std::unique_ptr<std::vector<BlockPartition>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[d.ts_part()];
  if (!slot) slot = std::make_unique<std::vector<BlockPartition>>(compute_partitions(d.ts_part()));
  return *slot;
}

const UCoeffs& Conjugator::phi(const TSMonomial& m) {
  auto it = phi_cache_.find(m);
  if (it == phi_cache_.end()) it = phi_cache_.emplace(m, phi_(m)).first;
  return it->second;
}

const UCoeffs& Conjugator::bell(const TSMonomial& d, const TSMonomial& m) {
  static const UCoeffs empty;
  static const UCoeffs one{UCoeff{0, 1}};
  if (d.degree() == 0) return m.degree() == 0 ? one : empty;
  auto key = std::make_pair(d, m);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  // Peel one variable x off d.
  const bool use_s = d.s_exp() > 0;
  const TSMonomial x = use_s ? TSMonomial::s() : TSMonomial::t(*d.max_index());
  const TSMonomial rest = *d.quotient(x);
  const unsigned ex = use_s ? m.s_exp() : m.t_exp(*d.max_index());
  UCoeffs out;
  for (const auto& c : bell(rest, m * x)) accumulate(out, c.u, c.c * (ex + 1));
  std::vector<TSMonomial> divs;
  all_divisors(m, divs);
  Rational term;
  for (const auto& dv : divs) {
    const UCoeffs& head = phi(dv * x);
    if (head.empty()) continue;
    const UCoeffs& tail = bell(rest, *m.quotient(dv));
    if (tail.empty()) continue;
    const unsigned e = (use_s ? dv.s_exp() : dv.t_exp(*d.max_index())) + 1;
    for (const auto& h : head)
      for (const auto& t : tail) {
        term = h.c * t.c;
        if (e != 1) term *= e;
        accumulate(out, h.u + t.u, term);
      }
  }
  return memo_.emplace(std::move(key), std::move(out)).first->second;
}

UCoeffs Conjugator::apply(const DiffOperator& op, const TSMonomial& m, std::size_t skip) {
  const TSMonomial mono = m.ts_part();
  UCoeffs out;
  for (std::size_t k = 0; k < op.terms.size(); ++k) {
    if (k == skip) continue;
    const DiffTerm& term = op.terms[k];
    auto rest = mono.quotient(term.multiplier);
    if (!rest) continue;
    for (const auto& x : bell(term.derivative, *rest))
      accumulate(out, x.u + term.u_power, term.coeff * x.c);
  }
  return out;
}

UCoeffs conjugated_coefficient(const DiffOperator& op, const LazySeries& phi, const TSMonomial& m,
                               std::size_t skip) {
  Conjugator c(phi);
  return c.apply(op, m, skip);
}

FormalSeries conjugate_apply(const DiffOperator& op, const FormalSeries& phi) {
  if (op.max_index() > phi.caps().descendent)
    throw CapError(op.name + " uses descendent indices above the series cap");
  const SeriesCaps caps = phi.caps();
  std::map<TSMonomial, FormalSeries> derivs;
  auto derivative = [&](const TSMonomial& b) -> const FormalSeries& {
    auto it = derivs.find(b);
    if (it != derivs.end()) return it->second;
    FormalSeries d = phi;
    for (std::size_t i = 0; i < b.t_len(); ++i)
      for (unsigned j = 0; j < b.t_exp(i); ++j) d = d_t(d, i);
    for (unsigned j = 0; j < b.s_exp(); ++j) d = d_s(d);
    return derivs.emplace(b, std::move(d)).first->second;
  };
  FormalSeries out(caps);
  for (const auto& term : op.terms) {
    FormalSeries sum(caps);
    if (term.derivative.degree() == 0) {
      sum = FormalSeries::constant(caps, 1);
    } else {
      for (const auto& bp : block_partitions(term.derivative)) {
        FormalSeries prod = FormalSeries::constant(caps, Rational(bp.count));
        for (const auto& b : bp.blocks) prod = prod * derivative(b);
        sum = sum + prod;
      }
    }
    for (const auto& [mono, c] : sum.terms()) {
      TSMonomial r = mono * term.multiplier;
      out.add_term(r.with_u(r.u_exp() + term.u_power), c * term.coeff);
    }
  }
  return out;
}

}  // namespace disktau
