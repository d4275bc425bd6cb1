#include "disktau/identity_suite.hpp"

#include "disktau/bracket.hpp"
#include "disktau/errors.hpp"
#include "disktau/open_theory.hpp"
#include "disktau/operators.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace disktau {

namespace {

std::string join(const std::vector<int>& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "," : "") + std::to_string(a[i]);
  return out;
}

std::string key_params(const std::vector<int>& a, int k) {
  return "a=[" + join(a) + "] k=" + std::to_string(k);
}

VerificationReport make_report(std::string identity, std::string params, Rational lhs, Rational rhs,
                               std::string detail = {}) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.params = std::move(params);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.pass = r.lhs == r.rhs;
  r.detail = std::move(detail);
  return r;
}

std::vector<int> remove_one(const std::vector<int>& a, int value) {
  std::vector<int> out = a;
  auto it = std::find(out.begin(), out.end(), value);
  if (it == out.end()) throw PreconditionError("insertion " + std::to_string(value) + " not present");
  out.erase(it);
  return out;
}

std::vector<int> with(std::vector<int> a, std::initializer_list<int> extra) {
  a.insert(a.end(), extra.begin(), extra.end());
  return a;
}

// Splits a by a bitmask into (S, T) and their sums.
struct Split {
  std::vector<int> s, t;
  long sum_s = 0, sum_t = 0;
};

Split split(const std::vector<int>& a, unsigned mask) {
  Split out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (mask >> i & 1) {
      out.s.push_back(a[i]);
      out.sum_s += a[i];
    } else {
      out.t.push_back(a[i]);
      out.sum_t += a[i];
    }
  }
  return out;
}

long sum_long(const std::vector<int>& a) {
  long s = 0;
  for (int x : a) s += x;
  return s;
}

// Nondecreasing sequences of the given length and sum with entries >= lo.
void for_each_multiset(int length, int sum, int lo, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> cur;
  std::function<void(int, int, int)> rec = [&](int left, int rem, int min_value) {
    if (left == 0) {
      if (rem == 0) visit(cur);
      return;
    }
    for (int v = min_value; v * left <= rem; ++v) {
      cur.push_back(v);
      rec(left - 1, rem - v, v);
      cur.pop_back();
    }
  };
  if (sum >= 0) rec(length, sum, lo);
}

// Every stable genus-0 open key (a, k) with |a| + k <= max_degree.
void for_each_genus0_key(int max_degree, const std::function<void(const std::vector<int>&, int)>& visit) {
  for (int l = 0; l <= max_degree; ++l)
    for (int k = 0; l + k <= max_degree; ++k) {
      const int twice = k + 2 * l - 3;
      if (twice < 0 || twice % 2 != 0) continue;
      if (k + 2 * l - 2 <= 0) continue;
      for_each_multiset(l, twice / 2, 0, [&](const std::vector<int>& a) { visit(a, k); });
    }
}

std::vector<int> distinct(const std::vector<int>& a) {
  std::vector<int> out = a;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LazySeries without_u(LazySeries f) {
  return [f = std::move(f)](const TSMonomial& m) -> UCoeffs {
    UCoeffs r = f(m);
    for (auto& c : r) c.u = 0;
    return r;
  };
}

}  // namespace

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.pass; }));
}

VerificationReport verify_open_string(const std::vector<int>& a, int k) {
  std::vector<int> rest = remove_one(a, 0);
  auto g = genus_of_open(a, k);
  if (!g) throw PreconditionError("no genus satisfies the dimension constraint for " + key_params(a, k));
  const int l = static_cast<int>(rest.size());
  if (2 * *g - 2 + k + 2 * l <= 0) throw PreconditionError("string equation needs 2g-2+k+2l > 0");
  Rational lhs = open_bracket(*g, a, k);
  Rational rhs = 0;
  for (std::size_t j = 0; j < rest.size(); ++j) {
    if (rest[j] == 0) continue;
    std::vector<int> lowered = rest;
    --lowered[j];
    rhs += open_bracket(*g, lowered, k);
  }
  return make_report("open-string", key_params(a, k) + " g=" + std::to_string(*g), lhs, rhs);
}

VerificationReport verify_open_dilaton(const std::vector<int>& a, int k) {
  std::vector<int> rest = remove_one(a, 1);
  auto g = genus_of_open(a, k);
  if (!g) throw PreconditionError("no genus satisfies the dimension constraint for " + key_params(a, k));
  const int l = static_cast<int>(rest.size());
  if (2 * *g - 2 + k + 2 * l <= 0) throw PreconditionError("dilaton equation needs 2g-2+k+2l > 0");
  Rational lhs = open_bracket(*g, a, k);
  Rational rhs = Rational(*g - 1 + k + l) * open_bracket(*g, rest, k);
  return make_report("open-dilaton", key_params(a, k) + " g=" + std::to_string(*g), lhs, rhs);
}

VerificationReport verify_trr(TrrVariant variant, int n, std::optional<int> m, const std::vector<int>& a,
                              int k) {
  if (n < 1) throw PreconditionError("TRR needs n >= 1");
  if (variant == TrrVariant::II && (!m || *m < 0)) throw PreconditionError("TRR II needs m >= 0");
  if (k < 0 || (variant == TrrVariant::I && k < 1)) throw PreconditionError("TRR I needs k >= 1");
  const unsigned subsets = 1u << a.size();
  Rational lhs, rhs = 0;
  if (variant == TrrVariant::I) {
    lhs = open_bracket(0, with(a, {n}), k);
    for (unsigned mask = 0; mask < subsets; ++mask) {
      Split p = split(a, mask);
      Rational c = closed_bracket(0, with(p.s, {n - 1, 0}));
      if (c != 0) rhs += c * open_bracket(0, with(p.t, {0}), k);
      for (int j = 0; j <= k - 1; ++j) {
        Rational left = open_bracket(0, with(p.s, {n - 1}), j);
        if (left == 0) continue;
        rhs += Rational(binomial(k - 1, j)) * left * open_bracket(0, p.t, k + 1 - j);
      }
    }
  } else {
    lhs = open_bracket(0, with(a, {n, *m}), k);
    for (unsigned mask = 0; mask < subsets; ++mask) {
      Split p = split(a, mask);
      Rational c = closed_bracket(0, with(p.s, {n - 1, 0}));
      if (c != 0) rhs += c * open_bracket(0, with(p.t, {0, *m}), k);
      for (int j = 0; j <= k; ++j) {
        Rational left = open_bracket(0, with(p.s, {n - 1}), j);
        if (left == 0) continue;
        rhs += Rational(binomial(k, j)) * left * open_bracket(0, with(p.t, {*m}), k - j + 1);
      }
    }
  }
  std::string params = "n=" + std::to_string(n);
  if (variant == TrrVariant::II) params += " m=" + std::to_string(*m);
  return make_report(variant == TrrVariant::I ? "trr-1" : "trr-2", params + " " + key_params(a, k), lhs,
                     rhs);
}

VerificationReport verify_open_kdv_coeff(int n, const std::vector<int>& a) {
  if (n < 1) throw PreconditionError("open KdV coefficient form needs n >= 1");
  for (int x : a)
    if (x < 1) throw PreconditionError("open KdV coefficient form needs every a_i >= 1");
  const long l = static_cast<long>(a.size());
  const long A = sum_long(a);
  const long k = 2 * n + 2 * A - 2 * l + 1;
  Rational lhs = Rational(2 * n - 1) * open_bracket(0, with(a, {n}), static_cast<int>(k));
  Rational rhs = 0;
  for (unsigned mask = 0; mask < (1u << a.size()); ++mask) {
    Split p = split(a, mask);
    const long ks = 2 * n + 2 * p.sum_s - 2 * static_cast<long>(p.s.size()) - 1;
    Integer b = binomial(k - 1, ks - 1);
    if (b == 0) continue;
    rhs += 2 * Rational(b) * open_bracket(0, with(p.s, {n - 1}), static_cast<int>(ks)) *
           open_bracket(0, p.t, static_cast<int>(k - ks + 1));
  }
  return make_report("open-kdv-coeff", "n=" + std::to_string(n) + " " + key_params(a, static_cast<int>(k)),
                     lhs, rhs);
}

namespace {

class Genus0Virasoro {
 public:
  explicit Genus0Virasoro(int n) : n_(n) {}

  Rational coefficient(const std::vector<int>& a, int k) {
    const TSMonomial m = TSMonomial::from_insertions(a, static_cast<unsigned>(k));
    const int top = m.max_index() ? static_cast<int>(*m.max_index()) : 0;
    const unsigned N = static_cast<unsigned>(top + std::max(n_, 0) + 2);
    if (!op_ || op_cap_ < N) {
      op_ = make_open_L(n_, N).combined();
      op_cap_ = N;
    }
    return coefficient_at(conj_.apply(*op_, m), -1);
  }

 private:
  int n_;
  std::optional<DiffOperator> op_;
  unsigned op_cap_ = 0;
  Conjugator conj_{lazy_sum(closed_genus0_potential(), open_genus0_potential())};
};

}  // namespace

Rational virasoro_genus0_coefficient(int n, const std::vector<int>& a, int k) {
  if (n < -1) throw DomainError("OL_n is defined for n >= -1");
  Genus0Virasoro v(n);
  return v.coefficient(a, k);
}

VerificationReport verify_virasoro_genus0(int n, unsigned D, unsigned N) {
  if (n < -1) throw DomainError("OL_n is defined for n >= -1");
  Genus0Virasoro v(n);
  std::size_t checked = 0;
  std::optional<std::pair<std::string, Rational>> first_failure;
  for (int l = 0; l <= static_cast<int>(D); ++l) {
    const int bound = static_cast<int>(D) + l - 2 * n - 3;
    for (int sum = 0; 2 * sum <= bound; ++sum)
      for_each_multiset(l, sum, 0, [&](const std::vector<int>& a) {
        if (!a.empty() && a.back() > static_cast<int>(N)) return;
        const int k = 2 * sum - 2 * l + 2 * n + 3;
        if (k < 0 || l + k > static_cast<int>(D)) return;
        ++checked;
        Rational c = v.coefficient(a, k);
        if (c != 0 && !first_failure) first_failure = {key_params(a, k), c};
      });
  }
  std::string params = "n=" + std::to_string(n) + " D=" + std::to_string(D) + " N=" + std::to_string(N);
  std::string detail = std::to_string(checked) + " monomials on the u^-1 slice";
  if (first_failure) detail += "; first nonzero at " + first_failure->first;
  return make_report("virasoro-genus0", params, first_failure ? first_failure->second : Rational(0), 0,
                     detail);
}

std::optional<BinomialId> parse_binomial_id(const std::string& name) {
  if (name == "xxz") return BinomialId::xxz;
  if (name == "xxzz") return BinomialId::xxzz;
  if (name == "vxxz2") return BinomialId::vxxz2;
  if (name == "xz2") return BinomialId::xz2;
  return std::nullopt;
}

std::string to_string(BinomialId id) {
  switch (id) {
    case BinomialId::xxz: return "xxz";
    case BinomialId::xxzz: return "xxzz";
    case BinomialId::vxxz2: return "vxxz2";
    case BinomialId::xz2: return "xz2";
  }
  return "";
}

VerificationReport verify_binomial(BinomialId id, int n, const std::vector<int>& a) {
  for (int x : a)
    if (x < 1) throw PreconditionError("binomial identities need every a_i >= 1");
  if ((id == BinomialId::xxz || id == BinomialId::xxzz) && n < 1)
    throw PreconditionError("xxz and xxzz need n >= 1");
  const long l = static_cast<long>(a.size());
  const long A = sum_long(a);
  const unsigned parts = 1u << a.size();
  Rational lhs, rhs = 0;
  auto ratio = [](const Integer& num, const Integer& den) {
    if (den == 0) {
      if (num != 0) throw DomainError("vanishing denominator in binomial identity");
      return Rational(0);
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
  };
  switch (id) {
    case BinomialId::xxz:
    case BinomialId::xxzz: {
      const bool first = id == BinomialId::xxz;
      lhs = first ? frac(2 * n + 2 * A - l, 2 * n - 1) : Rational(2 * n + 2 * A - l);
      for (unsigned mask = 0; mask < parts; ++mask) {
        Split p = split(a, mask);
        const long ls = static_cast<long>(p.s.size());
        Integer num = binomial(2 * n + 2 * A - 2 * l, 2 * n + 2 * p.sum_s - 2 * ls - (first ? 1 : 2));
        Integer den = binomial(2 * n + 2 * A - l - 1, 2 * n + 2 * p.sum_s - ls - 2);
        rhs += ratio(num, den);
      }
      if (!first) rhs *= 2;
      break;
    }
    case BinomialId::vxxz2: {
      lhs = frac(20 + 8 * A - 8 * l, 4) * Rational(factorial(3 + 2 * A - l));
      for (unsigned mask = 0; mask < parts; ++mask) {
        Split p = split(a, mask);
        const long ls = static_cast<long>(p.s.size()), lt = static_cast<long>(p.t.size());
        rhs += Rational((5 + 2 * A - 2 * l) * binomial(4 + 2 * A - 2 * l, 2 + 2 * p.sum_s - 2 * ls) *
                        factorial(1 + 2 * p.sum_s - ls) * factorial(1 + 2 * p.sum_t - lt));
      }
      break;
    }
    case BinomialId::xz2: {
      lhs = frac(42 + 12 * A - 12 * l, 8) * Rational(factorial(5 + 2 * A - l));
      // Ordered triples (S, T, U) as base-3 digits.
      long total = 1;
      for (std::size_t i = 0; i < a.size(); ++i) total *= 3;
      for (long code = 0; code < total; ++code) {
        long sums[3] = {0, 0, 0}, sizes[3] = {0, 0, 0};
        long c = code;
        for (std::size_t i = 0; i < a.size(); ++i, c /= 3) {
          sums[c % 3] += a[i];
          sizes[c % 3] += 1;
        }
        std::vector<long> ps;
        Integer prod = 1;
        for (int x = 0; x < 3; ++x) {
          ps.push_back(2 + 2 * sums[x] - 2 * sizes[x]);
          prod *= factorial(1 + 2 * sums[x] - sizes[x]);
        }
        rhs += Rational((7 + 2 * A - 2 * l) * multinomial(6 + 2 * A - 2 * l, ps) * prod);
      }
      break;
    }
  }
  std::string params = "a=[" + join(a) + "]";
  if (id == BinomialId::xxz || id == BinomialId::xxzz) params = "n=" + std::to_string(n) + " " + params;
  return make_report("binomial-" + to_string(id), params, lhs, rhs);
}

SweepResult sweep_open_string(int max_degree) {
  SweepResult out{"open-string", {}};
  for_each_genus0_key(max_degree, [&](const std::vector<int>& a, int k) {
    if (a.empty() || a.front() != 0) return;
    if (k + 2 * static_cast<int>(a.size()) - 4 <= 0) return;
    out.reports.push_back(verify_open_string(a, k));
  });
  return out;
}

SweepResult sweep_open_dilaton(int max_degree) {
  SweepResult out{"open-dilaton", {}};
  for_each_genus0_key(max_degree, [&](const std::vector<int>& a, int k) {
    if (std::find(a.begin(), a.end(), 1) == a.end()) return;
    if (k + 2 * static_cast<int>(a.size()) - 4 <= 0) return;
    out.reports.push_back(verify_open_dilaton(a, k));
  });
  return out;
}

SweepResult sweep_trr(TrrVariant variant, int max_degree) {
  SweepResult out{variant == TrrVariant::I ? "trr-1" : "trr-2", {}};
  for_each_genus0_key(max_degree, [&](const std::vector<int>& b, int k) {
    if (variant == TrrVariant::I) {
      if (k < 1) return;
      for (int n : distinct(b))
        if (n >= 1) out.reports.push_back(verify_trr(variant, n, std::nullopt, remove_one(b, n), k));
      return;
    }
    for (int n : distinct(b)) {
      if (n < 1) continue;
      std::vector<int> rest = remove_one(b, n);
      for (int m : distinct(rest)) out.reports.push_back(verify_trr(variant, n, m, remove_one(rest, m), k));
    }
  });
  return out;
}

SweepResult sweep_open_kdv_coeff(int max_degree) {
  SweepResult out{"open-kdv-coeff", {}};
  for_each_genus0_key(max_degree, [&](const std::vector<int>& b, int k) {
    if (b.empty() || b.front() < 1) return;
    (void)k;
    for (int n : distinct(b)) out.reports.push_back(verify_open_kdv_coeff(n, remove_one(b, n)));
  });
  return out;
}

SweepResult sweep_binomial(BinomialId id, int max_A, int max_l, int max_n) {
  SweepResult out{"binomial-" + to_string(id), {}};
  const bool uses_n = id == BinomialId::xxz || id == BinomialId::xxzz;
  for (int l = 0; l <= max_l; ++l)
    for (int A = l; A <= max_A; ++A)
      for_each_multiset(l, A, 1, [&](const std::vector<int>& a) {
        for (int n = 1; n <= (uses_n ? max_n : 1); ++n) out.reports.push_back(verify_binomial(id, n, a));
      });
  return out;
}

namespace {

UCoeffs trr_rhs_coeffs(TrrVariant variant, int n, int m, const TSMonomial& at, const LazySeries& fc,
                       const LazySeries& fo) {
  auto t = [](int i, unsigned p = 1) { return TSMonomial::t(static_cast<std::size_t>(i), p); };
  const TSMonomial s = TSMonomial::s();
  UCoeffs rhs;
  UCoeffs first = variant == TrrVariant::I
                      ? double_bracket_product(fc, t(n - 1) * t(0), fo, t(0) * s, at)
                      : double_bracket_product(fc, t(n - 1) * t(0), fo, t(0) * t(m), at);
  UCoeffs second = variant == TrrVariant::I ? double_bracket_product(fo, t(n - 1), fo, TSMonomial::s(2), at)
                                            : double_bracket_product(fo, t(n - 1), fo, t(m) * s, at);
  for (const auto& c : first) accumulate(rhs, c.u, c.c);
  for (const auto& c : second) accumulate(rhs, c.u, c.c);
  return rhs;
}

}  // namespace

Rational trr_series_rhs(TrrVariant variant, int n, int m, const TSMonomial& at) {
  LazySeries fc = without_u(closed_genus0_potential());
  LazySeries fo = without_u(open_genus0_potential());
  return total(trr_rhs_coeffs(variant, n, m, at.ts_part(), fc, fo));
}

SeriesCheck trr_series_report(TrrVariant variant, int n, int m, unsigned D, unsigned N) {
  if (n < 1) throw PreconditionError("TRR needs n >= 1");
  LazySeries fc = without_u(closed_genus0_potential());
  LazySeries fo = without_u(open_genus0_potential());
  SeriesCheck report;
  report.name = std::string(variant == TrrVariant::I ? "trr-1" : "trr-2") + " series n=" + std::to_string(n);
  const TSMonomial x = variant == TrrVariant::I
                           ? TSMonomial::t(static_cast<std::size_t>(n)) * TSMonomial::s()
                           : TSMonomial::t(static_cast<std::size_t>(n)) * TSMonomial::t(static_cast<std::size_t>(m));
  for_each_monomial(D, N, true, [&](const TSMonomial& at) {
    UCoeffs lhs = double_bracket(fo, x, at);
    UCoeffs rhs = trr_rhs_coeffs(variant, n, m, at, fc, fo);
    ++report.monomials_checked;
    if (total(lhs) != total(rhs)) report.failures.push_back({at, lhs, rhs});
  });
  return report;
}

std::string report_csv_header() { return "identity,params,lhs,rhs,pass"; }

std::string to_csv(const VerificationReport& r) {
  return r.identity + ",\"" + r.params + "\"," + to_string(r.lhs) + "," + to_string(r.rhs) + "," +
         (r.pass ? "PASS" : "FAIL");
}

std::string to_text(const VerificationReport& r) {
  std::ostringstream os;
  os << r.identity << " " << r.params << ": " << to_string(r.lhs) << " = " << to_string(r.rhs) << " "
     << (r.pass ? "PASS" : "FAIL");
  if (!r.detail.empty()) os << " (" << r.detail << ")";
  return os.str();
}

}  // namespace disktau
