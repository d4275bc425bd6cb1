#pragma once

#include "disktau/rational.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace disktau {

// u^e t_0^{n_0} t_1^{n_1} ... s^k.  Exponents live inline; equal monomials have
// equal representations.
class TSMonomial {
 public:
  static constexpr std::size_t kIndexLimit = 64;

  TSMonomial() = default;
  explicit TSMonomial(const std::vector<unsigned>& t_exps, unsigned s_exp = 0, int u_exp = 0);

  static TSMonomial t(std::size_t index, unsigned power = 1);
  static TSMonomial s(unsigned power = 1);
  static TSMonomial u(int power);
  // t_{a_1} t_{a_2} ... s^k
  static TSMonomial from_insertions(const std::vector<int>& a, unsigned k = 0);

  unsigned t_exp(std::size_t index) const { return index < len_ ? t_[index] : 0; }
  // One past the largest index with a nonzero exponent.
  std::size_t t_len() const { return len_; }
  std::vector<unsigned> t_exps() const;
  unsigned s_exp() const { return s_; }
  int u_exp() const { return u_; }
  // Degree in t and s; u does not count.
  unsigned degree() const { return degree_; }
  unsigned t_degree() const { return degree_ - s_; }
  // sum_i i * n_i
  unsigned index_sum() const;
  std::optional<std::size_t> max_index() const;
  bool is_one() const { return degree_ == 0 && u_ == 0; }

  // Multiset of descendent indices, ascending.
  std::vector<int> insertions() const;
  // prod n_i! * k!
  Integer symmetry_factor() const;

  // t/s part divides; u is ignored.
  bool divides(const TSMonomial& other) const;
  // Exponentwise difference; nullopt when not divisible in t/s.
  std::optional<TSMonomial> quotient(const TSMonomial& divisor) const;
  TSMonomial ts_part() const { return with_u(0); }
  TSMonomial with_u(int u) const;

  TSMonomial times_t(std::size_t index, unsigned power = 1) const;
  TSMonomial times_s(unsigned power = 1) const;

  friend TSMonomial operator*(const TSMonomial& a, const TSMonomial& b);
  friend bool operator==(const TSMonomial& a, const TSMonomial& b);
  // Graded order: degree, then s-exponent, then t-exponents by index, then u.
  friend std::strong_ordering operator<=>(const TSMonomial& a, const TSMonomial& b);

  // "u^e t0^n s^k" with zero exponents omitted; "1" for the unit monomial.
  std::string to_string() const;
  std::size_t hash() const;

 private:
  void set_t(std::size_t index, unsigned e);
  void trim();

  std::array<std::uint8_t, kIndexLimit> t_{};
  std::uint8_t len_ = 0;
  unsigned s_ = 0;
  int u_ = 0;
  unsigned degree_ = 0;
};

struct TSMonomialHash {
  std::size_t operator()(const TSMonomial& m) const { return m.hash(); }
};

// Truncation caps: total t/s degree <= degree, descendent index <= descendent.
struct SeriesCaps {
  unsigned degree = 0;
  unsigned descendent = 0;
  friend bool operator==(const SeriesCaps&, const SeriesCaps&) = default;
};

class FormalSeries {
 public:
  using Map = std::unordered_map<TSMonomial, Rational, TSMonomialHash>;

  explicit FormalSeries(SeriesCaps caps) : caps_(caps) {}
  FormalSeries(unsigned degree_cap, unsigned descendent_cap)
      : caps_{degree_cap, descendent_cap} {}

  static FormalSeries constant(SeriesCaps caps, const Rational& c);
  static FormalSeries monomial(SeriesCaps caps, const TSMonomial& m, const Rational& c = 1);

  const SeriesCaps& caps() const { return caps_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool within_caps(const TSMonomial& m) const;

  // Zero for absent monomials, including those outside the caps.
  Rational coeff(const TSMonomial& m) const;
  // Adds c to the coefficient of m; terms outside the caps are dropped.
  void add_term(const TSMonomial& m, const Rational& c);

  const Map& terms() const { return terms_; }
  std::vector<std::pair<TSMonomial, Rational>> sorted_terms() const;

  // One term per line, "<monomial> : <p>/<q>", in canonical order; "0" when empty.
  std::string dump() const;

  friend bool operator==(const FormalSeries& a, const FormalSeries& b);

 private:
  SeriesCaps caps_;
  Map terms_;
};

FormalSeries operator+(const FormalSeries& a, const FormalSeries& b);
FormalSeries operator-(const FormalSeries& a, const FormalSeries& b);
FormalSeries operator*(const FormalSeries& a, const FormalSeries& b);
FormalSeries operator*(const Rational& c, const FormalSeries& f);

FormalSeries series_add(const FormalSeries& a, const FormalSeries& b);
FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b);
FormalSeries series_scale(const FormalSeries& f, const Rational& c);

FormalSeries d_t(const FormalSeries& f, std::size_t index);
FormalSeries d_s(const FormalSeries& f);
FormalSeries mul_t(const FormalSeries& f, std::size_t index);
FormalSeries mul_s(const FormalSeries& f);
FormalSeries mul_u_power(const FormalSeries& f, int e);

// exp(f) truncated to the caps of f.  f must have no term of t/s-degree zero.
FormalSeries series_exp(const FormalSeries& f);

// Inverse of FormalSeries::dump for the given caps.
FormalSeries parse_series_dump(const std::string& text, SeriesCaps caps);

}  // namespace disktau

namespace disktau {

// Visits every t/s monomial (u-exponent 0) of degree <= degree with t-indices
// <= max_index; s-powers are included only when with_s is set.
void for_each_monomial(unsigned degree, unsigned max_index, bool with_s,
                       const std::function<void(const TSMonomial&)>& visit);

}  // namespace disktau
