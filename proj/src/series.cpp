#include "disktau/series.hpp"

#include "disktau/errors.hpp"

#include <algorithm>
#include <sstream>

namespace disktau {

TSMonomial::TSMonomial(const std::vector<unsigned>& t_exps, unsigned s_exp, int u_exp)
    : s_(s_exp), u_(u_exp), degree_(s_exp) {
  for (std::size_t i = 0; i < t_exps.size(); ++i)
    if (t_exps[i] != 0) set_t(i, t_exps[i]);
}

void TSMonomial::set_t(std::size_t index, unsigned e) {
  if (index >= kIndexLimit) throw CapError("descendent index above " + std::to_string(kIndexLimit - 1));
  if (e > 255) throw CapError("exponent above 255");
  degree_ = degree_ - t_[index] + e;
  t_[index] = static_cast<std::uint8_t>(e);
  if (e != 0 && index >= len_) len_ = static_cast<std::uint8_t>(index + 1);
  if (e == 0) trim();
}

void TSMonomial::trim() {
  while (len_ > 0 && t_[len_ - 1] == 0) --len_;
}

TSMonomial TSMonomial::t(std::size_t index, unsigned power) {
  TSMonomial r;
  r.set_t(index, power);
  return r;
}

TSMonomial TSMonomial::s(unsigned power) {
  TSMonomial r;
  r.s_ = power;
  r.degree_ = power;
  return r;
}

TSMonomial TSMonomial::u(int power) {
  TSMonomial r;
  r.u_ = power;
  return r;
}

TSMonomial TSMonomial::from_insertions(const std::vector<int>& a, unsigned k) {
  TSMonomial r = s(k);
  for (int i : a) {
    if (i < 0) throw PreconditionError("negative descendent index");
    r.set_t(static_cast<std::size_t>(i), r.t_exp(static_cast<std::size_t>(i)) + 1);
  }
  return r;
}

std::vector<unsigned> TSMonomial::t_exps() const {
  return std::vector<unsigned>(t_.begin(), t_.begin() + len_);
}

unsigned TSMonomial::index_sum() const {
  unsigned r = 0;
  for (std::size_t i = 1; i < len_; ++i) r += static_cast<unsigned>(i) * t_[i];
  return r;
}

std::optional<std::size_t> TSMonomial::max_index() const {
  if (len_ == 0) return std::nullopt;
  return len_ - 1u;
}

std::vector<int> TSMonomial::insertions() const {
  std::vector<int> a;
  for (std::size_t i = 0; i < len_; ++i)
    for (unsigned j = 0; j < t_[i]; ++j) a.push_back(static_cast<int>(i));
  return a;
}

Integer TSMonomial::symmetry_factor() const {
  Integer r = factorial(s_);
  for (std::size_t i = 0; i < len_; ++i)
    if (t_[i] > 1) r *= factorial(t_[i]);
  return r;
}

bool TSMonomial::divides(const TSMonomial& other) const {
  if (s_ > other.s_ || len_ > other.len_) return false;
  for (std::size_t i = 0; i < len_; ++i)
    if (t_[i] > other.t_[i]) return false;
  return true;
}

std::optional<TSMonomial> TSMonomial::quotient(const TSMonomial& divisor) const {
  if (!divisor.divides(*this)) return std::nullopt;
  TSMonomial r = *this;
  for (std::size_t i = 0; i < divisor.len_; ++i) r.t_[i] -= divisor.t_[i];
  r.s_ -= divisor.s_;
  r.u_ -= divisor.u_;
  r.degree_ -= divisor.degree_;
  r.trim();
  return r;
}

TSMonomial TSMonomial::with_u(int u) const {
  TSMonomial r = *this;
  r.u_ = u;
  return r;
}

TSMonomial TSMonomial::times_t(std::size_t index, unsigned power) const {
  TSMonomial r = *this;
  r.set_t(index, r.t_exp(index) + power);
  return r;
}

TSMonomial TSMonomial::times_s(unsigned power) const {
  TSMonomial r = *this;
  r.s_ += power;
  r.degree_ += power;
  return r;
}

TSMonomial operator*(const TSMonomial& a, const TSMonomial& b) {
  TSMonomial r = a;
  for (std::size_t i = 0; i < b.len_; ++i) {
    unsigned e = r.t_[i] + b.t_[i];
    if (e > 255) throw CapError("exponent above 255");
    r.t_[i] = static_cast<std::uint8_t>(e);
  }
  r.len_ = std::max(a.len_, b.len_);
  r.s_ = a.s_ + b.s_;
  r.u_ = a.u_ + b.u_;
  r.degree_ = a.degree_ + b.degree_;
  return r;
}

bool operator==(const TSMonomial& a, const TSMonomial& b) {
  return a.degree_ == b.degree_ && a.s_ == b.s_ && a.u_ == b.u_ && a.len_ == b.len_ &&
         std::equal(a.t_.begin(), a.t_.begin() + a.len_, b.t_.begin());
}

std::strong_ordering operator<=>(const TSMonomial& a, const TSMonomial& b) {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  if (auto c = a.s_ <=> b.s_; c != 0) return c;
  std::size_t n = std::max(a.len_, b.len_);
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = a.t_[i] <=> b.t_[i]; c != 0) return c;
  return a.u_ <=> b.u_;
}

std::string TSMonomial::to_string() const {
  std::string out;
  auto add = [&](const std::string& piece) {
    if (!out.empty()) out += ' ';
    out += piece;
  };
  if (u_ != 0) add("u^" + std::to_string(u_));
  for (std::size_t i = 0; i < len_; ++i)
    if (t_[i] != 0) add("t" + std::to_string(i) + "^" + std::to_string(t_[i]));
  if (s_ != 0) add("s^" + std::to_string(s_));
  return out.empty() ? "1" : out;
}

std::size_t TSMonomial::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(s_);
  mix(static_cast<std::uint32_t>(u_));
  for (std::size_t i = 0; i < len_; ++i) mix(t_[i] + (i << 8));
  return static_cast<std::size_t>(h ^ (h >> 29));
}

FormalSeries FormalSeries::constant(SeriesCaps caps, const Rational& c) {
  FormalSeries f(caps);
  f.add_term(TSMonomial(), c);
  return f;
}

FormalSeries FormalSeries::monomial(SeriesCaps caps, const TSMonomial& m, const Rational& c) {
  FormalSeries f(caps);
  f.add_term(m, c);
  return f;
}

bool FormalSeries::within_caps(const TSMonomial& m) const {
  if (m.degree() > caps_.degree) return false;
  auto mi = m.max_index();
  return !mi || *mi <= caps_.descendent;
}

Rational FormalSeries::coeff(const TSMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void FormalSeries::add_term(const TSMonomial& m, const Rational& c) {
  if (c == 0 || !within_caps(m)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::vector<std::pair<TSMonomial, Rational>> FormalSeries::sorted_terms() const {
  std::vector<std::pair<TSMonomial, Rational>> v(terms_.begin(), terms_.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

std::string FormalSeries::dump() const {
  if (terms_.empty()) return "0\n";
  std::string out;
  for (const auto& [m, c] : sorted_terms()) {
    out += m.to_string();
    out += " : ";
    out += c.get_num().get_str() + "/" + c.get_den().get_str();
    out += '\n';
  }
  return out;
}

bool operator==(const FormalSeries& a, const FormalSeries& b) {
  return a.caps_ == b.caps_ && a.terms_ == b.terms_;
}

namespace {

void require_same_caps(const FormalSeries& a, const FormalSeries& b) {
  if (!(a.caps() == b.caps())) throw CapMismatchError("series caps differ");
}

void require_index(const FormalSeries& f, std::size_t index) {
  if (index > f.caps().descendent) throw CapError("descendent index above cap");
}

}  // namespace

FormalSeries series_add(const FormalSeries& a, const FormalSeries& b) {
  require_same_caps(a, b);
  FormalSeries r = a;
  for (const auto& [m, c] : b.terms()) r.add_term(m, c);
  return r;
}

FormalSeries series_scale(const FormalSeries& f, const Rational& c) {
  FormalSeries r(f.caps());
  if (c == 0) return r;
  for (const auto& [m, v] : f.terms()) r.add_term(m, v * c);
  return r;
}

FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b) {
  require_same_caps(a, b);
  const unsigned cap = a.caps().degree;
  std::vector<std::vector<const FormalSeries::Map::value_type*>> by_degree(cap + 1);
  for (const auto& term : b.terms()) by_degree[term.first.degree()].push_back(&term);
  FormalSeries r(a.caps());
  for (const auto& [ma, ca] : a.terms()) {
    for (unsigned d = 0; d + ma.degree() <= cap; ++d)
      for (const auto* tb : by_degree[d]) r.add_term(ma * tb->first, ca * tb->second);
  }
  return r;
}

FormalSeries operator+(const FormalSeries& a, const FormalSeries& b) { return series_add(a, b); }
FormalSeries operator-(const FormalSeries& a, const FormalSeries& b) {
  return series_add(a, series_scale(b, -1));
}
FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) { return series_mul(a, b); }
FormalSeries operator*(const Rational& c, const FormalSeries& f) { return series_scale(f, c); }

FormalSeries d_t(const FormalSeries& f, std::size_t index) {
  require_index(f, index);
  FormalSeries r(f.caps());
  for (const auto& [m, c] : f.terms()) {
    unsigned e = m.t_exp(index);
    if (e == 0) continue;
    r.add_term(*m.quotient(TSMonomial::t(index)), c * e);
  }
  return r;
}

FormalSeries d_s(const FormalSeries& f) {
  FormalSeries r(f.caps());
  for (const auto& [m, c] : f.terms()) {
    if (m.s_exp() == 0) continue;
    r.add_term(*m.quotient(TSMonomial::s()), c * m.s_exp());
  }
  return r;
}

FormalSeries mul_t(const FormalSeries& f, std::size_t index) {
  require_index(f, index);
  FormalSeries r(f.caps());
  for (const auto& [m, c] : f.terms()) r.add_term(m.times_t(index), c);
  return r;
}

FormalSeries mul_s(const FormalSeries& f) {
  FormalSeries r(f.caps());
  for (const auto& [m, c] : f.terms()) r.add_term(m.times_s(), c);
  return r;
}

FormalSeries mul_u_power(const FormalSeries& f, int e) {
  FormalSeries r(f.caps());
  for (const auto& [m, c] : f.terms()) r.add_term(m.with_u(m.u_exp() + e), c);
  return r;
}

FormalSeries series_exp(const FormalSeries& f) {
  for (const auto& [m, c] : f.terms())
    if (m.degree() == 0)
      throw PreconditionError("exp of a series with a degree-zero term " + m.to_string());
  FormalSeries result = FormalSeries::constant(f.caps(), 1);
  FormalSeries power = result;
  for (unsigned j = 1; j <= f.caps().degree; ++j) {
    power = series_scale(series_mul(power, f), Rational(1, j));
    if (power.is_zero()) break;
    result = series_add(result, power);
  }
  return result;
}

FormalSeries parse_series_dump(const std::string& text, SeriesCaps caps) {
  FormalSeries f(caps);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "0") continue;
    auto colon = line.find(" : ");
    if (colon == std::string::npos) throw ParseError("missing ' : ' in series line: " + line);
    std::istringstream mono(line.substr(0, colon));
    std::vector<unsigned> t;
    unsigned s = 0;
    int u = 0;
    std::string tok;
    while (mono >> tok) {
      if (tok == "1") continue;
      auto caret = tok.find('^');
      if (caret == std::string::npos) throw ParseError("bad monomial token: " + tok);
      std::string var = tok.substr(0, caret);
      long e = std::stol(tok.substr(caret + 1));
      if (var == "u") {
        u = static_cast<int>(e);
      } else if (var == "s") {
        s = static_cast<unsigned>(e);
      } else if (var.size() > 1 && var[0] == 't') {
        std::size_t i = std::stoul(var.substr(1));
        if (i >= TSMonomial::kIndexLimit) throw ParseError("descendent index too large: " + tok);
        if (t.size() <= i) t.resize(i + 1, 0);
        t[i] = static_cast<unsigned>(e);
      } else {
        throw ParseError("bad monomial token: " + tok);
      }
    }
    f.add_term(TSMonomial(std::move(t), s, u), parse_rational(line.substr(colon + 3)));
  }
  return f;
}

}  // namespace disktau

namespace disktau {

void for_each_monomial(unsigned degree, unsigned max_index, bool with_s,
                       const std::function<void(const TSMonomial&)>& visit) {
  std::vector<unsigned> e(max_index + 1, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t var, unsigned left) {
    if (var == e.size()) {
      unsigned top = with_s ? left : 0;
      for (unsigned k = 0; k <= top; ++k) visit(TSMonomial(e, k));
      return;
    }
    for (unsigned p = 0; p <= left; ++p) {
      e[var] = p;
      rec(var + 1, left - p);
    }
    e[var] = 0;
  };
  rec(0, degree);
}

}  // namespace disktau
