#pragma once

#include "disktau/rational.hpp"
#include "disktau/series.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace disktau {

// coeff * u^u_power * multiplier * (derivative as a multi-index of d/dt_i, d/ds).
struct DiffTerm {
  Rational coeff;
  int u_power = 0;
  TSMonomial multiplier;
  TSMonomial derivative;
};

struct DiffOperator {
  std::string name;
  std::vector<DiffTerm> terms;

  // Largest descendent index used by a multiplier or derivative.
  std::size_t max_index() const;
  // Merges terms with the same u-power, multiplier and derivative; the first
  // term keeps its position.
  DiffOperator combined() const;
  std::string to_string() const;
};

// Coefficient c_n of the leading term -c_n d/dt_{n+1} of L_n.
Rational leading_coefficient(int n);

// L_n restricted to descendent indices <= N.  terms[0] is always the leading
// term -c_n d/dt_{n+1}.  Requires n >= -1 and N >= n + 1.
DiffOperator make_closed_L(int n, unsigned N);
// L_n + u^n s d_s^{n+1} + (3n+3)/4 u^n d_s^n, with L_{-1} gaining u^{-1} s.
DiffOperator make_open_L(int n, unsigned N);

// Applies the operator termwise and truncates to the caps of f.
FormalSeries apply_operator(const DiffOperator& op, const FormalSeries& f);

// Composition [a, b] = a b - b a as an operator applied to f.
FormalSeries apply_commutator(const DiffOperator& a, const DiffOperator& b, const FormalSeries& f);

struct CommutatorReport {
  int n = 0;
  int m = 0;
  std::size_t basis_checked = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

// Checks [L_n, L_m] = (n - m) L_{n+m} for the open operators, on every basis
// monomial s^j t^a of degree <= D - 4 and index <= N - 2, with the operators
// instantiated at caps (D, N).  No term can leave the caps inside that window.
CommutatorReport commutator_check(int n, int m, unsigned N, unsigned D);

// Coefficients of a fixed t/s monomial, keyed by u-exponent; sorted, no zeros.
struct UCoeff {
  int u = 0;
  Rational c;
  friend bool operator==(const UCoeff&, const UCoeff&) = default;
};
using UCoeffs = std::vector<UCoeff>;

void accumulate(UCoeffs& into, int u, const Rational& c);
UCoeffs multiply(const UCoeffs& a, const UCoeffs& b);
Rational total(const UCoeffs& a);
Rational coefficient_at(const UCoeffs& a, int u);

// prod_j (base_j + d_j)! / base_j!, the factor picked up by differentiating.
Integer derivative_factor(const TSMonomial& base, const TSMonomial& d);

// All t/s monomials dividing m, including 1 and m.
void all_divisors(const TSMonomial& m, std::vector<TSMonomial>& out);
std::vector<TSMonomial> divisors(const TSMonomial& m);

// Smallest positive descendent index of m, or 0 when there is none.  The
// solvers isolate t_b with L_{b-1}: every other term has lower genus or fewer
// insertions, and needed indices stay within the genus bound 3g - 2.
int pivot_index(const TSMonomial& m);

// A generating series known one coefficient at a time.  The lookup receives a
// t/s monomial with u-exponent zero.
using LazySeries = std::function<UCoeffs(const TSMonomial&)>;

LazySeries lazy_from_series(const FormalSeries& f);
LazySeries lazy_sum(LazySeries a, LazySeries b);

// Multisets of derivative blocks with the number of ways to split the
// derivative slots of d into them.
struct BlockPartition {
  Integer count;
  std::vector<TSMonomial> blocks;
};
const std::vector<BlockPartition>& block_partitions(const TSMonomial& d);

inline constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();

// Coefficients of Y_D = exp(-phi) d^D exp(phi), cached across calls, computed
// by Y_{D+x} = d_x Y_D + (d_x phi) Y_D.  phi must stay fixed for the lifetime
// of the cache.
class Conjugator {
 public:
  explicit Conjugator(LazySeries phi) : phi_(std::move(phi)) {}

  const UCoeffs& bell(const TSMonomial& d, const TSMonomial& m);
  // Coefficient of m in exp(-phi) op exp(phi), omitting term skip.
  UCoeffs apply(const DiffOperator& op, const TSMonomial& m, std::size_t skip = kNoSkip);
  const UCoeffs& phi(const TSMonomial& m);

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<TSMonomial, TSMonomial>& p) const {
      return p.first.hash() * 0x9e3779b97f4a7c15ull ^ p.second.hash();
    }
  };

  LazySeries phi_;
  std::unordered_map<TSMonomial, UCoeffs, TSMonomialHash> phi_cache_;
  std::unordered_map<std::pair<TSMonomial, TSMonomial>, UCoeffs, PairHash> memo_;
};


// Coefficient of the t/s monomial m in exp(-phi) op exp(phi), omitting the
// term with index skip.
UCoeffs conjugated_coefficient(const DiffOperator& op, const LazySeries& phi, const TSMonomial& m,
                               std::size_t skip = kNoSkip);

// exp(-phi) op exp(phi) as a truncated series; phi must share the caps.
FormalSeries conjugate_apply(const DiffOperator& op, const FormalSeries& phi);

}  // namespace disktau
