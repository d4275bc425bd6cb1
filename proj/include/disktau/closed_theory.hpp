#pragma once

#include "disktau/operators.hpp"
#include "disktau/rational.hpp"
#include "disktau/series.hpp"

#include <string>
#include <vector>

namespace disktau {

// (l-3)! / prod a_i! when sum a_i = l - 3 and l >= 3, else 0.
Rational closed_genus0(const std::vector<int>& a);

// <tau_{a_1} ... tau_{a_l}>_g, solved from L_n exp(F^c) = 0 and memoized.
// Zero unless sum a_i = 3g - 3 + l and 2g - 2 + l > 0.
Rational closed_bracket(int g, const std::vector<int>& a);

// The bracket of a sorted multiset at its dimension-determined genus.
Rational closed_bracket_auto(const std::vector<int>& a);

// F^c as a lazily evaluated series: u^{2g-2} <tau_a>_g / prod n_i!.
LazySeries closed_potential();

FormalSeries build_Fc(unsigned D, unsigned N);

struct IdentityFailure {
  TSMonomial at;
  UCoeffs lhs;
  UCoeffs rhs;
};

struct SeriesCheck {
  std::string name;
  std::size_t monomials_checked = 0;
  std::vector<IdentityFailure> failures;
  bool pass() const { return failures.empty(); }
};

// (2n+1) u^{-2} <<tau_n tau_0^2>> = <<tau_{n-1} tau_0>><<tau_0^3>>
//   + 2 <<tau_{n-1} tau_0^2>><<tau_0^2>> + 1/4 <<tau_{n-1} tau_0^4>>
// compared coefficientwise at every t-monomial of degree <= D and index <= N.
SeriesCheck closed_kdv_report(int n, unsigned D, unsigned N);
bool check_closed_kdv(int n, unsigned D, unsigned N);

// Both sides of the closed KdV identity at a single monomial.
std::pair<UCoeffs, UCoeffs> closed_kdv_sides(int n, const TSMonomial& at);

// exp(-F^c) L_n exp(F^c) vanishes at every t-monomial within the caps.
SeriesCheck closed_virasoro_report(int n, unsigned D, unsigned N);

// Coefficient of the t/s monomial m in the double bracket <<X>> of a lazy
// series, where X is a derivative multi-index.
UCoeffs double_bracket(const LazySeries& f, const TSMonomial& x, const TSMonomial& m);
// Coefficient of m in <<X>><<Y>>.
UCoeffs double_bracket_product(const LazySeries& f, const TSMonomial& x, const LazySeries& g,
                               const TSMonomial& y, const TSMonomial& m);

}  // namespace disktau
