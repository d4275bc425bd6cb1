#pragma once

#include "disktau/bracket.hpp"
#include "disktau/closed_theory.hpp"
#include "disktau/operators.hpp"
#include "disktau/rational.hpp"
#include "disktau/series.hpp"

#include <string>
#include <vector>

namespace disktau {

// (sum 2a_i - l + 1)! / prod (2a_i - 1)!!, the genus-0 value at
// k = 2 sum a_i + 3 - 2l.  Every a_i must be at least 1.
Rational open_genus0_closed_form(const std::vector<int>& a);

// Genus-0 open bracket: tau_0 insertions are removed by the string equation
// down to <tau_0 sigma> = 1 or the closed form.
Rational open_genus0_bracket(const std::vector<int>& a, int k);

// <tau_a sigma^k>_g.  Genus 0 uses open_genus0_bracket; higher genus uses the
// open Virasoro solver.  Zero on dimension or stability failure.
Rational open_bracket(int g, const std::vector<int>& a, int k);

// The open Virasoro solver at the dimension-determined genus, all genera.
Rational open_bracket_virasoro(const std::vector<int>& a, int k);
// The open KdV route at the dimension-determined genus, all genera.
Rational open_bracket_kdv(const std::vector<int>& a, int k);

// "proved" for closed brackets, genus-0 open brackets and <tau_1>_1;
// otherwise the conjectural label.
std::string bracket_status(Sector sector, int g, const std::vector<int>& a, int k);

// F^o from the Virasoro solver: u^{g-1} <tau_a sigma^k>_g / (prod n_i! k!).
LazySeries open_potential();
LazySeries open_potential_kdv();
// u^{-2} F_0^c and u^{-1} F_0^o from the closed-form evaluators.
LazySeries closed_genus0_potential();
LazySeries open_genus0_potential();

FormalSeries build_Fo(unsigned D, unsigned N);
FormalSeries build_Fo_via_kdv(unsigned D, unsigned N);
// exp(F^c + F^o) truncated to the caps.
FormalSeries build_Z(unsigned D, unsigned N);

// dF^o/dt_0 = sum t_{i+1} dF^o/dt_i + u^{-1} s
SeriesCheck open_string_report(unsigned D, unsigned N);
// dF^o/dt_1 = sum (2i+1)/3 t_i dF^o/dt_i + 2/3 s dF^o/ds + 1/2
SeriesCheck open_dilaton_report(unsigned D, unsigned N);
// exp(-F^c - F^o) OL_n exp(F^c + F^o) vanishes at every monomial within caps.
SeriesCheck open_virasoro_report(int n, unsigned D, unsigned N);

}  // namespace disktau
