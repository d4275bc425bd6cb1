#pragma once

#include "disktau/closed_theory.hpp"
#include "disktau/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace disktau {

struct VerificationReport {
  std::string identity;
  std::string params;
  Rational lhs;
  Rational rhs;
  bool pass = false;
  std::string detail;
};

struct SweepResult {
  std::string identity;
  std::vector<VerificationReport> reports;
  std::size_t failures() const;
  bool pass() const { return failures() == 0; }
};

// <tau_0 tau_a sigma^k>_g = sum_j <tau_{a_j - 1} ...>_g.  a lists every
// insertion and must contain a 0; the genus follows from the dimension.
VerificationReport verify_open_string(const std::vector<int>& a, int k);
// <tau_1 tau_a sigma^k>_g = (g - 1 + k + l) <tau_a sigma^k>_g with a
// containing the removed 1.
VerificationReport verify_open_dilaton(const std::vector<int>& a, int k);

enum class TrrVariant { I, II };

// Genus-0 topological recursion at the coefficient of prod t_a s^{k-1}
// (variant I) or prod t_a s^k (variant II).  Variant I carries C(k-1, j),
// variant II carries C(k, j).
VerificationReport verify_trr(TrrVariant variant, int n, std::optional<int> m,
                              const std::vector<int>& a, int k);

// (2n-1) <tau_n tau_a sigma^k>_0
//   = 2 sum_{S,T} <tau_{n-1} tau_S sigma^{k_S}>_0 C(k-1, k_S-1) <tau_T sigma^{k-k_S+1}>_0
// with k = 2n + 2A - 2l + 1, k_S = 2n + 2A_S - 2l_S - 1 and all a_i >= 1.
VerificationReport verify_open_kdv_coeff(int n, const std::vector<int>& a);

// The u^{-1} coefficient of exp(-Phi) OL_n exp(Phi), Phi = u^{-2} F_0^c +
// u^{-1} F_0^o, vanishes at every monomial of degree <= D and index <= N.
// By homogeneity only monomials with k = 2 sum a - 2l + 2n + 3 can carry
// u^{-1}; the check visits exactly those.
VerificationReport verify_virasoro_genus0(int n, unsigned D, unsigned N);
// The same coefficient at a single monomial.
Rational virasoro_genus0_coefficient(int n, const std::vector<int>& a, int k);

enum class BinomialId { xxz, xxzz, vxxz2, xz2 };

std::optional<BinomialId> parse_binomial_id(const std::string& name);
std::string to_string(BinomialId id);
// n is ignored by vxxz2 and xz2.  All a_i >= 1.
VerificationReport verify_binomial(BinomialId id, int n, const std::vector<int>& a);

// Genus-0 sweeps over every valid key with l + k <= max_degree.
SweepResult sweep_open_string(int max_degree);
SweepResult sweep_open_dilaton(int max_degree);
SweepResult sweep_trr(TrrVariant variant, int max_degree);
SweepResult sweep_open_kdv_coeff(int max_degree);
// Every n in 1..max_n and every multiset a with a_i >= 1, |a| <= max_l,
// sum a <= max_A.
SweepResult sweep_binomial(BinomialId id, int max_A, int max_l, int max_n);

// Series form of TRR I: coefficientwise comparison of
// <<tau_n sigma>>^o = <<tau_{n-1} tau_0>>^c <<tau_0 sigma>>^o + <<tau_{n-1}>>^o <<sigma^2>>^o
// on genus-0 potentials for monomials of degree <= D and index <= N.
SeriesCheck trr_series_report(TrrVariant variant, int n, int m, unsigned D, unsigned N);
// Right side of the series form at one monomial, without u.
Rational trr_series_rhs(TrrVariant variant, int n, int m, const TSMonomial& at);

std::string report_csv_header();
std::string to_csv(const VerificationReport& r);
std::string to_text(const VerificationReport& r);

}  // namespace disktau
