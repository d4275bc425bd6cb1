#include <doctest.h>

#include "disktau/identity_suite.hpp"

using disktau::BinomialId;
using disktau::TrrVariant;
using disktau::TSMonomial;

TEST_SUITE("identity_suite") {
  TEST_CASE("string and dilaton") {
    const auto s = disktau::verify_open_string({0, 1}, 1);
    CHECK(s.pass);
    CHECK(s.lhs == 1);
    CHECK(s.rhs == 1);
    const auto d1 = disktau::verify_open_dilaton({1}, 3);
    CHECK(d1.pass);
    CHECK(d1.lhs == 2);
    const auto d2 = disktau::verify_open_dilaton({1, 1}, 3);
    CHECK(d2.pass);
    CHECK(d2.lhs == 6);
  }

  TEST_CASE("TRR") {
    const auto a = disktau::verify_trr(TrrVariant::I, 2, std::nullopt, {}, 5);
    CHECK(a.pass);
    CHECK(a.lhs == 8);
    const auto b = disktau::verify_trr(TrrVariant::I, 1, std::nullopt, {}, 3);
    CHECK(b.pass);
    CHECK(b.lhs == 2);
    int nonzero = 0;
    for (int k = 0; k <= 7; ++k) {
      const auto r = disktau::verify_trr(TrrVariant::II, 1, 1, {}, k);
      CHECK(r.pass);
      nonzero += r.lhs != 0 ? 1 : 0;
    }
    CHECK(nonzero > 0);
  }

  TEST_CASE("open KdV coefficient form") {
    const auto a = disktau::verify_open_kdv_coeff(1, {});
    CHECK(a.pass);
    CHECK(a.lhs == 2);
    const auto b = disktau::verify_open_kdv_coeff(2, {});
    CHECK(b.pass);
    CHECK(b.lhs == 24);
    CHECK(disktau::verify_open_kdv_coeff(1, {1}).pass);
  }

  TEST_CASE("Virasoro genus 0") {
    CHECK(disktau::verify_virasoro_genus0(-1, 6, 6).pass);
    CHECK(disktau::verify_virasoro_genus0(1, 8, 8).pass);
    CHECK(disktau::verify_virasoro_genus0(2, 8, 8).pass);
    CHECK(disktau::virasoro_genus0_coefficient(0, {1}, 3) == 0);
  }

  TEST_CASE("binomial identities") {
    const auto xxz = disktau::verify_binomial(BinomialId::xxz, 1, {1});
    CHECK(xxz.pass);
    CHECK(xxz.lhs == 3);
    for (int n = 1; n <= 4; ++n) {
      const auto r = disktau::verify_binomial(BinomialId::xxzz, n, {});
      CHECK(r.pass);
      CHECK(r.lhs == 2 * n);
    }
    const auto xz2 = disktau::verify_binomial(BinomialId::xz2, 0, {});
    CHECK(xz2.pass);
    CHECK(xz2.lhs == 630);
    CHECK(disktau::parse_binomial_id("vxxz2") == BinomialId::vxxz2);
    CHECK_FALSE(disktau::parse_binomial_id("xyz").has_value());
    CHECK(disktau::sweep_binomial(BinomialId::vxxz2, 4, 3, 2).pass());
  }

  TEST_CASE("sweeps") {
    CHECK(disktau::sweep_open_string(8).pass());
    CHECK(disktau::sweep_open_dilaton(8).pass());
    CHECK(disktau::sweep_trr(TrrVariant::I, 8).pass());
    CHECK(disktau::sweep_trr(TrrVariant::II, 8).pass());
    CHECK(disktau::sweep_open_kdv_coeff(8).pass());
  }

  TEST_CASE("TRR coefficient form and series form agree term for term") {
    for (int n = 1; n <= 3; ++n) {
      CHECK(disktau::trr_series_report(TrrVariant::I, n, 0, 6, 4).pass());
      disktau::for_each_monomial(5, 3, false, [&](const TSMonomial& t) {
        const std::vector<int> a = t.insertions();
        for (int k = 1; k <= 5; ++k) {
          const TSMonomial at = t.times_s(static_cast<unsigned>(k - 1));
          const auto r = disktau::verify_trr(TrrVariant::I, n, std::nullopt, a, k);
          const disktau::Rational series = disktau::trr_series_rhs(TrrVariant::I, n, 0, at) *
                                           disktau::Rational(at.symmetry_factor());
          CHECK(r.rhs == series);
        }
      });
    }
  }

  TEST_CASE("report formats") {
    const auto r = disktau::verify_open_dilaton({1}, 3);
    CHECK(disktau::report_csv_header() == "identity,params,lhs,rhs,pass");
    CHECK(disktau::to_csv(r).find(",2,2,PASS") != std::string::npos);
    CHECK(disktau::to_text(r).find("PASS") != std::string::npos);
  }
}
