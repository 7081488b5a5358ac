#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "henonai/hyperbolicity.hpp"

using namespace henonai;

TEST_CASE("monodromy of the constant orbit at a=10, b=0.3") {
  const Params p = Params::from_ab(10.0, 0.3);
  const auto res = newton_continue(p, build_anchor_fullshift(SymbolWord::parse("+")));
  const MonodromyReport rep = monodromy(p, res);

  // Single transfer matrix [[-2 xhat/eps, -b], [1, 0]]; trace -2 xhat sqrt(a).
  const double tr = -2.0 * res.orbit[0] * std::sqrt(10.0);
  CHECK(rep.matrix.m00 == Catch::Approx(tr).margin(1e-12));
  CHECK(rep.matrix.m01 == Catch::Approx(-0.3).margin(1e-12));
  CHECK(rep.matrix.m10 == 1.0);
  CHECK(rep.matrix.m11 == 0.0);
  CHECK(rep.det_check == Catch::Approx(0.3).margin(1e-12));

  CHECK(rep.eigenvalues[0].real() == Catch::Approx(-5.0978).margin(5e-4));
  CHECK(rep.eigenvalues[1].real() == Catch::Approx(-0.0589).margin(5e-4));
  CHECK(rep.moduli[0] * rep.moduli[1] == Catch::Approx(0.3).margin(1e-10));
  CHECK(rep.quasi_hyperbolic);
  CHECK(rep.margin > 0.5);
}

TEST_CASE("monodromy determinant equals b^n") {
  const Params p = Params::from_ab(10.0, 0.3);
  for (const char* word : {"+-", "++-", "+--+", "++-+-"}) {
    const auto res = newton_continue(p, build_anchor_fullshift(SymbolWord::parse(word)));
    const MonodromyReport rep = monodromy(p, res);
    const int n = static_cast<int>(res.orbit.size());
    CHECK(rep.det_check ==
          Catch::Approx(std::pow(0.3, n)).epsilon(1e-8));
    CHECK(rep.quasi_hyperbolic);
  }
}

TEST_CASE("monodromy survives long orbits via log-scale rescaling") {
  const Params p = Params::from_ab(1e4, 0.3);
  // At a = 1e4 each transfer matrix has norm ~ 2 x sqrt(a) ~ 200, so a
  // 60-step product overflows a plain double product by a wide margin.
  SymbolWord w = SymbolWord::from_bits(0x2b992ddfa2UL, 60);
  const auto res = newton_continue(p, build_anchor_fullshift(w));
  REQUIRE(res.converged);
  const MonodromyReport rep = monodromy(p, res);
  CHECK(std::isfinite(rep.log_moduli[0]));
  CHECK(std::isfinite(rep.log_moduli[1]));
  CHECK(rep.log_moduli[0] > 60 * std::log(100.0));
  // log |l1 l2| = n log b even when the moduli themselves overflow.
  CHECK(rep.log_moduli[0] + rep.log_moduli[1] ==
        Catch::Approx(60 * std::log(0.3)).margin(1e-6));
  CHECK(rep.quasi_hyperbolic);
}

TEST_CASE("monodromy rejects bad inputs") {
  const Params p = Params::from_ab(10.0, 0.3);
  ContinuationResult bad;
  bad.orbit = {1.0};
  bad.converged = false;
  CHECK_THROWS_AS(monodromy(p, bad), NotConverged);
}

TEST_CASE("df_margin is positive on continued orbits, 2 at the AI limit") {
  const auto anchor = build_anchor_fullshift(SymbolWord::parse("+-+"));
  const auto limit = newton_continue(0.0, 0.0, anchor);
  CHECK(df_margin(Params::from_eps_r(1e-9, 0.0), limit) ==
        Catch::Approx(2.0).margin(1e-8));

  const Params p = Params::from_ab(10.0, 0.3);
  const auto res = newton_continue(p, anchor);
  CHECK(df_margin(p, res) > 1.0);
  CHECK(df_margin(p, res) == Catch::Approx(res.min_singular).margin(1e-10));
}

TEST_CASE("separation over continued word families") {
  const Params p = Params::from_ab(10.0, 0.3);
  std::vector<ContinuationResult> results;
  for (int bits = 0; bits < 16; ++bits)
    results.push_back(
        newton_continue(p, build_anchor_fullshift(SymbolWord::from_bits(bits, 4))));
  const SeparationReport rep = separation(results);
  CHECK(rep.count == 16);
  CHECK(rep.min_pairwise > 0.5);

  // A duplicated orbit collapses the minimum to zero.
  results.push_back(results.front());
  CHECK(separation(results).min_pairwise == 0.0);

  CHECK_THROWS_AS(separation({}), EmptyInput);
  std::vector<ContinuationResult> mixed = {results[0]};
  mixed.push_back(newton_continue(p, build_anchor_fullshift(SymbolWord::parse("+"))));
  CHECK_THROWS_AS(separation(mixed), InvalidParameter);
}

TEST_CASE("time reversal: swapping eps and r reverses the orbit") {
  const Params p = Params::from_eps_r(0.3, 0.1);
  const auto res = newton_continue(p, build_anchor_fullshift(SymbolWord::parse("++-")));
  CHECK(time_reversal_check(p, res, 1e-8));

  for (const char* word : {"+-", "+--+", "++-+--"}) {
    const auto r2 = newton_continue(p, build_anchor_fullshift(SymbolWord::parse(word)));
    CHECK(time_reversal_check(p, r2, 1e-8));
  }

  CHECK_THROWS_AS(time_reversal_check(Params::from_eps_r(0.3, 0.0), res),
                  InvalidParameter);
}
