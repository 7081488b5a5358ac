#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "henonai/params.hpp"

using namespace henonai;

TEST_CASE("Params round-trips between (a,b) and (eps,r)") {
  const Params p = Params::from_ab(10.0, 0.3);
  CHECK(p.eps() == Catch::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-15));
  CHECK(p.r() == Catch::Approx(0.3 / std::sqrt(10.0)).epsilon(1e-15));

  const Params q = Params::from_eps_r(p.eps(), p.r());
  CHECK(q.a() == Catch::Approx(10.0).epsilon(1e-14));
  CHECK(q.b() == Catch::Approx(0.3).epsilon(1e-14));

  CHECK_THROWS_AS(Params::from_ab(0.0, 0.3), InvalidParameter);
  CHECK_THROWS_AS(Params::from_ab(-1.0, 0.3), InvalidParameter);
  CHECK_THROWS_AS(Params::from_eps_r(0.0, 0.1), InvalidParameter);
}

TEST_CASE("henon_step formula") {
  const Params unit = Params::from_ab(1.0, 0.0);
  const PlanarPoint img = henon_step(unit, {0.0, 0.0});
  CHECK(img.x == 1.0);
  CHECK(img.y == 0.0);

  const Params p = Params::from_ab(10.0, 0.3);
  const PlanarPoint img2 = henon_step(p, {1.0, 1.0});
  CHECK(img2.x == Catch::Approx(-0.3).margin(1e-14));
  CHECK(img2.y == 1.0);

  // Constant-sequence fixed point, from the quadratic closed form.
  const double s = p.eps() + p.r();
  const double xhat = 0.5 * (-s + std::sqrt(s * s + 4.0));
  CHECK(xhat == Catch::Approx(0.81536).margin(5e-6));
  const PlanarPoint fix = henon_step(p, {xhat, xhat});
  CHECK(fix.x == Catch::Approx(xhat).margin(1e-13));
  CHECK(fix.y == xhat);
}

TEST_CASE("henon_inverse_step inverts the forward map") {
  const Params p = Params::from_ab(10.0, 0.3);
  const PlanarPoint pt{0.2, -0.4};
  const PlanarPoint back = henon_inverse_step(p, henon_step(p, pt));
  CHECK(back.x == Catch::Approx(pt.x).margin(1e-12));
  CHECK(back.y == Catch::Approx(pt.y).margin(1e-12));

  const PlanarPoint inv = henon_inverse_step(p, {-0.3, 1.0});
  CHECK(inv.x == Catch::Approx(1.0).margin(1e-12));
  CHECK(inv.y == Catch::Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(henon_inverse_step(Params::from_ab(10.0, 0.0), pt), ZeroJacobian);
}

TEST_CASE("inverse o forward is the identity on the DN box") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ua(0.5, 50.0);
  std::uniform_real_distribution<double> ub(-2.0, 2.0);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    double b = ub(rng);
    if (std::abs(b) < 1e-6) b = 1e-6;
    const Params p = Params::from_ab(ua(rng), b);
    const double box = dn_bound(p);
    const PlanarPoint pt{ux(rng) * box, ux(rng) * box};
    const PlanarPoint back = henon_inverse_step(p, henon_step(p, pt));
    CHECK(std::abs(back.x - pt.x) <= 1e-10);
    CHECK(std::abs(back.y - pt.y) <= 1e-10);
  }
}

TEST_CASE("henon_jacobian entries and determinant") {
  const Params p = Params::from_ab(10.0, 0.3);
  const Mat2 J0 = henon_jacobian(p, {0.0, 5.0});
  CHECK(J0.m00 == 0.0);
  CHECK(J0.m01 == -0.3);
  CHECK(J0.m10 == 1.0);
  CHECK(J0.m11 == 0.0);

  const Mat2 J = henon_jacobian(p, {0.81536, 0.0});
  CHECK(J.m00 == Catch::Approx(-5.1566).margin(5e-4));
  CHECK(J.det() == Catch::Approx(0.3).epsilon(1e-13));

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const Params q = Params::from_ab(0.1 + std::abs(u(rng)) * 10, u(rng));
    const Mat2 m = henon_jacobian(q, {u(rng), u(rng)});
    CHECK(std::abs(m.det() - q.b()) <= 1e-13 * std::max(1.0, std::abs(q.b())));
  }
}

TEST_CASE("dn_bound formula") {
  CHECK(dn_bound_eps_r(0.0, 0.0) == 1.0);
  CHECK(dn_bound(Params::from_ab(10.0, 0.3)) == Catch::Approx(1.22645).margin(5e-6));

  // Monotone in |r| at fixed eps.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    const double eps = u(rng), r1 = u(rng) - 1.0;
    const double r2 = r1 * 1.5;
    CHECK(dn_bound_eps_r(eps, r2) >= dn_bound_eps_r(eps, r1) - 1e-15);
  }
}

TEST_CASE("region flags match the analytic bounds") {
  const RegionFlags f10 = region_flags(Params::from_ab(10.0, 0.3));
  CHECK(f10.improved_horseshoe);  // 2 * 1.3^2 = 3.38 < 10
  CHECK(f10.sterling_meiss);      // (5+2 sqrt 5) * 1.69 / 4 = 4.00 <= 10
  CHECK(f10.dn_radius == dn_bound(Params::from_ab(10.0, 0.3)));

  const RegionFlags f3 = region_flags(Params::from_ab(3.0, 0.3));
  CHECK_FALSE(f3.improved_horseshoe);
  CHECK_FALSE(f3.sterling_meiss);

  // Boundary is strict: just past eps + |r| = 1/sqrt(2) is outside.
  const double eps = 0.5, r = 1.0 / std::sqrt(2.0) - 0.5 + 1e-9;
  const RegionFlags fb = region_flags(Params::from_eps_r(eps, r));
  CHECK_FALSE(fb.improved_horseshoe);
}

TEST_CASE("improved bound is equivalent to eps + |r| < 1/sqrt(2)") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> ua(1e-3, 100.0);
  std::uniform_real_distribution<double> ub(-10.0, 10.0);
  for (int k = 0; k < 100000; ++k) {
    const Params p = Params::from_ab(ua(rng), ub(rng));
    const bool lhs = p.a() > 2.0 * (1.0 + std::abs(p.b())) * (1.0 + std::abs(p.b()));
    const bool rhs = p.eps() + std::abs(p.r()) < 1.0 / std::sqrt(2.0);
    CHECK(lhs == rhs);
  }
}
