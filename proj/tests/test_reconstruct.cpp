#include <doctest.h>

#include <cmath>

#include "omdlab/reconstruct.hpp"

using namespace omdlab;

namespace {

ScalarMap quarter_square_map(double x_lo, double x_hi, double c = 0.0) {
  const auto q = Reparameterization::quarter_square();
  return scalar_map(q, q.inverse1(x_lo), q.inverse1(x_hi), c);
}

}  // namespace

TEST_CASE("diffeomorphism check") {
  const auto qs = scalar_map(Reparameterization::quarter_square(), 0.1, 2.0);
  const DiffeoReport a = check_diffeomorphism(qs, 101);
  CHECK(a.pass);
  CHECK(a.sign == 1);
  CHECK(a.min_abs_slope == doctest::Approx(0.05));

  const auto ex = scalar_map(Reparameterization::exponential(), -2.0, 0.0);
  const DiffeoReport b = check_diffeomorphism(ex, 101);
  CHECK(b.pass);
  CHECK(b.min_abs_slope == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));

  ScalarMap signed_square;  // u^2 on [-1, 1]: slope changes sign at 0
  signed_square.q = [](double u) { return u * u; };
  signed_square.dq = [](double u) { return 2.0 * u; };
  signed_square.d2q = [](double) { return 2.0; };
  signed_square.lower = -1.0;
  signed_square.upper = 1.0;
  signed_square.name = "signed-square";
  const DiffeoReport c = check_diffeomorphism(signed_square, 101);
  CHECK_FALSE(c.pass);
  CHECK(c.sign == 0);

  CHECK_THROWS_AS(check_diffeomorphism(qs, 1), invalid_input);
}

TEST_CASE("variation-of-constants link values") {
  // q = u^2/4 from C = 0.1: analytic link value u log(u/C).
  auto map = scalar_map(Reparameterization::quarter_square(), 0.1, 2.0);
  const ReconstructedLink link = reconstruct_link(map, 1e-3);
  CHECK(link.evaluate(1.0) == doctest::Approx(std::log(10.0)).epsilon(1e-6));
  CHECK(link.evaluate(1.0) == doctest::Approx(2.302585).epsilon(1e-6));
  for (double u : {0.15, 0.5, 1.3, 1.9}) {
    CHECK(link.evaluate(u) == doctest::Approx(u * std::log(u / 0.1)).epsilon(1e-8));
  }

  const auto id = scalar_map(Reparameterization::identity(), 0.0, 1.0);
  const ReconstructedLink ilink = reconstruct_link(id, 1e-3);
  CHECK(ilink.evaluate(0.7) == doctest::Approx(0.7).epsilon(1e-10));

  // Shifting the integration constant adds exactly delta * q'(u).
  auto shifted = scalar_map(Reparameterization::quarter_square(), 0.1, 2.0, 0.25);
  const ReconstructedLink slink = reconstruct_link(shifted, 1e-3);
  for (double u : {0.3, 0.9, 1.7}) {
    CHECK(slink.evaluate(u) - link.evaluate(u) == doctest::Approx(0.25 * 0.5 * u).epsilon(1e-9));
  }
}

TEST_CASE("ode residual on built-in maps") {
  struct Case {
    ScalarMap map;
  };
  std::vector<ScalarMap> maps = {
      scalar_map(Reparameterization::quarter_square(), 0.2, 2.0),
      scalar_map(Reparameterization::exponential(), std::log(0.1), 0.0),
      scalar_map(Reparameterization::power(0.5), 0.2, 1.2),
      scalar_map(Reparameterization::identity(), 0.0, 1.0),
  };
  for (const auto& map : maps) {
    const ReconstructedLink link = reconstruct_link(map, 1e-3);
    double worst = 0.0;
    for (size_t k = 1; k + 1 < link.grid.size(); ++k) {
      worst = std::max(worst, ode_residual(map, link, link.grid[k]));
    }
    INFO(map.name, " residual ", worst);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("ode residual is invariant in the integration constant") {
  for (double c : {-1.0, 0.0, 0.5, 2.0}) {
    const auto map = scalar_map(Reparameterization::quarter_square(), 0.2, 2.0, c);
    const ReconstructedLink link = reconstruct_link(map, 1e-3);
    for (double u : {0.4, 1.0, 1.6}) {
      CHECK(ode_residual(map, link, u) <= 1e-9);
    }
  }
}

TEST_CASE("corrupted link is caught") {
  const auto map = scalar_map(Reparameterization::quarter_square(), 0.2, 2.0);
  ReconstructedLink link = reconstruct_link(map, 1e-3);
  for (size_t i = 0; i < link.grid.size(); ++i) link.values[i] += link.grid[i] * link.grid[i];
  link.refit();
  CHECK(ode_residual(map, link, 1.0) > 0.1);
}

TEST_CASE("reconstructed hessian identities") {
  const auto qs = quarter_square_map(0.01, 1.0);
  CHECK(reconstructed_hessian(qs, 0.25) == doctest::Approx(4.0).epsilon(1e-12));

  const auto ex = scalar_map(Reparameterization::exponential(), std::log(0.1), 0.0);
  CHECK(reconstructed_hessian(ex, 0.5) == doctest::Approx(4.0).epsilon(1e-12));

  const auto id = scalar_map(Reparameterization::identity(), 0.0, 1.0);
  CHECK(reconstructed_hessian(id, 0.42) == doctest::Approx(1.0));

  CHECK_THROWS_AS(reconstructed_hessian(qs, 2.0), invalid_input);
}

TEST_CASE("certification against known regularizers") {
  SUBCASE("quarter-square vs negative entropy") {
    const auto map = quarter_square_map(0.01, 1.0);
    const Regularizer known = Regularizer::neg_entropy();
    const ReconstructionReport report = certify_reconstruction(map, &known, 1e-3);
    CHECK(report.max_ode_residual <= 1e-6);
    CHECK(report.max_hessian_mismatch <= 1e-8);
    CHECK(report.strong_convexity_floor == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("exponential vs log barrier") {
    const auto map = scalar_map(Reparameterization::exponential(), std::log(0.1), 0.0);
    const Regularizer known = Regularizer::log_barrier();
    const ReconstructionReport report = certify_reconstruction(map, &known, 1e-3);
    CHECK(report.max_ode_residual <= 1e-6);
    CHECK(report.max_hessian_mismatch <= 1e-8);
    CHECK(report.strong_convexity_floor == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("power vs tempered") {
    const auto q = Reparameterization::power(0.5);
    const auto map = scalar_map(q, q.inverse1(0.05), q.inverse1(1.0));
    const Regularizer known = Regularizer::tempered(0.5);
    const ReconstructionReport report = certify_reconstruction(map, &known, 1e-3);
    CHECK(report.max_ode_residual <= 1e-6);
    CHECK(report.max_hessian_mismatch <= 1e-8);
    CHECK(report.strong_convexity_floor == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("identity vs euclidean") {
    const auto map = scalar_map(Reparameterization::identity(), 0.0, 1.0);
    const Regularizer known = Regularizer::euclidean();
    const ReconstructionReport report = certify_reconstruction(map, &known, 1e-3);
    CHECK(report.max_ode_residual <= 1e-9);
    CHECK(report.max_hessian_mismatch <= 1e-12);
    CHECK(report.strong_convexity_floor == doctest::Approx(1.0));
  }
}

TEST_CASE("strong convexity floor is positive for admissible maps") {
  std::vector<ScalarMap> maps = {
      quarter_square_map(0.01, 1.0),
      scalar_map(Reparameterization::exponential(), std::log(0.05), 0.0),
      scalar_map(Reparameterization::power(0.75), 0.1, 1.1),
  };
  for (const auto& map : maps) {
    const ReconstructionReport report = certify_reconstruction(map, nullptr, 1e-3);
    CHECK(report.strong_convexity_floor > 0.0);
  }
}
