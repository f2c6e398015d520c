#include "derivreg/kernels.hpp"
#include "derivreg/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace derivreg;

TEST_CASE("order-2 interior kernel is (3/4)(1 - t^2)")
{
  const KernelSpec k = make_interior_kernel(2);
  for (double t : { -1.0, -0.7, 0.0, 0.25, 0.9, 1.0 }) {
    CHECK(k(t) == doctest::Approx(0.75 * (1 - t * t)).epsilon(1e-14));
  }
  CHECK(k(1.5) == 0.0);
  CHECK(kernel_moment(k, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(kernel_moment(k, 1)) < 1e-15);
  // ∫ (3/4)(1 − t²) t² dt = (3/4)(2/3 − 2/5) = 1/5.
  CHECK(kernel_moment(k, 2) == doctest::Approx(0.2).epsilon(1e-13));
  // ∫ ((3/4)(1 − t²))² dt = 3/5.
  CHECK(kernel_roughness(k) == doctest::Approx(0.6).epsilon(1e-13));
}

TEST_CASE("moment conditions for every built order")
{
  auto check = [](const KernelSpec& s) {
    for (int j = 0; j < s.order(); ++j) {
      CHECK(std::abs(kernel_moment(s, j) - (j == 0 ? 1.0 : 0.0)) <= 1e-10);
    }
    CHECK(std::abs(s(s.lower())) <= 1e-12);
    CHECK(std::abs(s(s.upper())) <= 1e-12);
    CHECK(std::isfinite(s.sup_abs()));
  };
  for (int d : { 2, 4, 6, 8 }) {
    check(make_interior_kernel(d));
  }
  for (int d = 1; d <= 6; ++d) {
    check(make_edge_kernel(d, EdgeSide::left));
    check(make_edge_kernel(d, EdgeSide::right));
  }
  CHECK(std::abs(kernel_moment(make_interior_kernel(4), 4)) > 1e-3);
}

TEST_CASE("odd interior order rounds up")
{
  CHECK(make_interior_kernel(3).order() == 4);
  CHECK_THROWS_AS(make_interior_kernel(1), std::invalid_argument);
}

TEST_CASE("order-2 left edge kernel matches the hand-solved system")
{
  // q(t) = a + b t with weight t(1 − t): moments m_j = 1/(j+2) − 1/(j+3) give
  // a m0 + b m1 = 1 and a m1 + b m2 = 0, so a = 36 and b = −60.
  const KernelSpec k = make_edge_kernel(2, EdgeSide::left);
  CHECK(k.lower() == 0.0);
  CHECK(k.upper() == 1.0);
  for (double t : { 0.0, 0.1, 0.5, 0.8, 1.0 }) {
    CHECK(k(t) == doctest::Approx((36 - 60 * t) * t * (1 - t)).epsilon(1e-12));
  }
  CHECK(k(-0.1) == 0.0);
}

TEST_CASE("right edge kernel mirrors the left one")
{
  for (int d = 1; d <= 5; ++d) {
    const KernelSpec l = make_edge_kernel(d, EdgeSide::left);
    const KernelSpec r = make_edge_kernel(d, EdgeSide::right);
    for (double t = -1.0; t <= 0.0; t += 0.05) {
      CHECK(r(t) == doctest::Approx(l(-t)).epsilon(1e-13));
    }
  }
}

TEST_CASE("product kernel selection and evaluation")
{
  const ProductKernel pk(2);
  const std::vector<double> mid{ 0.5, 0.5 };
  const std::vector<double> zero{ 0.0, 0.0 };
  CHECK(pk.eval(mid, zero, 0.1) == doctest::Approx(0.5625));
  const std::vector<double> far{ 1.2, 0.0 };
  CHECK(pk.eval(mid, far, 0.1) == 0.0);

  CHECK(pk.select(0.1, 0.1) == KernelSupport::interior);
  CHECK(pk.select(0.9, 0.1) == KernelSupport::interior);
  CHECK(pk.select(0.05, 0.1) == KernelSupport::left_edge);
  CHECK(pk.select(0.95, 0.1) == KernelSupport::right_edge);
  CHECK(pk.select(0.3, 0.8) == KernelSupport::left_edge);
  CHECK(pk.select(0.7, 0.8) == KernelSupport::right_edge);
  CHECK(ProductKernel(2, false).select(0.0, 0.1) == KernelSupport::interior);

  // Product equals independent per-coordinate calls.
  const KernelSpec in = make_interior_kernel(4);
  const KernelSpec le = make_edge_kernel(4, EdgeSide::left);
  const ProductKernel p4(4);
  const std::vector<double> x{ 0.02, 0.5 };
  const std::vector<double> u{ 0.3, -0.4 };
  CHECK(p4.eval(x, u, 0.1) == doctest::Approx(le(0.3) * in(-0.4)).epsilon(1e-14));

  // At a face, ∫ over the edge coordinate carries the same unit mass as an
  // interior coordinate.
  const Quadrature q(16);
  const std::vector<double> face{ 0.0, 0.5 };
  const double mass = q.integrate(
    [&](double t) {
      const std::vector<double> uu{ t, 0.0 };
      return pk.eval(face, uu, 0.1);
    },
    0.0, 1.0);
  const double interior_mass = q.integrate(
    [&](double t) {
      const std::vector<double> uu{ t, 0.0 };
      return pk.eval(mid, uu, 0.1);
    },
    -1.0, 1.0);
  CHECK(mass == doctest::Approx(interior_mass).epsilon(1e-13));
  CHECK(mass == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("bandwidth rules and order gate")
{
  const auto plan = smoothing_bandwidth(2, 1, 0.5);
  CHECK(plan.exponent_denominator == 5);
  CHECK(plan(32) == doctest::Approx(0.25));
  CHECK(smallest_even_above(1.5) == 2);
  CHECK(smallest_even_above(2.0) == 4);
  CHECK(smallest_even_above(0.0) == 2);
  CHECK_NOTHROW(check_order_conditions(2, 4, 2, 1));
  CHECK_THROWS_AS(check_order_conditions(2, 4, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(check_order_conditions(4, 2, 2, 2), std::invalid_argument);
  // Default H sits below both rates, so H/h → 0.
  const double H = density_bandwidth(10000, 2, 4, 2, 1);
  CHECK(H <= std::pow(10000.0, -1.0 / 8) * std::pow(10000.0, -0.01) + 1e-15);
  CHECK(H < std::pow(10000.0, -1.0 / 5));
}
