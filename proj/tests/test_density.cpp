#include "derivreg/density.hpp"

#include "reference.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace derivreg;

namespace {

struct Moments
{
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;
};

Moments
moments(const std::vector<double>& v)
{
  Moments m;
  const double n = static_cast<double>(v.size());
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  for (double x : v) {
    m.var += (x - m.mean) * (x - m.mean);
  }
  m.var /= n - 1.0;
  m.se = std::sqrt(m.var / n);
  return m;
}

//! loo(0, x) over independent uniform samples of size n.
std::vector<double>
loo_draws(std::size_t reps, std::size_t n, int k, double H, int order, double x0,
          bool edge, std::uint64_t seed)
{
  std::vector<double> out(reps);
  const std::vector<double> x(k, x0);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng = split_stream(seed, { r });
    const DataSet d = ref::uniform_data(rng, DerivIndex(k, 0), n,
                                        [](std::span<const double>) { return 0.0; });
    out[r] = DensityEstimator(d, order, H, 0.05, edge).loo(0, x);
  }
  return out;
}

} // namespace

TEST_CASE("two-point closed forms")
{
  const DataSet far(DerivIndex(1, 0), { 0.1, 0.9 }, { 0.0, 0.0 });
  const DensityEstimator e(far, 2, 0.2);
  const std::vector<double> x{ 0.1 };
  CHECK(e.loo(0, x) == 0.0);

  const DataSet same(DerivIndex(1, 0), { 0.5, 0.5 }, { 0.0, 0.0 });
  const DensityEstimator s(same, 2, 0.2);
  const std::vector<double> mid{ 0.5 };
  CHECK(s.loo(0, mid) == doctest::Approx(0.75 / 0.2).epsilon(1e-14));
  CHECK_THROWS_AS(DensityEstimator(DataSet(DerivIndex(1, 0), { 0.5 }, { 1.0 }), 2, 0.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(DensityEstimator(same, 1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(DensityEstimator(same, 2, 1.0), std::invalid_argument);
}

TEST_CASE("density floor")
{
  const std::vector<double> mid{ 0.5 };
  // Order-4 kernel is negative near |t| = 0.8.
  const DataSet neg(DerivIndex(1, 0), { 0.5, 0.5 + 0.8 * 0.3 }, { 0.0, 0.0 });
  const DensityEstimator e(neg, 4, 0.3, 0.05);
  CHECK(e.loo(0, mid) < 0.0);
  CHECK(e.floored(0, mid) == 0.05);

  const DataSet pass(DerivIndex(1, 0), { 0.5, 0.5 }, { 0.0, 0.0 });
  // H > 0.5 puts x in the edge zone, so the interior kernel is forced.
  const DensityEstimator p(pass, 2, 0.75 / 1.3, 0.05, false);
  CHECK(p.floored(0, mid) == doctest::Approx(1.3));

  // Just under the floor.
  const double u = std::sqrt(1.0 - 0.049999 * 0.5 / 0.75);
  const DataSet edge(DerivIndex(1, 0), { 0.5, 0.5 + 0.5 * u }, { 0.0, 0.0 });
  const DensityEstimator b(edge, 2, 0.5, 0.05);
  CHECK(b.loo(0, mid) < 0.05);
  CHECK(b.loo(0, mid) == doctest::Approx(0.049999).epsilon(1e-9));
  CHECK(b.floored(0, mid) == 0.05);
}

TEST_CASE("density ignores responses and matches the double loop")
{
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    RngStream rng = split_stream(11, { inst });
    const int k = 1 + static_cast<int>(inst % 3);
    const std::size_t n = 20 + 4 * inst;
    const DataSet d = ref::uniform_data(rng, DerivIndex(k, 0), n,
                                        [](std::span<const double> x) { return x[0]; }, 1.0);
    const double H = 0.15 + 0.02 * (inst % 5);
    const int order = smallest_even_above(k);
    const DensityEstimator e(d, order, H);
    std::vector<double> y2(n, 3.0);
    const DensityEstimator e2(d.with_responses(y2), order, H);
    for (std::size_t i = 0; i < n; i += 3) {
      const double got = e.loo(i, d.point(i));
      CHECK(got == e2.loo(i, d.point(i)));
      CHECK(std::abs(got - ref::loo_density(d, i, d.point(i), H, order)) <= 1e-12);
    }
  }
}

TEST_CASE("unbiased for a uniform design, including at a face")
{
  const auto interior = moments(loo_draws(10000, 100, 1, 0.2, 2, 0.5, true, 1));
  CHECK(std::abs(interior.mean - 1.0) <= 3 * interior.se);

  const auto face = moments(loo_draws(10000, 100, 1, 0.2, 2, 0.0, true, 2));
  CHECK(std::abs(face.mean - 1.0) <= 3 * face.se);

  // Without edge kernels only half the window lies inside the cube.
  const auto plain = moments(loo_draws(4000, 100, 1, 0.2, 2, 0.0, false, 3));
  CHECK(std::abs(plain.mean - 0.5) <= 3 * plain.se);

  const auto two_d = moments(loo_draws(4000, 200, 2, 0.25, 4, 0.05, true, 4));
  CHECK(std::abs(two_d.mean - 1.0) <= 3 * two_d.se);
}

TEST_CASE("variance falls like 1/(n H^k)")
{
  const std::vector<std::size_t> ns{ 100, 200, 400, 800, 1600 };
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto n : ns) {
    const auto m = moments(loo_draws(600, n, 1, 0.1, 2, 0.5, true, 100 + n));
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(m.var);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(ns.size());
  const double slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.2));
}
