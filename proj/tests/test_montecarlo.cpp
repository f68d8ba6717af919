#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "sgz/analytic.hpp"
#include "sgz/montecarlo.hpp"
#include "sgz/simd/kernels.hpp"

using namespace sgz;

namespace {

SystemParams with(double lambda_s, double r_g) {
  SystemParams p = reference_params();
  p.lambda_s = lambda_s;
  p.r_g = r_g;
  return p;
}

McOptions opts(std::size_t n, std::uint64_t seed, unsigned threads = 1) {
  McOptions o;
  o.n = n;
  o.seed = seed;
  o.threads = threads;
  return o;
}

// Positive gain fixed by the link endpoints alone.
double coordinate_gain(Point tx, Point rx) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const double v : {tx.x, tx.y, rx.x, rx.y}) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
  const double u = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  return -std::log(u);
}

PointPattern permuted(const PointPattern& in, std::size_t keep_first, std::mt19937_64& eng) {
  std::vector<std::size_t> order(in.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin() + static_cast<std::ptrdiff_t>(std::min(keep_first, order.size())), order.end(),
               eng);
  PointPattern out(in.window());
  std::vector<std::uint8_t> mask;
  for (const std::size_t i : order) {
    out.push_back(in.point(i));
    mask.push_back(in.active(i) ? 1 : 0);
  }
  if (in.has_mask()) out.set_active_mask(std::move(mask));
  return out;
}

}  // namespace

TEST_SUITE("montecarlo") {
  TEST_CASE("connection estimator limits") {
    SystemParams p = with(50.0, 0.5);
    CHECK(estimate_p_con(p, opts(300, 1)).value <= 0.01);

    p = with(0.0, 0.3);
    p.lambda_p = 0.0;
    p.sigma2_p = 0.0;
    const Estimate e = estimate_p_con(p, opts(500, 2));
    CHECK(e.value == 1.0);
    CHECK(e.n == 500);
  }

  TEST_CASE("secrecy estimator limits") {
    CHECK(estimate_p_sec(with(0.0, 0.3), opts(200, 3)).value == 1.0);
    SystemParams p = with(0.6, 0.3);
    p.beta_s = 1e6;
    CHECK(estimate_p_sec(p, opts(500, 4)).value >= 0.995);
  }

  TEST_CASE("energy estimator limits") {
    CHECK(estimate_p_energy(with(0.0, 0.3), opts(200, 5)).value == 0.0);
    SystemParams p = with(0.6, 0.3);
    p.e_min = 0.0;
    const Estimate e = estimate_p_energy(p, opts(500, 6));
    CHECK(e.value >= 0.99 * 0.6);
    CHECK(e.value <= 0.6);
    CHECK(e.degenerate == 0);
    CHECK_FALSE(e.degenerate_flagged());
  }

  TEST_CASE("estimates sit near the analytic values") {
    const QuadratureSpec quad;
    const SystemParams p = with(0.6, 0.3);
    const Estimate con = estimate_p_con(p, opts(20000, 7));
    CHECK(std::abs(con.value - p_con(p).value) <= std::max(0.02, 2.0 * con.half_width_95));
    const Estimate energy = estimate_p_energy(p, opts(5000, 8));
    CHECK(std::abs(energy.value - p_energy(p, quad)) <= std::max(0.03, 2.0 * energy.half_width_95));
  }

  TEST_CASE("results do not depend on the thread count") {
    const SystemParams p = with(0.6, 0.5);
    for (const unsigned t : {2U, 8U}) {
      const Estimate a = estimate_p_sec(p, opts(1500, 9, 1));
      const Estimate b = estimate_p_sec(p, opts(1500, 9, t));
      CHECK(a.value == b.value);
      CHECK(a.half_width_95 == b.half_width_95);
      CHECK(estimate_p_con(p, opts(1500, 10, 1)).value == estimate_p_con(p, opts(1500, 10, t)).value);
      CHECK(estimate_p_energy(p, opts(1500, 11, 1)).value ==
            estimate_p_energy(p, opts(1500, 11, t)).value);
    }
    CHECK(estimate_p_con(p, opts(1500, 10)).value != estimate_p_con(p, opts(1500, 12)).value);
  }

  TEST_CASE("kernel level does not change estimates") {
    const auto before = simd::active_level();
    const SystemParams p = with(0.6, 0.5);
    simd::set_level(simd::Level::scalar);
    const double con_scalar = estimate_p_con(p, opts(2000, 13)).value;
    const double sec_scalar = estimate_p_sec(p, opts(1000, 14)).value;
    simd::set_level(before);
    CHECK(std::abs(estimate_p_con(p, opts(2000, 13)).value - con_scalar) <= 1.0 / 2000);
    CHECK(std::abs(estimate_p_sec(p, opts(1000, 14)).value - sec_scalar) <= 1.0 / 1000);
  }

  TEST_CASE("scenes are reproducible") {
    const SystemParams p = with(0.6, 0.4);
    for (const Condition c : {Condition::none, Condition::typical_pt_active, Condition::typical_er}) {
      const SceneRealization a = realize_scene(p, 77, c);
      const SceneRealization b = realize_scene(p, 77, c);
      CHECK(a.pts == b.pts);
      CHECK(a.ers == b.ers);
      CHECK(a.fading == b.fading);
      const SceneRealization other = realize_scene(p, 78, c);
      CHECK_FALSE(a.ers == other.ers);
    }
  }

  TEST_CASE("conditioning holds in every scene") {
    const SystemParams p = with(1.0, 0.8);
    const Window w = default_window(p);
    for (std::uint64_t i = 0; i < 300; ++i) {
      const SceneRealization pt = realize_scene(p, 5, Condition::typical_pt_active, w, i);
      for (std::size_t j = 0; j < pt.ers.size(); ++j) {
        CHECK(distance(pt.ers.point(j), Point{}, w) >= p.r_g);
      }

      const SceneRealization er = realize_scene(p, 5, Condition::typical_er, w, i);
      REQUIRE(er.ers.size() >= 1);
      CHECK(er.ers.point(0) == Point{});
      const auto nearest = nearest_distance(Point{}, er.pts, true);
      if (nearest) CHECK(*nearest >= p.r_g);
    }
  }

  TEST_CASE("activity mask matches hole carving") {
    const SystemParams p = with(0.6, 0.5);
    const Window w = default_window(p);
    for (std::uint64_t i = 0; i < 50; ++i) {
      for (const Condition c : {Condition::typical_pt_active, Condition::typical_er}) {
        const SceneRealization s = realize_scene(p, 21, c, w, i);
        const PointPattern bare(w, std::vector<double>(s.pts.xs().begin(), s.pts.xs().end()),
                                std::vector<double>(s.pts.ys().begin(), s.pts.ys().end()));
        const PointPattern carved = carve_php(bare, s.ers, p.r_g);
        CHECK(carved.active_mask() == s.pts.active_mask());
      }
    }
  }

  TEST_CASE("energy receiver counts are Poisson") {
    const SystemParams p = with(0.6, 0.3);
    const Window w = default_window(p);
    const double mean = p.lambda_s * w.area();
    const boost::math::poisson_distribution<double> pois(mean);

    // Ten equiprobable bins from Poisson quantiles.
    std::vector<double> edges;
    for (int k = 1; k < 10; ++k) edges.push_back(boost::math::quantile(pois, k / 10.0));
    std::vector<double> expected(10);
    double prev = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
      const double c = k < 9 ? boost::math::cdf(pois, edges[k]) : 1.0;
      expected[k] = c - prev;
      prev = c;
    }

    constexpr std::size_t runs = 10000;
    std::vector<double> observed(10, 0.0);
    for (std::uint64_t i = 0; i < runs; ++i) {
      const auto count = static_cast<double>(realize_scene(p, 31, Condition::none, w, i).ers.size());
      const auto bin = static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), count) - edges.begin());
      observed[bin] += 1.0;
    }
    double chi2 = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
      const double e = expected[k] * runs;
      chi2 += (observed[k] - e) * (observed[k] - e) / e;
    }
    const double p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(9.0), chi2));
    CAPTURE(chi2);
    CHECK(p_value > 1e-3);
  }

  TEST_CASE("indicators ignore point order") {
    const SystemParams p = with(0.6, 0.4);
    const Window w = default_window(p);
    std::mt19937_64 eng(99);
    const GainFn gain = coordinate_gain;
    int sec_true = 0;
    for (std::uint64_t i = 0; i < 60; ++i) {
      SceneRealization con = realize_scene(p, 41, Condition::none, w, i);
      SceneRealization con2 = con;
      con2.pts = permuted(con.pts, 0, eng);
      con2.ers = permuted(con.ers, 0, eng);
      CHECK(connection_indicator(con, p, gain) == connection_indicator(con2, p, gain));

      SceneRealization sec = realize_scene(p, 41, Condition::typical_pt_active, w, i);
      SceneRealization sec2 = sec;
      sec2.pts = permuted(sec.pts, 0, eng);
      sec2.ers = permuted(sec.ers, 0, eng);
      const bool s1 = secrecy_indicator(sec, p, gain);
      CHECK(s1 == secrecy_indicator(sec2, p, gain));
      sec_true += s1 ? 1 : 0;

      SceneRealization er = realize_scene(p, 41, Condition::typical_er, w, i);
      SceneRealization er2 = er;
      er2.pts = permuted(er.pts, 0, eng);
      er2.ers = permuted(er.ers, 1, eng);
      CHECK(harvest_indicator(er, p, gain) == harvest_indicator(er2, p, gain));
    }
    // Both outcomes occur, so the comparison is not vacuous.
    CHECK(sec_true > 0);
    CHECK(sec_true < 60);
  }

  TEST_CASE("half-width shrinks with the square root of n") {
    const SystemParams p = with(0.6, 0.3);
    double ratio_sum = 0.0;
    for (std::uint64_t r = 0; r < 20; ++r) {
      const double h1 = estimate_p_con(p, opts(1000, 100 + r)).half_width_95;
      const double h2 = estimate_p_con(p, opts(2000, 200 + r)).half_width_95;
      ratio_sum += h2 / h1;
    }
    CHECK(std::abs(ratio_sum / 20.0 * std::sqrt(2.0) - 1.0) <= 0.1);
  }

  TEST_CASE("binomial half-width") {
    CHECK(binomial_half_width(50, 100) == doctest::Approx(1.959963984540054 * 0.05).epsilon(1e-12));
    CHECK(binomial_half_width(0, 100) > 0.0);
    CHECK(binomial_half_width(100, 100) > 0.0);
    CHECK(binomial_half_width(3, 100) == doctest::Approx(binomial_half_width(97, 100)).epsilon(1e-12));
    // Wilson half-width at zero successes reduces to z^2 / (2 (n + z^2)).
    const double z2 = 1.959963984540054 * 1.959963984540054;
    CHECK(binomial_half_width(0, 100) == doctest::Approx(z2 / (2.0 * (100.0 + z2))).epsilon(1e-12));
  }

  TEST_CASE("invalid runs are rejected") {
    const SystemParams p = with(0.6, 0.3);
    CHECK_THROWS_AS(estimate_p_con(p, opts(0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(estimate_p_sec(p, opts(0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(estimate_p_energy(p, opts(0, 1)), std::invalid_argument);

    McOptions small = opts(10, 1);
    small.window = Window{1.0, true};
    CHECK_THROWS_AS(estimate_p_con(p, small), WindowError);
    CHECK_THROWS_AS(check_window(with(0.6, 2.0), Window{9.0, true}), WindowError);
    CHECK_NOTHROW(check_window(p, default_window(p)));
    CHECK(default_window(with(0.6, 2.0)).half_extent >= 20.0);
  }
}
