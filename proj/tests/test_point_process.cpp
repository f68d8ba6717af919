#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "sgz/point_process.hpp"

using namespace sgz;

TEST_SUITE("point_process") {
  TEST_CASE("sampler basics") {
    const Window w{10.0, true};
    CHECK(sample_ppp(0.0, w, 1ULL).empty());
    CHECK_THROWS_AS(sample_ppp(-1.0, w, 1ULL), std::invalid_argument);
    const PointPattern a = sample_ppp(0.6, w, 42ULL);
    const PointPattern b = sample_ppp(0.6, w, 42ULL);
    CHECK(a == b);
    CHECK_FALSE(a == sample_ppp(0.6, w, 43ULL));
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.xs()[i] >= -10.0);
      CHECK(a.xs()[i] < 10.0);
      CHECK(a.ys()[i] >= -10.0);
      CHECK(a.ys()[i] < 10.0);
    }
  }

  TEST_CASE("counts have Poisson mean and variance") {
    const Window w{10.0, true};
    constexpr int kRuns = 10000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int s = 0; s < kRuns; ++s) {
      const auto n = static_cast<double>(sample_ppp(1.0, w, static_cast<std::uint64_t>(s)).size());
      sum += n;
      sum2 += n * n;
    }
    const double mean = sum / kRuns;
    const double var = sum2 / kRuns - mean * mean;
    CHECK(mean == doctest::Approx(400.0).epsilon(0.01));
    CHECK(std::abs(mean - var) / mean < 0.05);
  }

  TEST_CASE("carving masks points inside a hole") {
    const Window w{10.0, false};
    PointPattern base(w);
    base.push_back({0.25, 0.0});
    base.push_back({3.0, 0.0});
    PointPattern holes(w);
    holes.push_back({0.0, 0.0});

    const auto none = carve_php(base, holes, 0.0);
    CHECK(none.active_count() == 2);
    const auto carved = carve_php(base, holes, 0.5);
    CHECK(carved.size() == 2);
    CHECK_FALSE(carved.active(0));
    CHECK(carved.active(1));
    CHECK_THROWS_AS(carve_php(base, PointPattern(Window{5.0, false}), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(carve_php(base, holes, -0.1), std::invalid_argument);
  }

  TEST_CASE("carving wraps across the torus edge") {
    const Window w{10.0, true};
    PointPattern base(w);
    base.push_back({9.9, 0.0});
    PointPattern holes(w);
    holes.push_back({-9.9, 0.0});
    CHECK_FALSE(carve_php(base, holes, 0.5).active(0));
    CHECK(carve_php(PointPattern(Window{10.0, false}, std::vector<double>{9.9}, std::vector<double>{0.0}),
                    PointPattern(Window{10.0, false}, std::vector<double>{-9.9}, std::vector<double>{0.0}),
                    0.5)
              .active(0));
  }

  TEST_CASE("bucketed carving agrees with brute force") {
    const Window w{10.0, true};
    for (const double r_g : {0.05, 0.3, 1.0, 4.0, 8.0}) {
      const auto base = sample_ppp(1.0, w, 5ULL);
      const auto holes = sample_ppp(0.6, w, 6ULL);
      const auto carved = carve_php(base, holes, r_g);
      for (std::size_t i = 0; i < base.size(); ++i) {
        bool inside = false;
        for (std::size_t j = 0; j < holes.size() && !inside; ++j) {
          inside = distance(base.point(i), holes.point(j), w) < r_g;
        }
        CHECK(carved.active(i) == !inside);
      }
    }
  }

  TEST_CASE("active set shrinks as the radius grows") {
    const Window w{10.0, true};
    const auto base = sample_ppp(1.0, w, 7ULL);
    const auto holes = sample_ppp(0.6, w, 8ULL);
    const auto small = carve_php(base, holes, 0.3);
    const auto large = carve_php(base, holes, 0.6);
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (large.active(i)) CHECK(small.active(i));
    }
  }

  TEST_CASE("retention matches the void probability") {
    const Window w{10.0, true};
    const double expected = std::exp(-0.6 * std::numbers::pi * 0.25);
    CHECK(expected == doctest::Approx(0.624228433648569708).epsilon(1e-15));
    std::size_t kept = 0;
    std::size_t total = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
      Engine eng = make_stream(s, 9, 0, StreamPurpose::geometry);
      const auto holes = sample_ppp(0.6, w, eng);
      const auto carved = carve_php(sample_ppp(1.0, w, eng), holes, 0.5);
      kept += carved.active_count();
      total += carved.size();
    }
    const double frac = static_cast<double>(kept) / static_cast<double>(total);
    // Retention indicators are positively correlated; the binomial standard
    // error understates the spread, hence the extra factor.
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(total));
    CHECK(std::abs(frac - expected) < 3.0 * 4.0 * se);
  }

  TEST_CASE("nearest distance") {
    const Window plain{10.0, false};
    CHECK_FALSE(nearest_distance({0, 0}, PointPattern(plain), false).has_value());
    PointPattern one(plain);
    one.push_back({3.0, 4.0});
    CHECK(*nearest_distance({0, 0}, one, false) == doctest::Approx(5.0));

    PointPattern two(plain);
    two.push_back({1.0, 0.0});
    two.push_back({2.0, 0.0});
    two.set_active_mask({0, 1});
    CHECK(*nearest_distance({0, 0}, two, true) == doctest::Approx(2.0));
    CHECK(*nearest_distance({0, 0}, two, false) == doctest::Approx(1.0));
    two.set_active_mask({0, 0});
    CHECK_FALSE(nearest_distance({0, 0}, two, true).has_value());
    CHECK_THROWS_AS(two.set_active_mask({1}), std::invalid_argument);
  }

  TEST_CASE("toroidal distance never exceeds the planar one") {
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    const Window torus{10.0, true};
    const Window plane{10.0, false};
    for (int i = 0; i < 1000; ++i) {
      const Point a{u(eng), u(eng)};
      const Point b{u(eng), u(eng)};
      CHECK(distance(a, b, torus) <= distance(a, b, plane) + 1e-12);
    }
  }

  TEST_CASE("contact distance density") {
    CHECK(contact_distance_pdf(0.2, 1.0, 0.3) == 0.0);
    // pi * exp(-pi/4) at 30 digits.
    CHECK(contact_distance_pdf(0.5, 1.0, 0.0) == doctest::Approx(1.43237187268113831).epsilon(1e-14));

    boost::math::quadrature::exp_sinh<double> oracle;
    for (const double lt : {0.3, 1.0, 2.5}) {
      for (const double r_g : {0.0, 0.2, 0.7}) {
        const double printed =
            oracle.integrate([&](double u) { return contact_distance_pdf(r_g + u, lt, r_g); });
        CHECK(printed == doctest::Approx(contact_distance_mass(lt, r_g)).epsilon(1e-9));
        const double conditioned = oracle.integrate(
            [&](double u) { return conditioned_contact_distance_pdf(r_g + u, lt, r_g); });
        CHECK(conditioned == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
    CHECK(contact_distance_mass(0.0, 0.4) == 0.0);
  }
}
