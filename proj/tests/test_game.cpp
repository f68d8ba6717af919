#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sgz/analytic.hpp"
#include "sgz/game.hpp"

using namespace sgz;

namespace {

const QuadratureSpec kQuad{};

std::size_t step_of(const std::vector<double>& v, double x) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == x) return i;
  }
  FAIL("value not on grid");
  return 0;
}

}  // namespace

TEST_SUITE("game") {
  TEST_CASE("standard grid shape") {
    const SystemParams p = reference_params();
    const StrategyGrid g = StrategyGrid::standard(p);
    CHECK(g.rg_values.size() == 64);
    CHECK(g.lambda_values.size() == 64);
    CHECK(g.rg_values.front() == 0.0);
    CHECK(g.rg_values.back() == 2.0);
    CHECK(g.lambda_values.front() == doctest::Approx(2.0 / 64));
    CHECK(g.lambda_values.back() == 2.0);
    CHECK_NOTHROW(g.check(p));

    StrategyGrid bad = g;
    bad.rg_values[3] = bad.rg_values[2];
    CHECK_THROWS_AS(bad.check(p), std::invalid_argument);
    bad = g;
    bad.lambda_values.back() = 3.0;
    CHECK_THROWS_AS(bad.check(p), std::invalid_argument);
    bad = g;
    bad.lambda_values.clear();
    CHECK_THROWS_AS(bad.check(p), std::invalid_argument);
  }

  TEST_CASE("primary utility") {
    SystemParams p = reference_params();
    for (const double rg : {0.0, 0.5, 1.0}) {
      SystemParams q = p;
      q.r_g = rg;
      q.lambda_s = 0.0;
      CHECK(utility_primary(rg, 0.0, p, kQuad) == p_con(q).value);
    }
    SystemParams strict = p;
    strict.epsilon = 1.0;
    CHECK(utility_primary(0.5, 0.6, strict, kQuad) == 0.0);

    // Either zero or exactly p_con, switching where p_sec crosses epsilon.
    p.epsilon = 0.65;
    for (int i = 0; i <= 40; ++i) {
      const double rg = 0.05 * i;
      SystemParams q = p;
      q.r_g = rg;
      const double u = utility_primary(rg, 0.6, p, kQuad);
      if (p_sec(q, kQuad).value >= p.epsilon) {
        CHECK(u == p_con(q).value);
      } else {
        CHECK(u == 0.0);
      }
    }
  }

  TEST_CASE("secondary utility") {
    SystemParams p = reference_params();
    CHECK(utility_secondary(0.5, 0.0, p, kQuad) == 0.0);
    p.e_min = 0.0;
    CHECK(utility_secondary(0.0, 1.25, p, kQuad) == doctest::Approx(1.25).epsilon(1e-12));
  }

  TEST_CASE("guard response without energy receivers") {
    const SystemParams p = reference_params();
    const StrategyGrid g = StrategyGrid::uniform(2.0, 64, 2.0, 64);
    StrategyGrid with_zero = g;
    with_zero.lambda_values.insert(with_zero.lambda_values.begin(), 0.0);
    const GuardResponse r = best_response_rg(0.0, p, with_zero, kQuad);
    CHECK(r.r_g == 0.0);
    CHECK_FALSE(r.infeasible);
  }

  TEST_CASE("guard response grows with the receiver density") {
    const SystemParams p = reference_params();
    const StrategyGrid g = StrategyGrid::standard(p);
    std::size_t prev = 0;
    for (int k = 1; k <= 10; ++k) {
      const double lam = 0.2 * k;
      const GuardResponse r = best_response_rg(lam, p, g, kQuad);
      CAPTURE(lam);
      CHECK(r.index + 1 >= prev);
      prev = r.index;
    }
  }

  TEST_CASE("guard response grows with the eavesdropper SNR") {
    const SystemParams base = reference_params();
    const StrategyGrid g = StrategyGrid::standard(base);
    for (const double lam : {0.3, 0.6, 1.0}) {
      std::size_t prev = 0;
      for (const double gamma_db : {1.8, 4.8, 7.8}) {
        SystemParams p = base;
        p.sigma2_s = p.p_t / db_to_linear(gamma_db);
        const GuardResponse r = best_response_rg(lam, p, g, kQuad);
        CAPTURE(lam);
        CAPTURE(gamma_db);
        CHECK(r.index + 1 >= prev);
        prev = r.index;
      }
    }
  }

  TEST_CASE("guard response flags") {
    SystemParams p = reference_params();
    // At this density r_g = 0 is infeasible, so a two-point grid ending at
    // the full-grid response must pick its upper end.
    const double full = best_response_rg(1.0, p, StrategyGrid::standard(p), kQuad).r_g;
    REQUIRE(full > 0.0);
    StrategyGrid narrow = StrategyGrid::standard(p);
    narrow.rg_values = {0.0, full};
    const GuardResponse edge = best_response_rg(1.0, p, narrow, kQuad);
    CHECK(edge.on_boundary);
    CHECK_FALSE(edge.infeasible);
    CHECK(edge.r_g == full);
    CHECK_FALSE(best_response_rg(1.0, p, StrategyGrid::standard(p), kQuad).on_boundary);

    p.epsilon = 0.999;
    const StrategyGrid g = StrategyGrid::standard(p);
    const GuardResponse none = best_response_rg(0.6, p, g, kQuad);
    CHECK(none.infeasible);
    double best = -1.0;
    for (const double rg : g.rg_values) {
      SystemParams q = p;
      q.r_g = rg;
      q.lambda_s = 0.6;
      best = std::max(best, p_sec(q, kQuad).value);
    }
    SystemParams at = p;
    at.r_g = none.r_g;
    at.lambda_s = 0.6;
    CHECK(p_sec(at, kQuad).value == best);
  }

  TEST_CASE("density response") {
    const SystemParams p = reference_params();
    const StrategyGrid g = StrategyGrid::standard(p);
    CHECK(best_response_lambda(0.1, p, g, kQuad).lambda_s == p.lambda_s_max);
    CHECK(best_response_lambda(0.2, p, g, kQuad).lambda_s == p.lambda_s_max);

    std::size_t prev = g.lambda_values.size();
    for (const double rg : {0.4, 0.6, 0.8, 1.0}) {
      const DensityResponse r = best_response_lambda(rg, p, g, kQuad);
      CAPTURE(rg);
      CHECK(r.index <= prev + 1);
      prev = r.index;

      // Matches a direct grid search of p_energy.
      std::size_t best = 0;
      for (std::size_t k = 1; k < g.lambda_values.size(); ++k) {
        SystemParams a = p, b = p;
        a.r_g = b.r_g = rg;
        a.lambda_s = g.lambda_values[best];
        b.lambda_s = g.lambda_values[k];
        if (p_energy(b, kQuad) > p_energy(a, kQuad)) best = k;
      }
      CHECK(r.index == best);
    }
  }

  TEST_CASE("lower-bound surrogate peaks at its closed-form density") {
    const SystemParams p = reference_params();
    const StrategyGrid g = StrategyGrid::standard(p);
    const double step = g.lambda_values[1] - g.lambda_values[0];
    for (const double rg : {0.4, 0.6, 0.8, 1.0}) {
      std::size_t best = 0;
      double bv = -1.0;
      for (std::size_t k = 0; k < g.lambda_values.size(); ++k) {
        SystemParams q = p;
        q.r_g = rg;
        q.lambda_s = g.lambda_values[k];
        const double v = p_energy_lower_bound(q, kQuad);
        if (v > bv) {
          bv = v;
          best = k;
        }
      }
      CAPTURE(rg);
      CHECK(std::abs(g.lambda_values[best] - lambda_star_lower_bound(rg, p.lambda_s_max)) <= step);
    }
  }

  TEST_CASE("responses are deterministic") {
    const SystemParams p = reference_params();
    const StrategyGrid g = StrategyGrid::standard(p);
    const GuardResponse a = best_response_rg(0.8, p, g, kQuad, 1);
    const GuardResponse b = best_response_rg(0.8, p, g, kQuad, 4);
    CHECK(a.r_g == b.r_g);
    CHECK(a.index == b.index);
    CHECK(best_response_lambda(0.9, p, g, kQuad, 1).index == best_response_lambda(0.9, p, g, kQuad, 4).index);
  }

  TEST_CASE("equilibrium at the reference parameters") {
    const SystemParams p = reference_params();
    const StrategyGrid g = StrategyGrid::standard(p);
    const GameTrace t = solve_nash(p, g, kQuad);
    REQUIRE(t.converged);
    CHECK_FALSE(t.two_cycle);
    CHECK(t.steps() <= 13);
    REQUIRE(t.ne_point.has_value());
    CHECK(t.iterations.front().r_g == 0.0);
    CHECK(t.iterations.front().lambda_s == p.lambda_s_max);
    const GameStep& last = t.iterations.back();
    const GameStep& before = t.iterations[t.iterations.size() - 2];
    CHECK(last.r_g == before.r_g);
    CHECK(last.lambda_s == before.lambda_s);
    for (std::size_t i = 0; i < t.iterations.size(); ++i) CHECK(t.iterations[i].iteration == i);

    const auto [rg, lam] = *t.ne_point;
    CHECK(best_response_rg(lam, p, g, kQuad).r_g == rg);
    CHECK(best_response_lambda(rg, p, g, kQuad).lambda_s == lam);

    // No unilateral deviation helps.
    const double u1 = utility_primary(rg, lam, p, kQuad);
    const double u2 = utility_secondary(rg, lam, p, kQuad);
    for (const double r : g.rg_values) CHECK(utility_primary(r, lam, p, kQuad) <= u1);
    for (const double l : g.lambda_values) CHECK(utility_secondary(rg, l, p, kQuad) <= u2);

    (void)step_of(g.rg_values, rg);
    (void)step_of(g.lambda_values, lam);
  }

  TEST_CASE("trivial games settle at once") {
    SystemParams p = reference_params();
    p.e_min = 0.0;
    p.epsilon = 1e-9;
    p.lambda_p = 1e-6;
    const StrategyGrid g = StrategyGrid::standard(p);
    GameTrace t = solve_nash(p, g, kQuad);
    REQUIRE(t.converged);
    CHECK(t.steps() <= 2);
    CHECK(t.ne_point->first == 0.0);
    CHECK(t.ne_point->second == p.lambda_s_max);

    // Without transmitters every density harvests nothing; ties go to the
    // smallest density.
    p.lambda_p = 0.0;
    t = solve_nash(p, g, kQuad);
    REQUIRE(t.converged);
    CHECK(t.steps() <= 2);
    CHECK(t.ne_point->first == 0.0);
    CHECK(t.ne_point->second == g.lambda_values.front());
  }

  TEST_CASE("sequential rule and repeat runs") {
    const SystemParams p = reference_params();
    const StrategyGrid g = StrategyGrid::standard(p);
    NashOptions seq;
    seq.rule = UpdateRule::sequential;
    const GameTrace s = solve_nash(p, g, kQuad, seq);
    REQUIRE(s.converged);
    const auto [rg, lam] = *s.ne_point;
    CHECK(best_response_rg(lam, p, g, kQuad).r_g == rg);
    CHECK(best_response_lambda(rg, p, g, kQuad).lambda_s == lam);

    const GameTrace a = solve_nash(p, g, kQuad);
    NashOptions threaded;
    threaded.threads = 4;
    const GameTrace b = solve_nash(p, g, kQuad, threaded);
    REQUIRE(a.iterations.size() == b.iterations.size());
    for (std::size_t i = 0; i < a.iterations.size(); ++i) {
      CHECK(a.iterations[i].r_g == b.iterations[i].r_g);
      CHECK(a.iterations[i].lambda_s == b.iterations[i].lambda_s);
      CHECK(a.iterations[i].u_primary == b.iterations[i].u_primary);
      CHECK(a.iterations[i].u_secondary == b.iterations[i].u_secondary);
    }
  }

  TEST_CASE("iteration cap") {
    const SystemParams p = reference_params();
    const StrategyGrid g = StrategyGrid::standard(p);
    NashOptions none;
    none.max_iter = 0;
    CHECK_THROWS_AS(solve_nash(p, g, kQuad, none), std::invalid_argument);

    NashOptions short_run;
    short_run.max_iter = 2;
    const GameTrace t = solve_nash(p, g, kQuad, short_run);
    CHECK_FALSE(t.converged);
    CHECK_FALSE(t.ne_point.has_value());
    CHECK(t.iterations.size() == 3);

    StrategyGrid shifted = g;
    shifted.rg_values.front() = 0.01;
    CHECK_THROWS_AS(solve_nash(p, shifted, kQuad), std::invalid_argument);
  }
}
