#include "sgz/game.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "sgz/analytic.hpp"
#include "sgz/parallel.hpp"

namespace sgz {
namespace {

SystemParams at(const SystemParams& base, double r_g, double lambda_s) {
  SystemParams p = base;
  p.r_g = r_g;
  p.lambda_s = lambda_s;
  return p;
}

void check_strictly_increasing(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw std::invalid_argument(std::string(name) + " is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw std::invalid_argument(std::string(name) + " holds a non-finite value");
    if (i > 0 && !(v[i] > v[i - 1])) {
      throw std::invalid_argument(std::string(name) + " is not strictly increasing");
    }
  }
}

template <class F>
std::vector<double> evaluate_all(std::size_t count, unsigned threads, F&& f) {
  std::vector<double> out(count);
  parallel_for(count, 1, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = f(i);
  });
  return out;
}

// First index of the maximum, so ties resolve to the smallest strategy.
std::size_t first_argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

StrategyGrid StrategyGrid::uniform(double rg_max, std::size_t rg_points, double lambda_max,
                                   std::size_t lambda_points) {
  StrategyGrid g;
  g.rg_values.resize(rg_points);
  for (std::size_t i = 0; i < rg_points; ++i) {
    g.rg_values[i] =
        rg_points == 1 ? 0.0 : rg_max * static_cast<double>(i) / static_cast<double>(rg_points - 1);
  }
  g.lambda_values.resize(lambda_points);
  for (std::size_t k = 0; k < lambda_points; ++k) {
    g.lambda_values[k] =
        lambda_max * static_cast<double>(k + 1) / static_cast<double>(lambda_points);
  }
  return g;
}

StrategyGrid StrategyGrid::standard(const SystemParams& params) {
  return uniform(2.0, 64, params.lambda_s_max, 64);
}

void StrategyGrid::check(const SystemParams& params) const {
  check_strictly_increasing(rg_values, "rg_values");
  check_strictly_increasing(lambda_values, "lambda_values");
  if (rg_values.front() < 0.0) throw std::invalid_argument("rg_values must be non-negative");
  if (!(lambda_values.front() > 0.0)) throw std::invalid_argument("lambda_values must be positive");
  if (lambda_values.back() > params.lambda_s_max) {
    throw std::invalid_argument("lambda_values exceed lambda_s_max");
  }
}

double utility_primary(double r_g, double lambda_s, const SystemParams& params,
                       const QuadratureSpec& quad) {
  const SystemParams p = at(params, r_g, lambda_s);
  if (p_sec(p, quad).value < p.epsilon) return 0.0;
  return p_con(p).value;
}

double utility_secondary(double r_g, double lambda_s, const SystemParams& params,
                         const QuadratureSpec& quad) {
  return p_energy(at(params, r_g, lambda_s), quad);
}

GuardResponse best_response_rg(double lambda_s, const SystemParams& params,
                               const StrategyGrid& grid, const QuadratureSpec& quad,
                               unsigned threads) {
  const auto& rgs = grid.rg_values;
  if (rgs.empty()) throw std::invalid_argument("rg_values is empty");
  const std::vector<double> secrecy = evaluate_all(rgs.size(), threads, [&](std::size_t i) {
    return p_sec(at(params, rgs[i], lambda_s), quad).value;
  });

  GuardResponse out;
  bool any_feasible = false;
  double best = -1.0;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    if (secrecy[i] < params.epsilon) continue;
    const double u = p_con(at(params, rgs[i], lambda_s)).value;
    if (!any_feasible || u > best) {
      best = u;
      out.index = i;
      any_feasible = true;
    }
  }
  if (!any_feasible) {
    out.index = first_argmax(secrecy);
    out.infeasible = true;
  }
  out.r_g = rgs[out.index];
  out.on_boundary = out.index + 1 == rgs.size() && rgs.size() > 1;
  return out;
}

DensityResponse best_response_lambda(double r_g, const SystemParams& params,
                                     const StrategyGrid& grid, const QuadratureSpec& quad,
                                     unsigned threads) {
  const auto& lams = grid.lambda_values;
  if (lams.empty()) throw std::invalid_argument("lambda_values is empty");
  const std::vector<double> energy = evaluate_all(lams.size(), threads, [&](std::size_t k) {
    return utility_secondary(r_g, lams[k], params, quad);
  });
  DensityResponse out;
  out.index = first_argmax(energy);
  out.lambda_s = lams[out.index];
  return out;
}

GameTrace solve_nash(const SystemParams& params, const StrategyGrid& grid,
                     const QuadratureSpec& quad, const NashOptions& options) {
  if (options.max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");
  grid.check(params);
  if (grid.rg_values.front() != 0.0) throw std::invalid_argument("rg_values must start at 0");
  if (grid.lambda_values.back() != params.lambda_s_max) {
    throw std::invalid_argument("lambda_values must end at lambda_s_max");
  }

  // Responses are pure functions of the opponent's grid index.
  std::map<std::size_t, GuardResponse> rg_memo;
  std::map<std::size_t, DensityResponse> lambda_memo;
  const auto respond_rg = [&](std::size_t lambda_index) {
    auto it = rg_memo.find(lambda_index);
    if (it == rg_memo.end()) {
      it = rg_memo
               .emplace(lambda_index, best_response_rg(grid.lambda_values[lambda_index], params,
                                                       grid, quad, options.threads))
               .first;
    }
    return it->second;
  };
  const auto respond_lambda = [&](std::size_t rg_index) {
    auto it = lambda_memo.find(rg_index);
    if (it == lambda_memo.end()) {
      it = lambda_memo
               .emplace(rg_index, best_response_lambda(grid.rg_values[rg_index], params, grid,
                                                       quad, options.threads))
               .first;
    }
    return it->second;
  };

  const auto record = [&](GameTrace& trace, std::size_t rg_i, std::size_t lam_i,
                          const GuardResponse* guard) {
    GameStep step;
    step.iteration = trace.iterations.size();
    step.r_g = grid.rg_values[rg_i];
    step.lambda_s = grid.lambda_values[lam_i];
    step.u_primary = utility_primary(step.r_g, step.lambda_s, params, quad);
    step.u_secondary = utility_secondary(step.r_g, step.lambda_s, params, quad);
    if (guard != nullptr) {
      step.rg_infeasible = guard->infeasible;
      step.rg_on_boundary = guard->on_boundary;
    }
    trace.iterations.push_back(step);
  };

  GameTrace trace;
  std::vector<std::pair<std::size_t, std::size_t>> profiles;
  std::size_t rg_i = 0;
  std::size_t lam_i = grid.lambda_values.size() - 1;
  profiles.emplace_back(rg_i, lam_i);
  record(trace, rg_i, lam_i, nullptr);

  for (std::size_t n = 1; n <= options.max_iter; ++n) {
    const GuardResponse guard = respond_rg(lam_i);
    const std::size_t next_lam = options.rule == UpdateRule::simultaneous
                                     ? respond_lambda(rg_i).index
                                     : respond_lambda(guard.index).index;
    rg_i = guard.index;
    lam_i = next_lam;
    profiles.emplace_back(rg_i, lam_i);
    record(trace, rg_i, lam_i, &guard);

    const std::size_t last = profiles.size() - 1;
    if (profiles[last] == profiles[last - 1]) {
      trace.converged = true;
      trace.ne_point = std::make_pair(grid.rg_values[rg_i], grid.lambda_values[lam_i]);
      break;
    }
    if (last >= 2 && profiles[last] == profiles[last - 2]) {
      trace.two_cycle = true;
      break;
    }
  }
  return trace;
}

}  // namespace sgz
