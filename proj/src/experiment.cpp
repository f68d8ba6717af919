#include "sgz/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <json.hpp>

#include "sgz/analytic.hpp"
#include "sgz/montecarlo.hpp"
#include "sgz/parallel.hpp"

namespace sgz {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& preset_table();
}  // namespace detail

namespace {

using nlohmann::json;

struct ParamField {
  std::string_view name;
  double SystemParams::*member;
};

constexpr ParamField kFields[] = {
    {"lambda_p", &SystemParams::lambda_p}, {"lambda_s", &SystemParams::lambda_s},
    {"r_g", &SystemParams::r_g},           {"r_1", &SystemParams::r_1},
    {"alpha", &SystemParams::alpha},       {"beta_p", &SystemParams::beta_p},
    {"beta_s", &SystemParams::beta_s},     {"sigma2_p", &SystemParams::sigma2_p},
    {"sigma2_s", &SystemParams::sigma2_s}, {"p_t", &SystemParams::p_t},
    {"eta", &SystemParams::eta},           {"slot_t", &SystemParams::slot_t},
    {"e_min", &SystemParams::e_min},       {"epsilon", &SystemParams::epsilon},
    {"lambda_s_max", &SystemParams::lambda_s_max},
};

// dB spelling -> the linear field it sets.
const std::map<std::string_view, std::string_view> kDbAliases = {
    {"beta_p_db", "beta_p"},
    {"beta_s_db", "beta_s"},
    {"gamma_p_db", "sigma2_p"},
    {"gamma_s_db", "sigma2_s"},
};

bool is_db_name(std::string_view name) { return kDbAliases.contains(name); }

constexpr int kMaxPresetDepth = 4;

std::string in_quotes(std::string_view s) { return "'" + std::string(s) + "'"; }

// Accumulates every violation instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

  bool object(const json& v, const std::string& path) {
    if (v.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  void allowed_keys(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> keys) {
    for (const auto& [key, _] : obj.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        fail(path.empty() ? key : path + "." + key, "unknown key");
      }
    }
  }

  std::optional<double> number(const json& v, const std::string& path) {
    if (!v.is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<std::uint64_t> count(const json& v, const std::string& path, std::uint64_t min) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      fail(path, "expected a non-negative integer");
      return std::nullopt;
    }
    const auto n = v.get<std::uint64_t>();
    if (n < min) {
      fail(path, "must be at least " + std::to_string(min));
      return std::nullopt;
    }
    return n;
  }

  std::optional<std::string> string(const json& v, const std::string& path) {
    if (!v.is_string()) {
      fail(path, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  template <class T>
  std::optional<T> choice(const json& v, const std::string& path,
                          std::initializer_list<std::pair<std::string_view, T>> options) {
    const auto s = string(v, path);
    if (!s) return std::nullopt;
    for (const auto& [name, value] : options) {
      if (*s == name) return value;
    }
    std::string names;
    for (const auto& [name, _] : options) names += (names.empty() ? "" : ", ") + std::string(name);
    fail(path, "unknown value " + in_quotes(*s) + " (expected one of " + names + ")");
    return std::nullopt;
  }
};

json parse_json(std::string_view text, std::string_view origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string(origin) + ": " + e.what()});
  }
}

// Resolves `preset` chains. Object-valued keys other than `sweep` merge
// field by field into the preset's; everything else replaces it. In
// `params`, a linear field and its dB spelling displace each other.
json resolve_presets(json doc, int depth) {
  if (!doc.is_object() || !doc.contains("preset")) return doc;
  if (depth >= kMaxPresetDepth) throw ConfigError({"preset: nesting too deep"});
  if (!doc["preset"].is_string()) throw ConfigError({"preset: expected a string"});
  const std::string name = doc["preset"].get<std::string>();
  json base = resolve_presets(parse_json(preset_text(name), "preset " + name), depth + 1);
  doc.erase("preset");

  for (auto& [key, value] : doc.items()) {
    if (key == "params" && value.is_object() && base.contains("params") &&
        base["params"].is_object()) {
      json& merged = base["params"];
      for (const auto& [field, v] : value.items()) {
        for (const auto& [db, linear] : kDbAliases) {
          if (field == db) merged.erase(std::string(linear));
          if (field == linear) merged.erase(std::string(db));
        }
        merged[field] = v;
      }
    } else if (key != "sweep" && value.is_object() && base.contains(key) &&
               base[key].is_object()) {
      for (const auto& [field, v] : value.items()) base[key][field] = v;
    } else {
      base[key] = value;
    }
  }
  return base;
}

std::vector<std::string> default_metrics() { return {"p_con", "p_sec", "p_energy"}; }

void read_params(Reader& r, const json& obj, SystemParams& params) {
  if (!r.object(obj, "params")) return;
  for (const auto& [db, linear] : kDbAliases) {
    if (obj.contains(std::string(db)) && obj.contains(std::string(linear))) {
      r.fail("params." + std::string(db), "conflicts with params." + std::string(linear));
    }
  }
  // Linear fields first: the SNR spellings depend on p_t.
  for (const bool db_pass : {false, true}) {
    for (const auto& [key, value] : obj.items()) {
      if (is_db_name(key) != db_pass) continue;
      const std::string path = "params." + key;
      if (!is_param_name(key)) {
        r.fail(path, "unknown key");
        continue;
      }
      if (const auto v = r.number(value, path)) set_param(params, key, *v);
    }
  }
}

void read_sweep(Reader& r, const json& obj, SweepSpec& sweep) {
  if (!r.object(obj, "sweep")) return;
  r.allowed_keys(obj, "sweep", {"axes", "combine"});
  if (obj.contains("combine")) {
    if (const auto c = r.choice<Combine>(obj["combine"], "sweep.combine",
                                         {{"product", Combine::product}, {"zip", Combine::zip}})) {
      sweep.combine = *c;
    }
  }
  if (!obj.contains("axes")) return;
  const json& axes = obj["axes"];
  if (!axes.is_array()) {
    r.fail("sweep.axes", "expected an array");
    return;
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string path = "sweep.axes[" + std::to_string(i) + "]";
    const json& a = axes[i];
    if (!r.object(a, path)) continue;
    r.allowed_keys(a, path, {"name", "values", "linspace"});
    SweepAxis axis;
    if (!a.contains("name")) {
      r.fail(path + ".name", "required");
    } else if (const auto name = r.string(a["name"], path + ".name")) {
      if (!is_param_name(*name)) r.fail(path + ".name", "unknown parameter " + in_quotes(*name));
      axis.name = *name;
    }
    const bool has_values = a.contains("values");
    const bool has_linspace = a.contains("linspace");
    if (has_values == has_linspace) {
      r.fail(path, "needs exactly one of 'values' or 'linspace'");
    } else if (has_values) {
      const json& vals = a["values"];
      if (!vals.is_array() || vals.empty()) {
        r.fail(path + ".values", "expected a nonempty array");
      } else {
        for (std::size_t k = 0; k < vals.size(); ++k) {
          if (const auto v = r.number(vals[k], path + ".values[" + std::to_string(k) + "]")) {
            axis.values.push_back(*v);
          }
        }
      }
    } else {
      const json& ls = a["linspace"];
      if (!ls.is_array() || ls.size() != 3) {
        r.fail(path + ".linspace", "expected [start, stop, count]");
      } else {
        const auto start = r.number(ls[0], path + ".linspace[0]");
        const auto stop = r.number(ls[1], path + ".linspace[1]");
        const auto n = r.count(ls[2], path + ".linspace[2]", 1);
        if (start && stop && n) {
          for (std::uint64_t k = 0; k < *n; ++k) {
            axis.values.push_back(*n == 1 ? *start
                                          : *start + (*stop - *start) * static_cast<double>(k) /
                                                         static_cast<double>(*n - 1));
          }
        }
      }
    }
    sweep.axes.push_back(std::move(axis));
  }
  if (sweep.combine == Combine::zip) {
    for (const auto& axis : sweep.axes) {
      if (axis.values.size() != sweep.axes.front().values.size()) {
        r.fail("sweep.axes", "zip needs axes of equal length");
        break;
      }
    }
  }
}

void read_quad(Reader& r, const json& obj, QuadratureSpec& quad) {
  if (!r.object(obj, "quad")) return;
  r.allowed_keys(obj, "quad", {"rel_tol", "abs_tol", "max_subdivisions", "tail_policy"});
  if (obj.contains("rel_tol")) {
    if (const auto v = r.number(obj["rel_tol"], "quad.rel_tol")) quad.rel_tol = *v;
  }
  if (obj.contains("abs_tol")) {
    if (const auto v = r.number(obj["abs_tol"], "quad.abs_tol")) quad.abs_tol = *v;
  }
  if (obj.contains("max_subdivisions")) {
    if (const auto v = r.count(obj["max_subdivisions"], "quad.max_subdivisions", 1)) {
      quad.max_subdivisions = static_cast<std::size_t>(*v);
    }
  }
  if (obj.contains("tail_policy")) {
    if (const auto v = r.choice<TailPolicy>(
            obj["tail_policy"], "quad.tail_policy",
            {{"substitution", TailPolicy::substitution}, {"truncation", TailPolicy::truncation}})) {
      quad.tail_policy = *v;
    }
  }
  if (const auto why = check(quad); !why.empty()) r.fail("quad", why);
}

void read_game(Reader& r, const json& obj, GameConfig& game) {
  if (!r.object(obj, "game")) return;
  r.allowed_keys(obj, "game", {"rg_max", "rg_points", "lambda_points", "max_iter", "update"});
  if (obj.contains("rg_max")) {
    if (const auto v = r.number(obj["rg_max"], "game.rg_max")) {
      if (*v > 0.0) {
        game.rg_max = *v;
      } else {
        r.fail("game.rg_max", "must be positive");
      }
    }
  }
  if (obj.contains("rg_points")) {
    if (const auto v = r.count(obj["rg_points"], "game.rg_points", 2)) game.rg_points = *v;
  }
  if (obj.contains("lambda_points")) {
    if (const auto v = r.count(obj["lambda_points"], "game.lambda_points", 1)) game.lambda_points = *v;
  }
  if (obj.contains("max_iter")) {
    if (const auto v = r.count(obj["max_iter"], "game.max_iter", 1)) game.max_iter = *v;
  }
  if (obj.contains("update")) {
    if (const auto v = r.choice<UpdateRule>(
            obj["update"], "game.update",
            {{"simultaneous", UpdateRule::simultaneous}, {"sequential", UpdateRule::sequential}})) {
      game.rule = *v;
    }
  }
}

ExperimentConfig read_config(const json& doc) {
  Reader r;
  ExperimentConfig cfg;
  if (!doc.is_object()) throw ConfigError({"configuration must be a JSON object"});
  r.allowed_keys(doc, "", {"mode", "params", "sweep", "mc", "quad", "metrics", "game", "output"});

  if (!doc.contains("mode")) {
    r.fail("mode", "required");
  } else if (const auto m = r.choice<Mode>(doc["mode"], "mode",
                                           {{"analytic", Mode::analytic},
                                            {"montecarlo", Mode::montecarlo},
                                            {"mc", Mode::montecarlo},
                                            {"validate", Mode::validate},
                                            {"nash", Mode::nash},
                                            {"sweep", Mode::sweep}})) {
    cfg.mode = *m;
  }

  if (doc.contains("params")) read_params(r, doc["params"], cfg.params);
  if (doc.contains("sweep")) read_sweep(r, doc["sweep"], cfg.sweep);
  if (doc.contains("quad")) read_quad(r, doc["quad"], cfg.quad);
  if (doc.contains("game")) read_game(r, doc["game"], cfg.game);

  const bool simulates = cfg.mode == Mode::montecarlo || cfg.mode == Mode::validate;
  if (doc.contains("mc")) {
    const json& mc = doc["mc"];
    if (r.object(mc, "mc")) {
      r.allowed_keys(mc, "mc", {"n", "seed"});
      if (mc.contains("n")) {
        if (const auto n = r.count(mc["n"], "mc.n", 1)) cfg.mc.n = static_cast<std::size_t>(*n);
      }
      if (mc.contains("seed")) {
        if (const auto s = r.count(mc["seed"], "mc.seed", 0)) cfg.mc.seed = *s;
      }
    }
  }
  if (simulates && !cfg.mc.seed) {
    r.fail("mc.seed", std::string("required in ") + std::string(mode_name(cfg.mode)) + " mode");
  }

  cfg.metrics = default_metrics();
  if (doc.contains("metrics")) {
    const json& m = doc["metrics"];
    cfg.metrics.clear();
    if (!m.is_array()) {
      r.fail("metrics", "expected an array of metric names");
    } else {
      const auto& allowed = simulates ? simulated_metric_names() : analytic_metric_names();
      for (std::size_t i = 0; i < m.size(); ++i) {
        const std::string path = "metrics[" + std::to_string(i) + "]";
        const auto name = r.string(m[i], path);
        if (!name) continue;
        if (std::find(allowed.begin(), allowed.end(), *name) == allowed.end()) {
          r.fail(path, "unknown metric " + in_quotes(*name) +
                           (simulates ? " for a simulated mode" : ""));
        } else if (std::find(cfg.metrics.begin(), cfg.metrics.end(), *name) != cfg.metrics.end()) {
          r.fail(path, "duplicate metric " + in_quotes(*name));
        } else {
          cfg.metrics.push_back(*name);
        }
      }
    }
  }
  if (simulates && cfg.metrics.empty()) r.fail("metrics", "needs at least one metric");
  if (cfg.mode == Mode::nash && !cfg.sweep.axes.empty()) {
    r.fail("sweep", "not supported in nash mode");
  }

  if (doc.contains("output")) {
    const json& out = doc["output"];
    if (r.object(out, "output")) {
      r.allowed_keys(out, "output", {"path", "format"});
      if (out.contains("path")) cfg.output_path = r.string(out["path"], "output.path");
      if (out.contains("format")) {
        if (const auto f = r.choice<Format>(out["format"], "output.format",
                                            {{"csv", Format::csv}, {"jsonl", Format::jsonl}})) {
          cfg.format = *f;
        }
      }
    }
  }

  const auto checked = validate(cfg.params);
  for (const auto& v : checked.violations) r.fail("params", v);
  if (cfg.mode == Mode::nash) {
    try {
      StrategyGrid::uniform(cfg.game.rg_max, cfg.game.rg_points, cfg.params.lambda_s_max,
                            cfg.game.lambda_points)
          .check(cfg.params);
    } catch (const std::invalid_argument& e) {
      r.fail("game", e.what());
    }
  }

  if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
  return cfg;
}

// ---------------------------------------------------------------------------

using MetricFn = std::function<double(const SystemParams&, const QuadratureSpec&)>;

const std::map<std::string, MetricFn, std::less<>>& metric_table() {
  static const std::map<std::string, MetricFn, std::less<>> table = {
      {"p_con", [](const SystemParams& p, const QuadratureSpec&) { return p_con(p).value; }},
      {"p_sec", [](const SystemParams& p, const QuadratureSpec& q) { return p_sec(p, q).value; }},
      {"p_energy", [](const SystemParams& p, const QuadratureSpec& q) { return p_energy(p, q); }},
      {"p_energy_lower_bound",
       [](const SystemParams& p, const QuadratureSpec& q) { return p_energy_lower_bound(p, q); }},
      {"p_active",
       [](const SystemParams& p, const QuadratureSpec&) { return p_active(p.lambda_s, p.r_g); }},
      {"p_con_noise_limited",
       [](const SystemParams& p, const QuadratureSpec&) { return p_con_noise_limited(p); }},
      {"p_con_int_limited",
       [](const SystemParams& p, const QuadratureSpec&) { return p_con_int_limited(p); }},
      {"p_sec_noise_limited",
       [](const SystemParams& p, const QuadratureSpec&) { return p_sec_noise_limited(p); }},
      {"p_sec_int_limited",
       [](const SystemParams& p, const QuadratureSpec& q) { return p_sec_int_limited(p, q).value; }},
      {"threshold_a1", [](const SystemParams& p, const QuadratureSpec&) { return threshold_a1(p); }},
      {"p_con_upper_bound",
       [](const SystemParams& p, const QuadratureSpec&) { return p_con_upper_bound(p); }},
      {"rg_star_noise_limited",
       [](const SystemParams& p, const QuadratureSpec&) { return rg_star_noise_limited(p).radius; }},
      {"lambda_star_lower_bound",
       [](const SystemParams& p, const QuadratureSpec&) {
         return lambda_star_lower_bound(p.r_g, p.lambda_s_max);
       }},
  };
  return table;
}

double validation_tolerance(std::string_view metric) { return metric == "p_con" ? 0.02 : 0.03; }

Estimate simulate(std::string_view metric, const SystemParams& p, const McOptions& o) {
  if (metric == "p_con") return estimate_p_con(p, o);
  if (metric == "p_sec") return estimate_p_sec(p, o);
  return estimate_p_energy(p, o);
}

struct RowBuilder {
  std::vector<Cell> cells;
  std::string error;

  void note(std::string_view what, const std::string& message) {
    if (!error.empty()) error += "; ";
    error += std::string(what) + ": " + message;
  }
  void value(std::string_view what, double v) {
    if (std::isfinite(v)) {
      cells.emplace_back(v);
    } else {
      cells.emplace_back(std::monostate{});
      note(what, "non-finite result");
    }
  }
  template <class F>
  void guarded(std::string_view what, std::size_t width, F&& f) {
    const std::size_t before = cells.size();
    try {
      f();
    } catch (const std::exception& e) {
      cells.resize(before);
      note(what, e.what());
    }
    cells.resize(before + width, std::monostate{});
  }
  std::vector<Cell> finish() {
    cells.emplace_back(error);
    return std::move(cells);
  }
};

std::vector<std::string> metric_columns(Mode mode, const std::string& m) {
  switch (mode) {
    case Mode::analytic:
    case Mode::sweep:
      return {m};
    case Mode::montecarlo:
      if (m == "p_energy") return {m + "_mc", m + "_half_width", m + "_degenerate"};
      return {m + "_mc", m + "_half_width"};
    case Mode::validate:
      if (m == "p_energy") {
        return {m, m + "_mc", m + "_half_width", m + "_gap", m + "_pass", m + "_degenerate"};
      }
      return {m, m + "_mc", m + "_half_width", m + "_gap", m + "_pass"};
    case Mode::nash:
      break;
  }
  return {};
}

std::vector<std::string> column_names(const ExperimentConfig& cfg) {
  std::vector<std::string> cols;
  for (const auto& axis : cfg.sweep.axes) cols.push_back(axis.name);
  for (const auto& m : cfg.metrics) {
    for (auto& c : metric_columns(cfg.mode, m)) cols.push_back(std::move(c));
  }
  if (cfg.mode == Mode::sweep) {
    for (const char* c : {"br_rg", "br_rg_infeasible", "br_rg_on_boundary", "br_lambda"}) {
      cols.emplace_back(c);
    }
  }
  cols.emplace_back("error");
  return cols;
}

std::vector<Cell> sweep_row(const ExperimentConfig& cfg, const std::vector<double>& point,
                            const StrategyGrid& grid, unsigned mc_threads) {
  RowBuilder row;
  SystemParams p = cfg.params;
  for (std::size_t a = 0; a < point.size(); ++a) {
    row.cells.emplace_back(point[a]);
    set_param(p, cfg.sweep.axes[a].name, point[a]);
  }
  const auto checked = validate(p);
  const bool valid = checked.ok();
  for (const auto& v : checked.violations) row.note("params", v);

  for (const auto& m : cfg.metrics) {
    const std::size_t width = metric_columns(cfg.mode, m).size();
    if (!valid) {
      row.cells.resize(row.cells.size() + width, std::monostate{});
      continue;
    }
    row.guarded(m, width, [&] {
      if (cfg.mode == Mode::analytic || cfg.mode == Mode::sweep) {
        row.value(m, metric_table().find(m)->second(p, cfg.quad));
        return;
      }
      const McOptions options{cfg.mc.n, cfg.mc.seed.value_or(0), mc_threads, std::nullopt};
      const Estimate e = simulate(m, p, options);
      double exact = 0.0;
      if (cfg.mode == Mode::validate) {
        exact = metric_table().find(m)->second(p, cfg.quad);
        row.value(m, exact);
      }
      row.value(m + "_mc", e.value);
      row.value(m + "_half_width", e.half_width_95);
      if (cfg.mode == Mode::validate) {
        const double gap = std::abs(exact - e.value);
        row.value(m + "_gap", gap);
        row.cells.emplace_back(gap <= std::max(validation_tolerance(m), 2.0 * e.half_width_95));
      }
      if (m == "p_energy") {
        row.cells.emplace_back(static_cast<std::int64_t>(e.degenerate));
        if (e.degenerate_flagged()) row.note(m, "more than 1% of realizations had no active PT");
      }
    });
  }

  if (cfg.mode == Mode::sweep) {
    if (!valid) {
      row.cells.resize(row.cells.size() + 4, std::monostate{});
    } else {
      row.guarded("br_rg", 3, [&] {
        const GuardResponse g = best_response_rg(p.lambda_s, p, grid, cfg.quad);
        row.value("br_rg", g.r_g);
        row.cells.emplace_back(g.infeasible);
        row.cells.emplace_back(g.on_boundary);
      });
      row.guarded("br_lambda", 1, [&] {
        row.value("br_lambda", best_response_lambda(p.r_g, p, grid, cfg.quad).lambda_s);
      });
    }
  }
  return row.finish();
}

ExperimentResult run_nash(const ExperimentConfig& cfg, unsigned threads) {
  ExperimentResult result;
  result.table.columns = {"iteration",   "r_g",           "lambda_s",       "delta_s",
                          "u_primary",   "u_secondary",   "rg_infeasible",  "rg_on_boundary",
                          "converged",   "two_cycle",     "error"};
  try {
    const StrategyGrid grid = StrategyGrid::uniform(cfg.game.rg_max, cfg.game.rg_points,
                                                    cfg.params.lambda_s_max, cfg.game.lambda_points);
    const GameTrace trace =
        solve_nash(cfg.params, grid, cfg.quad, {cfg.game.max_iter, cfg.game.rule, threads});
    for (const GameStep& s : trace.iterations) {
      RowBuilder row;
      row.cells.emplace_back(static_cast<std::int64_t>(s.iteration));
      row.value("r_g", s.r_g);
      row.value("lambda_s", s.lambda_s);
      row.value("delta_s", s.lambda_s / cfg.params.lambda_s_max);
      row.value("u_primary", s.u_primary);
      row.value("u_secondary", s.u_secondary);
      row.cells.emplace_back(s.rg_infeasible);
      row.cells.emplace_back(s.rg_on_boundary);
      row.cells.emplace_back(trace.converged);
      row.cells.emplace_back(trace.two_cycle);
      if (!trace.converged && s.iteration + 1 == trace.iterations.size()) {
        row.note("nash", trace.two_cycle ? "best responses entered a 2-cycle"
                                         : "no fixed point within max_iter");
      }
      result.table.rows.push_back(row.finish());
    }
  } catch (const std::exception& e) {
    std::vector<Cell> row(result.table.columns.size(), std::monostate{});
    row.back() = std::string("nash: ") + e.what();
    result.table.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::analytic: return "analytic";
    case Mode::montecarlo: return "montecarlo";
    case Mode::validate: return "validate";
    case Mode::nash: return "nash";
    case Mode::sweep: return "sweep";
  }
  return "unknown";
}

ConfigError::ConfigError(std::vector<std::string> messages)
    : std::runtime_error([&] {
        std::string text = "invalid configuration";
        for (const auto& m : messages) text += "\n  " + m;
        return text;
      }()),
      messages_(std::move(messages)) {}

bool is_param_name(std::string_view name) {
  if (is_db_name(name)) return true;
  return std::any_of(std::begin(kFields), std::end(kFields),
                     [&](const ParamField& f) { return f.name == name; });
}

bool set_param(SystemParams& params, std::string_view name, double value) {
  if (name == "beta_p_db") {
    params.beta_p = db_to_linear(value);
  } else if (name == "beta_s_db") {
    params.beta_s = db_to_linear(value);
  } else if (name == "gamma_p_db") {
    params.sigma2_p = params.p_t / db_to_linear(value);
  } else if (name == "gamma_s_db") {
    params.sigma2_s = params.p_t / db_to_linear(value);
  } else {
    const auto* it = std::find_if(std::begin(kFields), std::end(kFields),
                                  [&](const ParamField& f) { return f.name == name; });
    if (it == std::end(kFields)) return false;
    params.*(it->member) = value;
  }
  return true;
}

const std::vector<std::string>& analytic_metric_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : metric_table()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& simulated_metric_names() {
  static const std::vector<std::string> names = {"p_con", "p_sec", "p_energy"};
  return names;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : detail::preset_table()) out.emplace_back(name);
  return out;
}

std::string preset_text(std::string_view name) {
  for (const auto& [key, text] : detail::preset_table()) {
    if (key == name) return std::string(text);
  }
  throw ConfigError({"preset: unknown preset " + in_quotes(name)});
}

ExperimentConfig load_config(std::string_view text) {
  return read_config(resolve_presets(parse_json(text, "config"), 0));
}

std::vector<std::vector<double>> sweep_points(const SweepSpec& sweep) {
  std::vector<std::vector<double>> points;
  if (sweep.axes.empty()) return {{}};
  if (sweep.combine == Combine::zip) {
    const std::size_t n = sweep.axes.front().values.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> pt;
      for (const auto& axis : sweep.axes) pt.push_back(axis.values.at(i));
      points.push_back(std::move(pt));
    }
    return points;
  }
  std::vector<std::size_t> idx(sweep.axes.size(), 0);
  for (;;) {
    std::vector<double> pt;
    for (std::size_t a = 0; a < idx.size(); ++a) pt.push_back(sweep.axes[a].values[idx[a]]);
    points.push_back(std::move(pt));
    std::size_t a = idx.size();
    while (a > 0) {
      --a;
      if (++idx[a] < sweep.axes[a].values.size()) break;
      idx[a] = 0;
      if (a == 0) return points;
    }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  if (cfg.mode == Mode::nash) {
    ExperimentResult r = run_nash(cfg, threads);
    const std::size_t err = r.table.column("error");
    for (const auto& row : r.table.rows) {
      if (!std::get<std::string>(row[err]).empty()) ++r.failed_rows;
    }
    return r;
  }

  ExperimentResult result;
  result.table.columns = column_names(cfg);
  const auto points = sweep_points(cfg.sweep);
  result.table.rows.resize(points.size());
  const StrategyGrid grid = StrategyGrid::uniform(cfg.game.rg_max, cfg.game.rg_points,
                                                  cfg.params.lambda_s_max, cfg.game.lambda_points);

  if (cfg.mode == Mode::montecarlo || cfg.mode == Mode::validate) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      result.table.rows[i] = sweep_row(cfg, points[i], grid, threads);
    }
  } else {
    parallel_for(points.size(), 1, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        result.table.rows[i] = sweep_row(cfg, points[i], grid, 1);
      }
    });
  }
  for (const auto& row : result.table.rows) {
    if (!std::get<std::string>(row.back()).empty()) ++result.failed_rows;
  }
  return result;
}

}  // namespace sgz
