#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sgz/game.hpp"
#include "sgz/params.hpp"
#include "sgz/quadrature.hpp"

namespace sgz {

enum class Mode { analytic, montecarlo, validate, nash, sweep };

std::string_view mode_name(Mode mode);

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

enum class Combine { product, zip };

struct SweepSpec {
  std::vector<SweepAxis> axes;
  Combine combine = Combine::product;
};

struct McConfig {
  std::size_t n = 10000;
  std::optional<std::uint64_t> seed;
};

struct GameConfig {
  double rg_max = 2.0;
  std::size_t rg_points = 64;
  std::size_t lambda_points = 64;
  std::size_t max_iter = 100;
  UpdateRule rule = UpdateRule::simultaneous;
};

enum class Format { csv, jsonl };

struct ExperimentConfig {
  SystemParams params;
  Mode mode = Mode::analytic;
  SweepSpec sweep;
  McConfig mc;
  QuadratureSpec quad;
  /// Metric columns in output order.
  std::vector<std::string> metrics;
  GameConfig game;
  std::optional<std::string> output_path;
  Format format = Format::csv;
};

/// Every problem found while reading a configuration, one message per
/// violation, each naming the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

/// Parses and validates a JSON configuration document. A `preset` key loads
/// the named preset first; the document's own keys then override it, object
/// sections other than `sweep` field by field.
ExperimentConfig load_config(std::string_view text);

/// Names accepted by the `preset` key, in a stable order.
std::vector<std::string> preset_names();
/// Raw JSON of a preset; throws ConfigError for an unknown name.
std::string preset_text(std::string_view name);

/// Sets a SystemParams field by name. Accepts every field name plus
/// beta_p_db, beta_s_db, gamma_p_db and gamma_s_db (noise power from the SNR
/// at the current p_t). Returns false for an unknown name.
bool set_param(SystemParams& params, std::string_view name, double value);
bool is_param_name(std::string_view name);

/// Metric names usable in `metrics`, and the subset that has a Monte Carlo
/// estimator.
const std::vector<std::string>& analytic_metric_names();
const std::vector<std::string>& simulated_metric_names();

/// Empty cells serialize as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::out_of_range for an unknown column.
  [[nodiscard]] std::size_t column(std::string_view name) const;
};

struct ExperimentResult {
  Table table;
  /// Rows whose error column is non-empty.
  std::size_t failed_rows = 0;
};

/// Runs the configured experiment. Row failures land in the trailing
/// `error` column. Output is identical for every thread count.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 1);

/// Doubles print with 12 significant digits. Throws std::invalid_argument
/// for an empty table or a non-finite double.
void emit(const Table& table, Format format, std::ostream& out);
std::string emit(const Table& table, Format format);

/// Sweep points: the axis product (last axis fastest) or the element-wise
/// zip. One empty point when there are no axes.
std::vector<std::vector<double>> sweep_points(const SweepSpec& sweep);

}  // namespace sgz
