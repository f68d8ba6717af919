#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgz/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 1;

struct Options {
  std::string config_path;
  std::string preset;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sgz::ConfigError({"--config: cannot open " + path});
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Command-line flags are folded into the document so load_config sees one
// source of truth.
std::string build_document(const Options& o, std::string_view mode) {
  nlohmann::json doc = nlohmann::json::object();
  if (!o.config_path.empty()) {
    try {
      doc = nlohmann::json::parse(read_file(o.config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw sgz::ConfigError({o.config_path + ": " + e.what()});
    }
    if (!doc.is_object()) throw sgz::ConfigError({o.config_path + ": expected a JSON object"});
  }
  if (!o.preset.empty()) {
    doc["preset"] = o.preset;
  } else if (o.config_path.empty()) {
    doc["preset"] = "paper-sec5";
  }
  doc["mode"] = mode;
  if (o.seed) doc["mc"]["seed"] = *o.seed;
  if (!o.format.empty()) doc["output"]["format"] = o.format;
  if (!o.out_path.empty()) doc["output"]["path"] = o.out_path;
  return doc.dump();
}

int run(const Options& o, std::string_view mode) {
  sgz::ExperimentConfig cfg;
  try {
    cfg = sgz::load_config(build_document(o, mode));
  } catch (const sgz::ConfigError& e) {
    std::cerr << "sgz: " << e.what() << '\n';
    return kExitConfig;
  }

  const sgz::ExperimentResult result = sgz::run_experiment(cfg, o.threads);
  if (cfg.output_path) {
    std::ofstream out(*cfg.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "sgz: cannot write " << *cfg.output_path << '\n';
      return kExitIo;
    }
    sgz::emit(result.table, cfg.format, out);
  } else {
    sgz::emit(result.table, cfg.format, std::cout);
  }

  if (result.failed_rows > 0) {
    std::cerr << "sgz: " << result.failed_rows << " row(s) reported errors\n";
    if (cfg.mode != sgz::Mode::sweep) return kExitNumerical;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guard-zone coexistence metrics, simulation and equilibrium solver"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  app.add_option("--preset", o.preset, "named preset (see the `presets` subcommand)");
  app.add_option("--out", o.out_path, "output file (default: stdout)");
  app.add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--seed", o.seed, "Monte Carlo seed, overriding the configuration");
  app.add_option("--threads", o.threads, "worker threads (0: all cores)");

  const std::pair<const char*, const char*> modes[] = {
      {"analytic", "closed-form metrics over the sweep"},
      {"mc", "Monte Carlo estimates over the sweep"},
      {"validate", "closed form against Monte Carlo, with per-point gaps"},
      {"nash", "best-response iteration trace"},
      {"sweep", "closed-form metrics and best responses over the sweep"},
  };
  for (const auto& [name, help] : modes) app.add_subcommand(name, help);
  auto* list = app.add_subcommand("presets", "list preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (list->parsed()) {
    for (const auto& name : sgz::preset_names()) std::cout << name << '\n';
    return 0;
  }
  for (const auto& [name, _] : modes) {
    if (app.got_subcommand(name)) {
      return run(o, std::string_view(name) == "mc" ? "montecarlo" : name);
    }
  }
  return kExitConfig;
}
