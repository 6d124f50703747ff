#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fflab/error.hpp"
#include "fflab/runner.hpp"

namespace {

using namespace fflab::runner;

int config_error_code(const fflab::Error& e) { return e.code() == fflab::ErrorCode::IoError ? 3 : 2; }

int cmd_run(const std::string& path, const std::optional<std::string>& out, const std::optional<std::string>& format,
            const std::optional<unsigned>& workers, const std::optional<std::uint64_t>& seed) {
  RunConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const fflab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_error_code(e);
  }
  if (out) cfg.output_path = *out;
  if (format) cfg.format = *format == "jsonl" ? OutputFormat::Jsonl : OutputFormat::Csv;
  if (workers) cfg.workers = *workers;
  if (seed) cfg.seed = *seed;
  const auto outcome = run(cfg, std::cout);
  if (outcome.exit_code != 0) std::cerr << "error: " << outcome.diagnostic << "\n";
  return outcome.exit_code;
}

int cmd_selftest(const std::optional<unsigned>& workers) {
  int worst = 0;
  for (const auto& j : selftest_configs()) {
    const auto id = j.at("experiment").get<std::string>();
    RunOutcome outcome;
    try {
      auto cfg = parse_config(j);
      if (workers) cfg.workers = *workers;
      TableSink sink;
      outcome = execute(cfg, sink);
    } catch (const fflab::Error& e) {
      outcome.exit_code = config_error_code(e);
      outcome.diagnostic = e.what();
    }
    std::cout << (outcome.exit_code == 0 ? "ok    " : "FAIL  ") << id << "  " << j.value("field", nlohmann::json{}).dump()
              << "  rows=" << outcome.rows;
    if (outcome.exit_code != 0) std::cout << "  " << outcome.diagnostic;
    std::cout << "\n";
    if (outcome.exit_code != 0 && (worst == 0 || outcome.exit_code < worst)) worst = outcome.exit_code;
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-field Fourier analysis and expander experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out, format;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;

  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config file");
  run_cmd->add_option("config", config_path, "Config file")->required();
  run_cmd->add_option("--out", out, "Output file (overrides the config)");
  run_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  run_cmd->add_option("--workers", workers, "Worker threads (overrides config and FFLAB_WORKERS)")
      ->check(CLI::Range(1u, 1024u));
  run_cmd->add_option("--seed", seed, "Master seed (overrides the config)");

  auto* list_cmd = app.add_subcommand("list", "List registered experiments");
  auto* self_cmd = app.add_subcommand("selftest", "Run every hard-assert experiment at small parameters");
  self_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*list_cmd) {
    std::cout << list_text();
    return 0;
  }
  if (*self_cmd) return cmd_selftest(workers);
  return cmd_run(config_path, out, format, workers, seed);
}
