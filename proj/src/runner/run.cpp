#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <fstream>
#include <optional>
#include <thread>

#include "experiment.hpp"
#include "fflab/error.hpp"
#include "fflab/sampling.hpp"

namespace fflab::runner {

namespace {

struct Slot {
  bool done = false;
  std::vector<TrialRow> rows;
  std::optional<std::string> error;
};

}  // namespace

RunOutcome execute(const RunConfig& config, RowSink& sink) {
  const Experiment* exp = find(config.experiment);
  if (!exp) {
    RunOutcome outcome;
    outcome.exit_code = 2;
    outcome.diagnostic = "unknown experiment '" + config.experiment + "'";
    return outcome;
  }
  return execute_experiment(*exp, config, sink);
}

RunOutcome execute_experiment(const Experiment& experiment, const RunConfig& config, RowSink& sink) {
  RunOutcome outcome;
  const Experiment* exp = &experiment;

  FieldCache cache;
  std::optional<Context> ctx;
  std::size_t trials = 0;
  try {
    FieldPtr field;
    if (config.field) field = build_field(config.field->p, config.field->k, config.field->modulus);
    ctx.emplace(Context{config, Params(config.params), field, cache, nullptr});
    if (exp->prepare) ctx->state = exp->prepare(*ctx);
    trials = exp->trials(*ctx);
  } catch (const Error& e) {
    outcome.exit_code = e.code() == ErrorCode::IoError ? 3 : 2;
    outcome.diagnostic = e.what();
    return outcome;
  } catch (const nlohmann::json::exception& e) {
    outcome.exit_code = 2;
    outcome.diagnostic = e.what();
    return outcome;
  }

  const auto columns = row_columns(exp->info);
  sink.header(columns);

  std::vector<Slot> slots(trials);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials || stop.load()) return;
      Slot local;
      try {
        auto rng = trial_rng(config.seed, t);
        local.rows = exp->run(*ctx, t, rng);
      } catch (const std::exception& e) {
        local.error = e.what();
        stop.store(true);
      }
      {
        std::lock_guard lock(mu);
        slots[t].rows = std::move(local.rows);
        slots[t].error = std::move(local.error);
        slots[t].done = true;
      }
      cv.notify_all();
    }
  };

  const auto nworkers = static_cast<unsigned>(std::clamp<std::size_t>(trials, 1, std::max(config.workers, 1u)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(worker);

  for (std::size_t t = 0; t < trials; ++t) {
    Slot slot;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return slots[t].done; });
      slot = std::move(slots[t]);
      slots[t] = Slot{};
    }
    if (!slot.error) {
      for (const auto& r : slot.rows) {
        if (r.values.size() + 7 + (exp->info.hard ? 1 : 0) != columns.size()) {
          slot.error = exp->info.id + " emitted a row of the wrong width";
        }
      }
    }
    if (slot.error) {
      stop.store(true);
      for (auto& th : pool) th.join();
      outcome.exit_code = 1;
      outcome.diagnostic = "trial " + std::to_string(t) + " raised: " + *slot.error;
      return outcome;
    }
    for (auto& r : slot.rows) {
      std::vector<Value> values;
      values.reserve(columns.size());
      values.emplace_back(exp->info.id);
      values.push_back(cnt(r.p));
      values.push_back(cnt(r.k));
      values.push_back(cnt(r.q));
      values.push_back(cnt(t));
      values.push_back(cnt(config.seed));
      values.emplace_back(std::string(kGeneratorName));
      for (auto& v : r.values) values.push_back(std::move(v));
      if (exp->info.hard) values.emplace_back(r.pass);
      if (exp->info.hard && !r.pass) {
        if (outcome.failures == 0) {
          std::string text = "first failing row (trial " + std::to_string(t) + "):";
          for (std::size_t i = 0; i < columns.size(); ++i) text += " " + columns[i] + "=" + format_value(values[i]);
          outcome.diagnostic = text;
        }
        ++outcome.failures;
      }
      sink.row(values);
      ++outcome.rows;
    }
  }
  for (auto& th : pool) th.join();
  if (outcome.failures > 0) outcome.exit_code = 1;
  return outcome;
}

RunOutcome run(const RunConfig& config, std::ostream& fallback) {
  std::ofstream file;
  std::ostream* out = &fallback;
  if (!config.output_path.empty()) {
    file.open(config.output_path, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!file) {
      RunOutcome o;
      o.exit_code = 3;
      o.diagnostic = "cannot open output file '" + config.output_path + "'";
      return o;
    }
    out = &file;
  }
  RunOutcome outcome;
  if (config.format == OutputFormat::Jsonl) {
    JsonlSink sink(*out);
    outcome = execute(config, sink);
  } else {
    CsvSink sink(*out);
    outcome = execute(config, sink);
  }
  out->flush();
  if (!*out) {
    outcome.exit_code = 3;
    outcome.diagnostic = "write to output failed";
  }
  return outcome;
}

}  // namespace fflab::runner
