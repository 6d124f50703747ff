#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fflab/field.hpp"

namespace fflab::runner {

/// One cell of a result row.
using Value = std::variant<std::int64_t, double, bool, std::string>;

enum class ParamKind { Int, Number, Bool, String, IntList, NumberList, IntPairs, Coeffs, Terms };

struct ParamSpec {
  std::string name;
  ParamKind kind;
  nlohmann::json default_value;
  std::string help;
};

struct ExperimentInfo {
  std::string id;
  std::string anchor;  // claim this experiment exercises
  bool hard = false;   // hard-asserting (pass column, exit status) vs. ratio monitor
  bool needs_field = false;
  std::vector<ParamSpec> params;
  std::vector<std::string> columns;  // experiment-specific columns
};

enum class OutputFormat { Csv, Jsonl };

struct FieldSpec {
  std::uint32_t p = 0;
  std::uint32_t k = 1;
  std::optional<std::vector<Elem>> modulus;
};

struct RunConfig {
  std::optional<FieldSpec> field;
  std::string experiment;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::Csv;
  unsigned workers = 1;
};

/// Parses and validates a config object against the registry. Unknown keys,
/// unknown parameters and ill-typed values throw ConfigInvalid; an unknown
/// experiment id throws UnknownExperiment. Missing parameters get defaults.
RunConfig parse_config(const nlohmann::json& j);
/// Throws IoError when the file cannot be read, ConfigInvalid on bad JSON.
RunConfig load_config(const std::string& path);

/// Default worker count: FFLAB_WORKERS when set and positive, otherwise 1.
unsigned default_workers();

const std::vector<ExperimentInfo>& experiments();
/// Accepts registered ids and their aliases; nullptr when unknown.
const ExperimentInfo* find_experiment(std::string_view id);
/// Full column list of a result row: the common prefix, the experiment's own
/// columns and, for hard experiments, a trailing "pass".
std::vector<std::string> row_columns(const ExperimentInfo& info);
/// Human-readable registry listing.
std::string list_text();
/// Small configurations covering every hard-assert experiment.
std::vector<nlohmann::json> selftest_configs();

class RowSink {
 public:
  virtual ~RowSink() = default;
  virtual void header(const std::vector<std::string>& columns) = 0;
  virtual void row(const std::vector<Value>& values) = 0;
};

/// Comma-separated, '.' decimal, shortest round-trip doubles, RFC 4180 quoting.
class CsvSink : public RowSink {
 public:
  explicit CsvSink(std::ostream& out) : out_(out) {}
  void header(const std::vector<std::string>& columns) override;
  void row(const std::vector<Value>& values) override;

 private:
  std::ostream& out_;
};

/// One JSON object per line, keys in column order.
class JsonlSink : public RowSink {
 public:
  explicit JsonlSink(std::ostream& out) : out_(out) {}
  void header(const std::vector<std::string>& columns) override;
  void row(const std::vector<Value>& values) override;

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  std::size_t column(std::string_view name) const;  // throws PreconditionViolated
  double number(std::size_t row, std::string_view name) const;
  std::string text(std::size_t row, std::string_view name) const;
  bool flag(std::size_t row, std::string_view name) const;
};

class TableSink : public RowSink {
 public:
  void header(const std::vector<std::string>& columns) override { table.columns = columns; }
  void row(const std::vector<Value>& values) override { table.rows.push_back(values); }
  Table table;
};

/// Sends every row to both sinks.
class TeeSink : public RowSink {
 public:
  TeeSink(RowSink& a, RowSink& b) : a_(a), b_(b) {}
  void header(const std::vector<std::string>& columns) override;
  void row(const std::vector<Value>& values) override;

 private:
  RowSink& a_;
  RowSink& b_;
};

std::string format_value(const Value& v);
/// Splits CSV text into records of unquoted fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

struct RunOutcome {
  int exit_code = 0;  // 0 all pass, 1 assertion failure, 2 config error, 3 I/O error
  std::size_t rows = 0;
  std::size_t failures = 0;
  std::string diagnostic;  // first failing row or the error message
};

/// Runs the configured experiment, streaming rows to the sink in trial order.
RunOutcome execute(const RunConfig& config, RowSink& sink);
/// Runs into config.output_path (or the given stream when the path is empty)
/// in the configured format.
RunOutcome run(const RunConfig& config, std::ostream& fallback);

}  // namespace fflab::runner
