#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "experiment.hpp"
#include "fflab/error.hpp"
#include "fflab/runner.hpp"

using namespace fflab;
using namespace fflab::runner;
using nlohmann::json;

namespace {

ErrorCode parse_error(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "config accepted: " << j.dump();
  return ErrorCode::PreconditionViolated;
}

std::string csv_of(RunConfig cfg, unsigned workers, RunOutcome* outcome = nullptr) {
  cfg.workers = workers;
  std::ostringstream out;
  CsvSink sink(out);
  const auto r = execute(cfg, sink);
  if (outcome) *outcome = r;
  EXPECT_EQ(r.exit_code, 0) << r.diagnostic;
  return out.str();
}

}  // namespace

TEST(Registry, HasAtLeastTwelveUniqueExperiments) {
  const auto& all = experiments();
  EXPECT_GE(all.size(), 12u);
  std::set<std::string> ids;
  for (const auto& e : all) {
    EXPECT_TRUE(ids.insert(e.id).second) << e.id;
    EXPECT_FALSE(e.anchor.empty()) << e.id;
    EXPECT_FALSE(e.columns.empty()) << e.id;
  }
}

TEST(Registry, ListingContents) {
  const auto text = list_text();
  EXPECT_NE(text.find("thm31_monitor"), std::string::npos);
  EXPECT_NE(text.find("|A+A²| ≳ |A|^{147/146}"), std::string::npos);
  EXPECT_NE(text.find("lemma21_fuzz  [hard-assert]"), std::string::npos);
  const auto* t31 = find_experiment("thm31_monitor");
  ASSERT_NE(t31, nullptr);
  EXPECT_FALSE(t31->hard);
  EXPECT_NE(t31->anchor.find("|A+A²| ≳ |A|^{147/146}"), std::string::npos);
  const auto* l21 = find_experiment("lemma21_fuzz");
  ASSERT_NE(l21, nullptr);
  EXPECT_TRUE(l21->hard);
  EXPECT_EQ(find_experiment("thm21_fuzz"), l21);
  EXPECT_EQ(find_experiment("no_such_thing"), nullptr);
}

TEST(Registry, RowColumns) {
  const auto cols = row_columns(*find_experiment("pr_ruzsa"));
  ASSERT_GE(cols.size(), 8u);
  EXPECT_EQ(cols.front(), "experiment");
  EXPECT_EQ(cols[6], "rng");
  EXPECT_EQ(cols.back(), "pass");
  const auto mon = row_columns(*find_experiment("zoo_monitor"));
  EXPECT_NE(mon.back(), "pass");
}

TEST(Config, DefaultsAreFilled) {
  const auto cfg = parse_config({{"experiment", "lemma21_fuzz"}, {"field", {{"p", 7}}}, {"seed", 42}});
  EXPECT_EQ(cfg.experiment, "lemma21_fuzz");
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.params.at("trials").get<int>(), 1000);
  EXPECT_EQ(cfg.params.at("pivot").get<std::string>(), "all");
  EXPECT_EQ(cfg.format, OutputFormat::Csv);
  ASSERT_TRUE(cfg.field.has_value());
  EXPECT_EQ(cfg.field->p, 7u);
}

TEST(Config, Rejections) {
  EXPECT_EQ(parse_error({{"experiment", "pr_ruzsa"}, {"colour", 1}}), ErrorCode::ConfigInvalid);
  EXPECT_EQ(parse_error({{"experiment", "pr_ruzsa"}, {"params", {{"trails", 3}}}}), ErrorCode::ConfigInvalid);
  EXPECT_EQ(parse_error({{"experiment", "pr_ruzsa"}, {"params", {{"trials", "many"}}}}), ErrorCode::ConfigInvalid);
  EXPECT_EQ(parse_error({{"experiment", "pr_ruzsa"}, {"params", {{"primes", json::array({1.5})}}}}),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(parse_error({{"experiment", "lemma21_fuzz"}}), ErrorCode::ConfigInvalid);
  EXPECT_EQ(parse_error({{"experiment", "lemma21_fuzz"}, {"field", {{"p", 7}, {"q", 7}}}}), ErrorCode::ConfigInvalid);
  EXPECT_EQ(parse_error({{"experiment", "pr_ruzsa"}, {"workers", 0}}), ErrorCode::ConfigInvalid);
  EXPECT_EQ(parse_error({{"experiment", "pr_ruzsa"}, {"output", {{"format", "xml"}}}}), ErrorCode::ConfigInvalid);
  EXPECT_EQ(parse_error({{"params", json::object()}}), ErrorCode::ConfigInvalid);
  EXPECT_EQ(parse_error(json::array()), ErrorCode::ConfigInvalid);
}

TEST(Config, UnknownExperimentIsNamed) {
  try {
    parse_config({{"experiment", "thm99_monitor"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownExperiment);
    EXPECT_NE(std::string(e.what()).find("thm99_monitor"), std::string::npos);
  }
}

TEST(Config, LoadErrors) {
  try {
    load_config("/nonexistent/dir/config.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
  const std::string path = testing::TempDir() + "fflab_bad.json";
  std::ofstream(path) << "{ \"experiment\": ";
  try {
    load_config(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
  }
  std::remove(path.c_str());
}

TEST(Run, IncidenceFuzzExample) {
  const auto cfg = parse_config(
      {{"experiment", "thm21_fuzz"}, {"field", {{"p", 7}}}, {"seed", 42}, {"params", {{"trials", 1000}}}});
  TableSink sink;
  const auto r = execute(cfg, sink);
  EXPECT_EQ(r.exit_code, 0) << r.diagnostic;
  EXPECT_EQ(r.rows, 1000u);
  EXPECT_EQ(r.failures, 0u);
  ASSERT_EQ(sink.table.rows.size(), 1000u);
  for (std::size_t i = 0; i < sink.table.rows.size(); ++i) {
    EXPECT_TRUE(sink.table.flag(i, "pass"));
    EXPECT_EQ(sink.table.number(i, "trial"), static_cast<double>(i));
  }
}

TEST(Run, ConfigErrorsDuringPrepareExitTwo) {
  const auto cfg = parse_config(
      {{"experiment", "lemma21_fuzz"}, {"field", {{"p", 7}}}, {"params", {{"axes", "add,sideways"}}}});
  TableSink sink;
  const auto r = execute(cfg, sink);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.diagnostic.find("axes"), std::string::npos);
}

TEST(Run, UnwritableOutputExitsThree) {
  auto cfg = parse_config({{"experiment", "garaev_chang"}});
  cfg.output_path = "/nonexistent/dir/out.csv";
  std::ostringstream fallback;
  EXPECT_EQ(run(cfg, fallback).exit_code, 3);
}

TEST(Run, FailingRowsExitOneWithDiagnostic) {
  Experiment fake;
  fake.info = {"fake_hard", "none", true, false, {}, {"value"}};
  fake.trials = [](const Context&) { return std::size_t{6}; };
  fake.run = [](const Context& c, std::uint64_t t, std::mt19937_64&) {
    const auto f = c.fields.get(5);
    return std::vector<TrialRow>{TrialRow(*f, {cnt(t)}, t != 3 && t != 4)};
  };
  RunConfig cfg;
  cfg.experiment = "fake_hard";
  for (unsigned w : {1u, 3u}) {
    cfg.workers = w;
    TableSink sink;
    const auto r = execute_experiment(fake, cfg, sink);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(r.failures, 2u);
    EXPECT_EQ(r.rows, 6u);
    EXPECT_NE(r.diagnostic.find("trial 3"), std::string::npos) << r.diagnostic;
    EXPECT_NE(r.diagnostic.find("pass=false"), std::string::npos) << r.diagnostic;
  }
}

TEST(Run, TrialExceptionExitsOne) {
  Experiment fake;
  fake.info = {"fake_throw", "none", true, false, {}, {"value"}};
  fake.trials = [](const Context&) { return std::size_t{10}; };
  fake.run = [](const Context& c, std::uint64_t t, std::mt19937_64&) {
    if (t == 7) throw Error(ErrorCode::EmptySet, "boom");
    return std::vector<TrialRow>{TrialRow(*c.fields.get(5), {cnt(t)})};
  };
  RunConfig cfg;
  cfg.experiment = "fake_throw";
  cfg.workers = 2;
  TableSink sink;
  const auto r = execute_experiment(fake, cfg, sink);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.diagnostic.find("trial 7 raised"), std::string::npos) << r.diagnostic;
  EXPECT_EQ(r.rows, 7u);
}

TEST(Determinism, WorkerCountDoesNotChangeOutput) {
  const std::vector<json> configs = {
      {{"experiment", "lemma21_fuzz"}, {"field", {{"p", 3}, {"k", 2}}}, {"seed", 7}, {"params", {{"trials", 200}}}},
      {{"experiment", "thm31_monitor"}, {"seed", 3}, {"params", {{"trials", 30}}}},
      {{"experiment", "zoo_monitor"}, {"seed", 11}, {"params", {{"primes", json::array({31})}, {"samples", 3}}}},
      {{"experiment", "salem_corollary"}, {"field", {{"p", 11}}}, {"seed", 5}, {"params", {{"case", 3}, {"trials", 12}}}},
  };
  for (const auto& j : configs) {
    const auto cfg = parse_config(j);
    const auto one = csv_of(cfg, 1);
    EXPECT_EQ(one, csv_of(cfg, 4)) << j.dump();
    EXPECT_EQ(one, csv_of(cfg, 1)) << j.dump();
  }
}

TEST(Determinism, SeedChangesSamples) {
  auto cfg = parse_config({{"experiment", "pr_ruzsa"}, {"seed", 1}, {"params", {{"trials", 20}}}});
  const auto a = csv_of(cfg, 1);
  cfg.seed = 2;
  EXPECT_NE(a, csv_of(cfg, 1));
}

TEST(Output, CsvRoundTrip) {
  const auto cfg = parse_config({{"experiment", "weil_sweep"},
                                 {"field", {{"p", 5}}},
                                 {"params", {{"variant", "multiplicative"}}}});
  std::ostringstream out;
  CsvSink csv(out);
  TableSink table;
  TeeSink tee(csv, table);
  const auto r = execute(cfg, tee);
  ASSERT_EQ(r.exit_code, 0) << r.diagnostic;
  const auto records = parse_csv(out.str());
  ASSERT_EQ(records.size(), table.table.rows.size() + 1);
  EXPECT_EQ(records[0], table.table.columns);
  for (std::size_t i = 0; i < table.table.rows.size(); ++i) {
    const auto& row = table.table.rows[i];
    ASSERT_EQ(records[i + 1].size(), row.size());
    for (std::size_t c = 0; c < row.size(); ++c) EXPECT_EQ(records[i + 1][c], format_value(row[c]));
    if (const auto* d = std::get_if<double>(&row[table.table.column("max_magnitude")])) {
      EXPECT_EQ(std::stod(records[i + 1][table.table.column("max_magnitude")]), *d);
    }
  }
}

TEST(Output, CsvQuotingAndValues) {
  EXPECT_EQ(format_value(Value{std::int64_t{-3}}), "-3");
  EXPECT_EQ(format_value(Value{true}), "true");
  EXPECT_EQ(format_value(Value{0.1}), "0.1");
  std::ostringstream out;
  CsvSink sink(out);
  sink.header({"a", "b"});
  sink.row({Value{std::string("x,y")}, Value{std::string("say \"hi\"")}});
  EXPECT_EQ(out.str(), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
  const auto back = parse_csv(out.str());
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1][0], "x,y");
  EXPECT_EQ(back[1][1], "say \"hi\"");
}

TEST(Output, JsonlLinesParse) {
  auto cfg = parse_config({{"experiment", "garaev_chang"}});
  cfg.format = OutputFormat::Jsonl;
  std::ostringstream out;
  JsonlSink sink(out);
  ASSERT_EQ(execute(cfg, sink).exit_code, 0);
  std::istringstream in(out.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = json::parse(line);
    EXPECT_EQ(j.at("experiment"), "garaev_chang");
    EXPECT_TRUE(j.at("pass").get<bool>());
    ++n;
  }
  EXPECT_EQ(n, 3);
}

TEST(Selftest, EveryHardExperimentIsCovered) {
  std::set<std::string> covered;
  for (const auto& j : selftest_configs()) {
    const auto cfg = parse_config(j);
    TableSink sink;
    const auto r = execute(cfg, sink);
    EXPECT_EQ(r.exit_code, 0) << j.dump() << ": " << r.diagnostic;
    covered.insert(cfg.experiment);
  }
  for (const auto& e : experiments()) {
    if (e.hard) {
      EXPECT_TRUE(covered.count(e.id)) << e.id;
    }
  }
}
