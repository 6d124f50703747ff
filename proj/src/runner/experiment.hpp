#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <tuple>

#include "fflab/poly.hpp"
#include "fflab/runner.hpp"

namespace fflab::runner {

/// Typed view of a validated parameter object.
class Params {
 public:
  explicit Params(nlohmann::json j) : j_(std::move(j)) {}
  std::int64_t i(const std::string& name) const { return j_.at(name).get<std::int64_t>(); }
  std::uint64_t u(const std::string& name) const;  // throws ConfigInvalid when negative
  double d(const std::string& name) const { return j_.at(name).get<double>(); }
  bool b(const std::string& name) const { return j_.at(name).get<bool>(); }
  std::string s(const std::string& name) const { return j_.at(name).get<std::string>(); }
  std::vector<std::int64_t> ilist(const std::string& name) const { return j_.at(name).get<std::vector<std::int64_t>>(); }
  std::vector<double> dlist(const std::string& name) const { return j_.at(name).get<std::vector<double>>(); }
  std::vector<Elem> coeffs(const std::string& name) const { return j_.at(name).get<std::vector<Elem>>(); }
  PolyBi terms(const std::string& name) const;
  const nlohmann::json& raw() const { return j_; }

 private:
  nlohmann::json j_;
};

/// Thread-safe cache of prime fields and the configured field.
class FieldCache {
 public:
  FieldPtr get(std::uint32_t p, std::uint32_t k = 1);

 private:
  std::mutex mu_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> fields_;
};

struct Context {
  const RunConfig& config;
  Params params;
  FieldPtr field;  // null when the config has no field
  FieldCache& fields;
  std::shared_ptr<const void> state;

  template <class T>
  const T& get() const {
    return *static_cast<const T*>(state.get());
  }
  /// The configured field; throws ConfigInvalid when absent.
  const FieldPtr& require_field() const;
};

struct TrialRow {
  std::uint32_t p = 0;
  std::uint32_t k = 1;
  std::uint64_t q = 0;
  std::vector<Value> values;
  bool pass = true;

  TrialRow() = default;
  TrialRow(const FieldCtx& f, std::vector<Value> v, bool ok = true)
      : p(f.p()), k(f.k()), q(f.q()), values(std::move(v)), pass(ok) {}
};

struct Experiment {
  ExperimentInfo info;
  std::vector<std::string> aliases;
  std::function<std::shared_ptr<const void>(const Context&)> prepare;
  std::function<std::size_t(const Context&)> trials;
  std::function<std::vector<TrialRow>(const Context&, std::uint64_t trial, std::mt19937_64& rng)> run;
};

void register_harmonic_experiments(std::vector<Experiment>& out);
void register_expander_experiments(std::vector<Experiment>& out);

const std::vector<Experiment>& registry();
/// execute() for an experiment that need not be registered.
RunOutcome execute_experiment(const Experiment& experiment, const RunConfig& config, RowSink& sink);
const Experiment* find(std::string_view id);

/// Odd primes in [lo, hi].
std::vector<std::uint32_t> primes_between(std::uint32_t lo, std::uint32_t hi);

inline ParamSpec param(std::string name, ParamKind kind, nlohmann::json def, std::string help) {
  return ParamSpec{std::move(name), kind, std::move(def), std::move(help)};
}

inline Value num(double v) { return Value{v}; }
inline Value cnt(std::uint64_t v) { return Value{static_cast<std::int64_t>(v)}; }
inline Value str(std::string v) { return Value{std::move(v)}; }

}  // namespace fflab::runner
