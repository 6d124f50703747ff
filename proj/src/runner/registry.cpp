#include <sstream>

#include "experiment.hpp"

namespace fflab::runner {

namespace {

std::string kind_name(ParamKind k) {
  switch (k) {
    case ParamKind::Int: return "int";
    case ParamKind::Number: return "number";
    case ParamKind::Bool: return "bool";
    case ParamKind::String: return "string";
    case ParamKind::IntList: return "int[]";
    case ParamKind::NumberList: return "number[]";
    case ParamKind::IntPairs: return "[int,int][]";
    case ParamKind::Coeffs: return "coeffs";
    case ParamKind::Terms: return "[i,j,c][]";
  }
  return "?";
}

}  // namespace

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> all = [] {
    std::vector<Experiment> v;
    register_harmonic_experiments(v);
    register_expander_experiments(v);
    return v;
  }();
  return all;
}

const Experiment* find(std::string_view id) {
  for (const auto& e : registry()) {
    if (e.info.id == id) return &e;
    for (const auto& a : e.aliases) {
      if (a == id) return &e;
    }
  }
  return nullptr;
}

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const ExperimentInfo* find_experiment(std::string_view id) {
  const Experiment* e = find(id);
  return e ? &e->info : nullptr;
}

std::vector<std::string> row_columns(const ExperimentInfo& info) {
  std::vector<std::string> cols{"experiment", "p", "k", "q", "trial", "seed", "rng"};
  cols.insert(cols.end(), info.columns.begin(), info.columns.end());
  if (info.hard) cols.emplace_back("pass");
  return cols;
}

std::string list_text() {
  std::ostringstream out;
  for (const auto& e : registry()) {
    out << e.info.id << "  [" << (e.info.hard ? "hard-assert" : "monitor") << "]\n";
    out << "    " << e.info.anchor << "\n";
    if (!e.aliases.empty()) {
      out << "    aliases:";
      for (const auto& a : e.aliases) out << ' ' << a;
      out << "\n";
    }
    if (e.info.needs_field) out << "    field: required\n";
    for (const auto& p : e.info.params) {
      out << "    params." << p.name << " : " << kind_name(p.kind) << " = " << p.default_value.dump() << "  " << p.help
          << "\n";
    }
  }
  return out.str();
}

std::vector<std::uint32_t> primes_between(std::uint32_t lo, std::uint32_t hi) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t n = std::max(lo, 3u); n <= hi; ++n) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

std::vector<nlohmann::json> selftest_configs() {
  using nlohmann::json;
  auto field = [](int p, int k = 1) { return json{{"p", p}, {"k", k}}; };
  return {
      {{"experiment", "harmonic_identities"}, {"field", field(7)}, {"params", {{"axes", "add"}, {"trials", 20}}}},
      {{"experiment", "harmonic_identities"}, {"field", field(3, 2)}, {"params", {{"axes", "add,mul"}, {"trials", 20}}}},
      {{"experiment", "lemma21_fuzz"}, {"field", field(7)}, {"params", {{"trials", 100}}}},
      {{"experiment", "lemma21_fuzz"}, {"field", field(5)}, {"params", {{"axes", "mul,mul"}, {"trials", 50}}}},
      {{"experiment", "gauss_sum_sweep"}, {"params", {{"max_prime", 101}, {"salem_max_prime", 31}}}},
      {{"experiment", "weil_sweep"}, {"field", field(5)}, {"params", {{"variant", "additive"}}}},
      {{"experiment", "weil_sweep"}, {"field", field(5)}, {"params", {{"variant", "mixed"}}}},
      {{"experiment", "weil_sweep"}, {"field", field(5)}, {"params", {{"variant", "multiplicative"}}}},
      {{"experiment", "schwarz_zippel_fuzz"}, {"field", field(7)}, {"params", {{"trials", 500}}}},
      {{"experiment", "salem_corollary"}, {"field", field(7)}, {"params", {{"case", 1}, {"trials", 10}}}},
      {{"experiment", "salem_corollary"}, {"field", field(7)}, {"params", {{"case", 2}, {"trials", 10}}}},
      {{"experiment", "salem_corollary"}, {"field", field(7)}, {"params", {{"case", 3}, {"trials", 10}}}},
      {{"experiment", "thm22_precursor"}, {"field", field(5)}, {"params", {{"trials", 20}}}},
      {{"experiment", "vu_bad_set"}, {"field", field(5)}, {"params", {{"max_degree", 2}}}},
      {{"experiment", "thm210_chain"}, {"field", field(7)}, {"params", {{"trials", 10}}}},
      {{"experiment", "pr_ruzsa"}, {"params", {{"trials", 500}}}},
      {{"experiment", "garaev_chang"}, {"params", {{"cases", json::array({json::array({1009, 10})})}}}},
  };
}

}  // namespace fflab::runner
