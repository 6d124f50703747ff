#include <cstdlib>
#include <fstream>
#include <sstream>

#include "experiment.hpp"
#include "fflab/error.hpp"

namespace fflab::runner {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) invalid("unknown key '" + key + "' in " + where);
  }
}

std::uint64_t unsigned_of(const json& v, const std::string& what) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    invalid(what + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool is_int_array(const json& v) {
  if (!v.is_array()) return false;
  for (const auto& e : v) {
    if (!e.is_number_integer()) return false;
  }
  return true;
}

void check_kind(const ParamSpec& spec, const json& v) {
  bool ok = false;
  switch (spec.kind) {
    case ParamKind::Int: ok = v.is_number_integer(); break;
    case ParamKind::Number: ok = v.is_number(); break;
    case ParamKind::Bool: ok = v.is_boolean(); break;
    case ParamKind::String: ok = v.is_string(); break;
    case ParamKind::IntList: ok = is_int_array(v); break;
    case ParamKind::NumberList:
      ok = v.is_array();
      for (const auto& e : v) ok = ok && e.is_number();
      break;
    case ParamKind::IntPairs:
      ok = v.is_array();
      for (const auto& e : v) ok = ok && is_int_array(e) && e.size() == 2;
      break;
    case ParamKind::Coeffs:
      ok = is_int_array(v);
      for (const auto& e : v) ok = ok && e.get<std::int64_t>() >= 0;
      break;
    case ParamKind::Terms:
      ok = v.is_array();
      for (const auto& e : v) ok = ok && is_int_array(e) && e.size() == 3 && e[0] >= 0 && e[1] >= 0 && e[2] >= 0;
      break;
  }
  if (!ok) invalid("parameter '" + spec.name + "' has the wrong type");
}

}  // namespace

std::uint64_t Params::u(const std::string& name) const {
  const auto v = j_.at(name).get<std::int64_t>();
  if (v < 0) invalid("parameter '" + name + "' must be non-negative");
  return static_cast<std::uint64_t>(v);
}

PolyBi Params::terms(const std::string& name) const {
  std::vector<Monomial> t;
  for (const auto& e : j_.at(name)) {
    t.push_back({e[0].get<unsigned>(), e[1].get<unsigned>(), e[2].get<Elem>()});
  }
  return PolyBi(std::move(t));
}

FieldPtr FieldCache::get(std::uint32_t p, std::uint32_t k) {
  std::lock_guard lock(mu_);
  auto& slot = fields_[{p, k}];
  if (!slot) slot = build_field(p, k);
  return slot;
}

const FieldPtr& Context::require_field() const {
  if (!field) invalid("experiment '" + config.experiment + "' needs a field");
  return field;
}

unsigned default_workers() {
  if (const char* env = std::getenv("FFLAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<unsigned>(v);
  }
  return 1;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  reject_unknown(j, {"field", "experiment", "params", "seed", "output", "workers"}, "config");

  RunConfig cfg;
  cfg.workers = default_workers();
  if (!j.contains("experiment") || !j["experiment"].is_string()) invalid("config needs a string 'experiment'");
  const std::string id = j["experiment"].get<std::string>();
  const Experiment* exp = find(id);
  if (!exp) throw Error(ErrorCode::UnknownExperiment, "unknown experiment '" + id + "'");
  cfg.experiment = exp->info.id;

  if (j.contains("field")) {
    const auto& f = j["field"];
    if (!f.is_object()) invalid("'field' must be an object");
    reject_unknown(f, {"p", "k", "modulus"}, "field");
    if (!f.contains("p")) invalid("field needs 'p'");
    FieldSpec spec;
    spec.p = static_cast<std::uint32_t>(unsigned_of(f["p"], "field.p"));
    if (f.contains("k")) spec.k = static_cast<std::uint32_t>(unsigned_of(f["k"], "field.k"));
    if (spec.k < 1) invalid("field.k must be at least 1");
    if (f.contains("modulus")) {
      if (!is_int_array(f["modulus"])) invalid("field.modulus must be an integer array");
      std::vector<Elem> m;
      for (const auto& c : f["modulus"]) m.push_back(static_cast<Elem>(unsigned_of(c, "field.modulus entry")));
      spec.modulus = std::move(m);
    }
    cfg.field = spec;
  } else if (exp->info.needs_field) {
    invalid("experiment '" + id + "' needs a 'field'");
  }

  json params = json::object();
  if (j.contains("params")) {
    if (!j["params"].is_object()) invalid("'params' must be an object");
    params = j["params"];
  }
  for (const auto& [key, value] : params.items()) {
    const ParamSpec* spec = nullptr;
    for (const auto& ps : exp->info.params) {
      if (ps.name == key) spec = &ps;
    }
    if (!spec) invalid("unknown parameter '" + key + "' for experiment '" + cfg.experiment + "'");
    check_kind(*spec, value);
  }
  for (const auto& ps : exp->info.params) {
    if (!params.contains(ps.name)) params[ps.name] = ps.default_value;
  }
  cfg.params = std::move(params);

  if (j.contains("seed")) cfg.seed = unsigned_of(j["seed"], "seed");
  if (j.contains("workers")) {
    const auto w = unsigned_of(j["workers"], "workers");
    if (w < 1 || w > 1024) invalid("workers must be in [1, 1024]");
    cfg.workers = static_cast<unsigned>(w);
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (!o.is_object()) invalid("'output' must be an object");
    reject_unknown(o, {"path", "format"}, "output");
    if (o.contains("path")) {
      if (!o["path"].is_string()) invalid("output.path must be a string");
      cfg.output_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      const auto fmt = o["format"].is_string() ? o["format"].get<std::string>() : std::string{};
      if (fmt == "csv") {
        cfg.format = OutputFormat::Csv;
      } else if (fmt == "jsonl") {
        cfg.format = OutputFormat::Jsonl;
      } else {
        invalid("output.format must be \"csv\" or \"jsonl\"");
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON in '") + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace fflab::runner
