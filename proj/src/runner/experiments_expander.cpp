#include <algorithm>
#include <cmath>
#include <numeric>

#include "experiment.hpp"
#include "fflab/error.hpp"
#include "fflab/expander.hpp"
#include "fflab/incidence.hpp"
#include "fflab/sampling.hpp"

namespace fflab::runner {

namespace {

using nlohmann::json;
using K = ParamKind;

std::uint64_t uniform_between(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + uniform_below(rng, hi - lo + 1);
}

std::vector<std::uint32_t> prime_list(const Context& c, const std::string& name) {
  std::vector<std::uint32_t> out;
  for (auto p : c.params.ilist(name)) {
    if (p < 3 || p > (std::int64_t{1} << 20) || !is_prime(static_cast<std::uint64_t>(p))) {
      throw Error(ErrorCode::ConfigInvalid, "'" + name + "' must list odd primes below 2^20");
    }
    out.push_back(static_cast<std::uint32_t>(p));
  }
  if (out.empty()) throw Error(ErrorCode::ConfigInvalid, "'" + name + "' is empty");
  return out;
}

ElemSet sample_set(const FieldCtx& f, std::mt19937_64& rng, std::size_t m, bool nonzero) {
  const auto universe = nonzero ? nonzero_elements(f) : all_elements(f);
  return random_subset(rng, universe, std::min(m, universe.size()));
}

std::vector<ElemPair> grid(std::span<const Elem> a, std::span<const Elem> b) {
  std::vector<ElemPair> out;
  out.reserve(a.size() * b.size());
  for (const auto x : a) {
    for (const auto y : b) out.emplace_back(x, y);
  }
  return out;
}

std::vector<ElemPair> to_pairs(const FieldCtx& f, const IndexSet& idx) {
  std::vector<ElemPair> out;
  out.reserve(idx.size());
  for (const auto i : idx) out.emplace_back(static_cast<Elem>(i / f.q()), static_cast<Elem>(i % f.q()));
  return out;
}

ElemSet without_zero(ElemSet s) {
  if (!s.empty() && s.front() == 0) s.erase(s.begin());
  return s;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio(double lhs, double rhs) { return rhs > 0 ? lhs / rhs : std::numeric_limits<double>::infinity(); }

/// Nonconstant monomials x^i y^j with i + j <= k, in (i, j) order.
std::vector<std::pair<unsigned, unsigned>> monomials(unsigned k) {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (unsigned i = 0; i <= k; ++i) {
    for (unsigned j = 0; i + j <= k; ++j) {
      if (i + j > 0) out.emplace_back(i, j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct BadSetPlan {
  bool exhaustive = true;
  std::vector<std::pair<unsigned, unsigned>> monos;
  std::vector<std::vector<Elem>> tables;  // monomial value tables, x * q + y
  std::vector<std::pair<std::size_t, std::uint64_t>> blocks;  // (leading monomial, high digits)
  std::size_t high_digits_cap = 2;
};

Experiment vu_bad_set() {
  Experiment e;
  e.info = {"vu_bad_set",
            "Theorem 2.8 proof: \"there are at least q-(k-1) elements a_i\" such that P - a_i has no linear factor",
            true,
            true,
            {param("mode", K::String, "exhaustive", "exhaustive or random"),
             param("max_degree", K::Int, 3, "total degree cap, below q"),
             param("trials", K::Int, 1000, "random polynomials (random mode)")},
            {"mode", "leading", "block", "polys", "degenerate", "max_delta", "worst_poly", "worst_degree",
             "worst_excess", "violations"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    const auto& f = *c.require_field();
    auto plan = std::make_shared<BadSetPlan>();
    const auto mode = c.params.s("mode");
    if (mode != "exhaustive" && mode != "random") throw Error(ErrorCode::ConfigInvalid, "mode must be exhaustive or random");
    plan->exhaustive = mode == "exhaustive";
    const auto k = c.params.u("max_degree");
    if (k < 1 || k >= f.q()) throw Error(ErrorCode::ConfigInvalid, "need 1 <= max_degree < q");
    plan->monos = monomials(static_cast<unsigned>(k));
    if (!plan->exhaustive) return plan;
    if (std::pow(static_cast<double>(f.q()), static_cast<double>(plan->monos.size() - 1)) > 1e9) {
      throw Error(ErrorCode::ConfigInvalid, "exhaustive enumeration too large; use random mode");
    }
    for (const auto& [i, j] : plan->monos) {
      std::vector<Elem> t(std::size_t{f.q()} * f.q());
      for (Elem x = 0; x < f.q(); ++x) {
        for (Elem y = 0; y < f.q(); ++y) t[std::size_t{x} * f.q() + y] = f.mul(f.pow(x, i), f.pow(y, j));
      }
      plan->tables.push_back(std::move(t));
    }
    const std::size_t n = plan->monos.size();
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t free = n - 1 - s;
      std::uint64_t blocks = 1;
      for (std::size_t h = 0; h < std::min(free, plan->high_digits_cap); ++h) blocks *= f.q();
      for (std::uint64_t b = 0; b < blocks; ++b) plan->blocks.emplace_back(s, b);
    }
    return plan;
  };
  e.trials = [](const Context& c) {
    const auto& plan = c.get<BadSetPlan>();
    return plan.exhaustive ? plan.blocks.size() : c.params.u("trials");
  };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& plan = c.get<BadSetPlan>();
    const auto& f = *c.field;
    const Elem q = f.q();
    const std::size_t n = plan.monos.size();

    if (!plan.exhaustive) {
      PolyBi poly;
      while (poly.degree() < 1) {
        std::vector<Monomial> terms;
        for (const auto& [i, j] : plan.monos) terms.push_back({i, j, static_cast<Elem>(uniform_below(rng, q))});
        poly = PolyBi(std::move(terms));
      }
      const auto scan = scan_lines(f, evaluation_table(f, poly));
      const bool viol = !scan.degenerate && static_cast<int>(scan.delta.size()) > poly.degree() - 1;
      return std::vector<TrialRow>{TrialRow(
          f,
          {str("random"), str(""), cnt(0), cnt(1), cnt(scan.degenerate ? 1 : 0),
           cnt(scan.degenerate ? 0 : scan.delta.size()), str(term_string(poly)), cnt(poly.degree()),
           num(scan.degenerate ? kNaN : static_cast<double>(scan.delta.size()) - (poly.degree() - 1)), cnt(viol ? 1 : 0)},
          !viol)};
    }

    // Coefficients c[s] = 1, c[r] = 0 for r < s, c[r] free for r > s; the top
    // free digits are fixed by the block index and the rest run as an odometer.
    const auto [s, block] = plan.blocks[t];
    const std::size_t free = n - 1 - s;
    const std::size_t high = std::min(free, plan.high_digits_cap);
    std::vector<Elem> coef(n, 0);
    coef[s] = 1;
    std::uint64_t b = block;
    for (std::size_t h = 0; h < high; ++h, b /= q) coef[n - 1 - h] = static_cast<Elem>(b % q);
    const std::size_t low_begin = s + 1, low_end = n - high;

    std::vector<Elem> values(std::size_t{q} * q, 0);
    for (std::size_t r = 0; r < n; ++r) {
      if (coef[r] == 0) continue;
      for (std::size_t v = 0; v < values.size(); ++v) values[v] = f.add(values[v], f.mul(coef[r], plan.tables[r][v]));
    }

    std::uint64_t polys = 0, degenerate = 0, violations = 0;
    std::size_t max_delta = 0;
    int worst_degree = 0, worst_excess = 0;
    std::vector<Elem> worst;
    for (;;) {
      int degree = 0;
      for (std::size_t r = 0; r < n; ++r) {
        if (coef[r] != 0) degree = std::max(degree, static_cast<int>(plan.monos[r].first + plan.monos[r].second));
      }
      const auto scan = scan_lines(f, values);
      ++polys;
      if (scan.degenerate) {
        ++degenerate;
      } else {
        const int excess = static_cast<int>(scan.delta.size()) - (degree - 1);
        violations += excess > 0;
        max_delta = std::max(max_delta, scan.delta.size());
        if (worst.empty() || excess > worst_excess) {
          worst_excess = excess;
          worst = coef;
          worst_degree = degree;
        }
      }
      std::size_t r = low_begin;
      for (; r < low_end; ++r) {
        const Elem next = coef[r] + 1 == q ? 0 : coef[r] + 1;
        const Elem delta = f.sub(next, coef[r]);
        const auto& table = plan.tables[r];
        for (std::size_t v = 0; v < values.size(); ++v) values[v] = f.add(values[v], f.mul(delta, table[v]));
        coef[r] = next;
        if (next != 0) break;
      }
      if (r == low_end) break;
    }
    std::vector<Monomial> terms;
    for (std::size_t r = 0; r < n; ++r) terms.push_back({plan.monos[r].first, plan.monos[r].second, worst.empty() ? 0 : worst[r]});
    const auto& lead = plan.monos[s];
    return std::vector<TrialRow>{TrialRow(
        f,
        {str("exhaustive"), str(std::to_string(lead.first) + ":" + std::to_string(lead.second)), cnt(block), cnt(polys),
         cnt(degenerate), cnt(max_delta), str(term_string(PolyBi(std::move(terms)))), cnt(worst_degree),
         num(worst.empty() ? kNaN : worst_excess), cnt(violations)},
        violations == 0)};
  };
  return e;
}

struct ChainPlan {
  GroupSpec spec;
  PolyBi poly;
  std::vector<IndexSet> levels;  // f_b for each b
  std::vector<double> norms;     // ||f_b||_u
  bool no_bad_level = true;      // f - b has no linear factor for every b
};

Experiment thm210_chain() {
  Experiment e;
  e.info = {"thm210_chain",
            "Theorem 2.10: M_b <= |E||F||f_b|/q^2 + ||f_b||_u sqrt(|E||F|) q^2; |g(E,F)| ≳ min(k^-1 q, k^-2 sqrt(|E||F|) q^-1/2)",
            true,
            true,
            {param("poly", K::Terms, json::array({json::array({2, 0, 1}), json::array({0, 2, 1})}), "f as [i, j, c] terms"),
             param("trials", K::Int, 100, "random (E, F) pairs")},
            {"e_size", "f_size", "levels", "max_mb", "worst_slack", "image_size", "rhs", "ratio", "no_bad_level"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    const auto& field = c.require_field();
    const auto& f = *field;
    auto poly = c.params.terms("poly");
    if (poly.degree() < 1 || poly.degree() >= static_cast<int>(f.q())) {
      throw Error(ErrorCode::ConfigInvalid, "need 1 <= deg f < q");
    }
    if (is_degenerate(f, poly)) throw Error(ErrorCode::ConfigInvalid, "f is degenerate");
    GroupSpec spec(field, {AxisKind::Additive, AxisKind::Additive});
    std::vector<IndexSet> levels(f.q());
    const auto values = evaluation_table(f, poly);
    for (std::size_t i = 0; i < values.size(); ++i) levels[values[i]].push_back(i);
    std::vector<double> norms;
    for (const auto& lv : levels) norms.push_back(uniformity_norm(indicator_of_indices(spec, lv)).value);
    const bool ok = scan_lines(f, values).delta.empty();
    return std::make_shared<ChainPlan>(ChainPlan{std::move(spec), std::move(poly), std::move(levels), std::move(norms), ok});
  };
  e.trials = [](const Context& c) { return c.params.u("trials"); };
  e.run = [](const Context& c, std::uint64_t, std::mt19937_64& rng) {
    const auto& plan = c.get<ChainPlan>();
    const auto& g = plan.spec;
    const auto& f = g.field();
    const auto es = random_index_subset(rng, g.size(), uniform_between(rng, 1, g.size()));
    const auto fs = random_index_subset(rng, g.size(), uniform_between(rng, 1, g.size()));
    IndexSet neg;
    for (const auto i : fs) neg.push_back(g.inverse(i));
    std::sort(neg.begin(), neg.end());
    bool ok = true;
    std::uint64_t max_mb = 0, levels = 0;
    double worst = 0;
    for (std::size_t b = 0; b < plan.levels.size(); ++b) {
      if (plan.levels[b].empty()) continue;
      const auto r = incidence_bound_check(g, es, neg, plan.levels[b], Pivot::P, plan.norms[b]);
      ++levels;
      ok = ok && r.pass;
      max_mb = std::max(max_mb, r.count);
      if (r.error_bound > 0) worst = std::max(worst, r.deviation / r.error_bound);
    }
    const auto image = pair_set(f, plan.poly, to_pairs(f, es), to_pairs(f, fs));
    const double k = plan.poly.degree(), q = f.q();
    const double rhs = std::min(q / k, std::sqrt(static_cast<double>(es.size()) * fs.size()) / std::sqrt(q) / (k * k));
    return std::vector<TrialRow>{TrialRow(f,
                                          {cnt(es.size()), cnt(fs.size()), cnt(levels), cnt(max_mb), num(worst),
                                           cnt(image.size()), num(rhs), num(ratio(image.size(), rhs)),
                                           Value{plan.no_bad_level}},
                                          ok)};
  };
  return e;
}

Experiment pr_ruzsa() {
  Experiment e;
  e.info = {"pr_ruzsa",
            "Theorem 3.1 proof: \"apply the Plunnecke-Ruzsa inequality as follows\"",
            true,
            false,
            {param("trials", K::Int, 10000, "random sets"),
             param("primes", K::IntList, json::array({101, 1009}), "p = primes[trial mod n]"),
             param("min_size", K::Int, 4, "smallest |A|"), param("max_size", K::Int, 40, "largest |A|")},
            {"size", "a_sq", "a_plus_a_sq", "four_fold", "sq_minus_sq", "a_plus_a", "a_minus_a"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    auto primes = std::make_shared<std::vector<std::uint32_t>>(prime_list(c, "primes"));
    const auto lo = c.params.u("min_size"), hi = c.params.u("max_size");
    if (lo < 1 || hi < lo || hi > primes->front()) throw Error(ErrorCode::ConfigInvalid, "need 1 <= min_size <= max_size <= p");
    for (const auto p : *primes) c.fields.get(p);
    return primes;
  };
  e.trials = [](const Context& c) { return c.params.u("trials"); };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& primes = c.get<std::vector<std::uint32_t>>();
    const auto f = c.fields.get(primes[t % primes.size()]);
    const auto a = sample_set(*f, rng, uniform_between(rng, c.params.u("min_size"), c.params.u("max_size")), false);
    const auto r = pr_ruzsa_checks(*f, a);
    return std::vector<TrialRow>{TrialRow(*f,
                                          {cnt(r.a), cnt(r.a_sq), cnt(r.a_plus_a_sq), cnt(r.four_fold),
                                           cnt(r.sq_minus_sq), cnt(r.a_plus_a), cnt(r.a_minus_a)},
                                          r.pass())};
  };
  return e;
}

Experiment garaev_chang() {
  Experiment e;
  e.info = {"garaev_chang",
            "Remark after Theorem 3.1: M = [2 sqrt(Np)], A = X intersect {L+1, ..., L+M}, |A+A^2| <= 2M",
            true,
            false,
            {param("cases", K::IntPairs,
                   json::array({json::array({1009, 10}), json::array({10007, 100}), json::array({104729, 1000})}),
                   "[p, N] pairs")},
            {"n", "m", "window", "x_size", "a_size", "sumset_size", "two_m", "size_over_n"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    auto cases = std::make_shared<std::vector<std::pair<std::uint32_t, std::uint64_t>>>();
    for (const auto& pr : c.params.raw().at("cases")) {
      const auto p = pr[0].get<std::int64_t>(), n = pr[1].get<std::int64_t>();
      if (p < 3 || p > (std::int64_t{1} << 20) || !is_prime(static_cast<std::uint64_t>(p)) || n < 1 || 100 * n >= p) {
        throw Error(ErrorCode::ConfigInvalid, "each case needs an odd prime p below 2^20 and 1 <= N < 0.01 p");
      }
      cases->emplace_back(static_cast<std::uint32_t>(p), static_cast<std::uint64_t>(n));
    }
    return cases;
  };
  e.trials = [](const Context& c) { return c.get<std::vector<std::pair<std::uint32_t, std::uint64_t>>>().size(); };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64&) {
    const auto [p, n] = c.get<std::vector<std::pair<std::uint32_t, std::uint64_t>>>()[t];
    const auto f = c.fields.get(p);
    const auto g = garaev_chang_construct(*f, n);
    return std::vector<TrialRow>{TrialRow(*f,
                                          {cnt(g.n), cnt(g.m), cnt(g.window), cnt(g.x_size), cnt(g.a.size()),
                                           cnt(g.sumset_size), cnt(2 * g.m), num(g.size_over_n())},
                                          g.pass)};
  };
  return e;
}

struct SweepPlan {
  std::vector<std::uint32_t> primes;
  std::uint64_t per_prime = 1;
  bool full = false;
};

std::shared_ptr<SweepPlan> sweep_plan(const Context& c, bool allow_full) {
  auto plan = std::make_shared<SweepPlan>();
  plan->primes = prime_list(c, "primes");
  const auto sampler = c.params.s("sampler");
  if (sampler != "random" && !(allow_full && sampler == "full")) {
    throw Error(ErrorCode::ConfigInvalid, allow_full ? "sampler must be random or full" : "sampler must be random");
  }
  plan->full = sampler == "full";
  plan->per_prime = plan->full ? 1 : c.params.u("trials");
  if (c.params.d("alpha") <= 0 || c.params.d("alpha") > 1) throw Error(ErrorCode::ConfigInvalid, "alpha must lie in (0, 1]");
  for (const auto p : plan->primes) c.fields.get(p);
  return plan;
}

Experiment thm31_monitor() {
  Experiment e;
  e.info = {"thm31_monitor",
            "Theorem 3.1: |A+A²| ≳ |A|^{147/146} for |A| <= p^{1/2}",
            false,
            false,
            {param("primes", K::IntList, json::array({101, 211, 499}), "primes"),
             param("alpha", K::Number, 0.5, "|A| = ceil(p^alpha)"), param("trials", K::Int, 200, "sets per prime"),
             param("sampler", K::String, "random", "random or full (A = F_p)")},
            {"size", "a_sq", "sumset_size", "rhs", "ratio"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> { return sweep_plan(c, true); };
  e.trials = [](const Context& c) {
    const auto& plan = c.get<SweepPlan>();
    return plan.primes.size() * plan.per_prime;
  };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& plan = c.get<SweepPlan>();
    const auto f = c.fields.get(plan.primes[t / plan.per_prime]);
    const auto a = plan.full ? all_elements(*f)
                             : sample_set(*f, rng, size_for_exponent(f->q(), c.params.d("alpha"), f->q()), false);
    const auto sq = image_uni(*f, PolyUni({0, 0, 1}), a);
    const auto sum = op_set(*f, a, sq, SetOp::Add);
    const double rhs = std::pow(static_cast<double>(a.size()), 147.0 / 146.0);
    return std::vector<TrialRow>{
        TrialRow(*f, {cnt(a.size()), cnt(sq.size()), cnt(sum.size()), num(rhs), num(ratio(sum.size(), rhs))})};
  };
  return e;
}

Experiment thm37_monitor() {
  Experiment e;
  e.info = {"thm37_monitor",
            "Theorem 3.7: |(A+1)/A| ≳ |A|^{110/109} for A in F_p^*, |A| <= p^{1/2}",
            false,
            false,
            {param("primes", K::IntList, json::array({101, 211, 499}), "primes"),
             param("alpha", K::Number, 0.5, "|A| = ceil(p^alpha)"), param("trials", K::Int, 200, "sets per prime"),
             param("sampler", K::String, "random", "random or full (A = F_p^*)")},
            {"size", "quotient_size", "rhs", "ratio"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> { return sweep_plan(c, true); };
  e.trials = [](const Context& c) {
    const auto& plan = c.get<SweepPlan>();
    return plan.primes.size() * plan.per_prime;
  };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& plan = c.get<SweepPlan>();
    const auto f = c.fields.get(plan.primes[t / plan.per_prime]);
    const auto a = plan.full ? nonzero_elements(*f)
                             : sample_set(*f, rng, size_for_exponent(f->q(), c.params.d("alpha"), f->q() - 1), true);
    const auto shifted = op_set(*f, a, ElemSet{1}, SetOp::Add);
    const auto quot = op_set(*f, shifted, a, SetOp::Div);
    const double rhs = std::pow(static_cast<double>(a.size()), 110.0 / 109.0);
    return std::vector<TrialRow>{
        TrialRow(*f, {cnt(a.size()), cnt(quot.size()), num(rhs), num(ratio(quot.size(), rhs))})};
  };
  return e;
}

struct GridPlan {
  std::vector<std::uint32_t> primes;
  std::vector<double> alphas;
  std::uint64_t per_cell = 1;

  std::size_t size() const { return primes.size() * alphas.size() * per_cell; }
  std::pair<std::uint32_t, double> cell(std::uint64_t t) const {
    const auto c = t / per_cell;
    return {primes[c / alphas.size()], alphas[c % alphas.size()]};
  }
};

GridPlan grid_plan(const Context& c, const std::string& per_name) {
  GridPlan g{prime_list(c, "primes"), c.params.dlist("alphas"), c.params.u(per_name)};
  if (g.alphas.empty()) throw Error(ErrorCode::ConfigInvalid, "'alphas' is empty");
  for (const auto a : g.alphas) {
    if (a <= 0 || a > 1) throw Error(ErrorCode::ConfigInvalid, "alphas must lie in (0, 1]");
  }
  for (const auto p : g.primes) c.fields.get(p);
  return g;
}

struct Thm25Plan {
  GridPlan grid;
  int salem_case = 1;
  bool images = false;
  PolyUni f, g;
};

Experiment thm25_monitor() {
  Experiment e;
  e.info = {"thm25_monitor",
            "Theorem 2.5: |f(A)+B||g(A)+C| ≳ min(|A|q, |A|^2|B||C|q^{-1}); |f(A)+g(A)| ≳ min(|A|^{1/2}q^{1/2}, |A|^2q^{-1/2})",
            false,
            false,
            {param("case", K::Int, 1, "1: (+,+), 2: (+,x), 3: (x,x)"),
             param("f", K::Coeffs, json::array({0, 1}), "f coefficients, low to high"),
             param("g", K::Coeffs, json::array({0, 0, 1}), "g coefficients, low to high"),
             param("primes", K::IntList, json::array({101, 211, 307, 401, 499}), "primes"),
             param("alphas", K::NumberList, json::array({0.5, 0.75}), "|A| = ceil(q^alpha)"),
             param("trials", K::Int, 20, "sets per (prime, alpha)"),
             param("sampler", K::String, "images", "images (|f(A) op g(A)|, cases 1 and 3) or random (|B| = |C| = |A|)")},
            {"case", "alpha", "size", "b_size", "c_size", "lhs", "rhs", "ratio"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    auto plan = std::make_shared<Thm25Plan>();
    plan->grid = grid_plan(c, "trials");
    plan->salem_case = static_cast<int>(c.params.i("case"));
    if (plan->salem_case < 1 || plan->salem_case > 3) throw Error(ErrorCode::ConfigInvalid, "case must be 1, 2 or 3");
    const auto sampler = c.params.s("sampler");
    if (sampler != "images" && sampler != "random") throw Error(ErrorCode::ConfigInvalid, "sampler must be images or random");
    plan->images = sampler == "images";
    if (plan->images && plan->salem_case == 2) throw Error(ErrorCode::ConfigInvalid, "case 2 needs the random sampler");
    plan->f = PolyUni(c.params.coeffs("f"));
    plan->g = PolyUni(c.params.coeffs("g"));
    for (const auto p : plan->grid.primes) {
      for (const auto x : c.params.coeffs("f")) {
        if (x >= p) throw Error(ErrorCode::ConfigInvalid, "coefficients must be below every prime");
      }
      for (const auto x : c.params.coeffs("g")) {
        if (x >= p) throw Error(ErrorCode::ConfigInvalid, "coefficients must be below every prime");
      }
      if (plan->f.degree() < 1 || plan->g.degree() < 1 || plan->f.degree() + plan->g.degree() >= static_cast<int>(p)) {
        throw Error(ErrorCode::ConfigInvalid, "need deg f, deg g >= 1 and deg f + deg g < p");
      }
    }
    if (plan->salem_case == 1 && plan->f.degree() >= plan->g.degree()) {
      throw Error(ErrorCode::ConfigInvalid, "case 1 needs deg f < deg g");
    }
    return plan;
  };
  e.trials = [](const Context& c) { return c.get<Thm25Plan>().grid.size(); };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& plan = c.get<Thm25Plan>();
    const auto [p, alpha] = plan.grid.cell(t);
    const auto field = c.fields.get(p);
    const auto& f = *field;
    const bool first_mul = plan.salem_case == 3, second_mul = plan.salem_case >= 2;
    const double q = f.q();
    const auto size = size_for_exponent(f.q(), alpha, f.q() - 1);
    const auto a = sample_set(f, rng, size, plan.salem_case == 3);
    auto fa = image_uni(f, plan.f, a), ga = image_uni(f, plan.g, a);
    if (first_mul) fa = without_zero(fa);
    if (second_mul) ga = without_zero(ga);
    const SetOp op1 = first_mul ? SetOp::Mul : SetOp::Add, op2 = second_mul ? SetOp::Mul : SetOp::Add;
    double lhs = 0, rhs = 0;
    std::size_t bs = 0, cs = 0;
    if (plan.images) {
      const auto combo = op_set(f, fa, ga, op1);
      bs = ga.size();
      cs = fa.size();
      lhs = static_cast<double>(combo.size());
      const double n = a.size();
      rhs = std::min(std::sqrt(n * q), n * n / std::sqrt(q));
    } else {
      const auto b = sample_set(f, rng, size, first_mul);
      const auto cset = sample_set(f, rng, size, second_mul);
      bs = b.size();
      cs = cset.size();
      lhs = static_cast<double>(op_set(f, fa, b, op1).size()) * static_cast<double>(op_set(f, ga, cset, op2).size());
      const double n = a.size();
      rhs = std::min(n * q, n * n * bs * cs / q);
    }
    return std::vector<TrialRow>{TrialRow(f, {cnt(static_cast<std::uint64_t>(plan.salem_case)), num(alpha),
                                              cnt(a.size()), cnt(bs), cnt(cs), num(lhs), num(rhs),
                                              num(ratio(lhs, rhs))})};
  };
  return e;
}

struct Thm28Plan {
  std::vector<std::uint32_t> primes;
  std::uint64_t per_prime = 1;
  PolyBi poly;
  bool grid = false;
};

Experiment thm28_monitor() {
  Experiment e;
  e.info = {"thm28_monitor",
            "Theorem 2.8: |P(E)| ≳ min(|E|q/|E+F|, |E||F|^{1/2}/(|E+F|^{1/2}q^{1/2})) for |E| >> k^2 q",
            false,
            false,
            {param("poly", K::Terms, json::array({json::array({2, 0, 1}), json::array({1, 1, 1}), json::array({0, 2, 1})}),
                   "P as [i, j, c] terms"),
             param("primes", K::IntList, json::array({31, 61, 101}), "primes"),
             param("trials", K::Int, 20, "(E, F) pairs per prime"),
             param("sampler", K::String, "random", "random (|E| = |F| = ceil(q^beta)) or grid (E = F = A x A)"),
             param("beta", K::Number, 1.5, "random sampler: log_q |E|"),
             param("alpha", K::Number, 0.75, "grid sampler: |A| = ceil(q^alpha)")},
            {"sampler", "e_size", "f_size", "sum_size", "image_size", "rhs", "ratio"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    auto plan = std::make_shared<Thm28Plan>();
    plan->primes = prime_list(c, "primes");
    plan->per_prime = c.params.u("trials");
    plan->poly = c.params.terms("poly");
    const auto sampler = c.params.s("sampler");
    if (sampler != "random" && sampler != "grid") throw Error(ErrorCode::ConfigInvalid, "sampler must be random or grid");
    plan->grid = sampler == "grid";
    for (const auto p : plan->primes) {
      const auto f = c.fields.get(p);
      for (const auto& m : plan->poly.terms) {
        if (m.c >= p) throw Error(ErrorCode::ConfigInvalid, "coefficients must be below every prime");
      }
      if (plan->poly.degree() < 1 || plan->poly.degree() >= static_cast<int>(p)) {
        throw Error(ErrorCode::ConfigInvalid, "need 1 <= deg P < p");
      }
      if (is_degenerate(*f, plan->poly)) throw Error(ErrorCode::ConfigInvalid, "P is degenerate over F_" + std::to_string(p));
    }
    return plan;
  };
  e.trials = [](const Context& c) {
    const auto& plan = c.get<Thm28Plan>();
    return plan.primes.size() * plan.per_prime;
  };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& plan = c.get<Thm28Plan>();
    const auto field = c.fields.get(plan.primes[t / plan.per_prime]);
    const auto& f = *field;
    const GroupSpec g(field, {AxisKind::Additive, AxisKind::Additive});
    IndexSet es, fs;
    if (plan.grid) {
      const auto a = sample_set(f, rng, size_for_exponent(f.q(), c.params.d("alpha"), f.q()), false);
      std::vector<Point> pts;
      for (const auto& [x, y] : grid(a, a)) pts.push_back({x, y});
      es = fs = make_index_set(g, pts);
    } else {
      const auto n = size_for_exponent(f.q(), c.params.d("beta"), g.size());
      es = random_index_subset(rng, g.size(), n);
      fs = random_index_subset(rng, g.size(), n);
    }
    const auto sum = product_set(g, es, fs);
    const auto image = image_bi(f, plan.poly, to_pairs(f, es));
    const double ne = es.size(), nf = fs.size(), ns = sum.size(), q = f.q();
    const double rhs = std::min(ne * q / ns, ne * std::sqrt(nf) / (std::sqrt(ns) * std::sqrt(q)));
    return std::vector<TrialRow>{TrialRow(f, {str(plan.grid ? "grid" : "random"), cnt(es.size()), cnt(fs.size()),
                                              cnt(sum.size()), cnt(image.size()), num(rhs),
                                              num(ratio(image.size(), rhs))})};
  };
  return e;
}

struct Thm213Plan {
  std::vector<std::uint32_t> primes;
  std::uint64_t per_prime = 1;
  PolyUni f;
  unsigned max_d = 4;
  std::map<std::uint32_t, bool> simple_root;  // f has a simple nonzero root in F_p
};

Experiment thm213_monitor() {
  Experiment e;
  e.info = {"thm213_monitor",
            "Theorem 2.13: |dA| ≳ min(q|A|/|f(A)+A|, |A|(|A|^3/(q|f(A)+A|))^{d-1}) and its five companions",
            false,
            false,
            {param("f", K::Coeffs, json::array({0, 1, 1}), "f coefficients, low to high"),
             param("primes", K::IntList, json::array({101, 211}), "primes"),
             param("alpha", K::Number, 0.5, "|A| = ceil(p^alpha), A in F_p^*"),
             param("trials", K::Int, 20, "sets per prime"), param("max_d", K::Int, 4, "largest fold")},
            {"variant", "d", "hypothesis", "lhs", "driver", "rhs", "ratio"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    auto plan = std::make_shared<Thm213Plan>();
    plan->primes = prime_list(c, "primes");
    plan->per_prime = c.params.u("trials");
    plan->f = PolyUni(c.params.coeffs("f"));
    const auto d = c.params.u("max_d");
    if (d < 2 || d > 8) throw Error(ErrorCode::ConfigInvalid, "max_d must lie in [2, 8]");
    plan->max_d = static_cast<unsigned>(d);
    for (const auto p : plan->primes) {
      const auto field = c.fields.get(p);
      for (const auto x : c.params.coeffs("f")) {
        if (x >= p) throw Error(ErrorCode::ConfigInvalid, "coefficients must be below every prime");
      }
      if (plan->f.degree() < 1 || plan->f.degree() >= static_cast<int>(p)) throw Error(ErrorCode::ConfigInvalid, "need 1 <= deg f < p");
      const auto df = derivative(*field, plan->f);
      bool simple = false;
      for (Elem r = 1; r < p && !simple; ++r) simple = eval(*field, plan->f, r) == 0 && eval(*field, df, r) != 0;
      plan->simple_root[p] = simple;
    }
    return plan;
  };
  e.trials = [](const Context& c) {
    const auto& plan = c.get<Thm213Plan>();
    return plan.primes.size() * plan.per_prime;
  };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& plan = c.get<Thm213Plan>();
    const std::uint32_t p = plan.primes[t / plan.per_prime];
    const auto field = c.fields.get(p);
    const auto& f = *field;
    const auto a = sample_set(f, rng, size_for_exponent(p, c.params.d("alpha"), p - 1), true);
    const auto fa = image_uni(f, plan.f, a);
    const auto fa_nz = without_zero(fa);
    const double n = a.size(), q = p;
    const double fa_plus_a = op_set(f, fa, a, SetOp::Add).size();
    const double a_plus_a = op_set(f, a, a, SetOp::Add).size();
    const double aa = op_set(f, a, a, SetOp::Mul).size();
    const double fa_a = op_set(f, fa_nz, a, SetOp::Mul).size();
    const int deg = plan.f.degree();
    const bool simple = plan.simple_root.at(p);
    struct Variant {
      const char* name;
      bool hypothesis;
      double driver;
    };
    const Variant variants[6] = {{"dA|f(A)+A", deg > 1, fa_plus_a},       {"df(A)|A+A", deg > 1, a_plus_a},
                                 {"A^d|f(A)+A", deg >= 1, fa_plus_a},      {"df(A)|AA", deg >= 1, aa},
                                 {"A^d|f(A)A", simple, fa_a},              {"f(A)^d|AA", simple, aa}};
    std::vector<TrialRow> rows;
    for (unsigned d = 2; d <= plan.max_d; ++d) {
      const double sizes[6] = {static_cast<double>(dfold(f, a, SetOp::Add, d).size()),
                               static_cast<double>(dfold(f, fa, SetOp::Add, d).size()),
                               static_cast<double>(dfold(f, a, SetOp::Mul, d).size()),
                               static_cast<double>(dfold(f, fa, SetOp::Add, d).size()),
                               static_cast<double>(dfold(f, a, SetOp::Mul, d).size()),
                               fa_nz.empty() ? 0.0 : static_cast<double>(dfold(f, fa_nz, SetOp::Mul, d).size())};
      for (int v = 0; v < 6; ++v) {
        const double s = variants[v].driver;
        const double rhs = std::min(q * n / s, n * std::pow(n * n * n / (q * s), d - 1.0));
        rows.emplace_back(f, std::vector<Value>{str(variants[v].name), cnt(d), Value{variants[v].hypothesis},
                                                num(sizes[v]), num(s), num(rhs), num(ratio(sizes[v], rhs))});
      }
    }
    return rows;
  };
  return e;
}

Experiment thm34_monitor() {
  Experiment e;
  e.info = {"thm34_monitor",
            "Theorem 3.4: |A(+)A|^8 |A(x)A|^4 ≳ |A|^13 for A in F_p^*, |A| <= p^{12/23}",
            false,
            false,
            {param("primes", K::IntList, json::array({101, 211, 499}), "primes"),
             param("alpha", K::Number, 0.5, "|A| = ceil(p^alpha), at most 12/23"),
             param("trials", K::Int, 50, "sets per prime")},
            {"size", "sum", "difference", "product", "quotient", "ratio_add_mul", "ratio_add_div", "ratio_sub_mul",
             "ratio_sub_div", "min_ratio"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    if (c.params.d("alpha") <= 0 || c.params.d("alpha") > 12.0 / 23.0) {
      throw Error(ErrorCode::ConfigInvalid, "alpha must lie in (0, 12/23]");
    }
    auto plan = std::make_shared<SweepPlan>();
    plan->primes = prime_list(c, "primes");
    plan->per_prime = c.params.u("trials");
    for (const auto p : plan->primes) c.fields.get(p);
    return plan;
  };
  e.trials = [](const Context& c) {
    const auto& plan = c.get<SweepPlan>();
    return plan.primes.size() * plan.per_prime;
  };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& plan = c.get<SweepPlan>();
    const auto f = c.fields.get(plan.primes[t / plan.per_prime]);
    const auto a = sample_set(*f, rng, size_for_exponent(f->q(), c.params.d("alpha"), f->q() - 1), true);
    const double s = op_set(*f, a, a, SetOp::Add).size(), d = op_set(*f, a, a, SetOp::Sub).size();
    const double m = op_set(*f, a, a, SetOp::Mul).size(), v = op_set(*f, a, a, SetOp::Div).size();
    const double rhs = std::pow(static_cast<double>(a.size()), 13.0);
    auto r = [&](double x, double y) { return std::pow(x, 8.0) * std::pow(y, 4.0) / rhs; };
    const double r1 = r(s, m), r2 = r(s, v), r3 = r(d, m), r4 = r(d, v);
    return std::vector<TrialRow>{TrialRow(*f, {cnt(a.size()), num(s), num(d), num(m), num(v), num(r1), num(r2),
                                               num(r3), num(r4), num(std::min({r1, r2, r3, r4}))})};
  };
  return e;
}

struct ZooFunction {
  const char* name;
  PolyBi poly;
  bool three_var = false;  // x1^2 + x1 x2 + x3
};

struct ZooPlan {
  std::vector<ZooFunction> functions;
  std::vector<std::string> samplers;
  GridPlan grid;  // per_cell = 1; one trial per configuration
  std::uint64_t samples = 20;
  double delta = 0.5;
  std::uint64_t strong_slack = 2;

  std::size_t size() const { return functions.size() * samplers.size() * grid.size(); }
};

std::string classify(double image, double size, double q, double c, double delta, double slack) {
  if (image >= q - slack) return "strong";
  if (image >= c * q) return "moderate";
  if (image >= c * std::pow(size, delta) * std::pow(q, 1 - delta)) return "weak";
  return "none";
}

Experiment zoo_monitor() {
  Experiment e;
  e.info = {"zoo_monitor",
            "Definition 1.1 and Remark 3.6: P1 = x+y^2, P2 = xy+x^2, P3 = xy+x, P4 = x^2+y^2 (\"P_4 is not an expander\"), P5 = x^2+xy+y^2, x1^2+x1x2+x3",
            false,
            false,
            {param("primes", K::IntList, json::array({101, 211, 499}), "primes"),
             param("alphas", K::NumberList, json::array({0.5, 0.75, 0.9}), "|A| ~ ceil(p^alpha)"),
             param("samples", K::Int, 20, "sets per configuration"),
             param("samplers", K::String, "random,residue_interval",
                   "comma list: random, residue_interval ({x : x^2 in an interval})"),
             param("delta", K::Number, 0.5, "weak-expander exponent"),
             param("strong_slack", K::Int, 2, "strong means |f(A,..,A)| >= q - slack")},
            {"function", "sampler", "alpha", "mean_size", "min_image", "median_image", "max_image", "min_fraction",
             "class_c010", "class_c025", "class_c050"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    auto plan = std::make_shared<ZooPlan>();
    plan->functions = {{"P1", PolyBi({{1, 0, 1}, {0, 2, 1}})},
                       {"P2", PolyBi({{1, 1, 1}, {2, 0, 1}})},
                       {"P3", PolyBi({{1, 1, 1}, {1, 0, 1}})},
                       {"P4", PolyBi({{2, 0, 1}, {0, 2, 1}})},
                       {"P5", PolyBi({{2, 0, 1}, {1, 1, 1}, {0, 2, 1}})},
                       {"x1^2+x1x2+x3", PolyBi({{2, 0, 1}, {1, 1, 1}}), true}};
    const auto list = c.params.s("samplers");
    std::size_t start = 0;
    while (start <= list.size()) {
      const auto end = std::min(list.find(',', start), list.size());
      const auto tok = list.substr(start, end - start);
      if (tok != "random" && tok != "residue_interval") {
        throw Error(ErrorCode::ConfigInvalid, "samplers must be a comma list of random and residue_interval");
      }
      plan->samplers.push_back(tok);
      start = end + 1;
    }
    plan->grid = GridPlan{prime_list(c, "primes"), c.params.dlist("alphas"), 1};
    if (plan->grid.alphas.empty()) throw Error(ErrorCode::ConfigInvalid, "'alphas' is empty");
    for (const auto a : plan->grid.alphas) {
      if (a <= 0 || a > 1) throw Error(ErrorCode::ConfigInvalid, "alphas must lie in (0, 1]");
    }
    for (const auto p : plan->grid.primes) c.fields.get(p);
    plan->samples = std::max<std::uint64_t>(1, c.params.u("samples"));
    plan->delta = c.params.d("delta");
    if (plan->delta <= 0 || plan->delta >= 1) throw Error(ErrorCode::ConfigInvalid, "delta must lie in (0, 1)");
    plan->strong_slack = c.params.u("strong_slack");
    return plan;
  };
  e.trials = [](const Context& c) { return c.get<ZooPlan>().size(); };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& plan = c.get<ZooPlan>();
    const auto cells = plan.grid.size();
    const auto& fn = plan.functions[t / (plan.samplers.size() * cells)];
    const auto& sampler = plan.samplers[(t / cells) % plan.samplers.size()];
    const auto [p, alpha] = plan.grid.cell(t % cells);
    const auto field = c.fields.get(p);
    const auto& f = *field;
    const auto target = size_for_exponent(p, alpha, p);
    std::vector<double> images;
    double size_sum = 0, min_frac_size = 0;
    for (std::uint64_t s = 0; s < plan.samples; ++s) {
      ElemSet a;
      if (sampler == "random") {
        a = sample_set(f, rng, target, false);
      } else {
        const std::uint64_t len = std::min<std::uint64_t>(target, p - 1);
        const auto offset = uniform_below(rng, p - len);
        for (Elem x = 0; x < p; ++x) {
          const std::uint64_t sq = f.mul(x, x);
          if (sq >= offset + 1 && sq <= offset + len) a.push_back(x);
        }
        if (a.empty()) a.push_back(0);
      }
      auto image = image_bi(f, fn.poly, grid(a, a));
      if (fn.three_var) image = op_set(f, image, a, SetOp::Add);
      if (images.empty() || static_cast<double>(image.size()) < *std::min_element(images.begin(), images.end())) {
        min_frac_size = static_cast<double>(a.size());
      }
      images.push_back(static_cast<double>(image.size()));
      size_sum += static_cast<double>(a.size());
    }
    auto sorted = images;
    std::sort(sorted.begin(), sorted.end());
    const double q = p, lo = sorted.front();
    std::vector<Value> values{str(fn.name),  str(sampler),      num(alpha),
                              num(size_sum / static_cast<double>(plan.samples)),
                              num(lo),       num(sorted[sorted.size() / 2]), num(sorted.back()), num(lo / q)};
    for (const double cc : {0.1, 0.25, 0.5}) {
      values.push_back(str(classify(lo, min_frac_size, q, cc, plan.delta, static_cast<double>(plan.strong_slack))));
    }
    return std::vector<TrialRow>{TrialRow(f, std::move(values))};
  };
  return e;
}

}  // namespace

void register_expander_experiments(std::vector<Experiment>& out) {
  out.push_back(vu_bad_set());
  out.push_back(thm210_chain());
  out.push_back(pr_ruzsa());
  out.push_back(garaev_chang());
  out.push_back(thm31_monitor());
  out.push_back(thm37_monitor());
  out.push_back(thm25_monitor());
  out.push_back(thm28_monitor());
  out.push_back(thm213_monitor());
  out.push_back(thm34_monitor());
  out.push_back(zoo_monitor());
}

}  // namespace fflab::runner
