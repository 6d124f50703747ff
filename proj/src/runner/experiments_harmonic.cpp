#include <algorithm>
#include <cmath>
#include <numbers>

#include "experiment.hpp"
#include "fflab/error.hpp"
#include "fflab/expander.hpp"
#include "fflab/incidence.hpp"
#include "fflab/sampling.hpp"

namespace fflab::runner {

namespace {

using nlohmann::json;
using K = ParamKind;

std::vector<AxisKind> parse_axes(const std::string& text) {
  std::vector<AxisKind> axes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const auto tok = text.substr(start, end - start);
    if (tok == "add") {
      axes.push_back(AxisKind::Additive);
    } else if (tok == "mul") {
      axes.push_back(AxisKind::Multiplicative);
    } else {
      throw Error(ErrorCode::ConfigInvalid, "axes must be a comma list of 'add' and 'mul', got '" + text + "'");
    }
    start = end + 1;
  }
  return axes;
}

std::string axes_name(const GroupSpec& g) {
  std::string s;
  for (std::size_t i = 0; i < g.dim(); ++i) s += std::string(i ? "x" : "") + (g.axis(i) == AxisKind::Additive ? "F" : "F*");
  return s;
}

DenseFn random_fn(const GroupSpec& g, std::mt19937_64& rng) {
  std::vector<Complex> v(g.size());
  for (auto& z : v) {
    const double re = uniform_signed(rng);
    z = Complex(re, uniform_signed(rng));
  }
  return DenseFn(g, std::move(v));
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

IndexSet random_nonempty(const GroupSpec& g, std::mt19937_64& rng) {
  return random_index_subset(rng, g.size(), 1 + uniform_below(rng, g.size()));
}

Elem random_nonzero(const FieldCtx& f, std::mt19937_64& rng) {
  return static_cast<Elem>(1 + uniform_below(rng, f.q() - 1));
}

PolyUni random_poly(const FieldCtx& f, std::mt19937_64& rng, unsigned degree, bool monic_lead) {
  std::vector<Elem> c(degree + 1);
  for (auto& x : c) x = static_cast<Elem>(uniform_below(rng, f.q()));
  c.back() = monic_lead ? 1 : random_nonzero(f, rng);
  return PolyUni(std::move(c));
}

/// Monic irreducible polynomials of degree 1 and 2.
std::vector<PolyUni> small_irreducibles(const FieldCtx& f) {
  std::vector<PolyUni> out;
  for (Elem c = 0; c < f.q(); ++c) out.push_back(PolyUni({c, 1}));
  for (Elem b = 0; b < f.q(); ++b) {
    for (Elem c = 0; c < f.q(); ++c) {
      PolyUni quad({c, b, 1});
      if (is_irreducible(f, quad)) out.push_back(std::move(quad));
    }
  }
  return out;
}

std::string factor_string(const Factorization& fac) {
  std::string s = std::to_string(fac.unit);
  for (const auto& fc : fac.factors) s += "*(" + coeff_string(fc.poly.coeffs) + ")^" + std::to_string(fc.exponent);
  return s;
}

PolyUni factored(const FieldCtx& f, Factorization fac) {
  auto poly = expand(f, fac);
  return with_factorization(f, std::move(poly), std::move(fac));
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------

Experiment harmonic_identities() {
  Experiment e;
  e.info = {"harmonic_identities",
            "Section 2: f^(chi) = |G^d|^-1 sum f(x) conj(chi(x)); inversion (2.1), convolution (2.2), Plancherel (2.3)",
            true,
            true,
            {param("axes", K::String, "add", "comma list of add/mul axes"),
             param("trials", K::Int, 200, "random function pairs")},
            {"group", "size", "character", "inversion_err", "convolution_err", "plancherel_err", "orthogonality_err",
             "tolerance"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    return std::make_shared<GroupSpec>(c.require_field(), parse_axes(c.params.s("axes")));
  };
  e.trials = [](const Context& c) { return c.params.u("trials"); };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& g = c.get<GroupSpec>();
    const double n = static_cast<double>(g.size());
    const double tol = 1e-9 * (1 + n);
    const auto f = random_fn(g, rng), h = random_fn(g, rng);
    const auto sf = fourier_forward(f), sh = fourier_forward(h);

    const double inv_err = max_abs_diff(fourier_inverse(sf).values, f.values);
    // Spectrum of the directly evaluated convolution against |G| f^ g^.
    const auto sc = fourier_forward(convolve_direct(f, h));
    double conv_err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) conv_err = std::max(conv_err, std::abs(sc.coeffs[i] - n * sf.coeffs[i] * sh.coeffs[i]));
    const double planch = plancherel_check(f, h);

    const std::size_t ci = t % g.size();
    const auto chi = char_at(g, ci);
    Complex sum = 0;
    for (std::size_t x = 0; x < g.size(); ++x) sum += character_value(g, chi, x);
    const double orth = std::abs(sum - (chi.is_trivial() ? n : 0.0));

    const bool ok = inv_err <= 1e-9 && conv_err <= tol && planch <= tol && orth <= tol;
    return std::vector<TrialRow>{TrialRow(g.field(),
                                          {str(axes_name(g)), cnt(g.size()), cnt(ci), num(inv_err), num(conv_err),
                                           num(planch), num(orth), num(tol)},
                                          ok)};
  };
  return e;
}

Experiment lemma21_fuzz() {
  Experiment e;
  e.info = {"lemma21_fuzz",
            "Lemma 2.1: |{(x,y) in XxY : x.y in P}| - |X||Y||P|/|G^d| <= ||X||_u sqrt(|Y||P|) |G^d|",
            true,
            true,
            {param("axes", K::String, "add", "comma list of add/mul axes"),
             param("trials", K::Int, 1000, "random (X, Y, P) triples"),
             param("pivot", K::String, "all", "X, Y, P or all")},
            {"group", "size_x", "size_y", "size_p", "count", "main_term", "deviation", "bound_x", "bound_y",
             "bound_p"}};
  e.aliases = {"thm21_fuzz"};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    const auto pv = c.params.s("pivot");
    if (pv != "all" && pv != "X" && pv != "Y" && pv != "P") throw Error(ErrorCode::ConfigInvalid, "pivot must be X, Y, P or all");
    return std::make_shared<GroupSpec>(c.require_field(), parse_axes(c.params.s("axes")));
  };
  e.trials = [](const Context& c) { return c.params.u("trials"); };
  e.run = [](const Context& c, std::uint64_t, std::mt19937_64& rng) {
    const auto& g = c.get<GroupSpec>();
    const auto x = random_nonempty(g, rng), y = random_nonempty(g, rng), p = random_nonempty(g, rng);
    const auto pv = c.params.s("pivot");
    double bounds[3] = {kNaN, kNaN, kNaN};
    bool ok = true;
    IncidenceReport last;
    const Pivot pivots[3] = {Pivot::X, Pivot::Y, Pivot::P};
    const char* names[3] = {"X", "Y", "P"};
    for (int i = 0; i < 3; ++i) {
      if (pv != "all" && pv != names[i]) continue;
      last = incidence_bound_check(g, x, y, p, pivots[i]);
      bounds[i] = last.error_bound;
      ok = ok && last.pass;
    }
    return std::vector<TrialRow>{TrialRow(g.field(),
                                          {str(axes_name(g)), cnt(x.size()), cnt(y.size()), cnt(p.size()),
                                           cnt(last.count), num(last.main_term), num(last.deviation), num(bounds[0]),
                                           num(bounds[1]), num(bounds[2])},
                                          ok)};
  };
  return e;
}

Experiment gauss_sum_sweep() {
  Experiment e;
  e.info = {"gauss_sum_sweep",
            "Theorem 2.6(1) / Corollary 2.4(1): |sum_x e(x^2/p)| = sqrt(p); the parabola is Salem with constant M = 3",
            true,
            false,
            {param("min_prime", K::Int, 3, "smallest odd prime"), param("max_prime", K::Int, 997, "largest prime"),
             param("salem_max_prime", K::Int, 199, "measure the parabola's Salem constant up to this prime")},
            {"magnitude", "sqrt_p", "abs_err", "weil_bound", "salem_constant", "salem_m"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    return std::make_shared<std::vector<std::uint32_t>>(primes_between(
        static_cast<std::uint32_t>(c.params.u("min_prime")), static_cast<std::uint32_t>(c.params.u("max_prime"))));
  };
  e.trials = [](const Context& c) { return c.get<std::vector<std::uint32_t>>().size(); };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64&) {
    const std::uint32_t p = c.get<std::vector<std::uint32_t>>()[t];
    const auto f = c.fields.get(p);
    Complex sum = 0;
    for (std::uint64_t x = 0; x < p; ++x) {
      sum += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(x * x % p) / p);
    }
    const double mag = std::abs(sum), root = std::sqrt(static_cast<double>(p));
    const auto weil = weil_check(*f, WeilVariant::Additive, PolyUni({0, 0, 1}), {}, 1, 0);
    bool ok = std::abs(mag - root) <= 1e-6 && weil.pass && std::abs(weil.sum_magnitude - mag) <= 1e-9;
    double salem = kNaN;
    if (p >= 5 && p <= c.params.u("salem_max_prime")) {
      const auto cert = build_graph_set(f, poly_x(), PolyUni({0, 0, 1}), SalemCase::One);
      salem = cert.measured_constant;
      ok = ok && std::abs(salem - 1.0) <= 1e-6 && salem <= cert.m + kBoundSlack;
    }
    return std::vector<TrialRow>{TrialRow(
        *f, {num(mag), num(root), num(std::abs(mag - root)), num(weil.bound), num(salem), cnt(3)}, ok)};
  };
  return e;
}

struct WeilPlan {
  std::string variant;
  std::vector<PolyUni> fs;              // additive and mixed
  std::vector<Factorization> gs;        // mixed and multiplicative
  std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (f index, g index)
};

Experiment weil_sweep() {
  Experiment e;
  e.info = {"weil_sweep",
            "Theorem 2.6: |sum chi(f(x))| <= (deg(f)-1)sqrt(q); mixed (deg(f)+d-1)sqrt(q); multiplicative (d-1)sqrt(q)",
            true,
            true,
            {param("variant", K::String, "additive", "additive, mixed or multiplicative"),
             param("min_degree", K::Int, 2, "smallest deg f (additive)"),
             param("max_degree", K::Int, 4, "largest deg f (additive)")},
            {"variant", "f", "g", "degree", "d", "characters", "max_magnitude", "argmax", "bound"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    const auto& f = *c.require_field();
    auto plan = std::make_shared<WeilPlan>();
    plan->variant = c.params.s("variant");
    const Elem q = f.q();
    auto monic_of_degree = [&](unsigned deg) {
      std::uint64_t count = 1;
      for (unsigned i = 0; i < deg; ++i) count *= q;
      if (count > 5'000'000) throw Error(ErrorCode::ConfigInvalid, "weil_sweep enumeration too large");
      for (std::uint64_t n = 0; n < count; ++n) {
        std::vector<Elem> co(deg + 1);
        std::uint64_t v = n;
        for (unsigned i = 0; i < deg; ++i, v /= q) co[i] = static_cast<Elem>(v % q);
        co[deg] = 1;
        plan->fs.emplace_back(std::move(co));
      }
    };
    if (plan->variant == "additive") {
      const auto lo = c.params.u("min_degree"), hi = c.params.u("max_degree");
      if (lo < 1 || hi < lo) throw Error(ErrorCode::ConfigInvalid, "need 1 <= min_degree <= max_degree");
      for (auto d = lo; d <= hi; ++d) {
        if (d % f.p() != 0) monic_of_degree(static_cast<unsigned>(d));
      }
      for (std::size_t i = 0; i < plan->fs.size(); ++i) plan->jobs.emplace_back(i, 0);
    } else if (plan->variant == "multiplicative" || plan->variant == "mixed") {
      const auto pool = small_irreducibles(f);
      if (plan->variant == "multiplicative") {
        for (std::size_t a = 0; a < pool.size(); ++a) {
          for (unsigned ea = 1; ea <= 3; ++ea) plan->gs.push_back({1, {{pool[a], ea}}});
          for (std::size_t b = a + 1; b < pool.size(); ++b) {
            for (unsigned ea = 1; ea <= 2; ++ea) {
              for (unsigned eb = 1; eb <= 2; ++eb) plan->gs.push_back({1, {{pool[a], ea}, {pool[b], eb}}});
            }
          }
        }
        for (std::size_t i = 0; i < plan->gs.size(); ++i) plan->jobs.emplace_back(0, i);
      } else {
        for (unsigned d = 1; d <= 2; ++d) {
          if (d % f.p() != 0) monic_of_degree(d);
        }
        for (const auto& r : pool) {
          if (r.degree() != 1) continue;
          for (unsigned ex = 1; ex <= 2; ++ex) plan->gs.push_back({1, {{r, ex}}});
        }
        for (std::size_t i = 0; i < plan->fs.size(); ++i) {
          for (std::size_t j = 0; j < plan->gs.size(); ++j) plan->jobs.emplace_back(i, j);
        }
      }
    } else {
      throw Error(ErrorCode::ConfigInvalid, "variant must be additive, mixed or multiplicative");
    }
    return plan;
  };
  e.trials = [](const Context& c) { return c.get<WeilPlan>().jobs.size(); };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64&) {
    const auto& plan = c.get<WeilPlan>();
    const auto& f = *c.field;
    const auto [fi, gi] = plan.jobs[t];
    double worst = -1, bound = 0;
    std::string argmax;
    std::uint64_t checked = 0;
    bool ok = true;
    PolyUni fpoly, gpoly;
    std::size_t d = 0;
    auto take = [&](const WeilReport& r, const std::string& label) {
      ++checked;
      ok = ok && r.pass;
      bound = r.bound;
      if (r.sum_magnitude > worst) {
        worst = r.sum_magnitude;
        argmax = label;
      }
    };
    if (plan.variant == "additive") {
      fpoly = plan.fs[fi];
      for (Elem b = 1; b < f.q(); ++b) take(weil_check(f, WeilVariant::Additive, fpoly, {}, b, 0), "b=" + std::to_string(b));
    } else {
      gpoly = factored(f, plan.gs[gi]);
      d = distinct_root_count(plan.gs[gi]);
      if (plan.variant == "mixed") fpoly = plan.fs[fi];
      const bool mixed = plan.variant == "mixed";
      for (std::uint32_t j = 1; j + 1 < f.q(); ++j) {
        for (Elem b = 0; b < (mixed ? f.q() : 1); ++b) {
          try {
            take(weil_check(f, mixed ? WeilVariant::Mixed : WeilVariant::Multiplicative, fpoly, gpoly, b, j),
                 "j=" + std::to_string(j) + (mixed ? ";b=" + std::to_string(b) : ""));
          } catch (const Error& err) {
            if (err.code() != ErrorCode::HypothesisViolated) throw;
          }
        }
      }
    }
    return std::vector<TrialRow>{TrialRow(
        f,
        {str(plan.variant), str(coeff_string(fpoly.coeffs)), str(gpoly.factored ? factor_string(*gpoly.factored) : ""),
         cnt(static_cast<std::uint64_t>(std::max(fpoly.degree(), 0))), cnt(d), cnt(checked), num(worst), str(argmax),
         num(bound)},
        ok)};
  };
  return e;
}

Experiment schwarz_zippel_fuzz() {
  Experiment e;
  e.info = {"schwarz_zippel_fuzz",
            "Lemma 2.7: |{x in F^n : f(x) = 0}| <= k|F|^{n-1}",
            true,
            true,
            {param("trials", K::Int, 10000, "random polynomials"), param("max_degree", K::Int, 5, "total degree cap"),
             param("arity", K::Int, 2, "1 or 2 variables"),
             param("density", K::Number, 0.5, "probability that a monomial is present")},
            {"arity", "degree", "poly", "zeros", "bound"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    c.require_field();
    const auto n = c.params.i("arity");
    if (n != 1 && n != 2) throw Error(ErrorCode::ConfigInvalid, "arity must be 1 or 2");
    if (c.params.i("max_degree") < 0) throw Error(ErrorCode::ConfigInvalid, "max_degree must be non-negative");
    return nullptr;
  };
  e.trials = [](const Context& c) { return c.params.u("trials"); };
  e.run = [](const Context& c, std::uint64_t, std::mt19937_64& rng) {
    const auto& f = *c.field;
    const auto kmax = static_cast<unsigned>(c.params.u("max_degree"));
    const auto density = c.params.d("density");
    auto present = [&] { return (static_cast<double>(rng() >> 11) * 0x1p-53) < density; };
    if (c.params.i("arity") == 1) {
      PolyUni poly;
      while (poly.is_zero()) {
        std::vector<Elem> co(kmax + 1, 0);
        for (auto& x : co) x = present() ? random_nonzero(f, rng) : 0;
        poly = PolyUni(std::move(co));
      }
      const auto r = zero_count_check(f, poly);
      return std::vector<TrialRow>{TrialRow(
          f, {cnt(1), cnt(r.degree), str(coeff_string(poly.coeffs)), cnt(r.zeros), cnt(r.bound)}, r.pass)};
    }
    PolyBi poly;
    while (poly.is_zero()) {
      std::vector<Monomial> terms;
      for (unsigned i = 0; i <= kmax; ++i) {
        for (unsigned j = 0; i + j <= kmax; ++j) {
          if (present()) terms.push_back({i, j, random_nonzero(f, rng)});
        }
      }
      poly = PolyBi(std::move(terms));
    }
    const auto r = zero_count_check(f, poly);
    return std::vector<TrialRow>{
        TrialRow(f, {cnt(2), cnt(r.degree), str(term_string(poly)), cnt(r.zeros), cnt(r.bound)}, r.pass)};
  };
  return e;
}

struct KatzPlan {
  std::vector<std::uint32_t> primes;
  std::vector<std::int64_t> degrees;
  std::uint64_t per_prime = 1;
};

Experiment katz_monitor() {
  Experiment e;
  e.info = {"katz_monitor",
            "Theorem 2.9: P without a linear factor has ||P^-1||_u ≲ k^2 q^{-3/2}",
            false,
            false,
            {param("primes", K::IntList, json::array(), "explicit primes; empty means every prime in range"),
             param("min_prime", K::Int, 31, "range start"), param("max_prime", K::Int, 199, "range end"),
             param("random_curves", K::Int, 10, "random curves per prime besides x^2+y^2-1"),
             param("degrees", K::IntList, json::array({2, 3}), "degrees of the random curves")}, 
            {"curve", "degree", "a", "level_size", "bias", "ratio", "has_linear_factor"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    auto plan = std::make_shared<KatzPlan>();
    for (auto p : c.params.ilist("primes")) {
      if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw Error(ErrorCode::ConfigInvalid, "primes must be odd primes");
      plan->primes.push_back(static_cast<std::uint32_t>(p));
    }
    if (plan->primes.empty()) {
      plan->primes = primes_between(static_cast<std::uint32_t>(c.params.u("min_prime")),
                                    static_cast<std::uint32_t>(c.params.u("max_prime")));
    }
    plan->degrees = c.params.ilist("degrees");
    for (auto d : plan->degrees) {
      if (d < 1) throw Error(ErrorCode::ConfigInvalid, "degrees must be positive");
    }
    if (plan->degrees.empty() && c.params.u("random_curves") > 0) throw Error(ErrorCode::ConfigInvalid, "no degrees");
    plan->per_prime = 1 + c.params.u("random_curves");
    return plan;
  };
  e.trials = [](const Context& c) {
    const auto& plan = c.get<KatzPlan>();
    return plan.primes.size() * plan.per_prime;
  };
  e.run = [](const Context& c, std::uint64_t t, std::mt19937_64& rng) {
    const auto& plan = c.get<KatzPlan>();
    const std::uint32_t p = plan.primes[t / plan.per_prime];
    const auto slot = t % plan.per_prime;
    const auto field = c.fields.get(p);
    const auto& f = *field;
    PolyBi poly;
    if (slot == 0) {
      poly = PolyBi({{2, 0, 1}, {0, 2, 1}, {0, 0, p - 1}});
    } else {
      const auto deg = static_cast<unsigned>(plan.degrees[(slot - 1) % plan.degrees.size()]);
      for (;;) {
        std::vector<Monomial> terms;
        for (unsigned i = 0; i <= deg; ++i) {
          for (unsigned j = 0; i + j <= deg; ++j) {
            const Elem co = static_cast<Elem>(uniform_below(rng, f.q()));
            if (co != 0) terms.push_back({i, j, co});
          }
        }
        poly = PolyBi(std::move(terms));
        if (poly.degree() == static_cast<int>(deg) && linear_factor_scan(f, poly).empty()) break;
      }
    }
    const auto r = katz_ratio(field, poly, 0);
    return std::vector<TrialRow>{TrialRow(f, {str(term_string(poly)), cnt(r.degree), cnt(0), cnt(r.level_set_size),
                                              num(r.bias), num(r.ratio), Value{r.has_linear_factor}})};
  };
  return e;
}

struct SalemPlan {
  SalemCase salem_case;
  std::vector<PolyUni> pool;
};

Experiment salem_corollary() {
  Experiment e;
  e.info = {"salem_corollary",
            "Corollary 2.4: F = {(f(x), g(x))} is a Salem set with constant M = deg(f) + deg(g)",
            true,
            true,
            {param("case", K::Int, 1, "1: F_q x F_q, 2: F_q x F_q*, 3: F_q* x F_q*"),
             param("trials", K::Int, 50, "random (f, g) pairs"), param("max_degree", K::Int, 4, "cap on deg f + deg g")},
            {"case", "f", "g", "m", "points", "excluded", "uniformity", "measured_constant"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    const auto& f = *c.require_field();
    auto plan = std::make_shared<SalemPlan>();
    const auto cs = c.params.i("case");
    if (cs < 1 || cs > 3) throw Error(ErrorCode::ConfigInvalid, "case must be 1, 2 or 3");
    plan->salem_case = static_cast<SalemCase>(cs);
    const auto md = c.params.u("max_degree");
    if (md < 2 || md >= f.p()) throw Error(ErrorCode::ConfigInvalid, "need 2 <= max_degree < p");
    if (plan->salem_case == SalemCase::Three) plan->pool = small_irreducibles(f);
    return plan;
  };
  e.trials = [](const Context& c) { return c.params.u("trials"); };
  e.run = [](const Context& c, std::uint64_t, std::mt19937_64& rng) {
    const auto& plan = c.get<SalemPlan>();
    const auto& field = c.field;
    const auto& f = *field;
    const auto md = static_cast<unsigned>(c.params.u("max_degree"));
    for (int attempt = 0; attempt < 10000; ++attempt) {
      PolyUni fp, gp;
      if (plan.salem_case == SalemCase::Three) {
        auto draw = [&] {
          Factorization fac{random_nonzero(f, rng), {}};
          unsigned deg = 0;
          const auto nf = 1 + uniform_below(rng, 2);
          for (std::uint64_t i = 0; i < nf; ++i) {
            const auto& cand = plan.pool[uniform_below(rng, plan.pool.size())];
            const bool dup = std::any_of(fac.factors.begin(), fac.factors.end(), [&](const Factor& x) { return x.poly == cand; });
            const auto ex = static_cast<unsigned>(1 + uniform_below(rng, 2));
            if (dup || deg + cand.degree() * ex > md) continue;
            fac.factors.push_back({cand, ex});
            deg += cand.degree() * ex;
          }
          return fac;
        };
        auto ff = draw(), gf = draw();
        if (ff.factors.empty() || gf.factors.empty()) continue;
        fp = factored(f, std::move(ff));
        gp = factored(f, std::move(gf));
      } else {
        const auto df = static_cast<unsigned>(1 + uniform_below(rng, md - 1));
        const auto dg = static_cast<unsigned>(1 + uniform_below(rng, md));
        fp = random_poly(f, rng, df, false);
        gp = random_poly(f, rng, dg, false);
      }
      if (static_cast<unsigned>(fp.degree() + gp.degree()) > md) continue;
      try {
        const auto cert = build_graph_set(field, fp, gp, plan.salem_case);
        const auto fs = fp.factored ? factor_string(*fp.factored) : coeff_string(fp.coeffs);
        const auto gs = gp.factored ? factor_string(*gp.factored) : coeff_string(gp.coeffs);
        const bool ok = cert.measured_constant <= cert.m + kBoundSlack;
        return std::vector<TrialRow>{TrialRow(
            f,
            {cnt(static_cast<std::uint64_t>(plan.salem_case)), str(fs), str(gs), cnt(cert.m), cnt(cert.points.size()),
             cnt(cert.excluded), num(cert.uniformity), num(cert.measured_constant)},
            ok)};
      } catch (const Error& err) {
        if (err.code() != ErrorCode::HypothesisViolated && err.code() != ErrorCode::EmptySet) throw;
      }
    }
    throw Error(ErrorCode::ConfigInvalid, "no (f, g) satisfying the hypotheses found; widen max_degree");
  };
  return e;
}

Experiment thm22_precursor() {
  Experiment e;
  e.info = {"thm22_precursor",
            "Theorem 2.2: |X||Y| <= |{(x,y) in X~ x Y : x.y in X.Y}| <= |X~||Y||P|/|G^d| + C sqrt(|X~||Y||P|)",
            true,
            true,
            {param("trials", K::Int, 100, "random (X, Y)"), param("y_size", K::Int, 10, "|Y|"),
             param("superset", K::String, "parabola", "parabola or random")},
            {"superset", "x_size", "xtilde_size", "y_size", "product_size", "lhs", "middle", "rhs", "salem_constant"}};
  e.prepare = [](const Context& c) -> std::shared_ptr<const void> {
    const auto& field = c.require_field();
    const auto mode = c.params.s("superset");
    if (mode != "parabola" && mode != "random") throw Error(ErrorCode::ConfigInvalid, "superset must be parabola or random");
    return std::make_shared<GroupSpec>(field, std::vector<AxisKind>{AxisKind::Additive, AxisKind::Additive});
  };
  e.trials = [](const Context& c) { return c.params.u("trials"); };
  e.run = [](const Context& c, std::uint64_t, std::mt19937_64& rng) {
    const auto& g = c.get<GroupSpec>();
    const auto& f = g.field();
    IndexSet xt;
    if (c.params.s("superset") == "parabola") {
      std::vector<Point> pts;
      for (Elem x = 0; x < f.q(); ++x) pts.push_back({x, f.mul(x, x)});
      xt = make_index_set(g, pts);
    } else {
      xt = random_nonempty(g, rng);
    }
    IndexSet x;
    for (const auto i : random_index_subset(rng, xt.size(), 1 + uniform_below(rng, xt.size()))) x.push_back(xt[i]);
    const auto y = random_index_subset(rng, g.size(), std::max<std::uint64_t>(1, c.params.u("y_size")));
    const auto r = theorem22_precursor(g, x, xt, y);
    return std::vector<TrialRow>{TrialRow(
        f,
        {str(c.params.s("superset")), cnt(x.size()), cnt(xt.size()), cnt(y.size()), cnt(r.product_size), num(r.lhs),
         cnt(r.middle), num(r.rhs), num(r.salem_constant)},
        r.pass)};
  };
  return e;
}

}  // namespace

void register_harmonic_experiments(std::vector<Experiment>& out) {
  out.push_back(harmonic_identities());
  out.push_back(lemma21_fuzz());
  out.push_back(gauss_sum_sweep());
  out.push_back(weil_sweep());
  out.push_back(schwarz_zippel_fuzz());
  out.push_back(katz_monitor());
  out.push_back(salem_corollary());
  out.push_back(thm22_precursor());
}

}  // namespace fflab::runner
