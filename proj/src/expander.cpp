#include "fflab/expander.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "fflab/kernels.hpp"

namespace fflab {

namespace {

// Below this many pairs the direct loop beats building bitsets.
constexpr std::size_t kDirectPairLimit = 2048;

std::vector<std::uint32_t> bits_to_coords(const std::vector<std::uint64_t>& bits, std::size_t nbits) {
  std::vector<std::uint32_t> out;
  for (std::size_t w = 0; w < bits.size(); ++w) {
    std::uint64_t word = bits[w];
    while (word != 0) {
      const std::size_t bit = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
      if (bit >= nbits) break;
      out.push_back(static_cast<std::uint32_t>(bit));
      word &= word - 1;
    }
  }
  return out;
}

ElemSet from_mask(const std::vector<char>& mask) {
  ElemSet out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(static_cast<Elem>(i));
  }
  return out;
}

bool contains_zero(std::span<const Elem> s) { return std::find(s.begin(), s.end(), Elem{0}) != s.end(); }

std::vector<std::uint32_t> logs_of_nonzero(const FieldCtx& f, std::span<const Elem> s) {
  std::vector<std::uint32_t> out;
  for (const Elem e : s) {
    if (e != 0) out.push_back(f.dlog(e));
  }
  return out;
}

}  // namespace

ElemSet make_set(std::vector<Elem> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return elems;
}

std::vector<std::uint32_t> cyclic_sumset(std::span<const std::uint32_t> coords, std::span<const std::uint32_t> shifts,
                                         std::uint32_t n) {
  if (coords.empty() || shifts.empty()) return {};
  const std::size_t src_words = (n + 63) / 64;
  const std::size_t dst_bits = 2 * std::size_t{n};
  const std::size_t dst_words = (dst_bits + 63) / 64;
  std::vector<std::uint64_t> src(src_words, 0), dst(dst_words, 0);
  for (const auto c : coords) src[c / 64] |= std::uint64_t{1} << (c % 64);

  const auto& kern = kernels::active();
  std::vector<char> seen(n, 0);
  for (const auto s : shifts) {
    if (seen[s]) continue;
    seen[s] = 1;
    kern.or_shifted(dst.data(), dst_words, src.data(), src_words, s);
  }
  // Fold [n, 2n) back onto [0, n).
  std::vector<std::uint64_t> out(src_words, 0);
  for (std::size_t w = 0; w < dst_words; ++w) {
    std::uint64_t word = dst[w];
    while (word != 0) {
      std::size_t bit = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
      word &= word - 1;
      if (bit >= n) bit -= n;
      out[bit / 64] |= std::uint64_t{1} << (bit % 64);
    }
  }
  return bits_to_coords(out, n);
}

ElemSet op_set(const FieldCtx& f, std::span<const Elem> a, std::span<const Elem> b, SetOp op) {
  if (op == SetOp::Div && contains_zero(b)) throw Error(ErrorCode::DivisionByZero, "0 in the denominator set");
  if (a.empty() || b.empty()) return {};
  const std::size_t pairs = a.size() * b.size();

  if (op == SetOp::Add || op == SetOp::Sub) {
    if (f.k() == 1 && pairs > kDirectPairLimit) {
      std::vector<std::uint32_t> coords(a.begin(), a.end()), shifts;
      for (const Elem e : b) shifts.push_back(op == SetOp::Add ? e : f.neg(e));
      return cyclic_sumset(coords, shifts, f.p());
    }
    std::vector<char> mask(f.q(), 0);
    for (const Elem x : a) {
      for (const Elem y : b) mask[op == SetOp::Add ? f.add(x, y) : f.sub(x, y)] = 1;
    }
    return from_mask(mask);
  }

  // Products and quotients act on discrete logs in Z_{q-1}; zero is tracked apart.
  const bool zero_a = contains_zero(a), zero_b = contains_zero(b);
  const std::uint32_t n = f.q() - 1;
  const auto la = logs_of_nonzero(f, a);
  auto lb = logs_of_nonzero(f, b);
  if (op == SetOp::Div) {
    for (auto& l : lb) l = l == 0 ? 0 : n - l;
  }
  ElemSet out;
  if (zero_a || (op == SetOp::Mul && zero_b)) out.push_back(0);
  if (la.size() * lb.size() > kDirectPairLimit) {
    for (const auto c : cyclic_sumset(la, lb, n)) out.push_back(f.exp(c));
  } else {
    for (const auto x : la) {
      for (const auto y : lb) {
        const std::uint32_t s = x + y;
        out.push_back(f.exp(s >= n ? s - n : s));
      }
    }
  }
  return make_set(std::move(out));
}

ElemSet dfold(const FieldCtx& f, std::span<const Elem> a, SetOp op, unsigned d) {
  if (op != SetOp::Add && op != SetOp::Mul) {
    throw Error(ErrorCode::PreconditionViolated, "d-fold sets are defined for + and x");
  }
  if (d < 1) throw Error(ErrorCode::PreconditionViolated, "d must be positive");
  ElemSet acc = make_set({a.begin(), a.end()});
  if (op == SetOp::Mul && !acc.empty() && acc.front() == 0) {
    throw Error(ErrorCode::PreconditionViolated, "d-fold product set must exclude 0");
  }
  const ElemSet base = acc;
  for (unsigned i = 1; i < d; ++i) acc = op_set(f, acc, base, op);
  return acc;
}

ElemSet image_uni(const FieldCtx& f, const PolyUni& poly, std::span<const Elem> a) {
  std::vector<char> mask(f.q(), 0);
  for (const Elem x : a) mask[eval(f, poly, x)] = 1;
  return from_mask(mask);
}

ElemSet image_bi(const FieldCtx& f, const PolyBi& poly, std::span<const ElemPair> e) {
  std::vector<char> mask(f.q(), 0);
  for (const auto& [x, y] : e) mask[eval(f, poly, x, y)] = 1;
  return from_mask(mask);
}

ElemSet pair_set(const FieldCtx& f, const PolyBi& poly, std::span<const ElemPair> e, std::span<const ElemPair> fset) {
  const std::size_t q = f.q();
  std::vector<char> diff(q * q, 0);
  for (const auto& [x1, x2] : e) {
    for (const auto& [y1, y2] : fset) diff[f.sub(x1, y1) * q + f.sub(x2, y2)] = 1;
  }
  std::vector<char> mask(q, 0);
  for (std::size_t i = 0; i < diff.size(); ++i) {
    if (diff[i]) mask[eval(f, poly, static_cast<Elem>(i / q), static_cast<Elem>(i % q))] = 1;
  }
  return from_mask(mask);
}

std::vector<LinearForm> linear_factor_scan(const FieldCtx& f, const PolyBi& poly) {
  if (poly.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "linear factor scan of the zero polynomial");
  std::vector<LinearForm> out;
  const Elem q = f.q();
  // x + beta y + gamma = 0 is the line (-beta t - gamma, t).
  for (Elem beta = 0; beta < q; ++beta) {
    for (Elem gamma = 0; gamma < q; ++gamma) {
      const Elem x0 = f.neg(gamma), dx = f.neg(beta);
      if (eval(f, poly, x0, 0) != 0) continue;  // a divisor vanishes on the whole line
      if (restrict_to_line(f, poly, x0, dx, 0, 1).is_zero()) out.push_back({1, beta, gamma});
    }
  }
  // y + gamma = 0 is the line (t, -gamma).
  for (Elem gamma = 0; gamma < q; ++gamma) {
    const Elem y0 = f.neg(gamma);
    if (eval(f, poly, 0, y0) != 0) continue;
    if (restrict_to_line(f, poly, 0, 1, y0, 0).is_zero()) out.push_back({0, 1, gamma});
  }
  return out;
}

std::vector<Elem> evaluation_table(const FieldCtx& f, const PolyBi& poly) {
  const Elem q = f.q();
  std::vector<Elem> values(std::size_t{q} * q);
  for (Elem x = 0; x < q; ++x) {
    for (Elem y = 0; y < q; ++y) values[std::size_t{x} * q + y] = eval(f, poly, x, y);
  }
  return values;
}

LineScan scan_lines(const FieldCtx& f, std::span<const Elem> values) {
  const Elem q = f.q();
  LineScan out;
  std::vector<char> in_delta(q, 0);
  auto at = [&](Elem x, Elem y) { return values[std::size_t{x} * q + y]; };
  // Class of x + beta y: lines (-beta t - gamma, t).
  for (Elem beta = 0; beta < q; ++beta) {
    bool whole_class = true;
    const Elem nb = f.neg(beta);
    for (Elem gamma = 0; gamma < q; ++gamma) {
      const Elem x0 = f.neg(gamma);
      const Elem v0 = at(x0, 0);
      bool constant = true;
      Elem x = x0;
      for (Elem t = 1; t < q && constant; ++t) {
        x = f.add(x, nb);
        constant = at(x, t) == v0;
      }
      if (constant) {
        in_delta[v0] = 1;
      } else {
        whole_class = false;
      }
    }
    out.degenerate = out.degenerate || whole_class;
  }
  // Class of y: lines (t, -gamma).
  bool whole_class = true;
  for (Elem gamma = 0; gamma < q; ++gamma) {
    const Elem y0 = f.neg(gamma);
    const Elem v0 = at(0, y0);
    bool constant = true;
    for (Elem t = 1; t < q && constant; ++t) constant = at(t, y0) == v0;
    if (constant) {
      in_delta[v0] = 1;
    } else {
      whole_class = false;
    }
  }
  out.degenerate = out.degenerate || whole_class;
  out.delta = from_mask(in_delta);
  return out;
}

bool is_degenerate(const FieldCtx& f, const PolyBi& poly) {
  if (poly.degree() >= static_cast<int>(f.q())) {
    throw Error(ErrorCode::PreconditionViolated, "degeneracy test needs deg P < q");
  }
  return scan_lines(f, evaluation_table(f, poly)).degenerate;
}

DeltaReport bad_set_delta(const FieldCtx& f, const PolyBi& poly) {
  if (is_degenerate(f, poly)) throw Error(ErrorCode::DegeneracyDetected, "P = Q(L) for a linear form L");
  DeltaReport r;
  r.degree = poly.degree();
  for (Elem a = 0; a < f.q(); ++a) {
    const PolyBi shifted = sub_const(f, poly, a);
    if (!linear_factor_scan(f, shifted).empty()) r.delta.push_back(a);
  }
  r.pass = static_cast<int>(r.delta.size()) <= r.degree - 1;
  return r;
}

GaraevChang garaev_chang_construct(const FieldCtx& f, std::uint64_t n) {
  const std::uint32_t p = f.p();
  if (f.k() != 1) throw Error(ErrorCode::PreconditionViolated, "construction needs a prime field");
  if (n < 1 || 100 * n >= p) throw Error(ErrorCode::PreconditionViolated, "need 1 <= N < 0.01 p");
  GaraevChang g;
  g.p = p;
  g.n = n;
  const std::uint64_t target = 4 * n * p;  // M = floor(sqrt(4 N p))
  std::uint64_t m = 0;
  while ((m + 1) * (m + 1) <= target) ++m;
  g.m = m;

  std::vector<char> in_x(p, 0);
  for (std::uint64_t x = 1; x < p; ++x) {
    const std::uint64_t sq = x * x % p;
    if (sq >= 1 && sq <= m) {
      in_x[x] = 1;
      ++g.x_size;
    }
  }
  // Sliding count over windows {L+1, ..., L+M} inside [1, p-1].
  std::size_t count = 0;
  for (std::uint64_t x = 1; x <= m; ++x) count += in_x[x];
  std::size_t best = count;
  std::uint64_t best_l = 0;
  for (std::uint64_t l = 1; l + m <= p - 1; ++l) {
    count += in_x[l + m];
    count -= in_x[l];
    if (count > best) {
      best = count;
      best_l = l;
    }
  }
  g.window = best_l;
  for (std::uint64_t x = best_l + 1; x <= best_l + m; ++x) {
    if (in_x[x]) g.a.push_back(static_cast<Elem>(x));
  }
  const PolyUni square({0, 0, 1});
  const ElemSet squares = image_uni(f, square, g.a);
  g.sumset_size = op_set(f, g.a, squares, SetOp::Add).size();
  g.pass = !g.a.empty() && g.sumset_size <= 2 * g.m;
  return g;
}

PrRuzsaReport pr_ruzsa_checks(const FieldCtx& f, std::span<const Elem> a_in) {
  if (a_in.empty()) throw Error(ErrorCode::EmptySet, "A must be nonempty");
  const ElemSet a = make_set({a_in.begin(), a_in.end()});
  const ElemSet sq = image_uni(f, PolyUni({0, 0, 1}), a);
  PrRuzsaReport r;
  r.a = a.size();
  r.a_sq = sq.size();
  r.a_plus_a_sq = op_set(f, a, sq, SetOp::Add).size();
  r.four_fold = dfold(f, a, SetOp::Add, 4).size();
  r.sq_minus_sq = op_set(f, sq, sq, SetOp::Sub).size();
  r.a_plus_a = op_set(f, a, a, SetOp::Add).size();
  r.a_minus_a = op_set(f, a, a, SetOp::Sub).size();

  using U = unsigned __int128;
  const U s = r.a_plus_a_sq, s2 = s * s, s4 = s2 * s2;
  const U sq3 = U{r.a_sq} * r.a_sq * r.a_sq;
  r.four_fold_ok = U{r.four_fold} * sq3 <= s4;
  r.sq_minus_sq_ok = U{r.sq_minus_sq} * r.a <= s2;
  r.sum_ok = U{r.a_plus_a} * r.a_sq <= s2;
  r.diff_ok = U{r.a_minus_a} * r.a_sq <= s2;
  return r;
}

}  // namespace fflab
