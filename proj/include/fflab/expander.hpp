#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fflab/field.hpp"
#include "fflab/poly.hpp"

namespace fflab {

/// Finite subset of F_q, sorted by canonical index without duplicates.
using ElemSet = std::vector<Elem>;
using ElemPair = std::pair<Elem, Elem>;
using PairSet = std::vector<ElemPair>;

enum class SetOp { Add, Sub, Mul, Div };

ElemSet make_set(std::vector<Elem> elems);

/// {a op b : a in A, b in B}. Division requires 0 not in B.
ElemSet op_set(const FieldCtx& f, std::span<const Elem> a, std::span<const Elem> b, SetOp op);
/// Left fold of op_set over d copies of A (op Add or Mul).
ElemSet dfold(const FieldCtx& f, std::span<const Elem> a, SetOp op, unsigned d);

ElemSet image_uni(const FieldCtx& f, const PolyUni& poly, std::span<const Elem> a);
ElemSet image_bi(const FieldCtx& f, const PolyBi& poly, std::span<const ElemPair> e);
/// {P(x1 - y1, x2 - y2) : x in E, y in F}
ElemSet pair_set(const FieldCtx& f, const PolyBi& poly, std::span<const ElemPair> e, std::span<const ElemPair> fset);

/// alpha x + beta y + gamma, scaled so the first nonzero of (alpha, beta) is 1.
struct LinearForm {
  Elem alpha = 0;
  Elem beta = 0;
  Elem gamma = 0;
  bool operator==(const LinearForm&) const = default;
};

/// Every linear divisor of P up to scalars, in canonical order: (1, beta, gamma)
/// by (beta, gamma), then (0, 1, gamma). Divisibility is decided by the exact
/// remainder of P modulo the form, i.e. P restricted to the line as a polynomial.
std::vector<LinearForm> linear_factor_scan(const FieldCtx& f, const PolyBi& poly);

/// True when P = Q(ux + vy) for a univariate Q. Requires deg P < q, which makes
/// constancy on every line of one parallel class equivalent to the identity.
bool is_degenerate(const FieldCtx& f, const PolyBi& poly);

struct DeltaReport {
  ElemSet delta;  // a such that P - a has a linear factor
  int degree = 0;
  bool pass = false;  // |delta| <= degree - 1
};

/// Throws DegeneracyDetected for degenerate P.
DeltaReport bad_set_delta(const FieldCtx& f, const PolyBi& poly);

/// Line-constancy scan over a q x q evaluation table (values[x * q + y]).
/// A line on which P is constant with value a is exactly a linear factor of
/// P - a (given deg P < q), so one pass yields both degeneracy and Delta.
struct LineScan {
  bool degenerate = false;
  ElemSet delta;
};
LineScan scan_lines(const FieldCtx& f, std::span<const Elem> values);
std::vector<Elem> evaluation_table(const FieldCtx& f, const PolyBi& poly);

struct GaraevChang {
  std::uint32_t p = 0;
  std::uint64_t n = 0;
  std::uint64_t m = 0;        // floor(2 sqrt(N p))
  std::uint64_t window = 0;   // L: A = X intersect {L+1, ..., L+M}
  std::size_t x_size = 0;
  ElemSet a;
  std::size_t sumset_size = 0;  // |A + A^2|
  bool pass = false;            // |A + A^2| <= 2M and A nonempty
  double size_over_n() const { return static_cast<double>(a.size()) / static_cast<double>(n); }
};

/// Quadratic residues in [1, M] lifted to their roots, trapped in the densest
/// window of length M. Requires a prime field and 1 <= N < 0.01 p.
GaraevChang garaev_chang_construct(const FieldCtx& f, std::uint64_t n);

struct PrRuzsaReport {
  std::size_t a = 0, a_sq = 0, a_plus_a_sq = 0;
  std::size_t four_fold = 0, sq_minus_sq = 0, a_plus_a = 0, a_minus_a = 0;
  bool four_fold_ok = false;    // |4A| |A^2|^3 <= |A + A^2|^4
  bool sq_minus_sq_ok = false;  // |A^2 - A^2| |A| <= |A + A^2|^2
  bool sum_ok = false;          // |A + A| |A^2| <= |A + A^2|^2
  bool diff_ok = false;         // |A - A| |A^2| <= |A + A^2|^2
  bool pass() const { return four_fold_ok && sq_minus_sq_ok && sum_ok && diff_ok; }
};

PrRuzsaReport pr_ruzsa_checks(const FieldCtx& f, std::span<const Elem> a);

}  // namespace fflab

namespace fflab {

/// {(a + s) mod n : a in coords, s in shifts} through the bitset shift-OR
/// kernel; inputs are coordinates in [0, n). Output sorted.
std::vector<std::uint32_t> cyclic_sumset(std::span<const std::uint32_t> coords, std::span<const std::uint32_t> shifts,
                                         std::uint32_t n);

}  // namespace fflab
