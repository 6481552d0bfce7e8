#include "germlab/order.hpp"

#include <algorithm>

#include "germlab/scan.hpp"

namespace germlab {

std::string verdict_kind_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::certified_lt: return "CERTIFIED_LT";
    case VerdictKind::holds_upto_lt: return "HOLDS_UPTO_LT";
    case VerdictKind::fails_at: return "FAILS_AT";
    case VerdictKind::mixed: return "MIXED";
    case VerdictKind::equal_from: return "EQUAL_FROM";
    case VerdictKind::differ_throughout: return "DIFFER_THROUGHOUT";
  }
  return "?";
}

std::string triage_kind_name(TriageKind k) {
  switch (k) {
    case TriageKind::all_free_ultrafilters: return "ALL_FREE_ULTRAFILTERS";
    case TriageKind::no_free_ultrafilter: return "NO_FREE_ULTRAFILTER";
    case TriageKind::depends_on_ultrafilter: return "DEPENDS_ON_ULTRAFILTER";
  }
  return "?";
}

std::string arch_kind_name(ArchKind k) {
  switch (k) {
    case ArchKind::same_class: return "SAME_CLASS";
    case ArchKind::lower_class: return "LOWER_CLASS";
    case ArchKind::higher_class: return "HIGHER_CLASS";
    case ArchKind::unresolved: return "UNRESOLVED";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Horizon scan.  The final constant-sign run decides the verdict; a run
// shorter than the last quarter of the window is treated as still flipping
// and reported MIXED rather than promoted to a tail claim.

namespace {

OrderVerdict analyze_signs(const std::vector<int8_t>& s, long from, long to) {
  long len = to - from + 1;
  int8_t c = s.back();
  long j1 = to;
  while (j1 > from && s[static_cast<std::size_t>(j1 - 1 - from)] == c) --j1;

  long need = std::min(len, std::max<long>(2, len / 4));
  if (to - j1 + 1 < need) return {VerdictKind::mixed, j1, to, std::nullopt};

  if (c == 0) return {VerdictKind::equal_from, j1, to, std::nullopt};
  if (c < 0) return {VerdictKind::holds_upto_lt, j1, to, std::nullopt};
  return {VerdictKind::fails_at, j1, to, std::nullopt};
}

// ---------------------------------------------------------------------------
// Certified comparison of PL code generators.
//
// Eventual sign of K_a - K_b plus an index bound B beyond which the sign is
// proved constant:
//   poly vs poly    sign of the leading coefficient of the difference; B is
//                   the Cauchy root bound.
//   exp vs exp      same base: sign of c_a - c_b everywhere; different base:
//                   the larger base wins, B found by forward search (the
//                   ratio grows by b_big/b_small >= some factor > 1, so a
//                   single true index persists).
//   poly vs exp     the exponential wins from B = first index past both the
//                   poly's root bound and the bound where p(j+1) <= 2 p(j),
//                   at which c*b^j > p(j): then c*b^{j+1} >= 2*c*b^j >
//                   2*p(j) >= p(j+1).
// The minimal germ witness is then found by an exact scan up to B.

struct CodeCert {
  int eventual;   // sign of K_a(j) - K_b(j) for all j >= bound
  long bound;
  std::string how;
};

Int cauchy_bound(const PolyGen& p) {
  int d = p.degree();
  if (d <= 0) return 1;
  Int lead = ::abs(p.coeff[static_cast<std::size_t>(d)]);
  Int worst = 0;
  for (int i = 0; i < d; ++i)
    worst = std::max(worst, Int(::abs(p.coeff[static_cast<std::size_t>(i)])));
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), worst.get_mpz_t(), lead.get_mpz_t());
  return q + 2;
}

long to_long_capped(const Int& v, long cap) {
  if (!v.fits_slong_p()) return cap;
  return std::min(v.get_si(), cap);
}

constexpr long kCertScanCap = 1L << 22;

std::optional<CodeCert> certify_poly_poly(const PolyGen& a, const PolyGen& b) {
  PolyGen d;
  std::size_t n = std::max(a.coeff.size(), b.coeff.size());
  d.coeff.resize(n, Int(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (i < a.coeff.size()) d.coeff[i] += a.coeff[i];
    if (i < b.coeff.size()) d.coeff[i] -= b.coeff[i];
  }
  d.trim();
  if (d.coeff.empty()) return CodeCert{0, 1, "identical-polynomials"};
  int ev = sgn(d.leading());
  long bound = to_long_capped(cauchy_bound(d), kCertScanCap);
  return CodeCert{ev, bound, "poly-dominance"};
}

std::optional<CodeCert> certify_exp_exp(const ExpGen& a, const ExpGen& b) {
  if (a.b == b.b) {
    int ev = sgn(a.c - b.c);
    return CodeCert{ev, 1, ev == 0 ? "identical-exponentials" : "exp-coefficient"};
  }
  // Larger base dominates; find the first winning index, it persists.
  const ExpGen& big = a.b > b.b ? a : b;
  const ExpGen& small = a.b > b.b ? b : a;
  int ev = a.b > b.b ? +1 : -1;
  long j = 0;
  while (j < kCertScanCap && big.eval(j) <= small.eval(j)) ++j;
  if (j >= kCertScanCap) return std::nullopt;
  return CodeCert{ev, j, "exp-base"};
}

// 2 p(j) - p(j+1) has the same positive leading coefficient as p, so beyond
// its Cauchy bound the growth condition p(j+1) <= 2 p(j) holds for good.
long growth_safe_start(const PolyGen& p) {
  if (p.degree() < 1) return 1;
  std::size_t n = p.coeff.size();
  // p(j+1) by binomial expansion.
  std::vector<Int> shifted(n, Int(0));
  std::vector<std::vector<Int>> binom(n, std::vector<Int>(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) {
    binom[i][0] = 1;
    for (std::size_t k = 1; k <= i; ++k)
      binom[i][k] = binom[i - 1][k - 1] + (k <= i - 1 ? binom[i - 1][k] : Int(0));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= i; ++k) shifted[k] += p.coeff[i] * binom[i][k];
  PolyGen r;
  r.coeff.resize(n, Int(0));
  for (std::size_t i = 0; i < n; ++i) r.coeff[i] = 2 * p.coeff[i] - shifted[i];
  r.trim();
  if (r.coeff.empty()) return 1;
  return to_long_capped(cauchy_bound(r), kCertScanCap);
}

// Bound past which c*b^j > p(j), persisting by induction: with p positive and
// p(j+1) <= 2 p(j) from the start index on, c*b^{j+1} >= 2*c*b^j > 2*p(j) >=
// p(j+1).  For p eventually nonpositive the poly root bound alone suffices.
std::optional<CodeCert> certify_exp_over_poly(const ExpGen& e, const PolyGen& p,
                                              int ev_when_exp_wins) {
  long start = to_long_capped(cauchy_bound(p), kCertScanCap);
  if (p.degree() >= 0 && sgn(p.leading()) > 0)
    start = std::max(start, growth_safe_start(p));
  long j = std::max<long>(start, 1);
  for (; j < kCertScanCap; ++j)
    if (e.eval(j) > p.eval(Int(j))) break;
  if (j >= kCertScanCap) return std::nullopt;
  return CodeCert{ev_when_exp_wins, j, "exp-over-poly"};
}

std::optional<CodeCert> certify_codes(const CodeGen& a, const CodeGen& b) {
  if (const auto* pa = std::get_if<PolyGen>(&a)) {
    if (const auto* pb = std::get_if<PolyGen>(&b)) return certify_poly_poly(*pa, *pb);
    if (const auto* eb = std::get_if<ExpGen>(&b)) return certify_exp_over_poly(*eb, *pa, -1);
  } else if (const auto* ea = std::get_if<ExpGen>(&a)) {
    if (const auto* pb = std::get_if<PolyGen>(&b)) return certify_exp_over_poly(*ea, *pb, +1);
    if (const auto* eb = std::get_if<ExpGen>(&b)) return certify_exp_exp(*ea, *eb);
  }
  return std::nullopt;
}

std::optional<OrderVerdict> certified_compare(const PLGerm& a, const PLGerm& b,
                                              const GridWindow& window) {
  if (!a.certified_tail() || !b.certified_tail()) return std::nullopt;
  auto cert = certify_codes(a.tail(), b.tail());
  if (!cert) return std::nullopt;

  long bound = std::max({cert->bound, a.tail_start(), b.tail_start()});
  long from = std::max(a.start(), b.start());
  int ev = cert->eventual;  // sign of K_a - K_b from `bound` on

  // Exact minimal witness: last index below `bound` where the code sign
  // disagrees with the eventual sign.
  auto disagree = [&](long j) { return sgn(a.code(j) - b.code(j)) != ev; };
  std::optional<long> last_bad;
  if (from < bound) last_bad = scan::last_where(from, bound - 1, disagree);
  long witness = last_bad ? *last_bad + 1 : from;

  // Germ values flip the code order: bigger code = smaller value.
  if (ev > 0)
    return OrderVerdict{VerdictKind::certified_lt, witness, window.to, cert->how};
  if (ev < 0) return OrderVerdict{VerdictKind::fails_at, witness, window.to, std::nullopt};
  return OrderVerdict{VerdictKind::equal_from, witness, window.to, std::nullopt};
}

}  // namespace

OrderVerdict compare_germwise(const GridFn& a, const GridFn& b,
                              const GridWindow& window, CompareMode mode) {
  if (mode == CompareMode::certified_only)
    throw not_certifiable("operands are not in the certified generator class");
  GridWindow w = common_window(window, {a, b});
  auto s = scan::sign_table(a, b, w.from, w.to);
  return analyze_signs(s, w.from, w.to);
}

OrderVerdict compare_germwise(const PLGerm& a, const PLGerm& b,
                              const GridWindow& window, CompareMode mode) {
  if (window.from < std::max(a.start(), b.start()))
    throw index_before_start(window.from, std::max(a.start(), b.start()));
  if (mode != CompareMode::horizon_only) {
    auto v = certified_compare(a, b, window);
    if (v) return *v;
    if (mode == CompareMode::certified_only)
      throw not_certifiable("generator tails are not comparable by structure");
  }
  return compare_germwise(view(a), view(b), window, CompareMode::horizon_only);
}

OrderVerdict compare_germwise(const RatGerm& a, const RatGerm& b,
                              const GridWindow& window, CompareMode mode) {
  return compare_germwise(view(a), view(b), window, mode);
}

OrderVerdict canonical_eq(const GridFn& a, const GridFn& b, const GridWindow& window) {
  GridWindow w = common_window(window, {a, b});
  auto s = scan::sign_table(a, b, w.from, w.to);
  if (s.back() != 0) return {VerdictKind::differ_throughout, w.to, w.to, std::nullopt};
  long j1 = w.to;
  while (j1 > w.from && s[static_cast<std::size_t>(j1 - 1 - w.from)] == 0) --j1;
  return {VerdictKind::equal_from, j1, w.to, std::nullopt};
}

// ---------------------------------------------------------------------------

TriageVerdict frechet_triage(const SeqGerm& a, const SeqGerm& b, long prefix_length) {
  if (prefix_length < 16)
    throw prefix_too_short("prefix of " + std::to_string(prefix_length) +
                           " cannot form 4 dyadic tail blocks (need >= 16)");
  long i0 = std::max(a.start(), b.start());
  long end = i0 + prefix_length - 1;

  std::vector<char> good(static_cast<std::size_t>(prefix_length));
  for (long i = i0; i <= end; ++i)
    good[static_cast<std::size_t>(i - i0)] = a.term(i) < b.term(i) ? 1 : 0;

  TriageVerdict v{};
  v.prefix_from = i0;
  v.prefix_to = end;
  for (char g : good) (g ? v.below_count : v.other_count) += 1;

  // Dyadic tail blocks: offsets [P/2,P), [P/4,P/2), [P/8,P/4), [P/16,P/8).
  bool both_in_every_block = true;
  long hi = prefix_length;
  for (int k = 0; k < 4; ++k) {
    long lo = prefix_length >> (k + 1);
    bool has_good = false, has_bad = false;
    for (long off = lo; off < hi; ++off)
      (good[static_cast<std::size_t>(off)] ? has_good : has_bad) = true;
    if (!has_good || !has_bad) {
      both_in_every_block = false;
      break;
    }
    hi = lo;
  }
  if (both_in_every_block && v.below_count > 0 && v.other_count > 0) {
    v.kind = TriageKind::depends_on_ultrafilter;
    return v;
  }

  long last_bad = -1, last_good = -1;
  for (long off = 0; off < prefix_length; ++off)
    (good[static_cast<std::size_t>(off)] ? last_good : last_bad) = off;

  if (last_bad < 0) {
    v.kind = TriageKind::all_free_ultrafilters;
    v.cofinite_from = i0;
  } else if (last_good < 0) {
    v.kind = TriageKind::no_free_ultrafilter;
    v.cofinite_from = i0;
  } else if (last_good > last_bad) {
    v.kind = TriageKind::all_free_ultrafilters;
    v.cofinite_from = i0 + last_bad + 1;
  } else {
    v.kind = TriageKind::no_free_ultrafilter;
    v.cofinite_from = i0 + last_good + 1;
  }
  return v;
}

// ---------------------------------------------------------------------------

ArchClassVerdict arch_class_compare(const GridFn& a, const GridFn& b,
                                    const GridWindow& window, long n_cap) {
  if (n_cap < 2) throw error("n_cap must be >= 2");
  GridWindow w = common_window(window, {a, b});

  std::vector<long> ladder;
  for (long n = 1; n <= n_cap; n *= 2) ladder.push_back(n);

  auto lt = [&](const GridFn& x, const GridFn& y) {
    return compare_germwise(x, y, w, CompareMode::horizon_only).is_lt();
  };

  // Class membership is monotone in n, so the doubling ladder finds the
  // minimal witness within a factor of 2.
  for (long n : ladder) {
    Rat rn(n);
    if (lt(a, scaled(rn, b)) && lt(b, scaled(rn, a)))
      return {ArchKind::same_class, n, n_cap, w.to};
  }

  bool lower = true;
  for (long n : ladder)
    if (!lt(scaled(Rat(n), a), b)) {
      lower = false;
      break;
    }
  if (lower) return {ArchKind::lower_class, 0, n_cap, w.to};

  bool higher = true;
  for (long n : ladder)
    if (!lt(scaled(Rat(n), b), a)) {
      higher = false;
      break;
    }
  if (higher) return {ArchKind::higher_class, 0, n_cap, w.to};

  return {ArchKind::unresolved, 0, n_cap, w.to};
}

}  // namespace germlab
