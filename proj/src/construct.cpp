#include "germlab/construct.hpp"

#include <algorithm>

#include "germlab/scan.hpp"

namespace germlab {

namespace {

// Exponent guard for c*b^K where K comes from another germ's codes; beyond
// this the numbers stop being desk-scale objects.
constexpr long kExpArgCap = 1L << 24;

long to_long_checked(const Int& v, const char* what) {
  if (!v.fits_slong_p())
    throw error(std::string(what) + " does not fit a machine index");
  return v.get_si();
}

// K_p at an arbitrary integer index (codes of other germs can exceed long
// range only for the polynomial tail, which evaluates exactly).
Int code_at(const PLGerm& p, const Int& j) {
  if (j < p.start()) throw index_before_start(to_long_checked(j, "index"), p.start());
  Int head_end = p.tail_start();
  if (j < head_end) return p.code(j.get_si());
  if (const auto* poly = std::get_if<PolyGen>(&p.tail())) return poly->eval(j);
  if (const auto* e = std::get_if<ExpGen>(&p.tail())) {
    if (j > kExpArgCap)
      throw error("composed exponent exceeds the evaluation cap");
    return e->eval(j.get_si());
  }
  return std::get<OpaqueGen>(p.tail()).fn(to_long_checked(j, "opaque generator index"));
}

PolyGen poly_mul(const PolyGen& a, const PolyGen& b) {
  PolyGen r;
  if (a.coeff.empty() || b.coeff.empty()) return r;
  r.coeff.assign(a.coeff.size() + b.coeff.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.coeff.size(); ++i)
    for (std::size_t k = 0; k < b.coeff.size(); ++k)
      r.coeff[i + k] += a.coeff[i] * b.coeff[k];
  r.trim();
  return r;
}

// p(q(j)) by Horner over polynomial values.
PolyGen poly_compose(const PolyGen& p, const PolyGen& q) {
  PolyGen r;
  for (auto it = p.coeff.rbegin(); it != p.coeff.rend(); ++it) {
    r = poly_mul(r, q);
    if (r.coeff.empty()) r.coeff.push_back(*it);
    else r.coeff[0] += *it;
  }
  r.trim();
  return r;
}

}  // namespace

PLGerm compose(const PLGerm& p, const PLGerm& q, long search_limit) {
  // Shift the start until q's codes land in p's domain; codes of a valid q
  // only grow, so the first landing index works for the whole tail.
  long start = q.start();
  while (start <= search_limit && q.code(start) < p.start()) ++start;
  if (start > search_limit)
    throw domain_mismatch("inner germ codes never reach the outer germ's domain");

  // The closed-form tail applies once q runs on its tail and its codes have
  // passed p's head region.
  long jt = std::max(start, q.tail_start());
  while (q.code(jt) < p.tail_start()) {
    if (++jt - start > search_limit)
      throw domain_mismatch("inner germ codes never clear the outer head table");
  }

  std::vector<Int> head;
  for (long j = start; j < jt; ++j) head.push_back(code_at(p, q.code(j)));

  CodeGen tail;
  const auto* pp = std::get_if<PolyGen>(&p.tail());
  const auto* qp = std::get_if<PolyGen>(&q.tail());
  if (pp && qp) {
    tail = poly_compose(*pp, *qp);
  } else {
    PLGerm pc = p, qc = q;
    tail = OpaqueGen{[pc, qc](long j) { return code_at(pc, qc.code(j)); }};
  }
  return PLGerm(start, std::move(tail), std::move(head));
}

RatGerm invert(const PLGerm& p, InvertMode mode) {
  // The anchor grid is sparse; locating 1/g between anchors is a binary
  // search over the codes.  Monotonicity violations surface as search
  // failures, flagged on the evaluation that witnesses them.
  long p0 = p.start();
  Int first_code = p.code(p0);
  long result_start = to_long_checked(first_code, "first anchor index");

  auto anchor_at_or_below = [p, p0](long g) -> long {
    // Largest j with K(j) <= g; K(j) >= K(p0) + (j - p0) bounds the search.
    // RatGerm evaluation rejects g below the first anchor before we get here.
    long lo = p0;
    long hi = p0 + (g - to_long_checked(p.code(p0), "anchor"));
    while (lo < hi) {
      long mid = lo + (hi - lo + 1) / 2;
      if (p.code(mid) <= g) lo = mid;
      else hi = mid - 1;
    }
    if (p.code(lo) > g || (lo > p0 && p.code(lo - 1) >= p.code(lo)))
      throw not_strictly_monotone("generator codes are not strictly increasing");
    return lo;
  };

  if (mode == InvertMode::anchors_only) {
    return RatGerm(
        result_start,
        [anchor_at_or_below](long g) {
          return Rat(Int(1), Int(anchor_at_or_below(g)));
        },
        Tier::pseudo_monotone);
  }

  PLGerm pc = p;
  return RatGerm(
      result_start,
      [anchor_at_or_below, pc](long g) {
        long j = anchor_at_or_below(g);
        Rat x = Rat::inverse_of(Int(g));
        Rat xj = Rat::inverse_of(pc.code(j));
        if (x == xj) return Rat(Int(1), Int(j));
        // Affine between (1/K(j+1), 1/(j+1)) and (1/K(j), 1/j).
        Rat xj1 = Rat::inverse_of(pc.code(j + 1));
        Rat yj = Rat(Int(1), Int(j));
        Rat yj1 = Rat(Int(1), Int(j + 1));
        return yj1 + (x - xj1) * ((yj - yj1) / (xj - xj1));
      },
      Tier::strict_monotone_continuous);
}

PLGerm mul(const PLGerm& a, const PLGerm& b) {
  long start = std::max(a.start(), b.start());
  long jt = std::max({start, a.tail_start(), b.tail_start()});
  std::vector<Int> head;
  for (long j = start; j < jt; ++j) head.push_back(a.code(j) * b.code(j));

  CodeGen tail;
  const auto* pa = std::get_if<PolyGen>(&a.tail());
  const auto* pb = std::get_if<PolyGen>(&b.tail());
  const auto* ea = std::get_if<ExpGen>(&a.tail());
  const auto* eb = std::get_if<ExpGen>(&b.tail());
  if (pa && pb) {
    tail = poly_mul(*pa, *pb);
  } else if (ea && eb) {
    tail = ExpGen{ea->c * eb->c, ea->b * eb->b};
  } else {
    PLGerm ac = a, bc = b;
    tail = OpaqueGen{[ac, bc](long j) { return ac.code(j) * bc.code(j); }};
  }
  return PLGerm(start, std::move(tail), std::move(head));
}

namespace {

RatGerm pointwise(const RatGerm& a, const RatGerm& b,
                  std::function<Rat(const Rat&, const Rat&)> op) {
  long start = std::max(a.start(), b.start());
  std::optional<long> end;
  if (a.end()) end = *a.end();
  if (b.end()) end = end ? std::min(*end, *b.end()) : *b.end();
  if (end && *end < start) throw domain_mismatch("operand domains do not overlap");
  if (end) {
    std::vector<Rat> table;
    for (long j = start; j <= *end; ++j) table.push_back(op(a.value(j), b.value(j)));
    return RatGerm(start, std::move(table));
  }
  RatGerm ac = a, bc = b;
  return RatGerm(start, [ac, bc, op](long j) { return op(ac.value(j), bc.value(j)); });
}

}  // namespace

RatGerm mul(const RatGerm& a, const RatGerm& b) {
  return pointwise(a, b, [](const Rat& x, const Rat& y) { return x * y; });
}

RatGerm add(const RatGerm& a, const RatGerm& b) {
  return pointwise(a, b, [](const Rat& x, const Rat& y) { return x + y; });
}

RatGerm div(const RatGerm& a, const RatGerm& b) {
  return pointwise(a, b, [](const Rat& x, const Rat& y) {
    if (!y.is_positive()) throw division_by_zero();
    return x / y;
  });
}

RatGerm scale(const Rat& q, const RatGerm& a) {
  if (!q.is_positive()) throw error("scale factor must be positive");
  RatGerm ac = a;
  if (a.end()) {
    std::vector<Rat> table;
    for (long j = a.start(); j <= *a.end(); ++j) table.push_back(q * a.value(j));
    return RatGerm(a.start(), std::move(table));
  }
  return RatGerm(a.start(), [q, ac](long j) { return q * ac.value(j); });
}

RatGerm open_mult_radius(const RatGerm& m, const RatGerm& r) {
  return mul(m, r);
}

// ---------------------------------------------------------------------------
// Coinitial minorant.

MinorizeResult minorize_to_pl(const RatGerm& m, long horizon) {
  long scan_to = 4 * horizon + 16;
  if (m.end()) scan_to = std::min(scan_to, *m.end());

  {
    GridWindow w(m.start(), std::min(scan_to, std::max(m.start(), horizon)));
    auto rep = validate(m, w);
    for (const auto& c : rep.checks)
      if (!c.ok && c.name != "strictly_decreasing")
        throw error("minorant input fails validation: " + c.name);
  }

  // Stage 1: anchors.  a_t = first grid index whose value drops below the
  // threshold 1/n_t; after recording it the next threshold jumps to
  // ceil(1/m(a_t)), the first one whose drop index lies strictly beyond.
  std::vector<long> anchors;
  Int n = 1;
  for (long j = m.start(); j <= scan_to; ++j) {
    Rat v = m.value(j);
    if (v < Rat(Int(1), n)) {
      anchors.push_back(j);
      n = v.reciprocal().ceil();
      if (anchors.size() >= 3 && anchors[anchors.size() - 3] >= horizon + 1) break;
    }
  }
  if (anchors.size() < 3 || anchors[anchors.size() - 3] < horizon + 1)
    throw limit_unverified(
        "profile does not drop below the thresholds needed to cover the horizon");

  const long T = static_cast<long>(anchors.size());
  auto a = [&](long t) { return anchors[static_cast<std::size_t>(t - 1)]; };  // 1-based

  // Stage 2: intermediate profile, w~(1/a_t) = m(1/a_{t+2}), affine between
  // anchor points.
  std::vector<Rat> w(static_cast<std::size_t>(T - 2));
  for (long t = 1; t <= T - 2; ++t)
    w[static_cast<std::size_t>(t - 1)] = m.value(a(t + 2));
  auto w_at_anchor = [&](long t) { return w[static_cast<std::size_t>(t - 1)]; };

  auto w_tilde = [&](long g) -> Rat {
    // a_1 <= g <= a_{T-2}; find t with a_t <= g <= a_{t+1}.
    auto it = std::upper_bound(anchors.begin(), anchors.end(), g);
    long t = static_cast<long>(it - anchors.begin());  // a_t <= g < a_{t+1}
    if (a(t) == g) return w_at_anchor(t);
    Rat x = Rat::inverse_of(Int(g));
    Rat xt = Rat::inverse_of(Int(a(t)));
    Rat xt1 = Rat::inverse_of(Int(a(t + 1)));
    Rat wt = w_at_anchor(t);
    Rat wt1 = w_at_anchor(t + 1);
    return wt1 + (x - xt1) * ((wt - wt1) / (xt - xt1));
  };

  // Stage 3: integer codes via the ceiling formula, with a minimal bump when
  // the ceiling alone plateaus (PL codes must be strictly increasing; the
  // bump only pushes the output lower, so strictness below m is kept).
  long from = std::max({a(1) - 1, m.start(), 1L});
  long to = a(T - 2) - 1;
  std::vector<Int> codes;
  codes.reserve(static_cast<std::size_t>(to - from + 1));
  for (long i = from; i <= to; ++i) {
    Int k = w_tilde(i + 1).reciprocal().ceil() + 1;
    if (!codes.empty() && k <= codes.back()) k = codes.back() + 1;
    codes.push_back(k);
  }

  // Beyond the covered range the germ continues with a strict ramp; no
  // minorant claim is made there.
  Int anchor_code = codes.back() - Int(to);
  PolyGen ramp{{anchor_code, Int(1)}};
  return MinorizeResult{PLGerm(from, ramp, std::move(codes)), from};
}

// ---------------------------------------------------------------------------
// Diagonal lower bound.

PLFamily::PLFamily(std::vector<PLGerm> members)
    : size_(static_cast<long>(members.size())),
      cache_(std::move(members)),
      mu_(std::make_shared<std::mutex>()) {
  if (cache_.empty()) throw empty_family();
}

PLFamily::PLFamily(std::function<PLGerm(long)> member)
    : make_(std::move(member)), mu_(std::make_shared<std::mutex>()) {}

const PLGerm& PLFamily::member(long t) const {
  if (t < 1 || (size_ && t > *size_)) throw error("family index out of range");
  std::lock_guard<std::mutex> lock(*mu_);
  while (static_cast<long>(cache_.size()) < t)
    cache_.push_back(make_(static_cast<long>(cache_.size()) + 1));
  return cache_[static_cast<std::size_t>(t - 1)];
}

PLGerm diagonal_below(const PLFamily& family) {
  if (family.bounded() && family.size() == 0) throw empty_family();

  auto contributors_at = [family](long k) {
    long hi = family.bounded() ? std::min<long>(k, family.size()) : k;
    std::vector<long> ts;
    for (long t = 1; t <= hi; ++t)
      if (family.member(t).start() <= k) ts.push_back(t);
    return ts;
  };

  long k0 = 1;
  while (contributors_at(k0).empty()) {
    if (++k0 > (1L << 20))
      throw domain_mismatch("no family member is defined at any reachable index");
  }

  OpaqueGen gen{[family, contributors_at](long k) {
    Int best = 0;
    for (long t : contributors_at(k)) best = std::max(best, family.member(t).code(k));
    return best + k;
  }};
  return PLGerm(k0, std::move(gen));
}

// ---------------------------------------------------------------------------
// Pinching.

RatGerm pinch(PinchDirection dir, const RatGerm& m0, const AnchorSeq& anchors) {
  const auto& idx = anchors.indices;
  if (idx.size() < 3) throw too_few_anchors(idx.size());
  for (std::size_t t = 1; t < idx.size(); ++t)
    if (idx[t] <= idx[t - 1])
      throw anchors_not_decreasing("anchor points must strictly decrease "
                                   "(indices must strictly increase)");
  if (idx.front() < m0.start())
    throw index_before_start(idx.front(), m0.start());
  if (m0.end() && idx.back() > *m0.end())
    throw window_mismatch("anchors run past the profile's domain");

  {
    GridWindow w(idx.front(), idx.back());
    auto rep = validate(m0, w);
    for (const auto& c : rep.checks)
      if (!c.ok && c.name != "strictly_decreasing")
        throw error("pinch input fails validation: " + c.name);
  }

  const long K = static_cast<long>(idx.size());
  auto a = [&](long t) { return idx[static_cast<std::size_t>(t - 1)]; };  // 1-based

  // Anchor at-or-below the point 1/g: smallest t with a_t >= g.
  auto anchor_of = [&](long g) -> long {
    auto it = std::lower_bound(idx.begin(), idx.end(), g);
    return static_cast<long>(it - idx.begin()) + 1;
  };

  long from, to;
  std::vector<Rat> table;
  if (dir == PinchDirection::lower) {
    // u(r_t) = m0(r_{t+1}), held between anchors at the lower anchor's value.
    from = a(1);
    to = a(K - 1);
    for (long g = from; g <= to; ++g) {
      long t = anchor_of(g);
      table.push_back(m0.value(a(t + 1)));
    }
  } else {
    // o(r_t) = m0(r_{t-1}); defined from the second anchor's segment on.
    from = a(1) + 1;
    to = a(K);
    for (long g = from; g <= to; ++g) {
      long t = anchor_of(g);
      table.push_back(m0.value(a(t - 1)));
    }
  }
  return RatGerm(from, std::move(table), Tier::pseudo_monotone);
}

}  // namespace germlab
