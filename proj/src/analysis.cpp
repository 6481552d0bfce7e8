#include "germlab/analysis.hpp"

#include <algorithm>
#include <deque>

#include "germlab/scan.hpp"

namespace germlab {

std::string continuity_kind_name(ContinuityKind k) {
  switch (k) {
    case ContinuityKind::continuous_at_horizon: return "CONTINUOUS_AT_HORIZON";
    case ContinuityKind::discontinuous_witness: return "DISCONTINUOUS_WITNESS";
    case ContinuityKind::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

std::string ultra_kind_name(UltraKind k) {
  switch (k) {
    case UltraKind::holds_at_horizon: return "HOLDS_AT_HORIZON";
    case UltraKind::violation: return "VIOLATION";
    case UltraKind::unresolved: return "UNRESOLVED";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// FuncSample

FuncSample FuncSample::on_symmetric_grid(long j0, long j_max,
                                         const std::function<Rat(const Rat&)>& f) {
  if (j0 < 1 || j_max < j0) throw error("bad sample grid bounds");
  std::vector<std::pair<Rat, Rat>> pts;
  pts.reserve(static_cast<std::size_t>(2 * (j_max - j0 + 1) + 1));
  for (long j = j0; j <= j_max; ++j) {
    Rat x = Rat::inverse_of(Int(j));
    pts.emplace_back(x, f(x));
    pts.emplace_back(-x, f(-x));
  }
  pts.emplace_back(Rat(0), Rat(0));
  return from_points(std::move(pts));
}

FuncSample FuncSample::from_points(std::vector<std::pair<Rat, Rat>> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].first == pts[i - 1].first)
      throw error("duplicate sample point " + pts[i].first.str());
  bool has_origin = false;
  for (const auto& [x, v] : pts)
    if (x.is_zero()) {
      if (!v.is_zero()) throw error("sample must map 0 to 0");
      has_origin = true;
    }
  if (!has_origin) throw error("sample must include the point x=0 with value 0");

  FuncSample s;
  // Sorted, so a symmetric point set pairs i with n-1-i.
  s.symmetric_ = true;
  std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    if (pts[i].first != -pts[n - 1 - i].first) {
      s.symmetric_ = false;
      break;
    }
  s.pts_ = std::move(pts);
  return s;
}

namespace {

FuncSample combine(const FuncSample& a, const FuncSample& b,
                   const std::function<Rat(const Rat&, const Rat&)>& op) {
  const auto& pa = a.points();
  const auto& pb = b.points();
  if (pa.size() != pb.size())
    throw domain_mismatch("pointwise combination requires identical sample points");
  std::vector<std::pair<Rat, Rat>> pts;
  pts.reserve(pa.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].first != pb[i].first)
      throw domain_mismatch("pointwise combination requires identical sample points");
    pts.emplace_back(pa[i].first, op(pa[i].second, pb[i].second));
  }
  return FuncSample::from_points(std::move(pts));
}

}  // namespace

FuncSample FuncSample::sub(const FuncSample& o) const {
  return combine(*this, o, [](const Rat& x, const Rat& y) { return x - y; });
}
FuncSample FuncSample::addf(const FuncSample& o) const {
  return combine(*this, o, [](const Rat& x, const Rat& y) { return x + y; });
}
FuncSample FuncSample::mulf(const FuncSample& o) const {
  return combine(*this, o, [](const Rat& x, const Rat& y) { return x * y; });
}
FuncSample FuncSample::scalef(const Rat& q) const {
  std::vector<std::pair<Rat, Rat>> pts = pts_;
  for (auto& [x, v] : pts) v = q * v;
  return FuncSample::from_points(std::move(pts));
}

// ---------------------------------------------------------------------------
// Norm profile

NormProfile norm_profile(const FuncSample& f) {
  // Largest j whose ball {|x| <= 1/j} still holds a nonzero value: the
  // profile is positive exactly up to there; a finite sample says nothing
  // finer.
  std::optional<Rat> finest;  // smallest |x| with f(x) != 0
  for (const auto& [x, v] : f.points())
    if (!v.is_zero() && (!finest || x.abs() < *finest)) finest = x.abs();
  if (!finest) return NormProfile{true, std::nullopt};

  Rat inv = finest->reciprocal();  // profile positive for j <= floor(1/|x|)
  long j_hi = inv.floor().fits_slong_p() ? inv.floor().get_si() : 1;
  if (j_hi < 1) j_hi = 1;

  // Order samples by |x| and keep running maxima of |f|; each ball is then a
  // prefix found by binary search.
  std::vector<std::pair<Rat, Rat>> by_radius;  // (|x|, |f(x)|)
  by_radius.reserve(f.points().size());
  for (const auto& [x, v] : f.points()) by_radius.emplace_back(x.abs(), v.abs());
  std::sort(by_radius.begin(), by_radius.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Rat> prefix_max(by_radius.size());
  Rat running(0);
  for (std::size_t i = 0; i < by_radius.size(); ++i) {
    running = max(running, by_radius[i].second);
    prefix_max[i] = running;
  }

  std::vector<Rat> vals;
  vals.reserve(static_cast<std::size_t>(j_hi));
  for (long j = 1; j <= j_hi; ++j) {
    Rat radius = Rat::inverse_of(Int(j));
    auto it = std::upper_bound(
        by_radius.begin(), by_radius.end(), radius,
        [](const Rat& r, const auto& p) { return r < p.first; });
    vals.push_back(prefix_max[static_cast<std::size_t>(it - by_radius.begin()) - 1]);
  }
  return NormProfile{false, RatGerm(1, std::move(vals), Tier::pseudo_monotone)};
}

// ---------------------------------------------------------------------------
// Oscillation profile

Profile oscillation_profile(const FuncSample& f, const GridFn& s, const GridWindow& w) {
  if (w.from < s.from) throw index_before_start(w.from, s.from);
  if (s.to && w.to > *s.to)
    throw window_mismatch("window runs past the modulus germ's domain");

  const auto& pts = f.points();
  long n = w.to - w.from + 1;
  std::vector<Rat> out(static_cast<std::size_t>(n));
  // Per index: points inside the ball form a contiguous run of the sorted
  // samples, and the pair constraint |x-y| <= s(j) is a sliding window over
  // that run.  The best partner for x is the min or max of f on its window,
  // tracked with monotonic deques.  Indices are independent.
#pragma omp parallel for schedule(dynamic) if (n >= 16)
  for (long j = w.from; j <= w.to; ++j) {
    Rat radius = Rat::inverse_of(Int(j));
    Rat allowance = s.at(j);

    std::size_t lo = 0, hi = pts.size();
    while (lo < pts.size() && pts[lo].first < -radius) ++lo;
    while (hi > lo && pts[hi - 1].first > radius) --hi;

    Rat m(0);
    std::deque<std::size_t> maxq, minq;  // indices, f-values decreasing/increasing
    std::size_t left = lo;
    for (std::size_t i = lo; i < hi; ++i) {
      while (left < i && pts[i].first - pts[left].first > allowance) {
        if (!maxq.empty() && maxq.front() == left) maxq.pop_front();
        if (!minq.empty() && minq.front() == left) minq.pop_front();
        ++left;
      }
      if (!maxq.empty()) m = max(m, (pts[maxq.front()].second - pts[i].second).abs());
      if (!minq.empty()) m = max(m, (pts[minq.front()].second - pts[i].second).abs());
      while (!maxq.empty() && pts[maxq.back()].second <= pts[i].second) maxq.pop_back();
      maxq.push_back(i);
      while (!minq.empty() && pts[minq.back()].second >= pts[i].second) minq.pop_back();
      minq.push_back(i);
    }
    out[static_cast<std::size_t>(j - w.from)] = m;
  }
  return Profile{w.from, w.to, std::move(out)};
}

// ---------------------------------------------------------------------------
// Continuity criterion

ContinuityVerdict continuity_verdict(const FuncSample& f,
                                     const std::vector<PLGerm>& battery,
                                     const std::vector<std::string>& battery_names,
                                     const GridWindow& window) {
  if (battery.empty()) throw error("battery must be nonempty");
  ContinuityVerdict out{ContinuityKind::continuous_at_horizon, {}, std::nullopt,
                        std::nullopt};

  for (std::size_t r = 0; r < battery.size(); ++r) {
    GridFn rho = view(battery[r]);
    // Candidate moduli: every battery germ, then rho/2.
    std::vector<std::pair<std::string, GridFn>> sigmas;
    for (std::size_t s = 0; s < battery.size(); ++s)
      sigmas.emplace_back(battery_names[s], view(battery[s]));
    sigmas.emplace_back(battery_names[r] + "/2", scaled(Rat(1, 2), rho));

    bool found = false;
    std::optional<Rat> pinned;  // min oscillation over the window, max over sigmas
    for (auto& [name, sig] : sigmas) {
      if (window.from < sig.from) continue;
      Profile osc = oscillation_profile(f, sig, window);
      bool dominated = true;
      Rat low = osc.at(window.from);
      for (long j = window.from; j <= window.to; ++j) {
        low = min(low, osc.at(j));
        if (!(osc.at(j) < rho.at(j))) dominated = false;
      }
      if (dominated) {
        out.sigma_for_rho.push_back(name);
        found = true;
        break;
      }
      if (!pinned || low < *pinned) pinned = low;
    }
    if (!found) {
      out.sigma_for_rho.push_back("");
      // A fixed positive floor under every tested modulus witnesses the
      // discontinuity; otherwise the battery was simply inconclusive.
      if (pinned && pinned->is_positive()) {
        out.kind = ContinuityKind::discontinuous_witness;
        out.witness_rho = r;
        out.pinned_oscillation = pinned;
        return out;
      }
      out.kind = ContinuityKind::inconclusive;
      out.witness_rho = r;
    }
  }
  return out;
}

OrderVerdict neighborhood_member(const GridFn& lambda_g, const GridFn& test,
                                 const GridWindow& window) {
  return compare_germwise(lambda_g, test, window);
}

std::vector<PLGerm> default_battery(int max_degree, int max_coeff) {
  std::vector<PLGerm> b;
  for (int d = 1; d <= max_degree; ++d) {
    PolyGen p;
    p.coeff.assign(static_cast<std::size_t>(d) + 1, Int(0));
    p.coeff.back() = 1;
    b.emplace_back(1, p);
  }
  for (int c = 1; c <= max_coeff; ++c) b.emplace_back(1, ExpGen{Int(c), Int(2)});
  return b;
}

std::vector<std::string> default_battery_names(int max_degree, int max_coeff) {
  std::vector<std::string> names;
  for (int d = 1; d <= max_degree; ++d) names.push_back("j^" + std::to_string(d));
  for (int c = 1; c <= max_coeff; ++c) names.push_back(std::to_string(c) + "*2^j");
  return names;
}

// ---------------------------------------------------------------------------
// Nets

std::vector<std::vector<bool>> NetSpec::closure() const {
  std::size_t n = node_names.size();
  std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw error("edge references unknown node");
    less[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (less[i][k] && less[k][j]) less[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (less[i][i]) throw not_directed("order relation has a cycle");
  // Upward directed: every pair has an upper bound.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool ok = less[i][j] || less[j][i];
      for (std::size_t k = 0; !ok && k < n; ++k)
        ok = (less[i][k] || i == k) && (less[j][k] || j == k);
      if (!ok)
        throw not_directed("nodes " + node_names[i] + " and " + node_names[j] +
                           " have no upper bound");
    }
  return less;
}

namespace {

// Lambda(f_d - target) for one node, as a finite profile over the window.
Profile node_distance(const NetSpec::NodeValue& node, const NetSpec::NodeValue& target,
                      const GridWindow& w) {
  const auto* ns = std::get_if<FuncSample>(&node);
  const auto* ts = std::get_if<FuncSample>(&target);
  if (ns || ts) {
    if (!ns || !ts)
      throw domain_mismatch("sample nodes need a sample target (exact pointwise "
                            "difference; profiles are not subtracted)");
    NormProfile np = norm_profile(ns->sub(*ts));
    if (np.zero) {
      std::vector<Rat> zeros(static_cast<std::size_t>(w.length()), Rat(0));
      return Profile{w.from, w.to, std::move(zeros)};
    }
    GridFn g = view(*np.profile);
    GridWindow ww = common_window(w, {g});
    auto vals = scan::value_table(g, ww.from, ww.to);
    return Profile{ww.from, ww.to, std::move(vals)};
  }

  auto as_fn = [](const NetSpec::NodeValue& v) -> std::optional<GridFn> {
    if (const auto* g = std::get_if<RatGerm>(&v)) return view(*g);
    return std::nullopt;  // ZeroGerm
  };
  auto fn = as_fn(node);
  auto tn = as_fn(target);
  if (!fn && !tn) {
    std::vector<Rat> zeros(static_cast<std::size_t>(w.length()), Rat(0));
    return Profile{w.from, w.to, std::move(zeros)};
  }
  if (fn && !tn) return diff_profile(*fn, scaled(Rat(0), *fn), w);
  if (!fn && tn) return diff_profile(*tn, scaled(Rat(0), *tn), w);
  return diff_profile(*fn, *tn, w);
}

}  // namespace

Profile diff_profile(const GridFn& f, const GridFn& g, const GridWindow& w) {
  GridWindow ww = common_window(w, {f, g});
  auto fv = scan::value_table(f, ww.from, ww.to);
  auto gv = scan::value_table(g, ww.from, ww.to);
  std::vector<Rat> d(fv.size());
  for (std::size_t i = 0; i < fv.size(); ++i) d[i] = fv[i] - gv[i];
  auto sup = scan::suffix_abs_max(d);
  return Profile{ww.from, ww.to, std::move(sup)};
}

GridFn view(const Profile& p) {
  return GridFn{p.from, p.to, [p](long j) { return p.at(j); }};
}

ConvergenceReport converge_check(const NetSpec& net, long horizon) {
  auto less = net.closure();
  std::size_t n = net.node_names.size();
  if (net.assignment.size() != n) throw error("assignment does not cover the nodes");

  // Window: start where every node profile, the target, and the battery are
  // all defined.
  long from = 1;
  for (const auto& p : net.battery) from = std::max(from, p.start());
  auto value_start = [](const NetSpec::NodeValue& v) -> long {
    if (const auto* g = std::get_if<RatGerm>(&v)) return g->start();
    return 1;
  };
  for (const auto& v : net.assignment) from = std::max(from, value_start(v));
  from = std::max(from, value_start(net.target));
  GridWindow w(from, horizon);

  std::vector<Profile> dist;
  dist.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    dist.push_back(node_distance(net.assignment[i], net.target, w));

  // Candidate base points, earliest first: nodes with the most strict
  // successors, node order breaking ties.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t succ = 0;
    for (std::size_t j = 0; j < n; ++j) succ += less[i][j] ? 1u : 0u;
    if (succ > 0) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    std::size_t sa = 0, sb = 0;
    for (std::size_t j = 0; j < n; ++j) {
      sa += less[a][j] ? 1u : 0u;
      sb += less[b][j] ? 1u : 0u;
    }
    if (sa != sb) return sa > sb;
    return a < b;
  });

  ConvergenceReport rep;
  for (std::size_t t = 0; t < net.battery.size(); ++t) {
    GridFn p = view(net.battery[t]);
    TestOutcome out;
    out.test_name = t < net.battery_names.size() ? net.battery_names[t]
                                                 : "test" + std::to_string(t);
    out.horizon = horizon;

    for (std::size_t d0 : candidates) {
      bool all_ok = true;
      long j1 = w.from;
      std::optional<std::pair<std::size_t, long>> breaker;
      for (std::size_t d = 0; d < n; ++d) {
        if (!less[d0][d]) continue;
        Profile& pd = dist[d];
        GridWindow wd(std::max(w.from, pd.from), std::min(horizon, pd.to));
        OrderVerdict v = compare_germwise(view(pd), p, wd);
        if (v.is_lt()) {
          j1 = std::max(j1, v.witness_index);
        } else {
          all_ok = false;
          breaker = {d, v.witness_index};
          break;
        }
      }
      if (all_ok) {
        out.converges = true;
        out.d0 = d0;
        out.j1 = j1;
        break;
      }
      out.witnesses.push_back(*breaker);
    }
    rep.tests.push_back(std::move(out));
  }
  return rep;
}

PLGerm nonconvergence_witness(const std::vector<RatGerm>& seq, long horizon) {
  if (seq.empty()) throw empty_family();
  std::vector<PLGerm> minorized;
  minorized.reserve(seq.size());
  for (const auto& g : seq) minorized.push_back(minorize_to_pl(g, horizon).germ);
  return diagonal_below(PLFamily(std::move(minorized)));
}

// ---------------------------------------------------------------------------
// Ultrametric layer

UltraVerdict ultradist_triangle(const GridFn& f, const GridFn& g, const GridFn& h,
                                const GridWindow& window, long n_cap) {
  Profile fg = diff_profile(f, g, window);
  Profile gh = diff_profile(g, h, window);
  Profile fh = diff_profile(f, h, window);

  // Dominant side: pointwise max realizes the larger class exactly.
  std::vector<Rat> mx(fg.v.size());
  for (std::size_t i = 0; i < mx.size(); ++i) mx[i] = max(fg.v[i], gh.v[i]);
  Profile dom{fg.from, fg.to, std::move(mx)};

  bool fh_zero = true;
  for (const auto& r : fh.v)
    if (!r.is_zero()) {
      fh_zero = false;
      break;
    }
  if (fh_zero) return {UltraKind::holds_at_horizon, std::nullopt};

  bool dom_zero = true;
  for (const auto& r : dom.v)
    if (!r.is_zero()) {
      dom_zero = false;
      break;
    }
  if (dom_zero) return {UltraKind::violation, window.from};

  ArchClassVerdict v =
      arch_class_compare(view(fh), view(dom), GridWindow(fh.from, fh.to), n_cap);
  switch (v.kind) {
    case ArchKind::same_class:
    case ArchKind::lower_class:
      return {UltraKind::holds_at_horizon, v.kind == ArchKind::same_class
                                               ? std::optional<long>(v.n)
                                               : std::nullopt};
    case ArchKind::higher_class:
      return {UltraKind::violation, std::nullopt};
    case ArchKind::unresolved:
      return {UltraKind::unresolved, std::nullopt};
  }
  return {UltraKind::unresolved, std::nullopt};
}

}  // namespace germlab
