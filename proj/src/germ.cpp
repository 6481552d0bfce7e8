#include "germlab/germ.hpp"

#include "germlab/scan.hpp"

namespace germlab {

Int eval_code(const CodeGen& g, long j) {
  if (const auto* p = std::get_if<PolyGen>(&g)) return p->eval(Int(j));
  if (const auto* e = std::get_if<ExpGen>(&g)) return e->eval(j);
  return std::get<OpaqueGen>(g).fn(j);
}

std::string tier_name(Tier t) {
  switch (t) {
    case Tier::pseudo_monotone: return "PSEUDO_MONOTONE";
    case Tier::strict_monotone: return "STRICT_MONOTONE";
    case Tier::strict_monotone_continuous: return "STRICT_MONOTONE_CONTINUOUS_INTENT";
  }
  return "?";
}

GridFn view(const PLGerm& g) {
  return GridFn{g.start(), std::nullopt, [g](long j) { return g.value(j); }};
}

GridFn view(const RatGerm& g) {
  return GridFn{g.start(), g.end(), [g](long j) { return g.value(j); }};
}

GridFn view(const SeqGerm& g) {
  return GridFn{g.start(), std::nullopt, [g](long i) { return g.term(i); }};
}

GridFn scaled(const Rat& q, const GridFn& g) {
  auto at = g.at;
  return GridFn{g.from, g.to, [q, at](long j) { return q * at(j); }};
}

GridWindow common_window(const GridWindow& w, const std::vector<GridFn>& fns) {
  long from = w.from;
  long to = w.to;
  for (const auto& f : fns) {
    if (w.from < f.from) throw index_before_start(w.from, f.from);
    if (f.to && w.to > *f.to)
      throw window_mismatch("window extends to " + std::to_string(w.to) +
                            " but a profile ends at " + std::to_string(*f.to));
  }
  return GridWindow(from, to);
}

RatGerm to_rat_germ(const PLGerm& p) {
  return RatGerm(p.start(), [p](long j) { return p.value(j); },
                 Tier::strict_monotone);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

// Track limit-to-0 evidence: largest integer n with v < 1/n somewhere in the
// window, i.e. n = ceil(1/v) - 1 for the smallest value seen (values only
// shrink along the scan for monotone profiles, but we take the min anyway).
void record_drop(const Rat& v, long j, std::optional<Int>& thr, std::optional<long>& at) {
  if (!v.is_positive()) return;
  Int n = v.reciprocal().ceil() - 1;  // largest n with v < 1/n
  if (n < 1) return;
  if (!thr || n > *thr) {
    thr = n;
    at = j;
  }
}

}  // namespace

ValidationReport validate(const PLGerm& g, const GridWindow& w) {
  if (w.from < g.start()) throw index_before_start(w.from, g.start());
  ValidationReport rep{w, {}, std::nullopt, std::nullopt, std::nullopt};

  auto positive_bad = [&](long j) { return g.code(j) < 1; };
  auto strict_bad = [&](long j) { return g.code(j + 1) <= g.code(j); };

  auto bad_pos = scan::first_where(w.from, w.to, positive_bad);
  rep.checks.push_back({"codes_positive", !bad_pos.has_value(), bad_pos});

  std::optional<long> bad_mono;
  if (w.from < w.to) bad_mono = scan::first_where(w.from, w.to - 1, strict_bad);
  // Report the violating index itself (the later of the equal/decreasing pair).
  if (bad_mono) bad_mono = *bad_mono + 1;
  rep.checks.push_back({"codes_strictly_increasing", !bad_mono.has_value(), bad_mono});

  record_drop(g.value(w.to), w.to, rep.drop_threshold, rep.drop_index);
  // For strictly increasing codes the last value is smallest; find where the
  // threshold was first crossed.
  if (rep.drop_threshold) {
    Int thr = *rep.drop_threshold;
    auto hit = scan::first_where(w.from, w.to, [&](long j) {
      return g.value(j) < Rat::inverse_of(thr);
    });
    rep.drop_index = hit;
  }

  if (rep.ok()) rep.observed_tier = Tier::strict_monotone_continuous;
  return rep;
}

namespace {

ValidationReport validate_profile(const GridFn& f, const GridWindow& w,
                                  bool cap_at_one) {
  if (w.from < f.from) throw index_before_start(w.from, f.from);
  GridWindow ww = common_window(w, {f});
  ValidationReport rep{ww, {}, std::nullopt, std::nullopt, std::nullopt};

  auto vals = scan::value_table(f, ww.from, ww.to);
  auto at = [&](long j) -> const Rat& {
    return vals[static_cast<std::size_t>(j - ww.from)];
  };

  std::optional<long> bad_range;
  for (long j = ww.from; j <= ww.to; ++j) {
    bool bad = !at(j).is_positive() || (cap_at_one && at(j) > Rat(1));
    if (bad) {
      bad_range = j;
      break;
    }
  }
  rep.checks.push_back({cap_at_one ? "values_in_unit_interval" : "values_positive",
                        !bad_range.has_value(), bad_range});

  std::optional<long> first_increase, first_plateau;
  for (long j = ww.from; j < ww.to; ++j) {
    if (at(j + 1) > at(j) && !first_increase) first_increase = j + 1;
    if (at(j + 1) == at(j) && !first_plateau) first_plateau = j + 1;
  }
  rep.checks.push_back({"nonincreasing", !first_increase.has_value(), first_increase});

  for (long j = ww.from; j <= ww.to; ++j)
    record_drop(at(j), j, rep.drop_threshold, rep.drop_index);

  if (rep.ok())
    rep.observed_tier = first_plateau ? Tier::pseudo_monotone : Tier::strict_monotone;
  return rep;
}

}  // namespace

ValidationReport validate(const RatGerm& g, const GridWindow& w) {
  ValidationReport rep = validate_profile(view(g), w, /*cap_at_one=*/true);
  // A claimed strict tier must hold strictly.
  if (g.tier() && *g.tier() != Tier::pseudo_monotone && rep.ok() &&
      rep.observed_tier == Tier::pseudo_monotone) {
    auto vals = scan::value_table(view(g), rep.window.from, rep.window.to);
    std::optional<long> first_plateau;
    for (long j = rep.window.from; j < rep.window.to; ++j) {
      if (vals[static_cast<std::size_t>(j + 1 - rep.window.from)] ==
          vals[static_cast<std::size_t>(j - rep.window.from)]) {
        first_plateau = j + 1;
        break;
      }
    }
    rep.checks.push_back({"strictly_decreasing", false, first_plateau});
  }
  return rep;
}

ValidationReport validate(const SeqGerm& g, const GridWindow& w) {
  ValidationReport rep = validate_profile(view(g), w, /*cap_at_one=*/false);
  // Sequence germs are strictly decreasing by definition.
  if (rep.ok() && rep.observed_tier == Tier::pseudo_monotone) {
    auto vals = scan::value_table(view(g), rep.window.from, rep.window.to);
    std::optional<long> first_plateau;
    for (long j = rep.window.from; j < rep.window.to; ++j) {
      if (vals[static_cast<std::size_t>(j + 1 - rep.window.from)] ==
          vals[static_cast<std::size_t>(j - rep.window.from)]) {
        first_plateau = j + 1;
        break;
      }
    }
    rep.checks.push_back({"strictly_decreasing", false, first_plateau});
  }
  return rep;
}

}  // namespace germlab
