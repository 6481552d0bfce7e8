#ifndef GERMLAB_ORDER_HPP
#define GERMLAB_ORDER_HPP

#include <optional>
#include <string>
#include <vector>

#include "germlab/germ.hpp"

namespace germlab {

// ---------------------------------------------------------------------------
// Germ order verdicts.  Germ statements quantify over tails; finite
// computation can refute, certify by structure, or report a horizon — never
// silently claim the unverifiable part.
//
// compare_germwise(a, b, ...) semidecides "a < b":
//   CERTIFIED_LT       a < b for all j >= witness, proved from generator
//                      structure (valid beyond any window)
//   HOLDS_UPTO_LT      a < b at every grid index in [witness, horizon],
//                      nothing claimed beyond
//   EQUAL_FROM         values agree on [witness, horizon], witness minimal
//   FAILS_AT           the reverse strict inequality holds on
//                      [witness, horizon]: a < b is refuted there
//   MIXED              both strict signs still occur in the last quarter of
//                      the window; no stable tail to report
//   DIFFER_THROUGHOUT  canonical_eq only: no equality tail inside the window

enum class VerdictKind {
  certified_lt,
  holds_upto_lt,
  fails_at,
  mixed,
  equal_from,
  differ_throughout,
};

std::string verdict_kind_name(VerdictKind k);

struct OrderVerdict {
  VerdictKind kind;
  long witness_index = 0;
  long horizon = 0;
  std::optional<std::string> certificate;  // set for certified_lt

  bool is_lt() const {
    return kind == VerdictKind::certified_lt || kind == VerdictKind::holds_upto_lt;
  }
};

enum class CompareMode { automatic, certified_only, horizon_only };

OrderVerdict compare_germwise(const GridFn& a, const GridFn& b,
                              const GridWindow& window,
                              CompareMode mode = CompareMode::automatic);
OrderVerdict compare_germwise(const PLGerm& a, const PLGerm& b,
                              const GridWindow& window,
                              CompareMode mode = CompareMode::automatic);
OrderVerdict compare_germwise(const RatGerm& a, const RatGerm& b,
                              const GridWindow& window,
                              CompareMode mode = CompareMode::automatic);

// canonical_eq: EQUAL_FROM(j1) if values agree on [j1, window.to] with j1
// minimal, DIFFER_THROUGHOUT otherwise.
OrderVerdict canonical_eq(const GridFn& a, const GridFn& b, const GridWindow& window);

// ---------------------------------------------------------------------------
// Fréchet triage of the ultrafilter order on sequence germs.  Classifies
// {i : r_i < s_i} over the inspected prefix as cofinite (true in every free
// ultrafilter), co-cofinite (false in every one), or ultrafilter-dependent
// (both classes hit every inspected tail block).

enum class TriageKind {
  all_free_ultrafilters,
  no_free_ultrafilter,
  depends_on_ultrafilter,
};

std::string triage_kind_name(TriageKind k);

struct TriageVerdict {
  TriageKind kind;
  long below_count = 0;   // #{i : r_i < s_i} over the prefix
  long other_count = 0;   // complement count
  std::optional<long> cofinite_from;  // start of the deciding tail run
  long prefix_from = 0;
  long prefix_to = 0;
};

// Inspects indices [max(starts), max(starts) + prefix_length - 1].  The
// prefix must split into at least 4 dyadic tail blocks (prefix_length >= 16).
TriageVerdict frechet_triage(const SeqGerm& a, const SeqGerm& b, long prefix_length);

// ---------------------------------------------------------------------------
// Archimedean-class comparison through the doubling ladder {1,2,4,...,n_cap}.
// SAME_CLASS(n) asserts a < n*b and b < n*a (at least up to horizon) for the
// minimal ladder n; LOWER/HIGHER when one-sided domination persists for every
// ladder rung; UNRESOLVED otherwise — never a wrong claim.

enum class ArchKind { same_class, lower_class, higher_class, unresolved };

std::string arch_kind_name(ArchKind k);

struct ArchClassVerdict {
  ArchKind kind;
  long n = 0;       // witness rung for same_class
  long n_cap = 0;
  long horizon = 0;
};

ArchClassVerdict arch_class_compare(const GridFn& a, const GridFn& b,
                                    const GridWindow& window, long n_cap);

}  // namespace germlab

#endif
