#ifndef GERMLAB_CONSTRUCT_HPP
#define GERMLAB_CONSTRUCT_HPP

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include "germlab/germ.hpp"

namespace germlab {

// ---------------------------------------------------------------------------
// Composition.  Result code is j |-> K_p(K_q(j)); start shifts to the first
// index where q's codes land in p's domain.  Polynomial tails compose to a
// polynomial tail, so certified inputs stay certified.

PLGerm compose(const PLGerm& p, const PLGerm& q, long search_limit = 1 << 20);

// ---------------------------------------------------------------------------
// Inversion.  The graph of the result contains the transposed anchor points
// (1/K_p(j) |-> 1/j).  With interpolation, grid points between anchors get
// the exact affine value; the switch variant holds the anchor value instead
// (the transpose itself, no interpolation).

enum class InvertMode { interpolate, anchors_only };

RatGerm invert(const PLGerm& p, InvertMode mode = InvertMode::interpolate);

// ---------------------------------------------------------------------------
// Pointwise arithmetic on grid values.  MUL of two PLGerms stays PL
// (1/k * 1/k' = 1/(kk')); ADD/SCALE/DIV leave the class.  Result tiers are
// recomputed by validation, never assumed.

PLGerm mul(const PLGerm& a, const PLGerm& b);
RatGerm mul(const RatGerm& a, const RatGerm& b);
RatGerm add(const RatGerm& a, const RatGerm& b);
RatGerm div(const RatGerm& a, const RatGerm& b);
RatGerm scale(const Rat& q, const RatGerm& a);  // q > 0

// r_hat = m * r.  Any germ h < r_hat factors as h = m * (h/m) with h/m < r;
// the factorization is checked in tests via div + compare.
RatGerm open_mult_radius(const RatGerm& m, const RatGerm& r);

// ---------------------------------------------------------------------------
// Coinitial minorant: from a pseudomonotone profile m, build a strictly
// increasing integer-coded germ strictly below it.
//
// Grid rendering of the two-stage construction:
//   (1) anchors: a_1 < a_2 < ... where a_t is the first grid index whose
//       value drops below the threshold 1/n_t, thresholds chosen greedily so
//       the drop indices strictly increase;
//   (2) intermediate profile w~ with w~(1/a_t) = m(1/a_{t+2}), affine
//       between anchors;
//   (3) integer codes K(j) = ceil(1 / w~(1/(j+1))) + 1, bumped minimally
//       when the ceiling alone would plateau (strictness is required of PL
//       codes; the bump only moves the output further below m).
//
// The result is strictly below m at every index in [from, horizon].

struct MinorizeResult {
  PLGerm germ;
  long from;  // first index with the strict-minorant guarantee
};

MinorizeResult minorize_to_pl(const RatGerm& m, long horizon);

// ---------------------------------------------------------------------------
// Diagonal lower bound: output code L(k) = max{K_t(k) : 1 <= t <= min(k,
// size), start_t <= k} + k, strictly below member t at every grid index
// k >= max(t, member start).  Families must be replayable (indexable), not
// one-shot; a family without a size bound is a stream.

class PLFamily {
 public:
  PLFamily(std::vector<PLGerm> members);
  // Stream: member(t) for t = 1, 2, 3, ...  (1-based, pure).
  PLFamily(std::function<PLGerm(long)> member);

  bool bounded() const { return bool(size_); }
  long size() const { return size_ ? *size_ : -1; }
  const PLGerm& member(long t) const;  // 1-based

 private:
  std::optional<long> size_;
  std::function<PLGerm(long)> make_;
  mutable std::vector<PLGerm> cache_;  // grown under mutex, values immutable
  mutable std::shared_ptr<std::mutex> mu_;
};

PLGerm diagonal_below(const PLFamily& family);

// ---------------------------------------------------------------------------
// Pinching: a single germ bound valid on the whole grid segment between
// anchors, from bounds holding only at the anchors.
//
//   LOWER  u(r_t) = m0(r_{t+1}); between anchors u holds the value of the
//          anchor at-or-below the point (piecewise constant).  Any monotone
//          m with m > m0 at every anchor satisfies m > u at every grid point
//          of the covered segment.
//   UPPER  o(r_t) = m0(r_{t-1}) from the second anchor on; dual guarantee.

struct AnchorSeq {
  std::vector<long> indices;  // strictly increasing grid indices j_1 < j_2 < ...
};

enum class PinchDirection { lower, upper };

RatGerm pinch(PinchDirection dir, const RatGerm& m0, const AnchorSeq& anchors);

}  // namespace germlab

#endif
