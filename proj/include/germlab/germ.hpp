#ifndef GERMLAB_GERM_HPP
#define GERMLAB_GERM_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "germlab/errors.hpp"
#include "germlab/rat.hpp"

namespace germlab {

// The grid segment {1/j : from <= j <= to}.
struct GridWindow {
  long from;
  long to;
  GridWindow(long f, long t) : from(f), to(t) {
    if (f > t) throw error("window from > to");
  }
  long length() const { return to - from + 1; }
};

// ---------------------------------------------------------------------------
// Integer code generators K(j).  Polynomials and c*b^j form the certified
// class: eventual dominance between two of them is decidable, not merely
// scannable.  Everything else is opaque.

struct PolyGen {
  std::vector<Int> coeff;  // coeff[i] * j^i, highest degree last

  Int eval(const Int& j) const {
    Int acc = 0;
    for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) acc = acc * j + *it;
    return acc;
  }
  int degree() const {
    for (int d = static_cast<int>(coeff.size()) - 1; d >= 0; --d)
      if (coeff[static_cast<std::size_t>(d)] != 0) return d;
    return -1;  // zero polynomial
  }
  Int leading() const {
    int d = degree();
    return d < 0 ? Int(0) : coeff[static_cast<std::size_t>(d)];
  }
  void trim() {
    while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
  }
  friend bool operator==(const PolyGen& a, const PolyGen& b) {
    PolyGen x = a, y = b;
    x.trim();
    y.trim();
    return x.coeff == y.coeff;
  }
};

struct ExpGen {
  Int c;  // positive
  Int b;  // >= 2
  Int eval(long j) const {
    if (j < 0) throw error("exponential generator needs j >= 0");
    Int p;
    mpz_pow_ui(p.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(j));
    return c * p;
  }
  friend bool operator==(const ExpGen& a, const ExpGen& b) {
    return a.c == b.c && a.b == b.b;
  }
};

struct OpaqueGen {
  std::function<Int(long)> fn;  // must be pure
};

using CodeGen = std::variant<PolyGen, ExpGen, OpaqueGen>;

Int eval_code(const CodeGen& g, long j);

// ---------------------------------------------------------------------------
// PLGerm: piecewise-affine monotone germ coded by an eventually strictly
// increasing positive-integer sequence j |-> K(j); the value at grid point
// 1/j is exactly 1/K(j).  An explicit head table may override the generator
// on a finite prefix (the constructions produce irregular prefixes with
// closed-form tails).

class PLGerm {
 public:
  PLGerm(long start, CodeGen tail, std::vector<Int> head = {})
      : start_(start), head_(std::move(head)), tail_(std::move(tail)) {}

  long start() const { return start_; }
  // First index served by the tail generator.
  long tail_start() const { return start_ + static_cast<long>(head_.size()); }
  const std::vector<Int>& head() const { return head_; }
  const CodeGen& tail() const { return tail_; }

  bool certified_tail() const {
    return !std::holds_alternative<OpaqueGen>(tail_);
  }

  Int code(long j) const {
    if (j < start_) throw index_before_start(j, start_);
    long hs = static_cast<long>(head_.size());
    if (j < start_ + hs) return head_[static_cast<std::size_t>(j - start_)];
    return eval_code(tail_, j);
  }

  Rat value(long j) const { return Rat::inverse_of(code(j)); }

 private:
  long start_;
  std::vector<Int> head_;
  CodeGen tail_;
};

// ---------------------------------------------------------------------------
// RatGerm: general exact-rational profile on the grid, with a monotonicity
// tier tag.  Profiles derived from finite samples carry a domain end; tails
// of such germs are not claimed beyond it.

enum class Tier {
  pseudo_monotone,              // v(j+1) <= v(j), limit 0 (horizon-checked)
  strict_monotone,              // v(j+1) < v(j)
  strict_monotone_continuous,   // strict, with continuous intent
};

std::string tier_name(Tier t);

class RatGerm {
 public:
  using Fn = std::function<Rat(long)>;

  RatGerm(long start, Fn tail, std::optional<Tier> tier = std::nullopt)
      : start_(start), tail_(std::move(tail)), tier_(tier) {}

  // Finite table on [start, start + values.size() - 1].
  RatGerm(long start, std::vector<Rat> values,
          std::optional<Tier> tier = std::nullopt)
      : start_(start),
        end_(start + static_cast<long>(values.size()) - 1),
        head_(std::move(values)),
        tier_(tier) {
    if (head_.empty()) throw error("empty profile table");
  }

  // Head table followed by a generator tail.
  RatGerm(long start, std::vector<Rat> head, Fn tail,
          std::optional<Tier> tier = std::nullopt)
      : start_(start), head_(std::move(head)), tail_(std::move(tail)), tier_(tier) {}

  long start() const { return start_; }
  std::optional<long> end() const { return end_; }
  std::optional<Tier> tier() const { return tier_; }
  void set_tier(Tier t) { tier_ = t; }

  Rat value(long j) const {
    if (j < start_) throw index_before_start(j, start_);
    if (end_ && j > *end_)
      throw domain_mismatch("index " + std::to_string(j) +
                            " beyond profile end " + std::to_string(*end_));
    long hs = static_cast<long>(head_.size());
    if (j < start_ + hs) return head_[static_cast<std::size_t>(j - start_)];
    return tail_(j);
  }

 private:
  long start_;
  std::optional<long> end_;
  std::vector<Rat> head_;
  Fn tail_;
  std::optional<Tier> tier_;
};

// SeqGerm: germ at index infinity of a strictly decreasing positive rational
// sequence.  Same machinery as RatGerm minus the (0,1] value cap.
class SeqGerm {
 public:
  using Fn = std::function<Rat(long)>;

  SeqGerm(long start, Fn terms) : start_(start), terms_(std::move(terms)) {}

  long start() const { return start_; }
  Rat term(long i) const {
    if (i < start_) throw index_before_start(i, start_);
    return terms_(i);
  }

 private:
  long start_;
  Fn terms_;
};

// The zero germ is a sentinel, never a PLGerm/RatGerm (those require
// positive values).
struct ZeroGerm {};

// ---------------------------------------------------------------------------
// GridFn: internal non-owning-ish view used by the order engine and the
// analysis lab.  Everything that evaluates to exact rationals on a tail of
// the grid adapts to it (germs, scaled germs, difference profiles).

struct GridFn {
  long from;
  std::optional<long> to;  // inclusive; nullopt = unbounded tail
  std::function<Rat(long)> at;

  bool covers(const GridWindow& w) const {
    return w.from >= from && (!to || w.to <= *to);
  }
};

GridFn view(const PLGerm& g);
GridFn view(const RatGerm& g);
GridFn view(const SeqGerm& g);
GridFn scaled(const Rat& q, const GridFn& g);

// Clamp a requested window to the common domain of the operands; throws
// index_before_start when the request begins before some operand, and
// window_mismatch when it runs past a finite profile.
GridWindow common_window(const GridWindow& w, const std::vector<GridFn>& fns);

// Embedding PLGerm -> RatGerm preserves every grid value exactly.
RatGerm to_rat_germ(const PLGerm& p);

// ---------------------------------------------------------------------------
// Validation.  Violations are report content, not failures; limit-to-0 is
// never claimed, only evidenced ("dropped below 1/n by index m").

struct ValidationCheck {
  std::string name;
  bool ok;
  std::optional<long> first_violation;
};

struct ValidationReport {
  GridWindow window;
  std::vector<ValidationCheck> checks;
  // Largest threshold 1/n the profile provably drops below within the
  // window, and the first index where that happens.
  std::optional<Int> drop_threshold;
  std::optional<long> drop_index;
  std::optional<Tier> observed_tier;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
  std::optional<long> first_violation() const {
    std::optional<long> v;
    for (const auto& c : checks)
      if (!c.ok && c.first_violation && (!v || *c.first_violation < *v))
        v = *c.first_violation;
    return v;
  }
};

ValidationReport validate(const PLGerm& g, const GridWindow& w);
ValidationReport validate(const RatGerm& g, const GridWindow& w);
ValidationReport validate(const SeqGerm& g, const GridWindow& w);

}  // namespace germlab

#endif
