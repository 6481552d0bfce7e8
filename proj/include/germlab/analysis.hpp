#ifndef GERMLAB_ANALYSIS_HPP
#define GERMLAB_ANALYSIS_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "germlab/construct.hpp"
#include "germlab/germ.hpp"
#include "germlab/order.hpp"

namespace germlab {

// ---------------------------------------------------------------------------
// FuncSample: a function representative sampled at exact rational points of
// [-1,1], value 0 at 0.  The symmetric-grid constructor samples +-1/j.

class FuncSample {
 public:
  // Points +-1/j for j in [j0, j_max] plus 0; f evaluated exactly.
  static FuncSample on_symmetric_grid(long j0, long j_max,
                                      const std::function<Rat(const Rat&)>& f);
  static FuncSample from_points(std::vector<std::pair<Rat, Rat>> pts);

  const std::vector<std::pair<Rat, Rat>>& points() const { return pts_; }
  bool symmetric() const { return symmetric_; }

  // Pointwise combinations require identical point sets.
  FuncSample sub(const FuncSample& o) const;
  FuncSample addf(const FuncSample& o) const;
  FuncSample mulf(const FuncSample& o) const;
  FuncSample scalef(const Rat& q) const;

 private:
  FuncSample() = default;
  std::vector<std::pair<Rat, Rat>> pts_;  // sorted by x, contains (0,0)
  bool symmetric_ = false;
};

// ---------------------------------------------------------------------------
// Norm profile: v(j) = max{|f(x)| : sampled x with |x| <= 1/j}, exact and
// nonincreasing.  The domain ends at the largest j whose ball still contains
// a sample with nonzero value; beyond that a finite sample says nothing.
// The zero function yields the zero sentinel, flagged rather than encoded.

struct NormProfile {
  bool zero = false;
  std::optional<RatGerm> profile;  // finite table, absent iff zero
};

NormProfile norm_profile(const FuncSample& f);

// Oscillation profile: value at j is
//   max{|f(x)-f(y)| : sampled x,y with |x|,|y| <= 1/j and |x-y| <= s(j)},
// computed with the closed constraint (suprema with strict constraints are
// not attained on finite samples).  Values may be zero; the result is a
// plain finite profile, not a validated germ.
struct Profile {
  long from;
  long to;
  std::vector<Rat> v;
  const Rat& at(long j) const { return v[static_cast<std::size_t>(j - from)]; }
};

Profile oscillation_profile(const FuncSample& f, const GridFn& s, const GridWindow& w);

// ---------------------------------------------------------------------------
// Standard continuity criterion: for each rho in the battery, search the
// battery and rho/2 for a sigma whose oscillation profile is strictly below
// rho on the window.

enum class ContinuityKind { continuous_at_horizon, discontinuous_witness, inconclusive };

std::string continuity_kind_name(ContinuityKind k);

struct ContinuityVerdict {
  ContinuityKind kind;
  // For each rho (by battery position): the sigma that worked, "rho/2" for
  // the scaled candidate, or empty when none did.
  std::vector<std::string> sigma_for_rho;
  std::optional<std::size_t> witness_rho;  // battery position, for the verdict
  std::optional<Rat> pinned_oscillation;   // lower bound witnessed for every sigma
};

ContinuityVerdict continuity_verdict(const FuncSample& f,
                                     const std::vector<PLGerm>& battery,
                                     const std::vector<std::string>& battery_names,
                                     const GridWindow& window);

// Membership in the germwise neighborhood U([test]): Lambda(g) < test.
OrderVerdict neighborhood_member(const GridFn& lambda_g, const GridFn& test,
                                 const GridWindow& window);

// Default battery: {K(j)=j^d : d=1..max_degree} + {K(j)=c*2^j : c=1..max_coeff}
// — spans distinct Archimedean classes.
std::vector<PLGerm> default_battery(int max_degree, int max_coeff);
std::vector<std::string> default_battery_names(int max_degree, int max_coeff);

// ---------------------------------------------------------------------------
// Nets.  Finite upward-directed index sets with a germ or sample per node,
// a target, and a battery of PL tests.

struct NetSpec {
  using NodeValue = std::variant<RatGerm, FuncSample, ZeroGerm>;

  std::vector<std::string> node_names;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // a < b
  std::vector<NodeValue> assignment;
  NodeValue target = ZeroGerm{};
  std::vector<PLGerm> battery;
  std::vector<std::string> battery_names;

  // Reflexive-transitive closure of the edges; checks upward-directedness.
  // less[a][b] == true iff a < b strictly.
  std::vector<std::vector<bool>> closure() const;  // throws not_directed
};

struct TestOutcome {
  std::string test_name;
  bool converges = false;
  // converges: the earliest workable base point and the tail start.
  std::optional<std::size_t> d0;
  std::optional<long> j1;
  // fails: for each candidate base point, a successor that breaks the bound
  // and the index where it does.
  std::vector<std::pair<std::size_t, long>> witnesses;
  long horizon = 0;
};

struct ConvergenceReport {
  std::vector<TestOutcome> tests;
  bool overall() const {
    for (const auto& t : tests)
      if (!t.converges) return false;
    return !tests.empty();
  }
};

// For each battery germ p, find the minimal d0 (the candidate with the most
// strict successors; candidates must have at least one) whose strict upper
// set satisfies Lambda(f_d - target) < p on a tail [j1, horizon].  For
// sample nodes the difference is pointwise on common sample points; for
// germ nodes grid values are exact, and Lambda of the difference is the
// suffix max of |f_d - target| over the window.
ConvergenceReport converge_check(const NetSpec& net, long horizon);

// Diagonal witness: p* strictly below every (minorized) member of the
// sequence; converge_check of the sequence-as-chain against {p*} fails for
// every candidate tail, certifying that no sequence of these germs converges
// to the zero germ.
PLGerm nonconvergence_witness(const std::vector<RatGerm>& seq, long horizon);

// ---------------------------------------------------------------------------
// Ultrametric layer: valuation = Archimedean class of Lambda(f - g).  The
// strong triangle inequality asks class(Lambda(f-h)) <= max of the other two
// classes; a violation at certified level indicates an implementation bug.

enum class UltraKind { holds_at_horizon, violation, unresolved };

std::string ultra_kind_name(UltraKind k);

struct UltraVerdict {
  UltraKind kind;
  std::optional<long> witness;  // ladder rung or index evidence on violation
};

// Lambda of a difference of grid germs over a window: suffix max of
// |f(i) - g(i)| for i in [j, window.to] — exact on the window, horizon
// semantics beyond.
Profile diff_profile(const GridFn& f, const GridFn& g, const GridWindow& w);

GridFn view(const Profile& p);

UltraVerdict ultradist_triangle(const GridFn& f, const GridFn& g, const GridFn& h,
                                const GridWindow& window, long n_cap);

}  // namespace germlab

#endif
