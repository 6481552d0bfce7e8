#ifndef GERMLAB_SCAN_HPP
#define GERMLAB_SCAN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "germlab/germ.hpp"

// Index-range scan kernels.  The OpenMP versions partition the range and
// reduce deterministically (exact arithmetic, order-independent reductions),
// so they return bit-identical results to the serial reference kept in
// scan::serial.  Generators must be pure; evaluation over disjoint index
// ranges is safe to run concurrently.

namespace germlab::scan {

// Ranges shorter than this run serially; thread startup costs more than the
// work below it.
inline constexpr long kParallelThreshold = 512;

// values[i] = g.at(from + i) for i in [0, to-from].
std::vector<Rat> value_table(const GridFn& g, long from, long to);

// signs[i] = sign(a(from+i) - b(from+i)) in {-1, 0, +1}.
std::vector<int8_t> sign_table(const GridFn& a, const GridFn& b, long from, long to);

// Least index j in [from, to] with bad(j), if any.
std::optional<long> first_where(long from, long to,
                                const std::function<bool(long)>& bad);

// Greatest index j in [from, to] with pred(j), if any.
std::optional<long> last_where(long from, long to,
                               const std::function<bool(long)>& pred);

// out[i] = max(|vals[i]|, |vals[i+1]|, ..., |vals.back()|).
std::vector<Rat> suffix_abs_max(const std::vector<Rat>& vals);

namespace serial {
std::vector<Rat> value_table(const GridFn& g, long from, long to);
std::vector<int8_t> sign_table(const GridFn& a, const GridFn& b, long from, long to);
std::optional<long> first_where(long from, long to,
                                const std::function<bool(long)>& bad);
std::optional<long> last_where(long from, long to,
                               const std::function<bool(long)>& pred);
std::vector<Rat> suffix_abs_max(const std::vector<Rat>& vals);
}  // namespace serial

}  // namespace germlab::scan

#endif
