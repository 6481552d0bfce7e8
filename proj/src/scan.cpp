#include "germlab/scan.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace germlab::scan {

namespace serial {

std::vector<Rat> value_table(const GridFn& g, long from, long to) {
  std::vector<Rat> out(static_cast<std::size_t>(to - from + 1));
  for (long j = from; j <= to; ++j)
    out[static_cast<std::size_t>(j - from)] = g.at(j);
  return out;
}

std::vector<int8_t> sign_table(const GridFn& a, const GridFn& b, long from, long to) {
  std::vector<int8_t> out(static_cast<std::size_t>(to - from + 1));
  for (long j = from; j <= to; ++j)
    out[static_cast<std::size_t>(j - from)] =
        static_cast<int8_t>((a.at(j) - b.at(j)).sign());
  return out;
}

std::optional<long> first_where(long from, long to,
                                const std::function<bool(long)>& bad) {
  for (long j = from; j <= to; ++j)
    if (bad(j)) return j;
  return std::nullopt;
}

std::optional<long> last_where(long from, long to,
                               const std::function<bool(long)>& pred) {
  std::optional<long> hit;
  for (long j = from; j <= to; ++j)
    if (pred(j)) hit = j;
  return hit;
}

std::vector<Rat> suffix_abs_max(const std::vector<Rat>& vals) {
  std::vector<Rat> out(vals.size());
  if (vals.empty()) return out;
  out.back() = vals.back().abs();
  for (std::size_t i = vals.size() - 1; i-- > 0;)
    out[i] = max(vals[i].abs(), out[i + 1]);
  return out;
}

}  // namespace serial

std::vector<Rat> value_table(const GridFn& g, long from, long to) {
  long n = to - from + 1;
  if (n < kParallelThreshold) return serial::value_table(g, from, to);
  std::vector<Rat> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (long j = from; j <= to; ++j)
    out[static_cast<std::size_t>(j - from)] = g.at(j);
  return out;
}

std::vector<int8_t> sign_table(const GridFn& a, const GridFn& b, long from, long to) {
  long n = to - from + 1;
  if (n < kParallelThreshold) return serial::sign_table(a, b, from, to);
  std::vector<int8_t> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (long j = from; j <= to; ++j)
    out[static_cast<std::size_t>(j - from)] =
        static_cast<int8_t>((a.at(j) - b.at(j)).sign());
  return out;
}

std::optional<long> first_where(long from, long to,
                                const std::function<bool(long)>& bad) {
  long n = to - from + 1;
  if (n < kParallelThreshold) return serial::first_where(from, to, bad);
  long best = to + 1;
#pragma omp parallel for schedule(static) reduction(min : best)
  for (long j = from; j <= to; ++j) {
    if (j < best && bad(j)) best = j;
  }
  if (best > to) return std::nullopt;
  return best;
}

std::optional<long> last_where(long from, long to,
                               const std::function<bool(long)>& pred) {
  long n = to - from + 1;
  if (n < kParallelThreshold) return serial::last_where(from, to, pred);
  long best = from - 1;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (long j = from; j <= to; ++j) {
    if (j > best && pred(j)) best = j;
  }
  if (best < from) return std::nullopt;
  return best;
}

std::vector<Rat> suffix_abs_max(const std::vector<Rat>& vals) {
  // One backward pass; cheap next to the value evaluation feeding it.
  return serial::suffix_abs_max(vals);
}

}  // namespace germlab::scan
