#ifndef GERMLAB_ERRORS_HPP
#define GERMLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace germlab {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct index_before_start : error {
  index_before_start(long j, long start)
      : error("index " + std::to_string(j) + " precedes start index " +
              std::to_string(start)) {}
};

struct domain_mismatch : error {
  using error::error;
};

struct division_by_zero : error {
  division_by_zero() : error("division by zero") {}
};

struct not_strictly_monotone : error {
  using error::error;
};

struct limit_unverified : error {
  using error::error;
};

struct empty_family : error {
  empty_family() : error("family of germs is empty") {}
};

struct anchors_not_decreasing : error {
  using error::error;
};

struct too_few_anchors : error {
  too_few_anchors(std::size_t n)
      : error("need at least 3 anchors, got " + std::to_string(n)) {}
};

struct not_certifiable : error {
  using error::error;
};

struct prefix_too_short : error {
  using error::error;
};

struct not_directed : error {
  using error::error;
};

struct window_mismatch : error {
  using error::error;
};

// Parse failures carry a source position and what was expected there.
struct parse_error : error {
  int line;
  int column;
  std::string expected;
  parse_error(int line_, int column_, const std::string& expected_)
      : error("parse error at " + std::to_string(line_) + ":" +
              std::to_string(column_) + ": expected " + expected_),
        line(line_), column(column_), expected(expected_) {}
};

}  // namespace germlab

#endif
