#ifndef GERMLAB_RAT_HPP
#define GERMLAB_RAT_HPP

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <string>

#include "germlab/errors.hpp"

namespace germlab {

using Int = mpz_class;

// Exact rational, always in lowest terms with positive denominator.
// Thin wrapper over mpq_class so every constructor canonicalizes; raw
// mpq_class leaves e.g. 2/4 uncanonicalized until told otherwise.
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(long n) : q_(n) {}
  Rat(const Int& n) : q_(n) {}
  Rat(const Int& num, const Int& den) {
    if (den == 0) throw division_by_zero();
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  Rat(long num, long den) : Rat(Int(num), Int(den)) {}

  static Rat inverse_of(const Int& k) { return Rat(Int(1), k); }

  Int num() const { return q_.get_num(); }
  Int den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_positive() const { return sgn(q_) > 0; }
  int sign() const { return sgn(q_); }

  Rat abs() const { return Rat(::abs(q_)); }
  Rat reciprocal() const {
    if (is_zero()) throw division_by_zero();
    return Rat(q_.get_den(), q_.get_num());
  }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.q_ + b.q_); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.q_ - b.q_); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.q_ * b.q_); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw division_by_zero();
    return Rat(a.q_ / b.q_);
  }
  Rat operator-() const { return Rat(-q_); }

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) < 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) > 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) <= 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) >= 0; }

  // Least integer >= *this.  The minorant construction and the class ladder
  // both need exact ceilings of reciprocals.
  Int ceil() const {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
    if (r != 0) q += 1;
    return q;
  }
  Int floor() const {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
    return q;
  }

  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) {
    return os << r.str();
  }

 private:
  explicit Rat(mpq_class q) : q_(std::move(q)) {}
  mpq_class q_;
};

inline Rat max(const Rat& a, const Rat& b) { return a >= b ? a : b; }
inline Rat min(const Rat& a, const Rat& b) { return a <= b ? a : b; }

}  // namespace germlab

#endif
