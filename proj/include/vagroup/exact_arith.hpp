#pragma once

// Exact number types: dyadic rationals, general rationals and points of the
// Cantor set labelled by numbers in [0,1] (dyadics carry a side).

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>

#include "vagroup/errors.hpp"

namespace vagroup {

using BigInt = mpz_class;

namespace detail {

inline std::size_t bit_length(const BigInt& v) {
  return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

inline BigInt shift_left(const BigInt& v, std::uint64_t k) {
  BigInt r;
  mpz_mul_2exp(r.get_mpz_t(), v.get_mpz_t(), k);
  return r;
}

inline bool is_power_of_two(const BigInt& v) {
  return sgn(v) > 0 && mpz_popcount(v.get_mpz_t()) == 1;
}

inline std::uint64_t trailing_zeros(const BigInt& v) {
  return mpz_scan1(v.get_mpz_t(), 0);
}

}  // namespace detail

////////////////////////////////////////////////////////////////////////////
// Dyadic
////////////////////////////////////////////////////////////////////////////

// The number mantissa * 2^exponent. Always canonical: the mantissa is odd, or
// the value is zero and then the exponent is zero as well.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long v) : mantissa_(v) { normalize(); }  // NOLINT: literals
  Dyadic(BigInt mantissa, std::int64_t exponent)
      : mantissa_(std::move(mantissa)), exponent_(exponent) {
    normalize();
  }

  // numerator / 2^log2_denominator
  static Dyadic frac(BigInt numerator, std::int64_t log2_denominator) {
    return Dyadic(std::move(numerator), -log2_denominator);
  }
  static Dyadic pow2(std::int64_t e) { return Dyadic(BigInt(1), e); }

  const BigInt& mantissa() const noexcept { return mantissa_; }
  std::int64_t exponent() const noexcept { return exponent_; }
  bool is_zero() const { return sgn(mantissa_) == 0; }
  int sign() const { return sgn(mantissa_); }

  Dyadic mul_pow2(std::int64_t k) const {
    if (is_zero()) {
      return *this;
    }
    Dyadic r;
    r.mantissa_ = mantissa_;
    r.exponent_ = exponent_ + k;
    return r;
  }

  Dyadic operator-() const {
    Dyadic r;
    r.mantissa_ = -mantissa_;
    r.exponent_ = exponent_;
    return r;
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero()) {
      return b;
    }
    if (b.is_zero()) {
      return a;
    }
    std::int64_t e = std::min(a.exponent_, b.exponent_);
    return Dyadic(detail::shift_left(a.mantissa_, a.exponent_ - e) +
                      detail::shift_left(b.mantissa_, b.exponent_ - e),
                  e);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero() || b.is_zero()) {
      return Dyadic();
    }
    Dyadic r;
    r.mantissa_ = a.mantissa_ * b.mantissa_;  // odd * odd stays odd
    r.exponent_ = a.exponent_ + b.exponent_;
    return r;
  }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    int sa = a.sign();
    int sb = b.sign();
    if (sa != sb || sa == 0) {
      return sa <=> sb;
    }
    // Same nonzero sign: compare magnitudes, cheaply when sizes differ a lot.
    auto ma = static_cast<std::int64_t>(detail::bit_length(a.mantissa_)) +
              a.exponent_;
    auto mb = static_cast<std::int64_t>(detail::bit_length(b.mantissa_)) +
              b.exponent_;
    if (ma != mb) {
      return sa > 0 ? (ma <=> mb) : (mb <=> ma);
    }
    std::int64_t e = std::min(a.exponent_, b.exponent_);
    int c = cmp(detail::shift_left(a.mantissa_, a.exponent_ - e),
                detail::shift_left(b.mantissa_, b.exponent_ - e));
    return c <=> 0;
  }

  Dyadic abs() const { return sign() < 0 ? -*this : *this; }

  // Number of bits needed to write the value exactly.
  std::size_t bits() const {
    std::size_t m = detail::bit_length(mantissa_);
    std::size_t d = exponent_ < 0 ? static_cast<std::size_t>(-exponent_) : 0;
    return std::max(m + (exponent_ > 0 ? exponent_ : 0), d);
  }

  // Integer or "m/2^k".
  std::string to_string() const {
    if (exponent_ >= 0) {
      return detail::shift_left(mantissa_, exponent_).get_str();
    }
    return mantissa_.get_str() + "/2^" + std::to_string(-exponent_);
  }

  std::size_t hash() const {
    return std::hash<std::string>{}(mantissa_.get_str(16)) ^
           (std::hash<std::int64_t>{}(exponent_) << 1);
  }

 private:
  void normalize() {
    if (sgn(mantissa_) == 0) {
      exponent_ = 0;
      return;
    }
    std::uint64_t k = detail::trailing_zeros(mantissa_);
    if (k > 0) {
      mpz_fdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), k);
      exponent_ += static_cast<std::int64_t>(k);
    }
  }

  BigInt mantissa_{0};
  std::int64_t exponent_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Dyadic& d) {
  return os << d.to_string();
}

////////////////////////////////////////////////////////////////////////////
// Rat
////////////////////////////////////////////////////////////////////////////

// Exact rational in lowest terms with a positive denominator.
class Rat {
 public:
  Rat() = default;
  Rat(long v) : q_(v) {}  // NOLINT: literals
  Rat(const BigInt& num, const BigInt& den) {
    if (sgn(den) == 0) {
      throw DomainError("rational with zero denominator");
    }
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rat(const Dyadic& d) {
    if (d.exponent() >= 0) {
      q_ = mpq_class(detail::shift_left(d.mantissa(), d.exponent()));
    } else {
      q_ = mpq_class(d.mantissa(), detail::shift_left(BigInt(1), -d.exponent()));
      q_.canonicalize();
    }
  }

  BigInt numerator() const { return q_.get_num(); }
  BigInt denominator() const { return q_.get_den(); }
  int sign() const { return sgn(q_); }

  bool is_dyadic() const { return detail::is_power_of_two(q_.get_den()); }
  Dyadic to_dyadic() const {
    if (!is_dyadic()) {
      throw DomainError("rational " + to_string() + " is not dyadic");
    }
    return Dyadic(q_.get_num(),
                  -static_cast<std::int64_t>(detail::trailing_zeros(q_.get_den())));
  }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.q_ + b.q_)); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.q_ - b.q_)); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.q_ * b.q_)); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.sign() == 0) {
      throw DomainError("division by zero");
    }
    return Rat(mpq_class(a.q_ / b.q_));
  }
  Rat operator-() const { return Rat(mpq_class(-q_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    return cmp(a.q_, b.q_) <=> 0;
  }

  // Integer power, exact.
  Rat pow(unsigned long k) const {
    mpz_class n;
    mpz_class d;
    mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), k);
    mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), k);
    return Rat(n, d);
  }

  std::size_t bits() const {
    return std::max(detail::bit_length(abs(q_.get_num())),
                    detail::bit_length(q_.get_den()));
  }

  double to_double() const { return q_.get_d(); }

  // Integer or "a/b".
  std::string to_string() const {
    if (q_.get_den() == 1) {
      return q_.get_num().get_str();
    }
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

 private:
  explicit Rat(mpq_class q) : q_(std::move(q)) {}
  mpq_class q_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.to_string();
}

inline std::strong_ordering operator<=>(const Dyadic& a, const Rat& b) {
  return Rat(a) <=> b;
}

////////////////////////////////////////////////////////////////////////////
// CantorPoint
////////////////////////////////////////////////////////////////////////////

enum class Side : std::int8_t { Minus = -1, Plus = 1 };

inline int sign_of(Side s) { return static_cast<int>(s); }
inline char side_char(Side s) { return s == Side::Plus ? '+' : '-'; }

// A point of the Cantor set: either a dyadic p with side (p+ is the limit from
// the right, p- from the left) or a non-dyadic rational in (0,1). The ends
// exist only as 0+ and 1-.
class CantorPoint {
 public:
  static CantorPoint sided(Dyadic p, Side side) {
    if (p < Dyadic(0) || p > Dyadic(1)) {
      throw DomainError("Cantor point " + p.to_string() + " outside [0,1]");
    }
    if (p.is_zero() && side == Side::Minus) {
      throw DomainError("0- is not a point of the Cantor set");
    }
    if (p == Dyadic(1) && side == Side::Plus) {
      throw DomainError("1+ is not a point of the Cantor set");
    }
    CantorPoint c;
    c.v_ = SidedDyadic{std::move(p), side};
    return c;
  }

  static CantorPoint rational(Rat r) {
    if (r.is_dyadic()) {
      throw DomainError("dyadic point " + r.to_string() + " needs a side");
    }
    if (r <= Rat(0) || r >= Rat(1)) {
      throw DomainError("Cantor point " + r.to_string() + " outside (0,1)");
    }
    CantorPoint c;
    c.v_ = std::move(r);
    return c;
  }

  bool is_sided() const { return std::holds_alternative<SidedDyadic>(v_); }
  const Dyadic& dyadic() const { return std::get<SidedDyadic>(v_).p; }
  Side side() const { return std::get<SidedDyadic>(v_).side; }
  const Rat& rational() const { return std::get<Rat>(v_); }

  Rat value() const { return is_sided() ? Rat(dyadic()) : rational(); }

  friend bool operator==(const CantorPoint& a, const CantorPoint& b) {
    if (a.is_sided() != b.is_sided()) {
      return false;
    }
    if (a.is_sided()) {
      return a.side() == b.side() && a.dyadic() == b.dyadic();
    }
    return a.rational() == b.rational();
  }

  // Lexicographic order on binary sequences: p- < p+ and sided points
  // interleave with rationals by value.
  friend std::strong_ordering operator<=>(const CantorPoint& a,
                                          const CantorPoint& b) {
    if (a.is_sided() && b.is_sided()) {
      auto c = a.dyadic() <=> b.dyadic();
      if (c != 0) {
        return c;
      }
      return sign_of(a.side()) <=> sign_of(b.side());
    }
    return a.value() <=> b.value();
  }

  std::size_t bits() const {
    return is_sided() ? dyadic().bits() : rational().bits();
  }

  std::string to_string() const {
    if (is_sided()) {
      return dyadic().to_string() + side_char(side());
    }
    return rational().to_string();
  }

 private:
  struct SidedDyadic {
    Dyadic p;
    Side side;
  };
  CantorPoint() = default;
  std::variant<SidedDyadic, Rat> v_;
};

inline std::ostream& operator<<(std::ostream& os, const CantorPoint& c) {
  return os << c.to_string();
}

struct CantorPointHash {
  std::size_t operator()(const CantorPoint& c) const {
    return std::hash<std::string>{}(c.to_string());
  }
};

}  // namespace vagroup
