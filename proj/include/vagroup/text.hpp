#pragma once

// Shared tokenizer for the element DSL (numbers, points, punctuation).

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "vagroup/errors.hpp"
#include "vagroup/exact_arith.hpp"

namespace vagroup {

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  // Whitespace and '#' comments up to end of line.
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          advance();
        }
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      for (std::size_t i = 0; i < token.size(); ++i) {
        advance();
      }
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!consume(token)) {
      fail("expected '" + std::string(token) + "'");
    }
  }

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_' || text_[pos_] == '.' || text_[pos_] == '^' ||
            text_[pos_] == '-')) {
      advance();
    }
    if (start == pos_) {
      fail("expected identifier");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  BigInt integer() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      advance();
    }
    std::size_t digits = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
    if (digits == pos_) {
      fail("expected integer");
    }
    return BigInt(std::string(text_.substr(start, pos_ - start)), 10);
  }

  std::size_t natural() {
    BigInt v = integer();
    if (sgn(v) < 0 || !v.fits_ulong_p()) {
      fail("expected a non-negative machine-size integer");
    }
    return v.get_ui();
  }

  // "m", "m/2^k" or "m/d" with d a power of two.
  Dyadic dyadic() {
    auto [num, den_log2, dyadic_den] = fraction();
    if (!dyadic_den) {
      fail("non-dyadic number where a dyadic is required");
    }
    return Dyadic::frac(num, den_log2);
  }

  // A rational "a" or "a/b" (b may be written 2^k).
  Rat rational() {
    std::size_t save_line = line_, save_col = col_;
    skip_space();
    BigInt num = integer();
    if (!consume("/")) {
      return Rat(num, BigInt(1));
    }
    BigInt den = denominator_value();
    if (sgn(den) <= 0) {
      throw ParseError(save_line, save_col, "non-positive denominator");
    }
    return Rat(num, den);
  }

  // "p+" / "p-" for sided dyadics, "a/b" for non-dyadic rationals.
  CantorPoint point() {
    skip_space();
    std::size_t l = line_, c = col_;
    Rat r = rational();
    try {
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        Side s = text_[pos_] == '+' ? Side::Plus : Side::Minus;
        advance();
        if (!r.is_dyadic()) {
          throw ParseError(l, c, "only dyadic points carry a side");
        }
        return CantorPoint::sided(r.to_dyadic(), s);
      }
      return CantorPoint::rational(r);
    } catch (const ParseError&) {
      throw;
    } catch (const DomainError& e) {
      throw ParseError(l, c, e.what());
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, col_, message);
  }

  std::size_t position() const { return pos_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }
  std::string_view rest() const { return text_.substr(pos_); }

 private:
  struct Fraction {
    BigInt numerator;
    std::int64_t log2_denominator;
    bool dyadic;
  };

  Fraction fraction() {
    BigInt num = integer();
    if (!consume("/")) {
      return {num, 0, true};
    }
    skip_space();
    if (text_.substr(pos_, 2) == "2^") {
      advance();
      advance();
      return {num, static_cast<std::int64_t>(natural()), true};
    }
    BigInt den = integer();
    if (!detail::is_power_of_two(den)) {
      return {num, 0, false};
    }
    return {num, static_cast<std::int64_t>(detail::trailing_zeros(den)), true};
  }

  BigInt denominator_value() {
    skip_space();
    if (text_.substr(pos_, 2) == "2^") {
      advance();
      advance();
      return detail::shift_left(BigInt(1), natural());
    }
    return integer();
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline Dyadic parse_dyadic(std::string_view text) {
  Scanner s(text);
  Dyadic d = s.dyadic();
  if (!s.at_end()) {
    s.fail("trailing input after dyadic");
  }
  return d;
}

inline Rat parse_rat(std::string_view text) {
  Scanner s(text);
  Rat r = s.rational();
  if (!s.at_end()) {
    s.fail("trailing input after rational");
  }
  return r;
}

inline CantorPoint parse_point(std::string_view text) {
  Scanner s(text);
  CantorPoint p = s.point();
  if (!s.at_end()) {
    s.fail("trailing input after point");
  }
  return p;
}

}  // namespace vagroup
