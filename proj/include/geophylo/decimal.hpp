#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "geophylo/error.hpp"

namespace geophylo {

/// Exact decimal number as written in an instance document.
///
/// The mantissa and the number of fractional digits are kept verbatim, so
/// "3.250" and "3.25" compare equal by value but print back differently.
class Decimal {
 public:
  static constexpr int kMaxScale = 9;

  constexpr Decimal() = default;
  constexpr Decimal(std::int64_t mantissa, int scale) : mantissa_(mantissa), scale_(scale) {}

  static Decimal from_int(std::int64_t v) { return Decimal(v, 0); }

  static Decimal parse(std::string_view text) {
    auto bad = [&] { fail(ErrorKind::kInvalidInput, "malformed decimal '" + std::string(text) + "'"); };
    if (text.empty()) bad();
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '-') {
      negative = true;
      ++i;
    }
    std::int64_t mantissa = 0;
    int scale = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (c == '.') {
        if (seen_point) bad();
        seen_point = true;
        continue;
      }
      if (c < '0' || c > '9') bad();
      seen_digit = true;
      if (mantissa > (INT64_MAX - 9) / 10) fail(ErrorKind::kInvalidInput, "decimal out of range '" + std::string(text) + "'");
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) ++scale;
    }
    if (!seen_digit || (seen_point && scale == 0)) bad();
    if (scale > kMaxScale) fail(ErrorKind::kInvalidInput, "too many fractional digits in '" + std::string(text) + "'");
    return Decimal(negative ? -mantissa : mantissa, scale);
  }

  std::int64_t mantissa() const { return mantissa_; }
  int scale() const { return scale_; }

  /// Value multiplied by 10^target_scale; target_scale must be >= scale().
  std::int64_t scaled_to(int target_scale) const {
    std::int64_t v = mantissa_;
    for (int s = scale_; s < target_scale; ++s) {
      if (v > INT64_MAX / 10 || v < INT64_MIN / 10) fail(ErrorKind::kInvalidInput, "coordinate out of range");
      v *= 10;
    }
    return v;
  }

  double to_double() const {
    double d = static_cast<double>(mantissa_);
    for (int s = 0; s < scale_; ++s) d /= 10.0;
    return d;
  }

  std::string str() const {
    std::string digits = std::to_string(mantissa_ < 0 ? -mantissa_ : mantissa_);
    if (scale_ > 0) {
      if (static_cast<int>(digits.size()) <= scale_) digits.insert(0, scale_ - digits.size() + 1, '0');
      digits.insert(digits.size() - scale_, 1, '.');
    }
    return mantissa_ < 0 ? "-" + digits : digits;
  }

  friend int compare(const Decimal& a, const Decimal& b) {
    int s = a.scale_ > b.scale_ ? a.scale_ : b.scale_;
    std::int64_t x = a.scaled_to(s), y = b.scaled_to(s);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  friend bool operator<(const Decimal& a, const Decimal& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Decimal& a, const Decimal& b) { return compare(a, b) <= 0; }
  friend bool same_text(const Decimal& a, const Decimal& b) { return a.mantissa_ == b.mantissa_ && a.scale_ == b.scale_; }

 private:
  std::int64_t mantissa_ = 0;
  int scale_ = 0;
};

}  // namespace geophylo
