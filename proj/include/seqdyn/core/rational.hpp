#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "seqdyn/core/errors.hpp"

namespace seqdyn {

using Integer = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

inline u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    if ((a >> 64) == 0 && (b >> 64) == 0) {
      return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u128 abs_u128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

inline bool fits_small(u128 v) { return v <= static_cast<u128>(kSmallMax); }

inline Integer to_integer(i128 v) {
  const bool neg = v < 0;
  u128 mag = abs_u128(v);
  Integer out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return neg ? Integer(-out) : out;
}

inline bool integer_fits_small(const Integer& v) {
  return boost::multiprecision::abs(v) <= Integer(kSmallMax);
}

}  // namespace detail

// Exact rational number kept in lowest terms with a positive denominator.
// Values whose numerator and denominator fit in int64 are stored inline and
// combined through 128-bit intermediates; anything larger falls back to an
// immutable shared big rational.
class Rational {
 public:
  Rational() = default;

  template <std::integral I>
  Rational(I value) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<I>) {
      if (static_cast<std::int64_t>(value) == std::numeric_limits<std::int64_t>::min()) {
        set_big(BigRational(Integer(static_cast<std::int64_t>(value))));
        return;
      }
      num_ = static_cast<std::int64_t>(value);
    } else {
      if (static_cast<std::uint64_t>(value) > static_cast<std::uint64_t>(detail::kSmallMax)) {
        set_big(BigRational(Integer(static_cast<std::uint64_t>(value))));
        return;
      }
      num_ = static_cast<std::int64_t>(value);
    }
  }

  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    *this = from_i128(num, den);
  }

  explicit Rational(const Integer& value) { assign(BigRational(value)); }
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    assign(BigRational(num, den));
  }
  explicit Rational(const BigRational& value) { assign(value); }

  // Accepts "p/q" or "p" (optional sign, decimal digits only).
  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    auto parse_int = [&](std::string_view s) -> Integer {
      s = trim(s);
      bool neg = false;
      if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
      }
      if (s.empty()) throw ParseError("", 0, "empty integer in fraction '" + std::string(text) + "'");
      for (char c : s) {
        if (c == '.' || c == 'e' || c == 'E') {
          throw ParseError("", 0, "floating literal '" + std::string(text) +
                                      "' is not accepted; write an exact fraction");
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) {
          throw ParseError("", 0, "malformed fraction '" + std::string(text) + "'");
        }
      }
      Integer v{std::string(s)};
      return neg ? Integer(-v) : v;
    };
    const std::string_view body = trim(text);
    const auto slash = body.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(body));
    const Integer num = parse_int(body.substr(0, slash));
    const Integer den = parse_int(body.substr(slash + 1));
    if (den == 0) throw ParseError("", 0, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }

  bool is_small() const noexcept { return big_ == nullptr; }

  Integer numerator() const {
    return big_ ? Integer(boost::multiprecision::numerator(*big_)) : Integer(num_);
  }
  Integer denominator() const {
    return big_ ? Integer(boost::multiprecision::denominator(*big_)) : Integer(den_);
  }

  BigRational to_big() const { return big_ ? *big_ : BigRational(num_, den_); }

  int sign() const noexcept {
    if (big_) return big_->sign();
    return (num_ > 0) - (num_ < 0);
  }

  long double to_long_double() const {
    if (!big_) return static_cast<long double>(num_) / static_cast<long double>(den_);
    const Integer n = boost::multiprecision::numerator(*big_);
    const Integer d = boost::multiprecision::denominator(*big_);
    // Scale so both parts stay in range before the final division.
    const auto nb = n == 0 ? 0u : boost::multiprecision::msb(boost::multiprecision::abs(n));
    const auto db = boost::multiprecision::msb(d);
    const unsigned keep = 100;
    const unsigned shift_n = nb > keep ? nb - keep : 0;
    const unsigned shift_d = db > keep ? db - keep : 0;
    const long double ln = (n >> shift_n).convert_to<long double>();
    const long double ld = (d >> shift_d).convert_to<long double>();
    return std::ldexp(ln / ld, static_cast<int>(shift_n) - static_cast<int>(shift_d));
  }

  double to_double() const {
    if (!big_) {
      constexpr std::int64_t exact = std::int64_t{1} << 53;
      if (num_ > -exact && num_ < exact && den_ < exact) {
        return static_cast<double>(num_) / static_cast<double>(den_);
      }
    }
    return static_cast<double>(to_long_double());
  }

  Integer floor() const {
    if (!big_) {
      std::int64_t q = num_ / den_;
      if (num_ % den_ != 0 && num_ < 0) --q;
      return Integer(q);
    }
    const Integer n = boost::multiprecision::numerator(*big_);
    const Integer d = boost::multiprecision::denominator(*big_);
    Integer q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
  }

  std::string str() const {
    if (big_) {
      const Integer d = boost::multiprecision::denominator(*big_);
      const Integer n = boost::multiprecision::numerator(*big_);
      return d == 1 ? n.str() : n.str() + "/" + d.str();
    }
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational operator-() const {
    if (!big_) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    return Rational(BigRational(-*big_));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == b.den_) return from_i128(detail::i128(a.num_) + b.num_, a.den_);
      return from_i128(detail::i128(a.num_) * b.den_ + detail::i128(b.num_) * a.den_,
                       detail::i128(a.den_) * b.den_);
    }
    return Rational(BigRational(a.to_big() + b.to_big()));
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == b.den_) return from_i128(detail::i128(a.num_) - b.num_, a.den_);
      return from_i128(detail::i128(a.num_) * b.den_ - detail::i128(b.num_) * a.den_,
                       detail::i128(a.den_) * b.den_);
    }
    return Rational(BigRational(a.to_big() - b.to_big()));
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.num_ == 0 || b.num_ == 0) return Rational();
      const auto g1 = static_cast<std::int64_t>(std::gcd(a.num_, b.den_));
      const auto g2 = static_cast<std::int64_t>(std::gcd(b.num_, a.den_));
      const detail::i128 n = detail::i128(a.num_ / g1) * (b.num_ / g2);
      const detail::i128 d = detail::i128(a.den_ / g2) * (b.den_ / g1);
      return from_reduced_i128(n, d);
    }
    return Rational(BigRational(a.to_big() * b.to_big()));
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.sign() == 0) throw DomainError("division by zero rational");
    if (!a.big_ && !b.big_) {
      return from_i128(detail::i128(a.num_) * b.den_, detail::i128(a.den_) * b.num_);
    }
    return Rational(BigRational(a.to_big() / b.to_big()));
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    // Values are canonical, so a big value never equals a small one.
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == b.den_) return a.num_ <=> b.num_;
      const detail::i128 l = detail::i128(a.num_) * b.den_;
      const detail::i128 r = detail::i128(b.num_) * a.den_;
      return l < r ? std::strong_ordering::less
                   : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    const BigRational l = a.to_big();
    const BigRational r = b.to_big();
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational from_i128(detail::i128 n, detail::i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) return Rational();
    const detail::u128 g = detail::gcd_u128(detail::abs_u128(n), static_cast<detail::u128>(d));
    if (g > 1) {
      n /= static_cast<detail::i128>(g);
      d /= static_cast<detail::i128>(g);
    }
    return from_reduced_i128(n, d);
  }

  static Rational from_reduced_i128(detail::i128 n, detail::i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (detail::fits_small(detail::abs_u128(n)) && detail::fits_small(static_cast<detail::u128>(d))) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
    Rational r;
    r.set_big(BigRational(detail::to_integer(n), detail::to_integer(d)));
    return r;
  }

  void assign(const BigRational& v) {
    const Integer n = boost::multiprecision::numerator(v);
    const Integer d = boost::multiprecision::denominator(v);
    if (detail::integer_fits_small(n) && detail::integer_fits_small(d)) {
      num_ = n.convert_to<std::int64_t>();
      den_ = d.convert_to<std::int64_t>();
      big_.reset();
    } else {
      set_big(v);
    }
  }

  void set_big(const BigRational& v) {
    num_ = 0;
    den_ = 1;
    big_ = std::make_shared<const BigRational>(v);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const BigRational> big_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// Fractional part in [0, 1).
inline Rational frac(const Rational& r) { return r - Rational(r.floor()); }

inline Rational pow2_inverse(unsigned exponent) {
  if (exponent < 62) return Rational(1, std::int64_t{1} << exponent);
  return Rational(Integer(1), Integer(1) << exponent);
}

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace seqdyn
