#pragma once

// Exact rational numbers.
//
// Values whose numerator and denominator fit in 64 bits are kept inline and
// operated on with 128-bit intermediates; anything larger spills to a shared,
// immutable boost::multiprecision::cpp_rational. The representation is
// canonical: a value that fits inline is always stored inline, in lowest
// terms, with a positive denominator.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>

#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace hlmax {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    if ((a >> 64) == 0 && (b >> 64) == 0) {
      return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    a %= b;
    std::swap(a, b);
  }
  return a;
}

inline u128 abs_u128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

inline bool fits_small(i128 v) { return v >= -static_cast<i128>(kSmallMax) && v <= kSmallMax; }

inline BigInt to_big(i128 v) {
  const bool neg = v < 0;
  u128 m = abs_u128(v);
  BigInt out = static_cast<std::uint64_t>(m >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(m);
  return neg ? BigInt(-out) : out;
}

}  // namespace detail

class Rational {
 public:
  Rational() = default;

  template <typename I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
  Rational(I value) {  // NOLINT(google-explicit-constructor)
    set_from_wide(static_cast<detail::i128>(value), 1);
  }

  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    set_from_wide(num, den);
  }

  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    // boost 1.74 rejects a negative denominator outright
    if (den < 0) {
      set_big(BigRational(BigInt(-num), BigInt(-den)));
    } else {
      set_big(BigRational(num, den));
    }
  }

  explicit Rational(const BigRational& value) { set_big(value); }

  /// Parses "n", "p/q" or a finite decimal such as "-0.35". Whitespace is
  /// not accepted.
  static Rational parse(std::string_view text);

  /// Canonical text form: "n" for integers, "p/q" otherwise.
  std::string str() const;

  BigInt numerator() const { return big_ ? BigInt(boost::multiprecision::numerator(*big_)) : BigInt(num_); }
  BigInt denominator() const { return big_ ? BigInt(boost::multiprecision::denominator(*big_)) : BigInt(den_); }

  BigRational to_big() const { return big_ ? *big_ : BigRational(num_, den_); }
  bool is_inline() const { return !big_; }
  // Only meaningful when is_inline().
  std::int64_t inline_num() const { return num_; }
  std::int64_t inline_den() const { return den_; }

  int sign() const {
    if (big_) return big_->sign();
    return (num_ > 0) - (num_ < 0);
  }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return big_ ? boost::multiprecision::denominator(*big_) == 1 : den_ == 1; }

  double to_double() const { return big_ ? big_->convert_to<double>() : static_cast<double>(num_) / static_cast<double>(den_); }

  BigInt floor() const;
  BigInt ceil() const;

  Rational operator-() const {
    if (big_) return Rational(BigRational(-*big_));
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      using detail::i128;
      Rational r;
      r.set_from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                      static_cast<i128>(a.den_) * b.den_);
      return r;
    }
    return Rational(BigRational(a.to_big() + b.to_big()));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      using detail::i128;
      Rational r;
      r.set_from_wide(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                      static_cast<i128>(a.den_) * b.den_);
      return r;
    }
    return Rational(BigRational(a.to_big() - b.to_big()));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      using detail::i128;
      Rational r;
      r.set_from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
      return r;
    }
    return Rational(BigRational(a.to_big() * b.to_big()));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    if (!a.big_ && !b.big_) {
      using detail::i128;
      Rational r;
      r.set_from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
      return r;
    }
    return Rational(BigRational(a.to_big() / b.to_big()));
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend int compare(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      using detail::i128;
      const i128 l = static_cast<i128>(a.num_) * b.den_;
      const i128 r = static_cast<i128>(b.num_) * a.den_;
      return (l > r) - (l < r);
    }
    const BigRational l = a.to_big();
    const BigRational r = b.to_big();
    return (l > r) - (l < r);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical form: inline and spilled values never coincide
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = compare(a, b);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void set_from_wide(detail::i128 num, detail::i128 den) {
    using namespace detail;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      num_ = 0;
      den_ = 1;
      big_.reset();
      return;
    }
    const u128 g = gcd_u128(abs_u128(num), static_cast<u128>(den));
    num /= static_cast<i128>(g);
    den /= static_cast<i128>(g);
    if (fits_small(num) && den <= kSmallMax) {
      num_ = static_cast<std::int64_t>(num);
      den_ = static_cast<std::int64_t>(den);
      big_.reset();
    } else {
      big_ = std::make_shared<const BigRational>(BigRational(detail::to_big(num), detail::to_big(den)));
    }
  }

  void set_big(const BigRational& v) {
    const auto& n = boost::multiprecision::numerator(v);
    const auto& d = boost::multiprecision::denominator(v);
    static const BigInt lo = -BigInt(detail::kSmallMax);
    static const BigInt hi = BigInt(detail::kSmallMax);
    if (n >= lo && n <= hi && d <= hi) {
      num_ = n.convert_to<std::int64_t>();
      den_ = d.convert_to<std::int64_t>();
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      big_ = std::make_shared<const BigRational>(v);
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const BigRational> big_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline BigInt Rational::floor() const {
  if (!big_) {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return BigInt(q);
  }
  const BigInt n = boost::multiprecision::numerator(*big_);
  const BigInt d = boost::multiprecision::denominator(*big_);
  BigInt q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

inline BigInt Rational::ceil() const {
  BigInt f = floor();
  if (!is_integer()) ++f;
  return f;
}

inline std::string Rational::str() const {
  if (!big_) {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  const auto& d = boost::multiprecision::denominator(*big_);
  const auto& n = boost::multiprecision::numerator(*big_);
  return d == 1 ? n.str() : n.str() + "/" + d.str();
}

namespace detail {

// Boost reads a leading 0 as an octal prefix
inline BigInt decimal_int(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return BigInt(std::string(s));
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational { throw std::invalid_argument("not a rational: \"" + std::string(text) + "\""); };
  if (text.empty()) return fail();
  std::string_view body = text;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  BigInt num;
  BigInt den = 1;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto n = body.substr(0, slash);
    auto d = body.substr(slash + 1);
    if (!detail::all_digits(n) || !detail::all_digits(d)) return fail();
    num = detail::decimal_int(n);
    den = detail::decimal_int(d);
    if (den == 0) return fail();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !detail::all_digits(whole)) || !detail::all_digits(frac)) return fail();
    num = detail::decimal_int(std::string(whole) + std::string(frac));
    den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
  } else {
    if (!detail::all_digits(body)) return fail();
    num = detail::decimal_int(body);
  }
  if (negative) num = -num;
  return Rational(num, den);
}

}  // namespace hlmax
