#include "hlmax/rational.hpp"

#include <gtest/gtest.h>

#include <random>

using hlmax::BigInt;
using hlmax::BigRational;
using hlmax::Rational;

TEST(Rational, CanonicalForm) {
  EXPECT_EQ(Rational(6, 8).str(), "3/4");
  EXPECT_EQ(Rational(-6, -8).str(), "3/4");
  EXPECT_EQ(Rational(6, -8).str(), "-3/4");
  EXPECT_EQ(Rational(10, 5).str(), "2");
  EXPECT_EQ(Rational(0, 7).str(), "0");
  EXPECT_EQ(Rational(0, 7), Rational(0));
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, ParseForms) {
  EXPECT_EQ(Rational::parse("3/4"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("-12"), Rational(-12));
  EXPECT_EQ(Rational::parse("0.35"), Rational(7, 20));
  EXPECT_EQ(Rational::parse("-.5"), Rational(-1, 2));
  EXPECT_EQ(Rational::parse("+2/6"), Rational(1, 3));
  for (const char* bad : {"", "x", "1/0", "1/", "/2", "1.2.3", " 1", "1e3", "--1"}) {
    EXPECT_THROW(Rational::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(Rational, RoundTripThroughText) {
  for (const char* s : {"0", "1", "-1", "1/3", "-7/9", "123456789012345678901234567890/11"}) {
    EXPECT_EQ(Rational::parse(s).str(), s);
  }
}

TEST(Rational, FloorCeil) {
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(7, 2).ceil(), 4);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).ceil(), -3);
  EXPECT_EQ(Rational(4).floor(), 4);
  EXPECT_EQ(Rational(4).ceil(), 4);
  EXPECT_EQ(Rational(2, 3).ceil(), 1);
  EXPECT_EQ(Rational(2, 3).floor(), 0);
}

TEST(Rational, SpillsToBigAndBack) {
  const Rational big(std::int64_t{1} << 62);
  const Rational sq = big * big;
  EXPECT_FALSE(sq.is_inline());
  EXPECT_EQ(sq.str(), (BigInt(1) << 124).str());
  const Rational back = sq / big;
  EXPECT_TRUE(back.is_inline());
  EXPECT_EQ(back, big);
  EXPECT_EQ(Rational(INT64_MIN).str(), "-9223372036854775808");
  EXPECT_EQ(-Rational(INT64_MIN), Rational(BigInt("9223372036854775808"), BigInt(1)));
}

// Randomised agreement with Boost's rational type, including values near the
// inline/big boundary.
TEST(Rational, AgreesWithBoostRational) {
  std::mt19937_64 rng(7);
  auto pick = [&]() -> std::int64_t {
    switch (rng() % 4) {
      case 0: return static_cast<std::int64_t>(rng() % 21) - 10;
      case 1: return static_cast<std::int64_t>(rng() % 2001) - 1000;
      case 2: return static_cast<std::int64_t>(rng() >> 2) * ((rng() & 1) ? 1 : -1);
      default: return static_cast<std::int64_t>(rng());
    }
  };
  for (int i = 0; i < 20000; ++i) {
    std::int64_t an = pick(), ad = pick(), bn = pick(), bd = pick();
    if (ad == 0) ad = 1;
    if (bd == 0) bd = 3;
    const Rational a{BigInt(an), BigInt(ad)}, b{BigInt(bn), BigInt(bd)};
    const BigRational A = BigRational(BigInt(an)) / BigRational(BigInt(ad));
    const BigRational B = BigRational(BigInt(bn)) / BigRational(BigInt(bd));
    ASSERT_EQ((a + b).to_big(), A + B);
    ASSERT_EQ((a - b).to_big(), A - B);
    ASSERT_EQ((a * b).to_big(), A * B);
    if (bn != 0) {
      ASSERT_EQ((a / b).to_big(), A / B);
    }
    ASSERT_EQ(a < b, A < B);
    ASSERT_EQ(a == b, A == B);
    ASSERT_EQ((a + b).str(), Rational(A + B).str());
  }
}

TEST(Rational, OrderingAndHelpers) {
  EXPECT_LT(Rational(1, 3), Rational(2, 5));
  EXPECT_GT(Rational(-1, 3), Rational(-2, 5));
  EXPECT_EQ(hlmax::abs(Rational(-3, 7)), Rational(3, 7));
  EXPECT_EQ(hlmax::min(Rational(1), Rational(1, 2)), Rational(1, 2));
  EXPECT_EQ(hlmax::max(Rational(1), Rational(1, 2)), Rational(1));
  EXPECT_DOUBLE_EQ(Rational(1, 4).to_double(), 0.25);
}
