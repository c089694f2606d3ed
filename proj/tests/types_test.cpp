#include "tmech/types.hpp"

#include <gtest/gtest.h>

using namespace tmech;

TEST(rational, decimal_rendering)
{
  EXPECT_EQ(to_string(Rational(1)), "1.0");
  EXPECT_EQ(to_string(Rational(36, 5)), "7.2");
  EXPECT_EQ(to_string(Rational(-31, 5)), "-6.2");
  EXPECT_EQ(to_string(Rational(1, 8)), "0.125");
  EXPECT_EQ(to_string(Rational(0)), "0.0");
  EXPECT_EQ(to_string(Rational(1, 3)), "1/3");
}

TEST(rational, parsing)
{
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("-3/4"), Rational(-3, 4));
  EXPECT_EQ(parse_rational("0.8"), Rational(4, 5));
  EXPECT_EQ(parse_rational(to_string(Rational(36, 5))), Rational(36, 5));
  EXPECT_THROW((void)parse_rational("abc"), ValidationError);
  EXPECT_THROW((void)parse_rational("1/0"), ValidationError);
  EXPECT_THROW((void)parse_rational(""), ValidationError);
}

TEST(bytes, big_endian_u64)
{
  Bytes out;
  append_u64_be(out, 0x0102030405060708ULL);
  EXPECT_EQ(out, (Bytes{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(read_u64_be(out.data()), 0x0102030405060708ULL);
}
