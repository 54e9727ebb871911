#include <gtest/gtest.h>

#include "starshell/error.hpp"
#include "starshell/money.hpp"

using starshell::Error;
using starshell::ErrorKind;
using starshell::Money;

TEST(Money, ParsesDecimalDollars) {
  EXPECT_EQ(Money::parse("3").pico(), 3'000'000'000'000);
  EXPECT_EQ(Money::parse("0.75").pico(), 750'000'000'000);
  EXPECT_EQ(Money::parse("15.000001").pico(), 15'000'001'000'000);
  EXPECT_EQ(Money::parse("0.000000000001").pico(), 1);
}

TEST(Money, RejectsGarbage) {
  for (const char* bad : {"", "-1", "1.2.3", "abc", "1e3", ".", "0.0000000000001"}) {
    EXPECT_THROW(Money::parse(bad), Error) << bad;
  }
}

TEST(Money, RoundsHalfUpOnlyAtDisplay) {
  EXPECT_EQ(Money::parse("0.005").to_string(2), "0.01");
  EXPECT_EQ(Money::parse("0.0049999").to_string(2), "0.00");
  EXPECT_EQ(Money::parse("0.0045").to_string(4), "0.0045");
  EXPECT_EQ(Money::parse("12").to_string(2), "12.00");
  EXPECT_EQ(Money::parse("1.5").to_string(0), "2");
}

TEST(Money, MeanStringDividesExactly) {
  // 7 turns of $0.0045 over 10 tasks = 0.00315 -> 0.00 at 2 places, 0.0032 at 4.
  const Money total = Money::parse("0.0315");
  EXPECT_EQ(total.mean_string(10, 2), "0.00");
  EXPECT_EQ(total.mean_string(10, 4), "0.0032");
  EXPECT_EQ(Money::parse("1").mean_string(3, 6), "0.333333");
  EXPECT_EQ(Money::parse("2").mean_string(3, 6), "0.666667");
}

TEST(Money, AdditionIsExactAndChecked) {
  Money a = Money::parse("0.1");
  a += Money::parse("0.2");
  EXPECT_EQ(a, Money::parse("0.3"));
  Money big = Money::from_pico(INT64_MAX - 1);
  EXPECT_THROW(big += Money::from_pico(2), Error);
}
