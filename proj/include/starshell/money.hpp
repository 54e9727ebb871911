#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace starshell {

// Exact USD amount stored in picodollars (1e-12 USD). A per-million-token
// price with up to six decimals is an integral number of picodollars per
// token, so token costs never round.
class Money {
 public:
  static constexpr std::int64_t kPicoPerDollar = 1'000'000'000'000;

  constexpr Money() = default;
  static constexpr Money from_pico(std::int64_t pico) { return Money(pico); }

  // Parses a non-negative decimal dollar amount ("3", "0.75", "15.000001").
  static Money parse(std::string_view text);

  constexpr std::int64_t pico() const { return pico_; }
  double to_double() const { return static_cast<double>(pico_) / kPicoPerDollar; }

  // Half-up rounding to `decimals` places; only used at report time.
  std::string to_string(int decimals = 2) const;

  // Rounded (half-up) rendering of this / n without leaving integer math.
  std::string mean_string(std::int64_t n, int decimals = 2) const;

  Money& operator+=(Money other);
  friend Money operator+(Money a, Money b) { return a += b; }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t pico) : pico_(pico) {}
  std::int64_t pico_ = 0;
};

}  // namespace starshell
