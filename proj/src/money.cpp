#include "starshell/money.hpp"

#include <cctype>
#include <limits>

#include "starshell/error.hpp"

namespace starshell {
namespace {

std::int64_t pow10(int n) {
  std::int64_t v = 1;
  while (n-- > 0) v *= 10;
  return v;
}

std::string render_fixed(__int128 scaled, int decimals) {
  std::string digits;
  if (scaled == 0) digits = "0";
  while (scaled > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  if (decimals == 0) return digits;
  if (static_cast<int>(digits.size()) <= decimals) {
    digits.insert(0, static_cast<std::size_t>(decimals + 1 - static_cast<int>(digits.size())), '0');
  }
  digits.insert(digits.end() - decimals, '.');
  return digits;
}

// Rounds numerator / denominator half-up to `decimals` places.
std::string round_ratio(__int128 numerator, __int128 denominator, int decimals) {
  const __int128 unit = denominator * (Money::kPicoPerDollar / pow10(decimals));
  const __int128 scaled = (numerator + unit / 2) / unit;
  return render_fixed(scaled, decimals);
}

}  // namespace

Money Money::parse(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorKind::kInvalidPricing,
                 "not a non-negative decimal amount: '" + std::string(text) + "'");
  };
  if (text.empty()) throw fail();
  __int128 whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) throw fail();
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) throw fail();
    seen_digit = true;
    if (seen_dot) {
      if (frac_digits == 12) throw fail();
      frac = frac * 10 + (c - '0');
      ++frac_digits;
    } else {
      whole = whole * 10 + (c - '0');
      if (whole > std::numeric_limits<std::int64_t>::max() / kPicoPerDollar) throw fail();
    }
  }
  if (!seen_digit) throw fail();
  const auto pico = static_cast<std::int64_t>(whole) * kPicoPerDollar +
                    frac * pow10(12 - frac_digits);
  return Money(pico);
}

std::string Money::to_string(int decimals) const { return mean_string(1, decimals); }

std::string Money::mean_string(std::int64_t n, int decimals) const {
  if (n <= 0) throw Error(ErrorKind::kInvalidArgument, "mean over zero items");
  if (decimals < 0 || decimals > 12) throw Error(ErrorKind::kInvalidArgument, "decimals out of range");
  return round_ratio(pico_, n, decimals);
}

Money& Money::operator+=(Money other) {
  if (__builtin_add_overflow(pico_, other.pico_, &pico_)) {
    throw Error(ErrorKind::kInvalidArgument, "monetary overflow");
  }
  return *this;
}

}  // namespace starshell
