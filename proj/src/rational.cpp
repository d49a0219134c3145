#include "simploscore/rational.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "simploscore/errors.hpp"

namespace simploscore {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw DomainError("invalid beat value '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string format_beats(const Beats& b) {
  std::int64_t den = b.denominator();
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) {
    return std::to_string(b.numerator()) + "/" + std::to_string(b.denominator());
  }
  if (b.denominator() == 1) return std::to_string(b.numerator());

  // Scale to 10^digits so the fraction becomes an integer count of decimal units.
  const int digits = std::max(twos, fives);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const std::int64_t scaled = b.numerator() * (scale / b.denominator());
  const bool negative = scaled < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-scaled) : static_cast<std::uint64_t>(scaled);
  std::string frac = std::to_string(mag % static_cast<std::uint64_t>(scale));
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / static_cast<std::uint64_t>(scale));
  out += '.';
  out += frac;
  return out;
}

Beats parse_beats(std::string_view text) {
  if (text.empty()) throw DomainError("empty beat value");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_int(text.substr(0, slash), text);
    const auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    return Beats(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if (frac_part.size() > 15 || (int_part.empty() && frac_part.empty())) {
      throw DomainError("invalid beat value '" + std::string(text) + "'");
    }
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    if (whole < 0 || frac < 0) throw DomainError("invalid beat value '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    Beats value = Beats(whole) + Beats(frac, scale);
    return negative ? -value : value;
  }
  return Beats(parse_int(text, text));
}

std::int64_t floor_div(const Beats& num, const Beats& den) {
  const Beats q = num / den;
  std::int64_t f = q.numerator() / q.denominator();
  if (q.numerator() % q.denominator() != 0 && q.numerator() < 0) --f;
  return f;
}

}  // namespace simploscore
