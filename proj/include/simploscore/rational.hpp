#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace simploscore {

// Musical time in quarter-note beats, kept exact.
using Beats = boost::rational<std::int64_t>;

// Exact decimal ("7.5", "3") when the denominator is of the form 2^a 5^b, "n/d" otherwise.
std::string format_beats(const Beats& b);

// Accepts "n", "n/d", or a finite decimal "i.f"; throws DomainError otherwise.
Beats parse_beats(std::string_view text);

std::int64_t floor_div(const Beats& num, const Beats& den);

inline double to_double(const Beats& b) {
  return static_cast<double>(b.numerator()) / static_cast<double>(b.denominator());
}

}  // namespace simploscore
