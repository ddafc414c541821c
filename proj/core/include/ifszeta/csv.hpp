#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>

#include "ifszeta/algebraic.hpp"

namespace ifszeta::csv {

inline constexpr int kDefaultDigits = 12;

// printf-style %.Ng; the output depends only on the value.
std::string format_float(double value, int significant = kDefaultDigits);

// "num/den" with den >= 1.
std::string format_fraction(const Rational& q);

// Writes the fields joined by commas followed by a single LF.
void write_row(std::ostream& out, std::initializer_list<std::string> fields);

}  // namespace ifszeta::csv
