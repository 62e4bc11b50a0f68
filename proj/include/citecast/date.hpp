#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace citecast {

using Date = std::chrono::sys_days;

// Parses "YYYY-MM-DD". Throws ArgumentError on anything else.
Date parse_date(std::string_view text);
std::string format_date(Date d);

Date make_date(int year, unsigned month, unsigned day);

// Calendar-year shift; Feb 29 maps to Feb 28 in non-leap targets.
Date add_years(Date d, int years);

// Signed fractional calendar years from `from` to `to`. Whole years are counted
// on the calendar, the remainder is the fraction of the following year, so
// 1998-01-01 -> 2008-01-01 is exactly 10.
double years_between(Date from, Date to);

}  // namespace citecast
