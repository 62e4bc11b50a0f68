#include "citecast/date.hpp"

#include <charconv>
#include <cstdio>

#include "citecast/errors.hpp"

namespace citecast {

namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
  int value = 0;
  auto first = text.data() + pos;
  auto last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ArgumentError("invalid date '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Date make_date(int year, unsigned month, unsigned day) {
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  if (!ymd.ok()) {
    throw ArgumentError("invalid calendar date " + std::to_string(year) + "-" +
                        std::to_string(month) + "-" + std::to_string(day));
  }
  return sys_days{ymd};
}

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ArgumentError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  int y = parse_field(text, 0, 4);
  int m = parse_field(text, 5, 2);
  int d = parse_field(text, 8, 2);
  if (m < 1 || d < 1) throw ArgumentError("invalid date '" + std::string(text) + "'");
  return make_date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

Date add_years(Date d, int years) {
  using namespace std::chrono;
  year_month_day ymd{d};
  year_month_day shifted = ymd + std::chrono::years{years};
  if (!shifted.ok()) {
    shifted = year_month_day{year_month_day_last{shifted.year(), month_day_last{shifted.month()}}};
  }
  return sys_days{shifted};
}

double years_between(Date from, Date to) {
  if (to < from) return -years_between(to, from);
  using namespace std::chrono;
  int whole = static_cast<int>(year_month_day{to}.year()) - static_cast<int>(year_month_day{from}.year());
  while (whole > 0 && add_years(from, whole) > to) --whole;
  Date anchor = add_years(from, whole);
  Date next = add_years(from, whole + 1);
  double rem = static_cast<double>((to - anchor).count());
  double span = static_cast<double>((next - anchor).count());
  return whole + rem / span;
}

}  // namespace citecast
