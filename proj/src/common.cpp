#include "flexbid/common.hpp"

#include <charconv>

namespace flexbid {

namespace {

std::chrono::year_month_day ymd_of(int serial) {
  return std::chrono::year_month_day(
      std::chrono::sys_days(std::chrono::days(serial)));
}

}  // namespace

std::string_view to_string(Direction d) {
  return d == Direction::pos ? "pos" : "neg";
}

Direction direction_from_string(std::string_view s) {
  if (s == "pos") return Direction::pos;
  if (s == "neg") return Direction::neg;
  throw SchemaError("unknown direction '" + std::string(s) +
                    "' (expected pos or neg)");
}

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  std::chrono::year_month_day ymd{std::chrono::year(year),
                                  std::chrono::month(month),
                                  std::chrono::day(day)};
  if (!ymd.ok()) {
    throw SchemaError("invalid calendar date " + std::to_string(year) + "-" +
                      std::to_string(month) + "-" + std::to_string(day));
  }
  return Date(static_cast<int>(
      std::chrono::sys_days(ymd).time_since_epoch().count()));
}

Date Date::parse(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    auto num = [&](int from, int len, auto& out) {
      auto res = std::from_chars(text.data() + from, text.data() + from + len,
                                 out);
      return res.ec == std::errc() && res.ptr == text.data() + from + len;
    };
    if (num(0, 4, y) && num(5, 2, m) && num(8, 2, d)) return from_ymd(y, m, d);
  }
  throw SchemaError("invalid date '" + std::string(text) +
                    "' (expected YYYY-MM-DD)");
}

int Date::year() const { return static_cast<int>(ymd_of(serial_).year()); }
int Date::month() const { return static_cast<int>(unsigned(ymd_of(serial_).month())); }
int Date::day() const { return static_cast<int>(unsigned(ymd_of(serial_).day())); }

std::string Date::to_string() const {
  auto ymd = ymd_of(serial_);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u",
                static_cast<int>(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

ProductBlock ProductBlock::at(int k) {
  if (k < 1 || k > kCount) {
    throw ConfigError("product block index " + std::to_string(k) +
                      " out of range 1..6");
  }
  return ProductBlock{k};
}

ProductBlock ProductBlock::of_hour(int hour) {
  if (hour < 0 || hour >= 24) {
    throw ConfigError("hour " + std::to_string(hour) + " out of range 0..23");
  }
  return ProductBlock{hour / kHours + 1};
}

}  // namespace flexbid
