// Shared vocabulary types: calendar dates, balancing directions, 4h product
// blocks, and the error hierarchy used across the library.

#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flexbid {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file: wrong columns, unparsable values, bad header.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Missing data inside a range that must be contiguous (days, hours, horizon).
class GapError : public Error {
 public:
  using Error::Error;
};

// A series that must be nondecreasing is not (merit curves).
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

// Not enough trailing history for a calibration or feature window.
class HistoryError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration or strategy specification.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Direction of balancing energy: pos = grid draws energy from us (discharge),
// neg = we absorb energy from the grid (charge).

enum class Direction { pos = 0, neg = 1 };

inline constexpr std::array<Direction, 2> kDirections{Direction::pos,
                                                      Direction::neg};

constexpr int index_of(Direction d) { return static_cast<int>(d); }

std::string_view to_string(Direction d);
Direction direction_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Calendar date with day precision, stored as days since 1970-01-01.

class Date {
 public:
  Date() = default;
  explicit Date(int serial_days) : serial_(serial_days) {}

  static Date from_ymd(int year, unsigned month, unsigned day);
  // Parses "YYYY-MM-DD"; throws SchemaError on malformed input.
  static Date parse(std::string_view text);

  int serial() const { return serial_; }
  int year() const;
  int month() const;  // 1..12
  int day() const;    // 1..31

  std::string to_string() const;

  Date operator+(int days) const { return Date(serial_ + days); }
  Date operator-(int days) const { return Date(serial_ - days); }
  int operator-(Date other) const { return serial_ - other.serial_; }
  Date& operator++() {
    ++serial_;
    return *this;
  }
  auto operator<=>(const Date&) const = default;

 private:
  int serial_ = 0;
};

// ---------------------------------------------------------------------------
// The six 4-hour balancing products I_1 = [0,4) .. I_6 = [20,24).

struct ProductBlock {
  static constexpr int kCount = 6;
  static constexpr int kHours = 4;

  int index = 1;  // k in 1..6

  int start_hour() const { return kHours * (index - 1); }
  int end_hour() const { return start_hour() + kHours; }

  static ProductBlock at(int k);          // throws ConfigError unless 1..6
  static ProductBlock of_hour(int hour);  // block containing hour 0..23
};

}  // namespace flexbid
