#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <string>

namespace hypstab {

/// Exact value in (1/2)Z, stored as twice its value.  Gromov products of
/// integer distances live here.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(std::int64_t whole) : twice_(2 * whole) {}  // NOLINT

  static constexpr HalfInt from_twice(std::int64_t twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr std::int64_t twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double to_double() const { return static_cast<double>(twice_) / 2.0; }
  /// Largest integer <= value.
  constexpr std::int64_t floor() const {
    return twice_ >= 0 ? twice_ / 2 : -((-twice_ + 1) / 2);
  }
  /// Smallest integer >= value.
  constexpr std::int64_t ceil() const { return -HalfInt::from_twice(-twice_).floor(); }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt& operator+=(HalfInt o) { twice_ += o.twice_; return *this; }
  constexpr HalfInt& operator-=(HalfInt o) { twice_ -= o.twice_; return *this; }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }
  friend constexpr HalfInt operator*(std::int64_t k, HalfInt a) { return from_twice(k * a.twice_); }
  friend constexpr HalfInt operator*(HalfInt a, std::int64_t k) { return from_twice(k * a.twice_); }

  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
  friend constexpr bool operator==(HalfInt, HalfInt) = default;

  std::string str() const {
    std::string s = std::to_string(twice_ / 2);
    if (twice_ % 2 != 0) {
      if (twice_ < 0 && twice_ / 2 == 0) s = "-0";
      s += ".5";
    }
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, HalfInt h) { return os << h.str(); }

 private:
  std::int64_t twice_ = 0;
};

/// (a + b - c) / 2 for integers, the shape every Gromov product takes.
constexpr HalfInt half_of(std::int64_t twice_value) { return HalfInt::from_twice(twice_value); }

}  // namespace hypstab
