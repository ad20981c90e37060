#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace bordify {

/// Exact element of (1/2)Z, stored as twice its value.  Root distances live
/// here; nothing in the library ever goes through floating point.
class HalfInt {
public:
  constexpr HalfInt() = default;

  static constexpr HalfInt from_twice(std::int64_t t) {
    HalfInt h;
    h.twice_ = t;
    return h;
  }
  static constexpr HalfInt whole(std::int64_t n) { return from_twice(2 * n); }

  constexpr std::int64_t twice() const { return twice_; }
  constexpr bool is_integral() const { return twice_ % 2 == 0; }

  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) {
    return from_twice(a.twice_ + b.twice_);
  }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) {
    return from_twice(a.twice_ - b.twice_);
  }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    if (is_integral()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

private:
  std::int64_t twice_ = 0;
};

}  // namespace bordify
