#pragma once

#include <compare>
#include <string>

namespace invstab {

// A value in [0, +inf]. Infinity is a flag, not a large double; sums and
// positive multiples absorb it.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  // Throws std::domain_error for negative, NaN or infinite input.
  explicit ExtReal(double value);

  static constexpr ExtReal Infinity() {
    ExtReal e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  // Precondition: finite.
  double value() const;
  // +inf as an IEEE value, for serialization and plotting only.
  double ToDouble() const;
  std::string ToString() const;

  friend ExtReal operator+(ExtReal a, ExtReal b);
  // Multiplication by a finite non-negative factor; 0 * inf = 0.
  friend ExtReal operator*(double k, ExtReal a);

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

// num / den with 0/0 := 0 and positive/0 := inf.
ExtReal SafeRatio(double num, double den);

}  // namespace invstab
