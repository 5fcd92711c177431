#pragma once

#include <cmath>
#include <ostream>

namespace gaitcert {

/// Extended real with an explicit tag so that +-infinity never enters
/// floating-point arithmetic by accident.
class ExtReal {
 public:
  enum class Tag { finite, neg_inf, pos_inf };

  ExtReal() = default;
  explicit ExtReal(double v) : value_(v) {}

  static ExtReal neg_inf() { ExtReal r; r.tag_ = Tag::neg_inf; return r; }
  static ExtReal pos_inf() { ExtReal r; r.tag_ = Tag::pos_inf; return r; }

  bool finite() const { return tag_ == Tag::finite; }
  bool is_neg_inf() const { return tag_ == Tag::neg_inf; }
  bool is_pos_inf() const { return tag_ == Tag::pos_inf; }
  Tag tag() const { return tag_; }

  /// Finite value; must only be called when finite().
  double value() const { return value_; }

  bool operator==(const ExtReal& o) const {
    if (tag_ != o.tag_) return false;
    return tag_ != Tag::finite || value_ == o.value_;
  }
  bool operator<(const ExtReal& o) const {
    if (tag_ == Tag::neg_inf) return o.tag_ != Tag::neg_inf;
    if (tag_ == Tag::pos_inf) return false;
    if (o.tag_ == Tag::pos_inf) return true;
    if (o.tag_ == Tag::neg_inf) return false;
    return value_ < o.value_;
  }
  bool operator<=(const ExtReal& o) const { return *this < o || *this == o; }

  bool operator<(double x) const { return *this < ExtReal(x); }
  bool operator<=(double x) const { return *this <= ExtReal(x); }
  bool operator>(double x) const { return ExtReal(x) < *this; }
  bool operator>=(double x) const { return ExtReal(x) <= *this; }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& r) {
    if (r.is_neg_inf()) return os << "-inf";
    if (r.is_pos_inf()) return os << "+inf";
    return os << r.value_;
  }

 private:
  double value_ = 0.0;
  Tag tag_ = Tag::finite;
};

}  // namespace gaitcert
