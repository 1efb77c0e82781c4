#pragma once

#include <cmath>
#include <vector>

namespace hrs {

/// Exact floating-point accumulator: the running sum is held as a list of
/// non-overlapping partials (Shewchuk's expansion, as in Python's fsum), so
/// additions are associative and commutative and value() is the correctly
/// rounded exact sum. Overflow and underflow of individual products are not
/// handled.
class ExactSum {
 public:
  ExactSum() = default;
  explicit ExactSum(double x) { add(x); }

  void add(double x) {
    std::size_t kept = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[kept++] = lo;
      x = hi;
    }
    partials_.resize(kept);
    partials_.push_back(x);
  }

  /// Adds a * b exactly.
  void add_product(double a, double b) {
    const double hi = a * b;
    add(hi);
    add(std::fma(a, b, -hi));
  }

  void add(const ExactSum& other) {
    for (double p : other.partials_) add(p);
  }

  void subtract(const ExactSum& other) {
    for (double p : other.partials_) add(-p);
  }

  /// this += c * other, exactly.
  void add_scaled(const ExactSum& other, double c) {
    for (double p : other.partials_) add_product(p, c);
  }

  /// this += a * b for two expansions, exactly.
  void add_product(const ExactSum& a, const ExactSum& b) {
    for (double p : a.partials_) {
      for (double q : b.partials_) add_product(p, q);
    }
  }

  ExactSum negated() const {
    ExactSum out;
    out.partials_.reserve(partials_.size());
    for (double p : partials_) out.partials_.push_back(-p);
    return out;
  }

  /// Correctly rounded value of the exact sum.
  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Round-half-even correction when the remaining partials push the tie.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      const double yr = x - hi;
      if (y == yr) hi = x;
    }
    return hi;
  }

  std::size_t size() const noexcept { return partials_.size(); }

 private:
  std::vector<double> partials_;
};

}  // namespace hrs
