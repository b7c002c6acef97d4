#pragma once

// Laurent germs c_{m} u^{m} + ... + c_{M} u^{M} about a fixed center.
// Coefficients above the stored window are unknown, and every operation keeps
// only the orders it can determine exactly.

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "quadmean/error.hpp"

namespace quadmean {

template <class T>
class LaurentSeries {
 public:
  LaurentSeries() = default;
  LaurentSeries(T center, int min_order, std::vector<T> coeffs)
      : center_(center), min_order_(min_order), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw domain_error("LaurentSeries: empty coefficient window");
  }

  /// Taylor series sum_{k=0..n} c_k u^k.
  static LaurentSeries taylor(T center, std::vector<T> coeffs) {
    return LaurentSeries(center, 0, std::move(coeffs));
  }

  T center() const { return center_; }
  int min_order() const { return min_order_; }
  int max_order() const { return min_order_ + static_cast<int>(coeffs_.size()) - 1; }

  /// Coefficient of u^order; zero below the window, error above it.
  T coefficient(int order) const {
    if (order < min_order_) return T{};
    if (order > max_order()) throw domain_error("LaurentSeries: order beyond the known window");
    return coeffs_[static_cast<std::size_t>(order - min_order_)];
  }

  T residue() const { return coefficient(-1); }

  LaurentSeries truncated(int max_order) const {
    if (max_order < min_order_) throw domain_error("LaurentSeries: truncation below min order");
    const int top = std::min(max_order, this->max_order());
    std::vector<T> c(coeffs_.begin(), coeffs_.begin() + (top - min_order_ + 1));
    return LaurentSeries(center_, min_order_, std::move(c));
  }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    check_center(a, b);
    const int lo = std::min(a.min_order_, b.min_order_);
    const int hi = std::min(a.max_order(), b.max_order());
    std::vector<T> c;
    for (int k = lo; k <= hi; ++k) c.push_back(a.coefficient(k) + b.coefficient(k));
    return LaurentSeries(a.center_, lo, std::move(c));
  }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    check_center(a, b);
    const int lo = a.min_order_ + b.min_order_;
    const int hi = std::min(a.max_order() + b.min_order_, b.max_order() + a.min_order_);
    std::vector<T> c;
    for (int k = lo; k <= hi; ++k) {
      T s{};
      for (int i = a.min_order_; i <= a.max_order(); ++i) {
        const int j = k - i;
        if (j < b.min_order_ || j > b.max_order()) continue;
        s += a.coefficient(i) * b.coefficient(j);
      }
      c.push_back(s);
    }
    return LaurentSeries(a.center_, lo, std::move(c));
  }

  friend LaurentSeries operator*(const T& s, LaurentSeries a) {
    for (auto& c : a.coeffs_) c *= s;
    return a;
  }

  /// Evaluate the stored window at u (relative to the center).
  T evaluate(T u) const {
    T s{};
    for (int k = max_order(); k >= min_order_; --k) s = s * u + coefficient(k);
    // s now holds sum c_k u^{k - min_order}
    T scale{1};
    if (min_order_ > 0)
      for (int i = 0; i < min_order_; ++i) scale *= u;
    else
      for (int i = 0; i < -min_order_; ++i) scale /= u;
    return s * scale;
  }

 private:
  static void check_center(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.center_ != b.center_) throw domain_error("LaurentSeries: centers differ");
  }

  T center_{};
  int min_order_ = 0;
  std::vector<T> coeffs_;
};

}  // namespace quadmean
