#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace decoupling {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Coordinate-wise compensated sum of equal-length vectors.
class CompensatedVectorSum {
 public:
  explicit CompensatedVectorSum(std::size_t dim) : parts_(dim) {}

  void add(std::span<const double> v, double scale = 1.0) {
    for (std::size_t i = 0; i < parts_.size(); ++i) parts_[i].add(scale * v[i]);
  }
  void add_coord(std::size_t i, double x) { parts_[i].add(x); }

  std::vector<double> value() const {
    std::vector<double> out(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i) out[i] = parts_[i].value();
    return out;
  }

 private:
  std::vector<CompensatedSum> parts_;
};

inline double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

inline double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return std::round(b);
}

/// Integer power with the 0^0 = 1 convention.
inline double ipow(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Stable 64-bit FNV-1a hash for naming streams after string ids.
inline std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace decoupling
