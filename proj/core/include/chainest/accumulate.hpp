// Copyright 2026 The chainest Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAINEST_ACCUMULATE_HPP
#define CHAINEST_ACCUMULATE_HPP

#include <cmath>
#include <cstddef>
#include <span>

namespace chainest {

/// Compensated accumulator (Neumaier's variant of Kahan summation).
///
/// Tracks the rounding error of every addition in a separate compensation
/// term, so long sums of same-magnitude values stay accurate to within a
/// few ulps instead of growing an O(n) error. Adding values in a fixed
/// order yields bit-identical results across runs.
class KahanSum {
 public:
  KahanSum() = default;
  explicit KahanSum(double initial) : sum_(initial) {}

  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      comp_ += (sum_ - t) + value;
    } else {
      comp_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  KahanSum& operator+=(double value) {
    add(value);
    return *this;
  }

  /// Merge another accumulator into this one. Associative up to the usual
  /// compensated-summation error; merge order must be fixed by the caller
  /// when bit reproducibility is required.
  void merge(const KahanSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Compensated sum of a span, left to right.
inline double compensated_sum(std::span<const double> values) {
  KahanSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

}  // namespace chainest

#endif  // CHAINEST_ACCUMULATE_HPP
