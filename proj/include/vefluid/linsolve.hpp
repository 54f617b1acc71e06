#pragma once

#include <cstddef>
#include <vector>

namespace vefluid {

/// LU factorisation with partial pivoting of a small dense row-major matrix.
class DenseLU {
 public:
  /// Throws DegeneracyError when a pivot is below 1e-13 of the largest entry.
  DenseLU(std::vector<double> a, std::size_t n);

  std::vector<double> solve(std::vector<double> b) const;

  /// 1-norm condition number, from the explicit inverse (fine for n <= 10).
  double condition() const;

  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
  double norm1_ = 0.0;
};

}  // namespace vefluid
