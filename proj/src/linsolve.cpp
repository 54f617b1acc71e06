#include "vefluid/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "vefluid/errors.hpp"

namespace vefluid {

DenseLU::DenseLU(std::vector<double> a, std::size_t n) : n_(n), lu_(std::move(a)), perm_(n) {
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  auto at = [&](std::size_t i, std::size_t j) -> double& { return lu_[i * n_ + j]; };

  double biggest = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      col += std::abs(at(i, j));
      biggest = std::max(biggest, std::abs(at(i, j)));
    }
    norm1_ = std::max(norm1_, col);
  }
  if (!(biggest > 0.0)) throw DegeneracyError("zero matrix in LU factorisation");

  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n_; ++i) {
      if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
    }
    if (std::abs(at(p, k)) <= 1e-13 * biggest) {
      throw DegeneracyError("singular matrix in LU factorisation (pivot " + std::to_string(k) + ")");
    }
    if (p != k) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(at(k, j), at(p, j));
      std::swap(perm_[k], perm_[p]);
    }
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double f = at(i, k) / at(k, k);
      at(i, k) = f;
      for (std::size_t j = k + 1; j < n_; ++j) at(i, j) -= f * at(k, j);
    }
  }
}

std::vector<double> DenseLU::solve(std::vector<double> b) const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu_[i * n_ + j] * x[j];
  }
  for (std::size_t i = n_; i-- > 0;) {
    for (std::size_t j = i + 1; j < n_; ++j) x[i] -= lu_[i * n_ + j] * x[j];
    x[i] /= lu_[i * n_ + i];
  }
  return x;
}

double DenseLU::condition() const {
  double invNorm = 0.0;
  std::vector<double> e(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const auto col = solve(e);
    double s = 0.0;
    for (double v : col) s += std::abs(v);
    invNorm = std::max(invNorm, s);
  }
  return norm1_ * invNorm;
}

}  // namespace vefluid
