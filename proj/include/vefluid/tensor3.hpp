#pragma once

// Second-order tensors in three dimensions.
//
// Tensor3 is a general 3x3 tensor stored row-major. SymTensor3 stores the six
// independent components of a symmetric tensor; symmetry is structural.
// Products always go through Tensor3; a result is folded back to SymTensor3
// only where the algebra guarantees symmetry.

#include <array>
#include <cstddef>

namespace vefluid {

class Tensor3 {
 public:
  constexpr Tensor3() = default;
  constexpr explicit Tensor3(const std::array<double, 9>& rowMajor) : a_(rowMajor) {}

  static constexpr Tensor3 zero() { return Tensor3{}; }
  static constexpr Tensor3 identity() { return diag(1.0, 1.0, 1.0); }
  static constexpr Tensor3 diag(double a, double b, double c) {
    return Tensor3({a, 0, 0, 0, b, 0, 0, 0, c});
  }

  constexpr double& operator()(int i, int j) { return a_[static_cast<std::size_t>(3 * i + j)]; }
  constexpr double operator()(int i, int j) const { return a_[static_cast<std::size_t>(3 * i + j)]; }
  constexpr const std::array<double, 9>& data() const { return a_; }

  Tensor3& operator+=(const Tensor3& o);
  Tensor3& operator-=(const Tensor3& o);
  Tensor3& operator*=(double s);

 private:
  std::array<double, 9> a_{};
};

class SymTensor3 {
 public:
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  static constexpr SymTensor3 zero() { return SymTensor3{}; }
  static constexpr SymTensor3 identity() { return diag(1.0, 1.0, 1.0); }
  static constexpr SymTensor3 diag(double a, double b, double c) {
    SymTensor3 s;
    s.xx = a;
    s.yy = b;
    s.zz = c;
    return s;
  }

  double operator()(int i, int j) const;
  Tensor3 full() const;

  SymTensor3& operator+=(const SymTensor3& o);
  SymTensor3& operator-=(const SymTensor3& o);
  SymTensor3& operator*=(double s);
};

Tensor3 operator+(Tensor3 a, const Tensor3& b);
Tensor3 operator-(Tensor3 a, const Tensor3& b);
Tensor3 operator-(Tensor3 a);
Tensor3 operator*(Tensor3 a, double s);
Tensor3 operator*(double s, Tensor3 a);
SymTensor3 operator+(SymTensor3 a, const SymTensor3& b);
SymTensor3 operator-(SymTensor3 a, const SymTensor3& b);
SymTensor3 operator-(SymTensor3 a);
SymTensor3 operator*(SymTensor3 a, double s);
SymTensor3 operator*(double s, SymTensor3 a);

/// Matrix product.
Tensor3 product(const Tensor3& a, const Tensor3& b);
Tensor3 product(const SymTensor3& a, const Tensor3& b);
Tensor3 product(const Tensor3& a, const SymTensor3& b);
Tensor3 product(const SymTensor3& a, const SymTensor3& b);
Tensor3 operator*(const Tensor3& a, const Tensor3& b);

Tensor3 transpose(const Tensor3& a);
/// (A + A^T) / 2
SymTensor3 sym(const Tensor3& a);
/// (A - A^T) / 2
Tensor3 skew(const Tensor3& a);

/// Frobenius inner product sum_ij A_ij B_ij.
double inner(const Tensor3& a, const Tensor3& b);
double inner(const SymTensor3& a, const SymTensor3& b);
double inner(const SymTensor3& a, const Tensor3& b);
double inner(const Tensor3& a, const SymTensor3& b);

double norm(const Tensor3& a);
double norm(const SymTensor3& a);
double trace(const Tensor3& a);
double trace(const SymTensor3& a);
double det(const Tensor3& a);
double det(const SymTensor3& a);

/// A - tr(A)/3 I
SymTensor3 deviator(const SymTensor3& a);
Tensor3 deviator(const Tensor3& a);

/// General inverse by cofactors; throws DegeneracyError when |det| is negligible.
Tensor3 inverse(const Tensor3& a);

/// Q A Q^T.
SymTensor3 conjugate(const Tensor3& q, const SymTensor3& a);
Tensor3 conjugate(const Tensor3& q, const Tensor3& a);

/// Exact symmetric part of a tensor known to be symmetric, together with the
/// relative size of its skew part, for callers that assert rather than force symmetry.
struct SymmetryCheck {
  SymTensor3 value;
  double relativeSkew = 0.0;
};
SymmetryCheck checked_sym(const Tensor3& a);

struct Invariants {
  double I = 0, II = 0, III = 0;
};
Invariants invariants(const SymTensor3& b);

struct SymEigen {
  std::array<double, 3> values{};  // descending
  Tensor3 vectors;                 // orthonormal, eigenvectors in columns
};

/// Cyclic Jacobi eigendecomposition; b = Q diag(values) Q^T.
SymEigen eig_sym(const SymTensor3& b);

/// Square root of a symmetric positive definite tensor. Throws DomainError
/// unless every eigenvalue exceeds 1e-12 times the largest.
SymTensor3 spd_sqrt(const SymTensor3& b);
SymTensor3 spd_inv_sqrt(const SymTensor3& b);
SymTensor3 spd_inverse(const SymTensor3& b);

/// V = B^{1/2} and V^{-1} from a single eigendecomposition.
struct SpdRoots {
  SymTensor3 sqrt;
  SymTensor3 invSqrt;
  SymTensor3 inv;
};
SpdRoots spd_roots(const SymTensor3& b);

/// Upper convected derivative Bdot - L B - B L^T.
SymTensor3 ucd(const SymTensor3& b, const SymTensor3& bdot, const Tensor3& l);

/// Coordinates in the orthonormal basis {e1e1, e2e2, e3e3, (e1e2+e2e1)/sqrt2, (e1e3+e3e1)/sqrt2,
/// (e2e3+e3e2)/sqrt2} of symmetric tensors. inner(a, b) == dot(coords(a), coords(b)).
std::array<double, 6> sym_coords(const SymTensor3& a);
SymTensor3 from_sym_coords(const std::array<double, 6>& c);
SymTensor3 sym_basis(std::size_t k);

/// Orthonormal basis of traceless symmetric tensors (5 elements).
std::array<double, 5> dev_coords(const SymTensor3& a);
SymTensor3 from_dev_coords(const std::array<double, 5>& c);

}  // namespace vefluid
