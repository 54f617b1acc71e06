#include "vefluid/tensor3.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vefluid/errors.hpp"

namespace vefluid {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt6 = 2.4494897427831780982;

// Off-diagonal norm below this fraction of ||B|| ends the Jacobi sweeps.
constexpr double kJacobiTol = 1e-14;
constexpr int kJacobiMaxSweeps = 64;
// Eigenvalues at or below this fraction of the largest disqualify SPD.
constexpr double kSpdTol = 1e-12;

SymTensor3 assemble(const Tensor3& q, const std::array<double, 3>& d) {
  SymTensor3 r;
  auto entry = [&](int i, int j) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += q(i, k) * d[static_cast<std::size_t>(k)] * q(j, k);
    return s;
  };
  r.xx = entry(0, 0);
  r.yy = entry(1, 1);
  r.zz = entry(2, 2);
  r.xy = entry(0, 1);
  r.xz = entry(0, 2);
  r.yz = entry(1, 2);
  return r;
}

SymEigen checked_spd_eigen(const SymTensor3& b) {
  SymEigen e = eig_sym(b);
  const double top = e.values[0];
  if (!(top > 0.0) || !(e.values[2] > kSpdTol * top)) {
    throw DomainError("tensor is not symmetric positive definite (eigenvalues " +
                      std::to_string(e.values[0]) + ", " + std::to_string(e.values[1]) + ", " +
                      std::to_string(e.values[2]) + ")");
  }
  return e;
}

}  // namespace

Tensor3& Tensor3::operator+=(const Tensor3& o) {
  for (std::size_t i = 0; i < 9; ++i) a_[i] += o.a_[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
  for (std::size_t i = 0; i < 9; ++i) a_[i] -= o.a_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  for (auto& v : a_) v *= s;
  return *this;
}

double SymTensor3::operator()(int i, int j) const {
  if (i > j) std::swap(i, j);
  switch (3 * i + j) {
    case 0: return xx;
    case 1: return xy;
    case 2: return xz;
    case 4: return yy;
    case 5: return yz;
    default: return zz;
  }
}

Tensor3 SymTensor3::full() const { return Tensor3({xx, xy, xz, xy, yy, yz, xz, yz, zz}); }

SymTensor3& SymTensor3::operator+=(const SymTensor3& o) {
  xx += o.xx;
  yy += o.yy;
  zz += o.zz;
  xy += o.xy;
  xz += o.xz;
  yz += o.yz;
  return *this;
}

SymTensor3& SymTensor3::operator-=(const SymTensor3& o) {
  xx -= o.xx;
  yy -= o.yy;
  zz -= o.zz;
  xy -= o.xy;
  xz -= o.xz;
  yz -= o.yz;
  return *this;
}

SymTensor3& SymTensor3::operator*=(double s) {
  xx *= s;
  yy *= s;
  zz *= s;
  xy *= s;
  xz *= s;
  yz *= s;
  return *this;
}

Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
Tensor3 operator-(Tensor3 a) { return a *= -1.0; }
Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) { return a += b; }
SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) { return a -= b; }
SymTensor3 operator-(SymTensor3 a) { return a *= -1.0; }
SymTensor3 operator*(SymTensor3 a, double s) { return a *= s; }
SymTensor3 operator*(double s, SymTensor3 a) { return a *= s; }

Tensor3 product(const Tensor3& a, const Tensor3& b) {
  Tensor3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    }
  }
  return r;
}

Tensor3 product(const SymTensor3& a, const Tensor3& b) { return product(a.full(), b); }
Tensor3 product(const Tensor3& a, const SymTensor3& b) { return product(a, b.full()); }
Tensor3 product(const SymTensor3& a, const SymTensor3& b) { return product(a.full(), b.full()); }
Tensor3 operator*(const Tensor3& a, const Tensor3& b) { return product(a, b); }

Tensor3 transpose(const Tensor3& a) {
  Tensor3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
  }
  return r;
}

SymTensor3 sym(const Tensor3& a) {
  SymTensor3 s;
  s.xx = a(0, 0);
  s.yy = a(1, 1);
  s.zz = a(2, 2);
  s.xy = 0.5 * (a(0, 1) + a(1, 0));
  s.xz = 0.5 * (a(0, 2) + a(2, 0));
  s.yz = 0.5 * (a(1, 2) + a(2, 1));
  return s;
}

Tensor3 skew(const Tensor3& a) { return 0.5 * (a - transpose(a)); }

double inner(const Tensor3& a, const Tensor3& b) {
  const auto& x = a.data();
  const auto& y = b.data();
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double inner(const SymTensor3& a, const SymTensor3& b) {
  return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz + 2.0 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz);
}

double inner(const SymTensor3& a, const Tensor3& b) { return inner(a.full(), b); }
double inner(const Tensor3& a, const SymTensor3& b) { return inner(a, b.full()); }

double norm(const Tensor3& a) { return std::sqrt(inner(a, a)); }
double norm(const SymTensor3& a) { return std::sqrt(inner(a, a)); }

double trace(const Tensor3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }
double trace(const SymTensor3& a) { return a.xx + a.yy + a.zz; }

double det(const Tensor3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

double det(const SymTensor3& a) { return det(a.full()); }

SymTensor3 deviator(const SymTensor3& a) {
  const double m = trace(a) / 3.0;
  return a - SymTensor3::diag(m, m, m);
}

Tensor3 deviator(const Tensor3& a) {
  const double m = trace(a) / 3.0;
  return a - Tensor3::diag(m, m, m);
}

Tensor3 inverse(const Tensor3& a) {
  const double d = det(a);
  const double scale = norm(a);
  if (!(std::abs(d) > 1e-300) || std::abs(d) <= 1e-14 * scale * scale * scale) {
    throw DegeneracyError("inverse of a singular 3x3 tensor");
  }
  Tensor3 r;
  r(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  r(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  r(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  r(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  r(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  r(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  r(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  r(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  r(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return r * (1.0 / d);
}

SymTensor3 conjugate(const Tensor3& q, const SymTensor3& a) {
  return checked_sym(q * a.full() * transpose(q)).value;
}

Tensor3 conjugate(const Tensor3& q, const Tensor3& a) { return q * a * transpose(q); }

SymmetryCheck checked_sym(const Tensor3& a) {
  SymmetryCheck c;
  c.value = sym(a);
  const double n = norm(a);
  c.relativeSkew = n > 0.0 ? norm(skew(a)) / n : 0.0;
  return c;
}

Invariants invariants(const SymTensor3& b) {
  Invariants inv;
  inv.I = trace(b);
  inv.II = 0.5 * (inv.I * inv.I - inner(b, b));
  inv.III = det(b);
  return inv;
}

SymEigen eig_sym(const SymTensor3& b) {
  Tensor3 a = b.full();
  Tensor3 v = Tensor3::identity();
  const double scale = norm(b);

  for (int sweep = 0; sweep < kJacobiMaxSweeps && scale > 0.0; ++sweep) {
    const double off =
        std::sqrt(2.0 * (a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2)));
    if (off <= kJacobiTol * scale) break;

    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        Tensor3 rot = Tensor3::identity();
        rot(p, p) = c;
        rot(q, q) = c;
        rot(p, q) = s;
        rot(q, p) = -s;
        a = transpose(rot) * a * rot;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        v = v * rot;
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  SymEigen e;
  for (std::size_t k = 0; k < 3; ++k) {
    const int src = order[k];
    e.values[k] = a(src, src);
    for (int r = 0; r < 3; ++r) e.vectors(r, static_cast<int>(k)) = v(r, src);
  }
  return e;
}

SpdRoots spd_roots(const SymTensor3& b) {
  const SymEigen e = checked_spd_eigen(b);
  std::array<double, 3> s{}, is{}, inv{};
  for (std::size_t k = 0; k < 3; ++k) {
    s[k] = std::sqrt(e.values[k]);
    is[k] = 1.0 / s[k];
    inv[k] = 1.0 / e.values[k];
  }
  return {assemble(e.vectors, s), assemble(e.vectors, is), assemble(e.vectors, inv)};
}

SymTensor3 spd_sqrt(const SymTensor3& b) { return spd_roots(b).sqrt; }
SymTensor3 spd_inv_sqrt(const SymTensor3& b) { return spd_roots(b).invSqrt; }
SymTensor3 spd_inverse(const SymTensor3& b) { return spd_roots(b).inv; }

SymTensor3 ucd(const SymTensor3& b, const SymTensor3& bdot, const Tensor3& l) {
  // L B + B L^T = M + M^T with M = L B; built entrywise so the result is exactly symmetric.
  const Tensor3 m = product(l, b);
  SymTensor3 r;
  r.xx = bdot.xx - 2.0 * m(0, 0);
  r.yy = bdot.yy - 2.0 * m(1, 1);
  r.zz = bdot.zz - 2.0 * m(2, 2);
  r.xy = bdot.xy - (m(0, 1) + m(1, 0));
  r.xz = bdot.xz - (m(0, 2) + m(2, 0));
  r.yz = bdot.yz - (m(1, 2) + m(2, 1));
  return r;
}

std::array<double, 6> sym_coords(const SymTensor3& a) {
  return {a.xx, a.yy, a.zz, kSqrt2 * a.xy, kSqrt2 * a.xz, kSqrt2 * a.yz};
}

SymTensor3 from_sym_coords(const std::array<double, 6>& c) {
  SymTensor3 a;
  a.xx = c[0];
  a.yy = c[1];
  a.zz = c[2];
  a.xy = c[3] / kSqrt2;
  a.xz = c[4] / kSqrt2;
  a.yz = c[5] / kSqrt2;
  return a;
}

SymTensor3 sym_basis(std::size_t k) {
  std::array<double, 6> c{};
  c.at(k) = 1.0;
  return from_sym_coords(c);
}

std::array<double, 5> dev_coords(const SymTensor3& a) {
  return {(a.xx - a.yy) / kSqrt2, (a.xx + a.yy - 2.0 * a.zz) / kSqrt6, kSqrt2 * a.xy,
          kSqrt2 * a.xz, kSqrt2 * a.yz};
}

SymTensor3 from_dev_coords(const std::array<double, 5>& c) {
  SymTensor3 a;
  a.xx = c[0] / kSqrt2 + c[1] / kSqrt6;
  a.yy = -c[0] / kSqrt2 + c[1] / kSqrt6;
  a.zz = -2.0 * c[1] / kSqrt6;
  a.xy = c[2] / kSqrt2;
  a.xz = c[3] / kSqrt2;
  a.yz = c[4] / kSqrt2;
  return a;
}

}  // namespace vefluid
