#include "vefluid/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "vefluid/errors.hpp"
#include "vefluid/linsolve.hpp"

namespace vefluid {

namespace {

constexpr double kTraceTol = 1e-10;
constexpr double kStressSkewTol = 1e-8;

std::string describe(const SymTensor3& b) {
  std::ostringstream os;
  os.precision(12);
  os << "B = [" << b.xx << ", " << b.yy << ", " << b.zz << "; " << b.xy << ", " << b.xz << ", "
     << b.yz << "]";
  return os.str();
}

std::string describe(const Tensor3& l) {
  std::ostringstream os;
  os.precision(12);
  os << "L = [";
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) os << l(i, j) << (j < 2 ? ", " : (i < 2 ? "; " : "]"));
  }
  return os.str();
}

// Residual of the evolution equation, moved to one side, for a trial rate
// and multiplier q = p - lambda. Vanishes on solutions.
Tensor3 evolution_residual(const SymTensor3& b, const SpdRoots& roots, const SymTensor3& bdot,
                           double q, const Tensor3& l, const ModelParams& prm,
                           DissipationVariant variant) {
  const Tensor3 bf = b.full();
  const Tensor3 v = roots.sqrt.full();
  const Tensor3 vi = roots.invSqrt.full();
  const Tensor3 up = ucd(b, bdot, l).full();
  Tensor3 m = q * bf + prm.mu * (bf * bf);
  if (variant == DissipationVariant::StretchWeighted) {
    m += (prm.eta_p / 4.0) * (bf * bdot.full() + bdot.full() * bf);
    m += (prm.eta_G / 4.0) * (vi * (bf * up + up * bf) * v);
  } else {
    m += (prm.eta_p / 2.0) * bdot.full();
    m += (prm.eta_G / 2.0) * (vi * up * v);
  }
  return m;
}

}  // namespace

std::string_view to_string(DissipationVariant v) {
  return v == DissipationVariant::StretchWeighted ? "stretch" : "plain";
}

DissipationVariant parse_variant(std::string_view name) {
  if (name == "stretch") return DissipationVariant::StretchWeighted;
  if (name == "plain") return DissipationVariant::PlainQuadratic;
  throw ConfigError("unknown dissipation variant '" + std::string(name) +
                    "' (expected stretch or plain)");
}

void ModelParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!(finite(mu) && mu > 0.0)) throw DomainError("mu must be positive");
  if (!(finite(eta_G) && eta_G > 0.0)) throw DomainError("eta_G must be positive");
  if (!(finite(eta_p) && eta_p >= 0.0)) throw DomainError("eta_p must be nonnegative");
  if (!(finite(rho) && rho > 0.0)) throw DomainError("rho must be positive");
}

ModelParams ModelParams::scaled(double eta_bar) {
  if (!(std::isfinite(eta_bar) && eta_bar > 0.0)) throw DomainError("eta_bar must be positive");
  return ModelParams{1.0, 1.0, eta_bar, 1.0};
}

double stored_energy(const SymTensor3& b, const ModelParams& params) {
  (void)spd_roots(b);  // SPD check
  return params.mu / (2.0 * params.rho) * (trace(b) - 3.0);
}

double stored_energy_rate(const SymTensor3& bdot, const ModelParams& params) {
  return 0.5 * params.mu * trace(bdot);
}

double dissipation_rate(const SymTensor3& b, const SymTensor3& dp, const SymTensor3& dg,
                        const ModelParams& params, DissipationVariant variant) {
  const double tol = kTraceTol * std::max({1.0, norm(dp), norm(dg)});
  if (std::abs(trace(dp)) > tol || std::abs(trace(dg)) > tol) {
    std::ostringstream os;
    os << "rates must be traceless: tr(Dp) = " << trace(dp) << ", tr(DG) = " << trace(dg);
    throw ConstraintError(os.str());
  }
  if (variant == DissipationVariant::PlainQuadratic) {
    return params.eta_p * inner(dp, dp) + params.eta_G * inner(dg, dg);
  }
  return params.eta_p * inner(dp.full(), product(b, dp)) +
         params.eta_G * inner(dg.full(), product(b, dg));
}

SymTensor3 stress_T_p(const SymTensor3& b, const ModelParams& params) { return params.mu * b; }

EvolutionRate evolution_rhs_general(const SymTensor3& b, const Tensor3& l,
                                    const ModelParams& params, DissipationVariant variant) {
  params.validate();
  if (std::abs(trace(l)) > kTraceTol) {
    throw ConstraintError("velocity gradient must be traceless, tr(L) = " +
                          std::to_string(trace(l)));
  }
  const SpdRoots roots = spd_roots(b);

  // Columns: six symmetric basis coordinates of Bdot, then q = p - lambda.
  // Rows: symmetric part of the residual, then tr(B^{-1} Bdot) = 0.
  constexpr std::size_t n = 7;
  std::vector<double> a(n * n, 0.0);
  const auto base = sym_coords(
      sym(evolution_residual(b, roots, SymTensor3::zero(), 0.0, l, params, variant)));
  auto column = [&](std::size_t k, const SymTensor3& bdot, double q) {
    const auto c = sym_coords(sym(evolution_residual(b, roots, bdot, q, l, params, variant)));
    for (std::size_t i = 0; i < 6; ++i) a[i * n + k] = c[i] - base[i];
  };
  for (std::size_t k = 0; k < 6; ++k) column(k, sym_basis(k), 0.0);
  column(6, SymTensor3::zero(), 1.0);

  double scale = 0.0;
  for (std::size_t i = 0; i < 6 * n; ++i) scale = std::max(scale, std::abs(a[i]));
  const auto binv = sym_coords(roots.inv);
  double binvMax = 0.0;
  for (double v : binv) binvMax = std::max(binvMax, std::abs(v));
  const double rowScale = binvMax > 0.0 ? scale / binvMax : 1.0;
  for (std::size_t k = 0; k < 6; ++k) a[6 * n + k] = rowScale * binv[k];

  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < 6; ++i) rhs[i] = -base[i];

  std::vector<double> x;
  double cond = 0.0;
  try {
    DenseLU lu(a, n);
    x = lu.solve(rhs);
    cond = lu.condition();
  } catch (const DegeneracyError& e) {
    throw DegeneracyError(std::string("evolution system is singular at ") + describe(b) + ", " +
                          describe(l) + ": " + e.what());
  }

  EvolutionRate out;
  out.bdot = from_sym_coords({x[0], x[1], x[2], x[3], x[4], x[5]});
  out.p_minus_lambda = x[6];
  out.condition = cond;

  const Tensor3 m = evolution_residual(b, roots, out.bdot, out.p_minus_lambda, l, params, variant);
  const double ref = params.mu * norm(product(b, b));
  out.asymmetry = norm(skew(m)) / ref;

  double qTrace = 0.0;
  if (variant == DissipationVariant::StretchWeighted) {
    qTrace = -(params.eta_G / 2.0 * trace(ucd(b, out.bdot, l)) +
               params.eta_p / 2.0 * trace(out.bdot) + params.mu * trace(b)) /
             3.0;
  } else {
    qTrace = -params.mu * trace(b) / 3.0;
  }
  out.multiplier_residual = std::abs(out.p_minus_lambda - qTrace);
  return out;
}

Tensor3 stress_general_full(const SymTensor3& b, const SymTensor3& bdot, const Tensor3& l,
                            const ModelParams& params, DissipationVariant variant) {
  const SpdRoots roots = spd_roots(b);
  if (variant == DissipationVariant::PlainQuadratic) {
    return (params.mu * b).full() +
           (params.eta_p / 2.0) * (roots.invSqrt.full() * bdot.full() * roots.invSqrt.full());
  }
  const Tensor3 up = ucd(b, bdot, l).full();
  return (-params.eta_G / 4.0) * (up + roots.inv.full() * up * b.full());
}

SymTensor3 stress_general(const SymTensor3& b, const SymTensor3& bdot, const Tensor3& l,
                          const ModelParams& params, DissipationVariant variant) {
  const SymmetryCheck s = checked_sym(stress_general_full(b, bdot, l, params, variant));
  if (s.relativeSkew > kStressSkewTol) {
    throw DomainError("stress is not symmetric (relative skew part " +
                      std::to_string(s.relativeSkew) + ") at " + describe(b) + ", " +
                      describe(l));
  }
  return s.value;
}

SymTensor3 kelvin_voigt_stress(const SymTensor3& b_r, const SymTensor3& d,
                               const ModelParams& params) {
  // B_R D + D B_R = 2 sym(B_R D)
  return params.mu * b_r + params.eta_p * sym(product(b_r, d));
}

RecoveredRates recover_rates(const SymTensor3& b, const SymTensor3& bdot, const Tensor3& l) {
  const SpdRoots roots = spd_roots(b);
  const Tensor3 vi = roots.invSqrt.full();
  RecoveredRates r;
  r.dp = 0.5 * sym(vi * bdot.full() * vi);
  r.dg = -0.5 * sym(vi * ucd(b, bdot, l).full() * vi);
  return r;
}

EnergyBalance energy_balance(const Tensor3& t, const SymTensor3& b, const SymTensor3& bdot,
                             const Tensor3& l, const ModelParams& params,
                             DissipationVariant variant) {
  const RecoveredRates r = recover_rates(b, bdot, l);
  EnergyBalance e;
  e.stress_power = inner(t, sym(l));
  e.storage_rate = stored_energy_rate(bdot, params);
  e.dissipation = dissipation_rate(b, r.dp, r.dg, params, variant);
  e.relative_residual = std::abs(e.stress_power - e.storage_rate - e.dissipation) /
                        std::max(e.dissipation, params.mu);
  return e;
}

double maxwell_limit_check(std::span<const std::pair<SymTensor3, SymTensor3>> samples) {
  double worst = 0.0;
  for (const auto& [b, dg] : samples) {
    const double scale = norm(b) * norm(dg);
    if (!(scale > 0.0)) continue;
    const Tensor3 c = product(b, dg) - product(dg, b);
    worst = std::max(worst, norm(c) / scale);
  }
  return worst;
}

}  // namespace vefluid
