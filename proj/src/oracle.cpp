#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "vefluid/errors.hpp"
#include "vefluid/verify.hpp"

namespace vefluid {

namespace {

constexpr std::size_t kDim = 10;  // 5 for Dp, 5 for D_G
constexpr double kRadius = 0.1;
constexpr double kSkippedLimit = 0.1;

using Vec = std::array<double, kDim>;

// Traceless D with B D + D B = C - s I for the scalar s that makes tr D = 0.
SymTensor3 solve_sylvester_traceless(const SymTensor3& b, const SymTensor3& c) {
  const SymEigen e = eig_sym(b);
  const Tensor3& q = e.vectors;
  const Tensor3 cp = transpose(q) * c.full() * q;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i) {
    num += cp(i, i) / (2.0 * e.values[static_cast<std::size_t>(i)]);
    den += 1.0 / (2.0 * e.values[static_cast<std::size_t>(i)]);
  }
  const double s = num / den;
  Tensor3 dp;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double rhs = cp(i, j) - (i == j ? s : 0.0);
      dp(i, j) = rhs / (e.values[static_cast<std::size_t>(i)] + e.values[static_cast<std::size_t>(j)]);
    }
  }
  return sym(q * dp * transpose(q));
}

SymTensor3 grad_xi(const SymTensor3& b, const SymTensor3& d, double eta,
                   DissipationVariant variant) {
  if (variant == DissipationVariant::PlainQuadratic) return 2.0 * eta * d;
  return eta * sym(2.0 * product(b, d));
}

struct Setup {
  SpdRoots roots;
  Tensor3 vtvi;  // V T V^{-1}
  SymTensor3 gp;  // dev(T - mu B)
  SymTensor3 gg;  // dev(sym(V T V^{-1}))
};

Setup setup(const SymTensor3& t, const SymTensor3& b, const ModelParams& params) {
  Setup s;
  s.roots = spd_roots(b);
  s.vtvi = s.roots.sqrt.full() * t.full() * s.roots.invSqrt.full();
  s.gp = deviator(t - params.mu * b);
  s.gg = deviator(sym(s.vtvi));
  return s;
}

void require_admissible(const SymTensor3& t, const SymTensor3& b, const ModelParams& params) {
  params.validate();
  if (!(params.eta_p > 0.0)) throw DomainError("maximization needs eta_p > 0");
  const double comm = norm(product(t, b) - product(b, t));
  if (comm > 1e-10 * std::max(1e-300, norm(t) * norm(b))) {
    throw DomainError("stress must be coaxial with B for an admissible maximization state");
  }
}

Vec to_vec(const SymTensor3& dp, const SymTensor3& dg) {
  Vec x{};
  const auto a = dev_coords(dp);
  const auto c = dev_coords(dg);
  std::copy(a.begin(), a.end(), x.begin());
  std::copy(c.begin(), c.end(), x.begin() + 5);
  return x;
}

std::pair<SymTensor3, SymTensor3> from_vec(const Vec& x) {
  return {from_dev_coords({x[0], x[1], x[2], x[3], x[4]}),
          from_dev_coords({x[5], x[6], x[7], x[8], x[9]})};
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) s += a[i] * b[i];
  return s;
}

double vnorm(const Vec& a) { return std::sqrt(dot(a, a)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

AdmissibleState random_admissible_state(std::uint64_t seed, std::size_t index) {
  std::mt19937_64 gen(splitmix64(splitmix64(seed ^ 0xA5A5A5A5ULL) + index));
  std::uniform_real_distribution<double> stretch(0.5, 2.0);
  std::uniform_real_distribution<double> load(-2.0, 2.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Uniform rotation from a normalised quaternion.
  double q[4];
  double qn = 0.0;
  for (double& c : q) {
    c = normal(gen);
    qn += c * c;
  }
  qn = std::sqrt(qn);
  const double w = q[0] / qn, x = q[1] / qn, y = q[2] / qn, z = q[3] / qn;
  const Tensor3 rot({1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
                     2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
                     2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)});
  const double a = stretch(gen), b = stretch(gen);
  Tensor3 db, dt;
  db(0, 0) = a;
  db(1, 1) = b;
  db(2, 2) = 1.0 / (a * b);
  for (int i = 0; i < 3; ++i) dt(i, i) = load(gen);
  return {sym(rot * dt * transpose(rot)), sym(rot * db * transpose(rot))};
}

Candidate closed_form_candidate(const SymTensor3& t, const SymTensor3& b, const ModelParams& params,
                                DissipationVariant variant) {
  require_admissible(t, b, params);
  const Setup s = setup(t, b, params);
  Candidate c;
  SymTensor3 dg;
  if (variant == DissipationVariant::PlainQuadratic) {
    c.dp = (1.0 / params.eta_p) * s.gp;
    dg = (1.0 / params.eta_G) * s.gg;
  } else {
    c.dp = solve_sylvester_traceless(b, (2.0 / params.eta_p) * s.gp);
    dg = solve_sylvester_traceless(b, (2.0 / params.eta_G) * s.gg);
  }
  c.lg = dg.full();
  return c;
}

double constraint_residual(const SymTensor3& t, const SymTensor3& b, const SymTensor3& dp,
                           const Tensor3& lg, const ModelParams& params,
                           DissipationVariant variant) {
  const Setup s = setup(t, b, params);
  const double xi = dissipation_rate(b, dp, sym(lg), params, variant);
  return xi - (inner(s.vtvi, lg) + inner(t - params.mu * b, dp));
}

double stationarity_residual(const SymTensor3& t, const SymTensor3& b, const SymTensor3& dp,
                             const Tensor3& lg, const ModelParams& params,
                             DissipationVariant variant) {
  const SpdRoots roots = spd_roots(b);
  const SymTensor3 dg = sym(lg);
  const double xi = dissipation_rate(b, dp, dg, params, variant);
  const SymTensor3 gDp = grad_xi(b, dp, params.eta_p, variant);
  const SymTensor3 gDg = grad_xi(b, dg, params.eta_G, variant);
  const double den = inner(gDp, dp) + inner(gDg.full(), lg);
  // For a quadratic dissipation the multiplier ratio is 1/2 away from the origin.
  const double c = (xi > 0.0 && std::abs(den) > 0.0) ? xi / den : 0.5;
  const SymTensor3 r1 = deviator(t - params.mu * b - c * gDp);
  const Tensor3 r2 =
      deviator(t.full() - c * (roots.invSqrt.full() * gDg.full() * roots.sqrt.full()));
  return std::sqrt(inner(r1, r1) + inner(r2, r2)) / std::max(norm(t), params.mu);
}

MaximizationProbe maximization_oracle(const SymTensor3& t, const SymTensor3& b,
                                      const ModelParams& params, DissipationVariant variant,
                                      std::size_t n_samples, std::uint64_t seed) {
  MaximizationProbe probe;
  probe.T = t;
  probe.B = b;
  probe.samples_requested = n_samples;
  probe.candidate = closed_form_candidate(t, b, params, variant);
  const Setup s = setup(t, b, params);
  const SymTensor3 dg = sym(probe.candidate.lg);
  probe.xi_candidate = dissipation_rate(b, probe.candidate.dp, dg, params, variant);
  probe.trace = std::max(std::abs(trace(probe.candidate.dp)), std::abs(trace(probe.candidate.lg)));
  probe.stationarity =
      stationarity_residual(t, b, probe.candidate.dp, probe.candidate.lg, params, variant);

  const Vec g = to_vec(s.gp, s.gg);
  const Vec xs = to_vec(probe.candidate.dp, dg);
  const double xiStar = probe.xi_candidate;
  if (vnorm(g) <= 1e-14 * std::max(norm(t), params.mu) || !(xiStar > 0.0)) {
    probe.degenerate = true;
    probe.passed = probe.stationarity < 1e-9;
    return probe;
  }
  probe.constraint =
      std::abs(constraint_residual(t, b, probe.candidate.dp, probe.candidate.lg, params, variant)) /
      xiStar;

  auto xi_of = [&](const Vec& x) {
    const auto [p, q] = from_vec(x);
    return dissipation_rate(b, p, q, params, variant);
  };
  const double radius = kRadius * vnorm(xs);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::mt19937_64 gen(splitmix64(splitmix64(seed) + i));
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec dir{};
    for (double& d : dir) d = normal(gen);
    const double dn = vnorm(dir);
    Vec p = xs;
    for (std::size_t k = 0; k < kDim; ++k) p[k] += radius * dir[k] / dn;

    // xi is quadratic in the rates, so s p lies on xi = g.x for s = g.p / xi(p).
    const double xp = xi_of(p), gp = dot(g, p);
    if (!(xp > 0.0) || !(gp > 0.0)) {
      ++probe.samples_skipped;
      continue;
    }
    for (double& v : p) v *= gp / xp;
    ++probe.samples_used;
    worst = std::max(worst, (xi_of(p) - xiStar) / xiStar);
  }
  if (n_samples > 0 && static_cast<double>(probe.samples_skipped) >
                           kSkippedLimit * static_cast<double>(n_samples)) {
    throw OracleInconclusiveError("no feasible projection for " + std::to_string(probe.samples_skipped) +
                                  " of " + std::to_string(n_samples) + " samples");
  }
  probe.max_excess = probe.samples_used > 0 ? worst : 0.0;

  // The spin of L_G must not enter the constraint at an admissible state.
  std::mt19937_64 gen(splitmix64(seed ^ 0x5bd1e995ULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < 8; ++k) {
    Tensor3 w;
    w(0, 1) = normal(gen);
    w(0, 2) = normal(gen);
    w(1, 2) = normal(gen);
    w = w - transpose(w);
    w *= norm(dg) / std::max(norm(w), 1e-300);
    const double change = std::abs(inner(s.vtvi, w)) / xiStar;
    probe.skew_sensitivity = std::max(probe.skew_sensitivity, change);
  }

  probe.passed = probe.max_excess <= 1e-8 && probe.stationarity < 1e-9 &&
                 probe.constraint < 1e-9 && probe.trace < 1e-9 && probe.skew_sensitivity < 1e-9;
  return probe;
}

}  // namespace vefluid
