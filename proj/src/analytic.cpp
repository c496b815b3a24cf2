#include "cachenet/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cachenet/errors.hpp"

namespace cachenet {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_transform_args(double s, double p_hit) {
  if (std::isnan(s) || s < 0.0) throw DomainError("Laplace transform: s must be >= 0");
  if (std::isnan(p_hit) || p_hit < 0.0 || p_hit > 1.0)
    throw DomainError("Laplace transform: p_hit must lie in [0, 1]");
}

void check_p_hit(double p_hit) {
  if (std::isnan(p_hit) || p_hit < 0.0 || p_hit > 1.0)
    throw DomainError("p_hit must lie in [0, 1]");
}

// exp(-theta sigma^2 r^alpha / rho): probability that fading alone clears the noise.
double noise_factor(const NetworkParams& p, double r, double rho) {
  if (p.sigma2() == 0.0) return 1.0;
  return std::exp(-p.theta() * p.sigma2() * std::pow(r, p.alpha()) / rho);
}

}  // namespace

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::static_assoc:
      return "static";
    case Policy::dynamic_assoc:
      return "dynamic";
    case Policy::dynamic_bound:
      return "dynamic_lb";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  if (name == "static") return Policy::static_assoc;
  if (name == "dynamic") return Policy::dynamic_assoc;
  if (name == "dynamic_lb") return Policy::dynamic_bound;
  throw DomainError("unknown policy '" + std::string(name) + "'");
}

void QuadratureSpec::validate() const {
  if (initial_nodes < 8) throw DomainError("quadrature: initial_nodes must be >= 8");
  if (!(relative_tolerance > 0.0 && relative_tolerance < 1e-3))
    throw DomainError("quadrature: relative_tolerance must lie in (0, 1e-3)");
  if (max_doublings < 1) throw DomainError("quadrature: max_doublings must be >= 1");
}

double laplace_static_ut(double s, const NetworkParams& params) {
  check_transform_args(s, 0.0);
  return std::exp(-two_pi * params.lambda() * upsilon(params.rho_sc() * s, params.alpha()));
}

double laplace_static_sc(double s, double p_hit, const NetworkParams& params) {
  check_transform_args(s, p_hit);
  const double miss = 1.0 - p_hit;
  if (miss == 0.0) return 1.0;
  return std::exp(-two_pi * params.lambda() * miss *
                  upsilon(params.rho_bh() * s, params.alpha()));
}

double laplace_dynamic_ut(double s, double p_hit, const NetworkParams& params) {
  check_transform_args(s, p_hit);
  const double lam = params.lambda();
  const double a = params.alpha();
  const double sc_part = std::exp(-two_pi * lam * p_hit * upsilon(params.rho_sc() * s, a));
  const double bh_part =
      std::exp(-two_pi * lam * (1.0 - p_hit) * upsilon(params.rho_bh() * s, a));
  return sc_part * bh_part;
}

double omega(double r_ut, double r_bh, double phi, double alpha) {
  const double d2 = r_ut * r_ut + r_bh * r_bh + 2.0 * r_ut * r_bh * std::cos(phi);
  return std::pow(d2, alpha / 2.0);
}

double success_static(const NetworkParams& params, double p_hit) {
  check_p_hit(p_hit);
  const LinkGeometry g = params.links();
  const double a = params.alpha();
  const double th = params.theta();

  const double s_ut = th * std::pow(g.r_ut, a) / params.rho_sc();
  const double access = noise_factor(params, g.r_ut, params.rho_sc()) * laplace_static_ut(s_ut, params);
  if (p_hit == 1.0) return access;

  const double s_bh = th * std::pow(g.r_bh, a) / params.rho_bh();
  const double backhaul =
      noise_factor(params, g.r_bh, params.rho_bh()) * laplace_static_sc(s_bh, p_hit, params);
  return access * (p_hit + (1.0 - p_hit) * backhaul);
}

namespace {

double hit_term_dynamic(const NetworkParams& params, const LinkGeometry& g, double p_hit) {
  if (p_hit == 0.0) return 0.0;
  const double s = params.theta() * std::pow(g.r_ut, params.alpha()) / params.rho_sc();
  return p_hit * noise_factor(params, g.r_ut, params.rho_sc()) * laplace_dynamic_ut(s, p_hit, params);
}

}  // namespace

double success_dynamic(const NetworkParams& params, double p_hit, const QuadratureSpec& quad) {
  check_p_hit(p_hit);
  quad.validate();
  const LinkGeometry g = params.links();
  const double hit = hit_term_dynamic(params, g, p_hit);
  if (p_hit == 1.0) return hit;

  const double a = params.alpha();
  const double scale = params.theta() / params.rho_bh();
  auto integrand = [&](double phi) {
    return laplace_dynamic_ut(scale * omega(g.r_ut, g.r_bh, phi, a), p_hit, params);
  };

  // Periodic integrand: the trapezoid rule converges geometrically.
  long n = quad.initial_nodes;
  double sum = 0.0;
  for (long k = 0; k < n; ++k) sum += integrand(two_pi * static_cast<double>(k) / static_cast<double>(n));
  double mean = sum / static_cast<double>(n);

  bool converged = false;
  double previous = mean;
  for (int d = 0; d < quad.max_doublings; ++d) {
    double mid = 0.0;
    for (long k = 0; k < n; ++k)
      mid += integrand(two_pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
    sum += mid;
    n *= 2;
    previous = mean;
    mean = sum / static_cast<double>(n);
    if (std::abs(mean - previous) <= quad.relative_tolerance * std::abs(mean)) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("success_dynamic: phi-integral did not converge", previous, mean);

  const double miss = (1.0 - p_hit) * noise_factor(params, g.r_bh, params.rho_bh()) * mean;
  return hit + miss;
}

double success_dynamic_lower_bound(const NetworkParams& params, double p_hit) {
  check_p_hit(p_hit);
  const LinkGeometry g = params.links();
  const double hit = hit_term_dynamic(params, g, p_hit);
  if (p_hit == 1.0) return hit;

  const double s = params.theta() * omega(g.r_ut, g.r_bh, 0.0, params.alpha()) / params.rho_bh();
  const double miss = (1.0 - p_hit) * noise_factor(params, g.r_bh, params.rho_bh()) *
                      laplace_dynamic_ut(s, p_hit, params);
  return hit + miss;
}

double success_probability(Policy policy, const NetworkParams& params, double p_hit,
                           const QuadratureSpec& quad) {
  switch (policy) {
    case Policy::static_assoc:
      return success_static(params, p_hit);
    case Policy::dynamic_assoc:
      return success_dynamic(params, p_hit, quad);
    case Policy::dynamic_bound:
      return success_dynamic_lower_bound(params, p_hit);
  }
  throw DomainError("unknown policy");
}

double resource_factor(Policy policy) { return policy == Policy::static_assoc ? 0.5 : 1.0; }

double ase(Policy policy, const NetworkParams& params, double p_hit, const QuadratureSpec& quad) {
  return resource_factor(policy) * params.lambda() * success_probability(policy, params, p_hit, quad) *
         std::log2(1.0 + params.theta());
}

double aec(double lambda, double storage, const CacheEconomics& econ) {
  if (std::isnan(lambda) || lambda < 0.0) throw DomainError("aec: lambda must be >= 0");
  return lambda * total_energy(storage, econ.catalog_size(), econ.e_hit(), econ.e_miss());
}

double energy_efficiency(Policy policy, const NetworkParams& params, const CacheEconomics& econ,
                         const QuadratureSpec& quad) {
  const double consumption = aec(params.lambda(), econ.storage_size(), econ);
  if (consumption <= 0.0) throw DomainError("energy_efficiency: area energy consumption is zero");
  const double p_hit = hit_probability(econ.storage_size(), econ.catalog_size());
  return ase(policy, params, p_hit, quad) / consumption;
}

PolicyMetrics evaluate_policy(Policy policy, const NetworkParams& params, const CacheEconomics& econ,
                              const QuadratureSpec& quad) {
  const double p_hit = hit_probability(econ.storage_size(), econ.catalog_size());
  PolicyMetrics m{};
  m.policy = policy;
  m.p_suc = success_probability(policy, params, p_hit, quad);
  m.ase = resource_factor(policy) * params.lambda() * m.p_suc * std::log2(1.0 + params.theta());
  m.aec = aec(params.lambda(), econ.storage_size(), econ);
  m.ee = m.aec > 0.0 ? m.ase / m.aec : std::numeric_limits<double>::quiet_NaN();
  return m;
}

}  // namespace cachenet
