#pragma once

// Closed-form success probability, area spectral efficiency and energy
// efficiency of the static and dynamic UT association policies under
// Rayleigh fading and PPP-distributed small cells.

#include <string_view>

#include "cachenet/core_model.hpp"

namespace cachenet {

enum class Policy { static_assoc, dynamic_assoc, dynamic_bound };

std::string_view to_string(Policy p);
/// Accepts "static", "dynamic", "dynamic_lb". Throws DomainError otherwise.
Policy parse_policy(std::string_view name);

/// Periodic trapezoidal rule over [0, 2 pi) with node doubling.
struct QuadratureSpec {
  int initial_nodes = 64;
  double relative_tolerance = 1e-9;
  int max_doublings = 12;

  /// Throws DomainError unless nodes >= 8, tolerance in (0, 1e-3), doublings >= 1.
  void validate() const;

  bool operator==(const QuadratureSpec&) const = default;
};

struct PolicyMetrics {
  Policy policy;
  double p_suc;
  double ase;  // bps/Hz/m^2
  double aec;  // J/m^2
  double ee;   // bit/J
};

// Laplace transforms of the interference seen by the typical receiver.
// Arguments are in 1/W; all values lie in (0, 1].

/// Access link under static association: every other SC interferes.
double laplace_static_ut(double s, const NetworkParams& params);
/// Backhaul link under static association: only BHs of missing SCs interfere.
double laplace_static_sc(double s, double p_hit, const NetworkParams& params);
/// UT under dynamic association: hit SCs and miss BHs interfere.
double laplace_dynamic_ut(double s, double p_hit, const NetworkParams& params);

/// (r_ut^2 + r_bh^2 + 2 r_ut r_bh cos phi)^(alpha/2): BH->UT pathloss argument
/// when the BH sits at angle phi from the SC->UT direction's extension.
double omega(double r_ut, double r_bh, double phi, double alpha);

double success_static(const NetworkParams& params, double p_hit);

/// Throws ConvergenceError if the phi-integral does not settle within
/// quad.max_doublings refinements.
double success_dynamic(const NetworkParams& params, double p_hit, const QuadratureSpec& quad = {});

/// Replaces the phi-integral by its worst case (BH and UT on opposite sides).
double success_dynamic_lower_bound(const NetworkParams& params, double p_hit);

double success_probability(Policy policy, const NetworkParams& params, double p_hit,
                           const QuadratureSpec& quad = {});

/// Resource factor 1/2 for static association, 1 otherwise.
double resource_factor(Policy policy);

double ase(Policy policy, const NetworkParams& params, double p_hit, const QuadratureSpec& quad = {});

/// lambda * E_tot(S). Unlike NetworkParams, lambda = 0 is accepted here.
double aec(double lambda, double storage, const CacheEconomics& econ);

/// ASE / AEC at the storage size held by econ. Throws DomainError when AEC is 0.
double energy_efficiency(Policy policy, const NetworkParams& params, const CacheEconomics& econ,
                         const QuadratureSpec& quad = {});

PolicyMetrics evaluate_policy(Policy policy, const NetworkParams& params,
                              const CacheEconomics& econ, const QuadratureSpec& quad = {});

}  // namespace cachenet
