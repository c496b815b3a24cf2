#pragma once

// Brute-force simulator of the marked PPP. Each trial places the typical
// UT at the origin, draws the other SCs as a PPP in a disk large enough that
// the discarded interference is negligible, attaches cache and BH marks and
// Rayleigh fading, and checks the SINR conditions directly.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cachenet/analytic.hpp"
#include "cachenet/core_model.hpp"

namespace cachenet {

struct SimulationSpec {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  /// Bound on the expected interference mass discarded by the window.
  double truncation_fraction = 1e-4;
  Policy policy = Policy::dynamic_assoc;
  /// Static policy only: reuse the access-hop interferer positions (with
  /// fresh fading) for the backhaul hop instead of an independent draw.
  bool correlated_hops = false;
  /// Force the typical cache state per trial (first round(p_hit * trials)
  /// trials hit) and combine the two conditional estimates.
  bool stratified = false;

  void validate() const;
};

/// One interfering SC together with its marks, in the coordinates of the
/// receiver of its field (receiver at the origin).
struct Interferer {
  double distance2;        // squared SC-to-receiver distance, m^2
  double position_angle;   // rad
  // BH direction relative to the receiver->SC ray, as a unit vector.
  double bh_offset_cos;
  double bh_offset_sin;
  bool hit;
  double fading;  // gain of this node's active link to the receiver

  double distance() const;
  double x() const;
  double y() const;
  double bh_offset_angle() const;
  /// Absolute direction SC->BH, wrapped to [0, 2 pi).
  double bh_angle() const;
};

struct InterfererField {
  double window_radius = 0.0;
  std::vector<Interferer> nodes;
};

struct NetworkRealization {
  Policy policy;
  bool typical_hit;
  double typical_phi;   // BH angle seen from the serving SC (dynamic miss)
  double fading_sc_ut;  // serving SC -> typical UT
  double fading_bh_sc;  // serving BH -> typical SC
  double fading_bh_ut;  // serving BH -> typical UT
  InterfererField access;    // receiver: typical UT
  InterfererField backhaul;  // receiver: typical SC; empty under dynamic association
};

struct SuccessEstimate {
  double p_hat;
  double std_error;
  std::uint64_t trials;
  std::uint64_t successes;
  double ci95_low;
  double ci95_high;
};

/// Smallest radius whose tail interference is at most `truncation_fraction`
/// of the tail beyond `reference_scale`: reference_scale * f^(-1/(alpha-2)).
double window_radius(double alpha, double reference_scale, double truncation_fraction);
/// Same, with the reference scale set to the SC->UT distance.
double window_radius(const NetworkParams& params, double truncation_fraction);

NetworkRealization sample_realization(const NetworkParams& params, double p_hit,
                                      const SimulationSpec& spec, std::uint64_t trial_index);

/// Whether the typical UT receives its file in this realization. The
/// realization already carries the typical cache state.
bool evaluate_trial(const NetworkRealization& realization, const NetworkParams& params);

/// OpenMP kernel. Identical output for any thread count.
SuccessEstimate estimate_success(const NetworkParams& params, double p_hit, const SimulationSpec& spec);

/// Serial reference: materializes every realization and evaluates it.
/// Returns exactly what estimate_success returns for the same inputs.
SuccessEstimate estimate_success_reference(const NetworkParams& params, double p_hit,
                                           const SimulationSpec& spec);

/// Columns: x_m,y_m,hit_flag,bh_angle_rad (one row per interferer).
void write_interferers_csv(std::ostream& os, const InterfererField& field);

}  // namespace cachenet
