#include "cachenet/montecarlo.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "cachenet/errors.hpp"
#include "cachenet/rng.hpp"

namespace cachenet {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;

enum Stream : std::uint64_t { kTypical = 0, kAccess = 1, kBackhaul = 2, kBackhaulFading = 3 };
enum Mark : std::uint64_t { kPosition = 0, kCache = 1, kDirection = 2, kFading = 3 };

enum class FieldKind {
  access_static,   // every SC transmits to the UT
  access_dynamic,  // hit SCs transmit, miss SCs are replaced by their BH
  backhaul,        // only BHs of miss SCs transmit
};

double path_gain(double d2, double alpha) {
  if (alpha == 4.0) return 1.0 / (d2 * d2);
  return std::pow(d2, -0.5 * alpha);
}

// Squared distance from the receiver to a BH placed r_bh away from an SC at
// squared distance d2, at an angle with cosine `cos_offset` from the
// receiver->SC ray.
double bh_distance2(double d2, double cos_offset, double r_bh) {
  return d2 + r_bh * r_bh + 2.0 * std::sqrt(d2) * r_bh * cos_offset;
}

// Per-node marks as pure functions of (field key, node index): a consumer
// can skip marks it does not need without shifting any other draw.
class NodeMarks {
 public:
  NodeMarks(std::uint64_t key, double p_hit) : key_(key), p_hit_(p_hit) {}

  double position_angle(std::uint64_t k) const {
    return two_pi * CounterRng::at(key_, k, kPosition).uniform();
  }

  bool hit(std::uint64_t k) const { return CounterRng::at(key_, k, kCache).uniform() < p_hit_; }

  double fading(std::uint64_t k) const { return CounterRng::at(key_, k, kFading).exponential(); }

  // Uniformly oriented unit vector. A uniform point (x, y) in the unit disk
  // has a uniform angle t; (x^2 - y^2, 2xy) / (x^2 + y^2) points along 2t.
  void direction(std::uint64_t k, double& c, double& s) const {
    CounterRng rng = CounterRng::at(key_, k, kDirection);
    for (;;) {
      const double x = 2.0 * rng.uniform() - 1.0;
      const double y = 2.0 * rng.uniform() - 1.0;
      const double r2 = x * x + y * y;
      if (r2 > 1.0 || r2 < 1e-300) continue;
      c = (x * x - y * y) / r2;
      s = 2.0 * x * y / r2;
      return;
    }
  }

  double direction_cos(std::uint64_t k) const {
    double c, s;
    direction(k, c, s);
    return c;
  }

 private:
  std::uint64_t key_;
  double p_hit_;
};

// Contribution of one node to the receiver. Marks are passed as callables so
// they are only evaluated when the node's role needs them.
template <typename Hit, typename Fading, typename Cos>
double contribution(FieldKind kind, double d2, Hit&& hit, Fading&& fading, Cos&& cos_offset,
                    const NetworkParams& p, double r_bh) {
  const bool sc_transmits = kind == FieldKind::access_static || hit();
  if (sc_transmits) {
    if (kind == FieldKind::backhaul) return 0.0;
    return p.rho_sc() * fading() * path_gain(d2, p.alpha());
  }
  return p.rho_bh() * fading() * path_gain(bh_distance2(d2, cos_offset(), r_bh), p.alpha());
}

// Visits nodes in order of increasing distance and stops at the first
// partial sum that already defeats the signal. Contributions are
// non-negative, so that prefix decides the outcome exactly.
template <typename VisitNode>
bool survives(double signal, const NetworkParams& p, VisitNode&& visit) {
  const double theta = p.theta();
  if (!(signal > theta * p.sigma2())) return false;
  double interference = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    double c;
    if (!visit(k, c)) return true;
    interference += c;
    if (!(signal > theta * (interference + p.sigma2()))) return false;
  }
}

// Radially ordered PPP on a disk: arrival epochs of a unit-rate Poisson
// process mapped through r^2 = Gamma / (lambda pi).
class Arrivals {
 public:
  Arrivals(std::uint64_t key, double lambda, double radius)
      : rng_(CounterRng::at(key, ~std::uint64_t{0} >> 4, 7)),
        lambda_pi_(lambda * pi),
        mean_count_(lambda * pi * radius * radius) {}

  bool next(double& d2) {
    gamma_ += rng_.exponential();
    if (gamma_ > mean_count_) return false;
    d2 = gamma_ / lambda_pi_;
    return true;
  }

 private:
  CounterRng rng_;
  double lambda_pi_;
  double mean_count_;
  double gamma_ = 0.0;
};

struct TypicalLink {
  bool hit;
  double phi;
  double fading_sc_ut;
  double fading_bh_sc;
  double fading_bh_ut;
};

// forced_hit: -1 draws the cache state, 0/1 imposes it (stratified mode).
// The uniform is consumed either way so the remaining draws line up.
TypicalLink draw_typical(std::uint64_t seed, std::uint64_t trial, double p_hit, int forced_hit) {
  CounterRng rng(seed, trial, kTypical);
  TypicalLink t{};
  const double u = rng.uniform();
  t.hit = forced_hit < 0 ? u < p_hit : forced_hit == 1;
  t.phi = two_pi * rng.uniform();
  t.fading_sc_ut = rng.exponential();
  t.fading_bh_sc = rng.exponential();
  t.fading_bh_ut = rng.exponential();
  return t;
}

struct Strata {
  std::uint64_t hit_trials;  // first hit_trials indices are forced hits
  bool enabled;

  int forced(std::uint64_t trial) const {
    if (!enabled) return -1;
    return trial < hit_trials ? 1 : 0;
  }
};

Strata make_strata(const SimulationSpec& spec, double p_hit) {
  if (!spec.stratified) return {0, false};
  auto hits = static_cast<std::uint64_t>(std::llround(p_hit * static_cast<double>(spec.trials)));
  if (p_hit > 0.0 && hits == 0) hits = 1;
  if (p_hit < 1.0 && hits == spec.trials) hits = spec.trials - 1;
  return {hits, true};
}

double serving_signal_ut(const NetworkParams& p, const LinkGeometry& g, const TypicalLink& t) {
  return p.rho_sc() * t.fading_sc_ut * path_gain(g.r_ut * g.r_ut, p.alpha());
}

double serving_signal_bh_sc(const NetworkParams& p, const LinkGeometry& g, const TypicalLink& t) {
  return p.rho_bh() * t.fading_bh_sc * path_gain(g.r_bh * g.r_bh, p.alpha());
}

double serving_signal_bh_ut(const NetworkParams& p, const LinkGeometry& g, const TypicalLink& t) {
  return p.rho_bh() * t.fading_bh_ut * path_gain(bh_distance2(g.r_ut * g.r_ut, std::cos(t.phi), g.r_bh), p.alpha());
}

void check_inputs(double p_hit, const SimulationSpec& spec) {
  spec.validate();
  if (std::isnan(p_hit) || p_hit < 0.0 || p_hit > 1.0) throw DomainError("p_hit must lie in [0, 1]");
}

struct Tally {
  std::uint64_t hit_trials = 0;
  std::uint64_t hit_successes = 0;
  std::uint64_t miss_trials = 0;
  std::uint64_t miss_successes = 0;
};

SuccessEstimate finish(const Tally& t, double p_hit, bool stratified) {
  SuccessEstimate e{};
  e.trials = t.hit_trials + t.miss_trials;
  e.successes = t.hit_successes + t.miss_successes;
  if (!stratified) {
    const double n = static_cast<double>(e.trials);
    e.p_hat = static_cast<double>(e.successes) / n;
    e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / n);
  } else {
    double mean = 0.0;
    double var = 0.0;
    auto stratum = [&](std::uint64_t n, std::uint64_t s, double w) {
      if (n == 0 || w == 0.0) return;
      const double q = static_cast<double>(s) / static_cast<double>(n);
      mean += w * q;
      var += w * w * q * (1.0 - q) / static_cast<double>(n);
    };
    stratum(t.hit_trials, t.hit_successes, p_hit);
    stratum(t.miss_trials, t.miss_successes, 1.0 - p_hit);
    e.p_hat = mean;
    e.std_error = std::sqrt(var);
  }
  e.ci95_low = e.p_hat - 1.96 * e.std_error;
  e.ci95_high = e.p_hat + 1.96 * e.std_error;
  return e;
}

InterfererField materialize(std::uint64_t key, const NetworkParams& params, double radius, double p_hit) {
  InterfererField field;
  field.window_radius = radius;
  Arrivals arrivals(key, params.lambda(), radius);
  const NodeMarks marks(key, p_hit);
  double d2;
  for (std::uint64_t k = 0; arrivals.next(d2); ++k) {
    Interferer n{};
    n.distance2 = d2;
    n.position_angle = marks.position_angle(k);
    n.hit = marks.hit(k);
    marks.direction(k, n.bh_offset_cos, n.bh_offset_sin);
    n.fading = marks.fading(k);
    field.nodes.push_back(n);
  }
  return field;
}

// Re-expresses the access field around the typical SC, which sits at
// (r_ut, 0) in UT coordinates, and gives every node a fresh fading gain.
InterfererField translate_to_sc(const InterfererField& access, double r_ut, std::uint64_t key) {
  InterfererField out;
  out.window_radius = access.window_radius;
  out.nodes.reserve(access.nodes.size());
  for (std::uint64_t k = 0; k < access.nodes.size(); ++k) {
    const Interferer& n = access.nodes[k];
    const double qx = n.x() - r_ut;
    const double qy = n.y();
    Interferer m = n;
    m.distance2 = qx * qx + qy * qy;
    m.position_angle = std::atan2(qy, qx);
    if (m.position_angle < 0.0) m.position_angle += two_pi;
    const double offset = n.bh_angle() - m.position_angle;
    m.bh_offset_cos = std::cos(offset);
    m.bh_offset_sin = std::sin(offset);
    m.fading = CounterRng::at(key, k, kFading).exponential();
    out.nodes.push_back(m);
  }
  return out;
}

bool field_survives(double signal, FieldKind kind, const InterfererField& f, const NetworkParams& p,
                    double r_bh) {
  return survives(signal, p, [&](std::uint64_t k, double& c) {
    if (k == f.nodes.size()) return false;
    const Interferer& n = f.nodes[k];
    c = contribution(
        kind, n.distance2, [&] { return n.hit; }, [&] { return n.fading; },
        [&] { return n.bh_offset_cos; }, p, r_bh);
    return true;
  });
}

// Streams the field straight from the generator without storing it.
bool streamed_field_survives(double signal, FieldKind kind, std::uint64_t key, const NetworkParams& p,
                             double radius, double p_hit, double r_bh) {
  Arrivals arrivals(key, p.lambda(), radius);
  const NodeMarks marks(key, p_hit);
  return survives(signal, p, [&](std::uint64_t k, double& c) {
    double d2;
    if (!arrivals.next(d2)) return false;
    c = contribution(
        kind, d2, [&] { return marks.hit(k); }, [&] { return marks.fading(k); },
        [&] { return marks.direction_cos(k); }, p, r_bh);
    return true;
  });
}

}  // namespace

void SimulationSpec::validate() const {
  if (trials < 1) throw DomainError("simulation: trials must be >= 1");
  if (!(truncation_fraction > 0.0 && truncation_fraction < 1e-2))
    throw DomainError("simulation: truncation_fraction must lie in (0, 1e-2)");
  if (policy == Policy::dynamic_bound)
    throw DomainError("simulation: policy must be static or dynamic");
  if (stratified && trials < 2) throw DomainError("simulation: stratified mode needs >= 2 trials");
}

double Interferer::distance() const { return std::sqrt(distance2); }
double Interferer::x() const { return distance() * std::cos(position_angle); }
double Interferer::y() const { return distance() * std::sin(position_angle); }
double Interferer::bh_offset_angle() const { return std::atan2(bh_offset_sin, bh_offset_cos); }

double Interferer::bh_angle() const {
  double a = std::fmod(position_angle + bh_offset_angle(), two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

double window_radius(double alpha, double reference_scale, double truncation_fraction) {
  if (!(alpha > 2.0)) throw DomainError("window_radius: alpha must be > 2");
  if (!(reference_scale > 0.0)) throw DomainError("window_radius: reference scale must be > 0");
  if (!(truncation_fraction > 0.0 && truncation_fraction < 1.0))
    throw DomainError("window_radius: truncation_fraction must lie in (0, 1)");
  // Tail beyond R scales as R^(2 - alpha).
  return reference_scale * std::pow(truncation_fraction, -1.0 / (alpha - 2.0));
}

double window_radius(const NetworkParams& params, double truncation_fraction) {
  return window_radius(params.alpha(), params.links().r_ut, truncation_fraction);
}

NetworkRealization sample_realization(const NetworkParams& params, double p_hit,
                                      const SimulationSpec& spec, std::uint64_t trial_index) {
  check_inputs(p_hit, spec);
  const double radius = window_radius(params, spec.truncation_fraction);
  const TypicalLink t =
      draw_typical(spec.seed, trial_index, p_hit, make_strata(spec, p_hit).forced(trial_index));

  NetworkRealization r{};
  r.policy = spec.policy;
  r.typical_hit = t.hit;
  r.typical_phi = t.phi;
  r.fading_sc_ut = t.fading_sc_ut;
  r.fading_bh_sc = t.fading_bh_sc;
  r.fading_bh_ut = t.fading_bh_ut;

  r.access = materialize(CounterRng::key(spec.seed, trial_index, kAccess), params, radius, p_hit);
  if (spec.policy == Policy::static_assoc) {
    if (spec.correlated_hops)
      r.backhaul = translate_to_sc(r.access, params.links().r_ut,
                                   CounterRng::key(spec.seed, trial_index, kBackhaulFading));
    else
      r.backhaul = materialize(CounterRng::key(spec.seed, trial_index, kBackhaul), params, radius, p_hit);
  }
  return r;
}

bool evaluate_trial(const NetworkRealization& r, const NetworkParams& params) {
  const LinkGeometry g = params.links();
  const TypicalLink t{r.typical_hit, r.typical_phi, r.fading_sc_ut, r.fading_bh_sc, r.fading_bh_ut};

  if (r.policy == Policy::static_assoc) {
    if (!field_survives(serving_signal_ut(params, g, t), FieldKind::access_static, r.access, params, g.r_bh))
      return false;
    if (t.hit) return true;
    return field_survives(serving_signal_bh_sc(params, g, t), FieldKind::backhaul, r.backhaul, params, g.r_bh);
  }
  const double signal = t.hit ? serving_signal_ut(params, g, t) : serving_signal_bh_ut(params, g, t);
  return field_survives(signal, FieldKind::access_dynamic, r.access, params, g.r_bh);
}

SuccessEstimate estimate_success(const NetworkParams& params, double p_hit, const SimulationSpec& spec) {
  check_inputs(p_hit, spec);
  const LinkGeometry g = params.links();
  const double radius = window_radius(params, spec.truncation_fraction);
  const Strata strata = make_strata(spec, p_hit);
  const auto n = static_cast<std::int64_t>(spec.trials);
  const bool is_static = spec.policy == Policy::static_assoc;
  const std::uint64_t seed = spec.seed;

  std::uint64_t hit_trials = 0, hit_successes = 0, miss_trials = 0, miss_successes = 0;

#pragma omp parallel for schedule(dynamic, 256) \
    reduction(+ : hit_trials, hit_successes, miss_trials, miss_successes)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto trial = static_cast<std::uint64_t>(i);
    bool ok;
    bool hit;
    if (spec.correlated_hops && is_static) {
      const NetworkRealization r = sample_realization(params, p_hit, spec, trial);
      hit = r.typical_hit;
      ok = evaluate_trial(r, params);
    } else {
      const TypicalLink t = draw_typical(seed, trial, p_hit, strata.forced(trial));
      hit = t.hit;
      const std::uint64_t access_key = CounterRng::key(seed, trial, kAccess);
      if (is_static) {
        ok = streamed_field_survives(serving_signal_ut(params, g, t), FieldKind::access_static, access_key,
                                     params, radius, p_hit, g.r_bh);
        if (ok && !t.hit)
          ok = streamed_field_survives(serving_signal_bh_sc(params, g, t), FieldKind::backhaul,
                                       CounterRng::key(seed, trial, kBackhaul), params, radius, p_hit,
                                       g.r_bh);
      } else {
        const double signal = t.hit ? serving_signal_ut(params, g, t) : serving_signal_bh_ut(params, g, t);
        ok = streamed_field_survives(signal, FieldKind::access_dynamic, access_key, params, radius, p_hit,
                                     g.r_bh);
      }
    }
    if (hit) {
      ++hit_trials;
      hit_successes += ok ? 1 : 0;
    } else {
      ++miss_trials;
      miss_successes += ok ? 1 : 0;
    }
  }

  return finish({hit_trials, hit_successes, miss_trials, miss_successes}, p_hit, spec.stratified);
}

SuccessEstimate estimate_success_reference(const NetworkParams& params, double p_hit,
                                           const SimulationSpec& spec) {
  check_inputs(p_hit, spec);
  Tally tally;
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    const NetworkRealization r = sample_realization(params, p_hit, spec, trial);
    const bool ok = evaluate_trial(r, params);
    if (r.typical_hit) {
      ++tally.hit_trials;
      tally.hit_successes += ok ? 1 : 0;
    } else {
      ++tally.miss_trials;
      tally.miss_successes += ok ? 1 : 0;
    }
  }
  return finish(tally, p_hit, spec.stratified);
}

void write_interferers_csv(std::ostream& os, const InterfererField& field) {
  os << "x_m,y_m,hit_flag,bh_angle_rad\n";
  char buf[40];
  auto put = [&](double v) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    os.write(buf, end - buf);
  };
  for (const Interferer& n : field.nodes) {
    put(n.x());
    os << ',';
    put(n.y());
    os << ',' << (n.hit ? '1' : '0') << ',';
    put(n.bh_angle());
    os << '\n';
  }
}

}  // namespace cachenet
