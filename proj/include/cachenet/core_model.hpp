#pragma once

// Domain parameters of the two-tier cache-aided network and the elementary
// functions shared by the analytic evaluators, the simulator and the
// optimizer.

#include <cstdint>

namespace cachenet {

/// Pathloss-integral constant pi * z^(2/alpha) * csc(2 pi / alpha) / alpha.
/// Throws DomainError for z < 0 or alpha <= 2.
double upsilon(double z, double alpha);

/// Fixed SC->UT and BH->SC link lengths (meters).
struct LinkGeometry {
  double r_ut;
  double r_bh;

  LinkGeometry(double r_ut, double r_bh);
};

/// Link lengths scaled with the SC density: beta / (2 sqrt(lambda)).
LinkGeometry link_distances(double lambda, double beta_ut, double beta_bh);

/// Physical-layer configuration. Defaults are the reference scenario
/// (lambda = 1e-2 SCs/m^2, alpha = 4, theta = 1, interference limited).
class NetworkParams {
 public:
  struct Values {
    double lambda = 1e-2;   // SCs/m^2
    double alpha = 4.0;     // pathloss exponent
    double theta = 1.0;     // SINR threshold, linear
    double sigma2 = 0.0;    // noise power, W
    double rho_sc = 0.5;    // SC transmit power, W
    double rho_bh = 1.0;    // BH transmit power, W
    double beta_ut = 0.5;
    double beta_bh = 1.0;

    bool operator==(const Values&) const = default;
  };

  NetworkParams() : NetworkParams(Values{}) {}
  explicit NetworkParams(const Values& v);

  double lambda() const { return v_.lambda; }
  double alpha() const { return v_.alpha; }
  double theta() const { return v_.theta; }
  double sigma2() const { return v_.sigma2; }
  double rho_sc() const { return v_.rho_sc; }
  double rho_bh() const { return v_.rho_bh; }
  double beta_ut() const { return v_.beta_ut; }
  double beta_bh() const { return v_.beta_bh; }
  const Values& values() const { return v_; }

  LinkGeometry links() const { return link_distances(v_.lambda, v_.beta_ut, v_.beta_bh); }

  NetworkParams with_lambda(double lambda) const;
  NetworkParams with_theta(double theta) const;

  bool operator==(const NetworkParams& o) const { return v_ == o.v_; }

 private:
  Values v_;
};

/// Catalog, storage, prices, budget and per-file energies.
class CacheEconomics {
 public:
  struct Values {
    std::uint64_t catalog_size = 10'000'000;  // files
    double storage_size = 0.0;                // files/SC
    double s_max = 5e6;                       // files/SC
    double lambda_min = 1e-4;                 // SCs/m^2
    double lambda_max = 1e-2;                 // SCs/m^2
    double price_sc = 250.0;                  // $/SC
    double price_storage = 0.005;             // $/file
    double budget = 1.0;                      // $/m^2
    double e_hit = 1.0;                       // J/file
    double e_miss = 10.0;                     // J/file

    bool operator==(const Values&) const = default;
  };

  CacheEconomics() : CacheEconomics(Values{}) {}
  /// Throws EnergyOrderError when e_miss < e_hit, DomainError otherwise.
  explicit CacheEconomics(const Values& v);

  std::uint64_t catalog_size() const { return v_.catalog_size; }
  double storage_size() const { return v_.storage_size; }
  double s_max() const { return v_.s_max; }
  double lambda_min() const { return v_.lambda_min; }
  double lambda_max() const { return v_.lambda_max; }
  double price_sc() const { return v_.price_sc; }
  double price_storage() const { return v_.price_storage; }
  double budget() const { return v_.budget; }
  double e_hit() const { return v_.e_hit; }
  double e_miss() const { return v_.e_miss; }
  const Values& values() const { return v_; }

  CacheEconomics with_storage(double s) const;
  CacheEconomics with_budget(double c) const;

  bool operator==(const CacheEconomics& o) const { return v_ == o.v_; }

 private:
  Values v_;
};

/// Uniform popularity: S / F.
double hit_probability(double storage, std::uint64_t catalog);

/// Expected energy per delivered file, P_hit E_hit + (1 - P_hit) E_miss.
double total_energy(double storage, std::uint64_t catalog, double e_hit, double e_miss);

/// Nearest whole number of files; optimizers keep S continuous.
std::uint64_t round_storage(double storage);

}  // namespace cachenet
