#include "cachenet/core_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cachenet/errors.hpp"

namespace cachenet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

double upsilon(double z, double alpha) {
  require(std::isfinite(alpha) && alpha > 2.0, "upsilon: alpha must be > 2");
  require(!std::isnan(z) && z >= 0.0, "upsilon: z must be >= 0");
  if (z == 0.0) return 0.0;
  constexpr double pi = std::numbers::pi;
  return pi * std::pow(z, 2.0 / alpha) / (std::sin(2.0 * pi / alpha) * alpha);
}

LinkGeometry::LinkGeometry(double r_ut, double r_bh) : r_ut(r_ut), r_bh(r_bh) {
  require(finite_positive(r_ut), "link geometry: r_ut must be > 0");
  require(std::isfinite(r_bh) && r_bh > r_ut, "link geometry: r_bh must exceed r_ut");
}

LinkGeometry link_distances(double lambda, double beta_ut, double beta_bh) {
  require(finite_positive(lambda), "link_distances: lambda must be > 0");
  require(finite_positive(beta_ut), "link_distances: beta_ut must be > 0");
  require(std::isfinite(beta_bh) && beta_bh > beta_ut,
          "link_distances: beta_bh must exceed beta_ut");
  const double half_spacing = 2.0 * std::sqrt(lambda);
  return LinkGeometry(beta_ut / half_spacing, beta_bh / half_spacing);
}

NetworkParams::NetworkParams(const Values& v) : v_(v) {
  require(finite_positive(v.lambda), "lambda must be > 0");
  require(std::isfinite(v.alpha) && v.alpha > 2.0, "alpha must be > 2");
  require(finite_positive(v.theta), "theta must be > 0");
  require(std::isfinite(v.sigma2) && v.sigma2 >= 0.0, "sigma2 must be >= 0");
  require(finite_positive(v.rho_sc), "rho_sc must be > 0");
  require(finite_positive(v.rho_bh), "rho_bh must be > 0");
  require(finite_positive(v.beta_ut), "beta_ut must be > 0");
  require(std::isfinite(v.beta_bh) && v.beta_bh > v.beta_ut, "beta_bh must exceed beta_ut");
}

NetworkParams NetworkParams::with_lambda(double lambda) const {
  Values v = v_;
  v.lambda = lambda;
  return NetworkParams(v);
}

NetworkParams NetworkParams::with_theta(double theta) const {
  Values v = v_;
  v.theta = theta;
  return NetworkParams(v);
}

CacheEconomics::CacheEconomics(const Values& v) : v_(v) {
  const auto F = static_cast<double>(v.catalog_size);
  require(v.catalog_size >= 1, "catalog_size must be >= 1");
  require(std::isfinite(v.s_max) && v.s_max >= 0.0 && v.s_max <= F,
          "s_max must lie in [0, catalog_size]");
  require(std::isfinite(v.storage_size) && v.storage_size >= 0.0 && v.storage_size <= v.s_max,
          "storage_size must lie in [0, s_max]");
  require(finite_positive(v.lambda_min), "lambda_min must be > 0");
  require(std::isfinite(v.lambda_max) && v.lambda_max >= v.lambda_min,
          "lambda_max must be >= lambda_min");
  require(finite_positive(v.price_sc), "price_sc must be > 0");
  require(finite_positive(v.price_storage), "price_storage must be > 0");
  require(finite_positive(v.budget), "budget must be > 0");
  require(std::isfinite(v.e_hit) && v.e_hit >= 0.0, "e_hit must be >= 0");
  require(std::isfinite(v.e_miss), "e_miss must be finite");
  if (v.e_miss < v.e_hit) throw EnergyOrderError("e_miss must be >= e_hit");
}

CacheEconomics CacheEconomics::with_storage(double s) const {
  Values v = v_;
  v.storage_size = s;
  return CacheEconomics(v);
}

CacheEconomics CacheEconomics::with_budget(double c) const {
  Values v = v_;
  v.budget = c;
  return CacheEconomics(v);
}

double hit_probability(double storage, std::uint64_t catalog) {
  require(catalog >= 1, "hit_probability: catalog must hold at least one file");
  const auto F = static_cast<double>(catalog);
  require(!std::isnan(storage) && storage >= 0.0 && storage <= F,
          "hit_probability: storage must lie in [0, catalog]");
  return storage / F;
}

double total_energy(double storage, std::uint64_t catalog, double e_hit, double e_miss) {
  const double p = hit_probability(storage, catalog);
  require(e_hit >= 0.0 && e_miss >= 0.0, "total_energy: energies must be >= 0");
  if (e_miss < e_hit) throw EnergyOrderError("total_energy: e_miss must be >= e_hit");
  return p * e_hit + (1.0 - p) * e_miss;
}

std::uint64_t round_storage(double storage) {
  require(std::isfinite(storage) && storage >= 0.0, "round_storage: storage must be >= 0");
  return static_cast<std::uint64_t>(std::llround(storage));
}

}  // namespace cachenet
