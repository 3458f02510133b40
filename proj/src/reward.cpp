#include "towbandit/reward.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "towbandit/simd/math.hpp"

namespace towbandit {

RewardDistribution RewardDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bernoulli: p must lie in [0, 1], got " +
                                std::to_string(p));
  }
  RewardDistribution d;
  d.kind = RewardKind::Bernoulli;
  d.p = p;
  return d;
}

RewardDistribution RewardDistribution::gaussian(double mu, double sigma) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma < 0.0) {
    throw std::invalid_argument("gaussian: need finite mu and sigma >= 0");
  }
  RewardDistribution d;
  d.kind = RewardKind::Gaussian;
  d.mu = mu;
  d.sigma = sigma;
  return d;
}

double machine_mean(const RewardDistribution& dist) {
  return dist.kind == RewardKind::Bernoulli ? dist.p : dist.mu;
}

double machine_variance(const RewardDistribution& dist) {
  if (dist.kind == RewardKind::Bernoulli) return dist.p * (1.0 - dist.p);
  return dist.sigma * dist.sigma;
}

double normal_icdf(double u) {
  return simd::normal_icdf_pd<simd::ScalarBackend>(u);
}

BanditEnvironment::BanditEnvironment(std::vector<RewardDistribution> m,
                                     std::uint64_t seed)
    : machines(std::move(m)), master_seed(seed) {
  if (machines.size() < 2) {
    throw std::invalid_argument("environment needs at least two machines");
  }
}

std::size_t BanditEnvironment::suboptimal_index() const {
  std::size_t worst = 0;
  for (std::size_t k = 1; k < machines.size(); ++k) {
    if (machine_mean(machines[k]) <= machine_mean(machines[worst])) worst = k;
  }
  return worst;
}

double sample_reward(const BanditEnvironment& env, std::size_t machine,
                     RandomStream& rng) {
  if (machine >= env.machines.size()) {
    throw std::invalid_argument("sample_reward: machine index " +
                                std::to_string(machine) + " out of range");
  }
  const RewardDistribution& d = env.machines[machine];
  const double u = rng.next_unit();
  if (d.kind == RewardKind::Bernoulli) return u < d.p ? 1.0 : 0.0;
  const double z = normal_icdf(u);
  return std::fma(d.sigma, z, d.mu);
}

}  // namespace towbandit
