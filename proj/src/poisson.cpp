#include "w1h/poisson.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace w1h {

double poisson_weight(double lambda, int k) {
  if (lambda < 0 || k < 0) throw std::domain_error("poisson_weight: bad arguments");
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

double poisson_tail(double lambda, int k) {
  if (lambda < 0) throw std::domain_error("poisson_tail: bad arguments");
  if (k <= 0) return 1.0;
  if (lambda == 0.0) return 0.0;
  // P(X >= k) = P(Gamma(k) <= lambda), the regularized lower incomplete gamma
  return boost::math::gamma_p(static_cast<double>(k), lambda);
}

int poisson_required_cap(double lambda, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("poisson_required_cap: eps must be > 0");
  if (lambda == 0.0) return 0;
  // Chernoff: P(X > K) <= exp(-lambda h((K+1)/lambda - 1)); walk up from the
  // mean until the bound clears eps, then tighten with the exact tail.
  int k = static_cast<int>(lambda) + 1;
  while (true) {
    double x = (k + 1) / lambda - 1.0;
    double bound = std::exp(-lambda * ((1.0 + x) * std::log1p(x) - x));
    if (bound < eps) break;
    k += 1 + k / 8;
  }
  while (k > 0 && poisson_tail(lambda, k) < eps) --k;
  return k;
}

FiniteMeasure poisson_pmf(const TruncatedPoisson& spec) {
  if (spec.lambda < 0) throw std::domain_error("poisson_pmf: lambda must be >= 0");
  if (spec.cap < 0) throw std::invalid_argument("poisson_pmf: cap must be >= 0");
  const double tail_beyond = poisson_tail(spec.lambda, spec.cap + 1);
  if (tail_beyond >= spec.eps_trunc) {
    int needed = poisson_required_cap(spec.lambda, spec.eps_trunc);
    throw std::invalid_argument(
        "poisson_pmf: tail mass " + std::to_string(tail_beyond) + " beyond cap " +
        std::to_string(spec.cap) + " exceeds eps_trunc; need cap >= " + std::to_string(needed));
  }
  std::vector<double> w(static_cast<std::size_t>(spec.cap) + 1, 0.0);
  double partial = 0.0;
  for (int k = 0; k < spec.cap; ++k) {
    w[k] = poisson_weight(spec.lambda, k);
    partial += w[k];
  }
  if (spec.policy == TailPolicy::LumpAtCap) {
    w[spec.cap] = std::max(0.0, 1.0 - partial);
  } else {
    w[spec.cap] = poisson_weight(spec.lambda, spec.cap);
    double total = partial + w[spec.cap];
    for (double& x : w) x /= total;
  }
  LineStates states;
  states.points.resize(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) states.points[k] = static_cast<long long>(k);
  return FiniteMeasure(StateSpace(std::move(states)), std::move(w));
}

nlohmann::json MixedPoissonSpec::to_json() const {
  return {{"a", a}, {"sigma", {{"lambdas", lambdas}, {"weights", sigma}}}};
}

MixedPoissonSpec MixedPoissonSpec::from_json(const nlohmann::json& j) {
  MixedPoissonSpec s;
  s.a = j.at("a").get<double>();
  s.lambdas = j.at("sigma").at("lambdas").get<std::vector<double>>();
  s.sigma = j.at("sigma").at("weights").get<std::vector<double>>();
  return s;
}

FiniteMeasure mixed_poisson(const MixedPoissonSpec& spec, int cap, TailPolicy policy,
                            double eps_trunc) {
  if (!(spec.a > 0)) throw std::invalid_argument("mixed_poisson: a must be > 0");
  if (spec.lambdas.size() != spec.sigma.size() || spec.lambdas.empty())
    throw std::invalid_argument("mixed_poisson: sigma grid/weight mismatch");
  double sw = 0.0;
  for (double x : spec.sigma) {
    if (!(x >= 0)) throw std::invalid_argument("mixed_poisson: sigma weights must be >= 0");
    sw += x;
  }
  if (std::abs(sw - 1.0) > 1e-12)
    throw std::invalid_argument("mixed_poisson: sigma weights must sum to 1");
  for (double l : spec.lambdas)
    if (l < 0 || l > spec.a)
      throw std::domain_error("mixed_poisson: mixing point outside [0, a]");
  if (cap < 0) {
    cap = 0;
    for (double l : spec.lambdas) cap = std::max(cap, poisson_required_cap(l, eps_trunc));
  }
  std::vector<double> w(static_cast<std::size_t>(cap) + 1, 0.0);
  for (std::size_t j = 0; j < spec.lambdas.size(); ++j) {
    if (spec.sigma[j] == 0.0) continue;
    TruncatedPoisson comp{spec.lambdas[j], cap, policy, eps_trunc};
    FiniteMeasure pm = poisson_pmf(comp);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += spec.sigma[j] * pm.weight(k);
  }
  // mop up float dust so the constructor's sum-to-1 check holds exactly
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  LineStates states;
  states.points.resize(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) states.points[k] = static_cast<long long>(k);
  return FiniteMeasure(StateSpace(std::move(states)), std::move(w));
}

}  // namespace w1h
