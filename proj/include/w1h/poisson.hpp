// Truncated Poisson laws and mixed Poisson measures on ℕ.

#pragma once

#include <vector>

#include "w1h/finite_measure.hpp"

namespace w1h {

enum class TailPolicy {
  LumpAtCap,    // all tail mass collapses onto the cap state
  Renormalize,  // weights 0..cap rescaled to sum to 1
};

struct TruncatedPoisson {
  double lambda = 0;
  int cap = 0;
  TailPolicy policy = TailPolicy::LumpAtCap;
  double eps_trunc = 1e-12;  // required bound on P(X > cap)
};

// pmf value e^-lambda lambda^k / k!
double poisson_weight(double lambda, int k);
// upper tail P(X >= k)
double poisson_tail(double lambda, int k);
// smallest cap K with P(X > K) < eps (Chernoff bracket refined by direct
// tail evaluation)
int poisson_required_cap(double lambda, double eps);

// Support {0..cap}; refuses (with the required cap in the message) when the
// truncated tail exceeds spec.eps_trunc. P(0) is the Dirac mass at 0.
FiniteMeasure poisson_pmf(const TruncatedPoisson& spec);

struct MixedPoissonSpec {
  double a = 0;                  // mixing parameters live in [0, a]
  std::vector<double> lambdas;   // support of the mixing law sigma
  std::vector<double> sigma;     // weights of sigma, sum 1

  nlohmann::json to_json() const;
  static MixedPoissonSpec from_json(const nlohmann::json& j);
};

// The finite mixture sum_j sigma_j P(lambda_j) with a common cap. cap < 0
// selects the smallest cap valid for every component at eps_trunc.
FiniteMeasure mixed_poisson(const MixedPoissonSpec& spec, int cap = -1,
                            TailPolicy policy = TailPolicy::LumpAtCap,
                            double eps_trunc = 1e-12);

}  // namespace w1h
