// Deviation functions: convex, non-decreasing, vanishing at 0. They
// calibrate transportation inequalities alpha(W1) <= H and come in three
// flavours: the Poissonian family h_c, quadratics 2r^2/a^2, and tabulated
// piecewise-linear functions (used for mixture combinations).

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace w1h {

// h(r) = (1+r)log(1+r) - r, the Poissonian deviation function.
double poisson_h(double r);
// h*(lambda) = e^lambda - lambda - 1.
double poisson_h_conj(double lambda);
// h_c(r) = c h(r/c).
double poisson_h_scaled(double c, double r);

class DeviationFunction {
 public:
  enum class Kind { PoissonH, Quadratic, Tabulated };

  static DeviationFunction poisson_h(double c);
  static DeviationFunction quadratic(double a);
  // grid_r strictly increasing from 0, grid_v convex non-decreasing with
  // grid_v[0] == 0; linear interpolation in between.
  static DeviationFunction tabulated(std::vector<double> grid_r,
                                     std::vector<double> grid_v);

  double operator()(double r) const;  // alpha(r), r >= 0
  // Semi-Legendre transform alpha*(lambda) = sup_{r>=0} (lambda r - alpha(r)).
  double conjugate(double lambda) const;

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  const std::vector<double>& grid_r() const { return grid_r_; }
  const std::vector<double>& grid_v() const { return grid_v_; }

  nlohmann::json to_json() const;
  static DeviationFunction from_json(const nlohmann::json& j);

 private:
  DeviationFunction(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_ = 0;                 // c for PoissonH, a for Quadratic
  std::vector<double> grid_r_, grid_v_;

  friend double mixture_sup(const DeviationFunction&, const DeviationFunction&,
                            double, double);
};

// sup_{b>=0} { b r - alpha*(b) - beta*(b M) }, evaluated at a single r by
// ternary search on the concave objective.
double mixture_sup(const DeviationFunction& alpha, const DeviationFunction& beta,
                   double M, double r);

struct MixtureGrid {
  double r_max = 10.0;
  std::size_t points = 1024;         // log-spaced on (0, r_max], plus 0
};

// Proposition-style combination for mixed measures: returns the tabulated
// deviation function r -> sup_b { b r - alpha*(b) - beta*(b M) }.
DeviationFunction combine_mixture(const DeviationFunction& alpha,
                                  const DeviationFunction& beta, double M,
                                  const MixtureGrid& grid = {});

}  // namespace w1h
