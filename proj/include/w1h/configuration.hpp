// Finite point configurations omega = sum_i n_i delta_{x_i} on a box in R^d.

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "json.hpp"

namespace w1h {

struct Box {
  std::vector<double> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool contains(std::span<const double> x) const;
  void validate() const;

  nlohmann::json to_json() const;
  static Box from_json(const nlohmann::json& j);
};

struct Atom {
  std::vector<double> x;
  int mult = 1;
};

struct Configuration {
  std::vector<Atom> atoms;

  int total_count() const;
  bool empty() const { return atoms.empty(); }

  // sum_i n_i f(x_i)
  double integrate(const std::function<double(std::span<const double>)>& f) const;

  // canonical form: atoms sorted lexicographically, exact duplicates merged
  void normalize();

  Configuration plus_point(std::span<const double> x) const;  // omega + delta_x

  nlohmann::json to_json() const;
  static Configuration from_json(const nlohmann::json& j);
};

// lexicographic comparison of coordinate vectors
bool point_less(std::span<const double> a, std::span<const double> b);

// total-variation distance |omega - omega'|(E): total multiplicity of the
// symmetric difference
double config_tv_distance(const Configuration& a, const Configuration& b);

// d_phi: sum over atoms of phi(x) times the multiplicity difference at x
double config_weighted_distance(const Configuration& a, const Configuration& b,
                                const std::function<double(std::span<const double>)>& phi);

// D_x F(omega) = F(omega + delta_x) - F(omega)
double difference_operator(const std::function<double(const Configuration&)>& F,
                           std::span<const double> x, const Configuration& omega);

}  // namespace w1h
