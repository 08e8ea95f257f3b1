// Finite-support probability measures: the common currency for all exact
// computations. Supports live either on a sparse list of integers (ℕ) or on
// a full box {0..K}^N enumerated in row-major order.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace w1h {

struct LineStates {
  std::vector<long long> points;  // strictly increasing, >= 0
};

struct BoxStates {
  int sites = 0;  // N
  int cap = 0;    // K; states are {0..K}^N
  std::size_t size() const;
};

using StateSpace = std::variant<LineStates, BoxStates>;

std::size_t space_size(const StateSpace& s);
bool same_space(const StateSpace& a, const StateSpace& b);

// row-major: x[0] is the slowest index
void box_decode(const BoxStates& b, std::size_t index, int* out);
std::size_t box_encode(const BoxStates& b, std::span<const int> x);

class FiniteMeasure {
 public:
  FiniteMeasure(StateSpace space, std::vector<double> weights);

  const StateSpace& space() const { return space_; }
  const std::vector<double>& weights() const { return w_; }
  std::size_t size() const { return w_.size(); }
  double weight(std::size_t i) const { return w_[i]; }

  const LineStates& line() const;  // throws if not a line measure
  const BoxStates& box() const;    // throws if not a box measure

  double mean() const;  // line measures only

  // (state, weight) rows; line measures write the point, box measures the
  // row-major index
  void to_csv(const std::string& path) const;
  static FiniteMeasure line_from_csv(const std::string& path);

  nlohmann::json to_json() const;
  static FiniteMeasure from_json(const nlohmann::json& j);

 private:
  StateSpace space_;
  std::vector<double> w_;
};

// Kullback-Leibler divergence; +inf when nu charges a mu-null state.
// Requires identical state spaces.
double relative_entropy(const FiniteMeasure& nu, const FiniteMeasure& mu);

// total variation distance between weight vectors on the same space,
// as measures: sum |nu - mu| (twice the probabilists' TV)
double l1_distance(const FiniteMeasure& nu, const FiniteMeasure& mu);

}  // namespace w1h
