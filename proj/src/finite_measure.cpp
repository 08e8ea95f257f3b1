#include "w1h/finite_measure.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace w1h {

std::size_t BoxStates::size() const {
  std::size_t n = 1;
  for (int i = 0; i < sites; ++i) n *= static_cast<std::size_t>(cap + 1);
  return n;
}

std::size_t space_size(const StateSpace& s) {
  if (const auto* l = std::get_if<LineStates>(&s)) return l->points.size();
  return std::get<BoxStates>(s).size();
}

bool same_space(const StateSpace& a, const StateSpace& b) {
  if (a.index() != b.index()) return false;
  if (const auto* la = std::get_if<LineStates>(&a))
    return la->points == std::get<LineStates>(b).points;
  const auto& ba = std::get<BoxStates>(a);
  const auto& bb = std::get<BoxStates>(b);
  return ba.sites == bb.sites && ba.cap == bb.cap;
}

void box_decode(const BoxStates& b, std::size_t index, int* out) {
  for (int i = b.sites - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % static_cast<std::size_t>(b.cap + 1));
    index /= static_cast<std::size_t>(b.cap + 1);
  }
}

std::size_t box_encode(const BoxStates& b, std::span<const int> x) {
  if (static_cast<int>(x.size()) != b.sites)
    throw std::invalid_argument("box_encode: dimension mismatch");
  std::size_t idx = 0;
  for (int i = 0; i < b.sites; ++i) {
    if (x[i] < 0 || x[i] > b.cap) throw std::out_of_range("box_encode: state outside box");
    idx = idx * static_cast<std::size_t>(b.cap + 1) + static_cast<std::size_t>(x[i]);
  }
  return idx;
}

FiniteMeasure::FiniteMeasure(StateSpace space, std::vector<double> weights)
    : space_(std::move(space)), w_(std::move(weights)) {
  if (w_.size() != space_size(space_))
    throw std::invalid_argument("FiniteMeasure: weight count must match support size");
  double sum = 0.0;
  for (double x : w_) {
    if (!(x >= 0)) throw std::invalid_argument("FiniteMeasure: weights must be >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("FiniteMeasure: weights must sum to 1 (got " +
                                std::to_string(sum) + ")");
  if (const auto* l = std::get_if<LineStates>(&space_)) {
    for (std::size_t i = 0; i < l->points.size(); ++i) {
      if (l->points[i] < 0) throw std::invalid_argument("FiniteMeasure: negative support point");
      if (i > 0 && l->points[i] <= l->points[i - 1])
        throw std::invalid_argument("FiniteMeasure: support must be strictly increasing");
    }
  }
}

const LineStates& FiniteMeasure::line() const {
  if (const auto* l = std::get_if<LineStates>(&space_)) return *l;
  throw std::invalid_argument("FiniteMeasure: not a line measure");
}

const BoxStates& FiniteMeasure::box() const {
  if (const auto* b = std::get_if<BoxStates>(&space_)) return *b;
  throw std::invalid_argument("FiniteMeasure: not a box measure");
}

double FiniteMeasure::mean() const {
  const auto& l = line();
  double m = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) m += w_[i] * static_cast<double>(l.points[i]);
  return m;
}

void FiniteMeasure::to_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("FiniteMeasure: cannot write " + path);
  out << "state,weight\n";
  out.precision(17);
  if (const auto* l = std::get_if<LineStates>(&space_)) {
    for (std::size_t i = 0; i < w_.size(); ++i) out << l->points[i] << ',' << w_[i] << '\n';
  } else {
    for (std::size_t i = 0; i < w_.size(); ++i) out << i << ',' << w_[i] << '\n';
  }
}

FiniteMeasure FiniteMeasure::line_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("FiniteMeasure: cannot read " + path);
  std::string header;
  std::getline(in, header);
  LineStates states;
  std::vector<double> w;
  std::string row;
  while (std::getline(in, row)) {
    if (row.empty()) continue;
    std::istringstream ss(row);
    long long state;
    char comma;
    double weight;
    if (!(ss >> state >> comma >> weight))
      throw std::runtime_error("FiniteMeasure: malformed CSV row '" + row + "'");
    states.points.push_back(state);
    w.push_back(weight);
  }
  return FiniteMeasure(StateSpace(std::move(states)), std::move(w));
}

nlohmann::json FiniteMeasure::to_json() const {
  nlohmann::json j;
  if (const auto* l = std::get_if<LineStates>(&space_)) {
    j["space"] = "line";
    j["points"] = l->points;
  } else {
    const auto& b = std::get<BoxStates>(space_);
    j["space"] = "box";
    j["sites"] = b.sites;
    j["cap"] = b.cap;
  }
  j["weights"] = w_;
  return j;
}

FiniteMeasure FiniteMeasure::from_json(const nlohmann::json& j) {
  std::vector<double> w = j.at("weights").get<std::vector<double>>();
  if (j.at("space") == "line") {
    LineStates l;
    l.points = j.at("points").get<std::vector<long long>>();
    return FiniteMeasure(StateSpace(std::move(l)), std::move(w));
  }
  BoxStates b;
  b.sites = j.at("sites").get<int>();
  b.cap = j.at("cap").get<int>();
  return FiniteMeasure(StateSpace(b), std::move(w));
}

double relative_entropy(const FiniteMeasure& nu, const FiniteMeasure& mu) {
  if (!same_space(nu.space(), mu.space()))
    throw std::invalid_argument("relative_entropy: measures live on different spaces");
  double h = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    double p = nu.weight(i), q = mu.weight(i);
    if (p == 0.0) continue;  // 0 log(0/q) = 0
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    h += p * std::log(p / q);
  }
  return std::max(h, 0.0);
}

double l1_distance(const FiniteMeasure& nu, const FiniteMeasure& mu) {
  if (!same_space(nu.space(), mu.space()))
    throw std::invalid_argument("l1_distance: measures live on different spaces");
  double s = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) s += std::abs(nu.weight(i) - mu.weight(i));
  return s;
}

}  // namespace w1h
