#include "w1h/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace w1h {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double poisson_h(double r) {
  if (r < 0) throw std::domain_error("poisson_h: r must be >= 0");
  // (1+r)log(1+r) - r; log1p keeps small r accurate
  return (1.0 + r) * std::log1p(r) - r;
}

double poisson_h_conj(double lambda) {
  if (lambda < 0) throw std::domain_error("poisson_h_conj: lambda must be >= 0");
  return std::expm1(lambda) - lambda;
}

double poisson_h_scaled(double c, double r) {
  if (c <= 0) throw std::domain_error("poisson_h_scaled: c must be > 0");
  return c * poisson_h(r / c);
}

DeviationFunction DeviationFunction::poisson_h(double c) {
  if (!(c > 0)) throw std::invalid_argument("DeviationFunction: PoissonH needs c > 0");
  return DeviationFunction(Kind::PoissonH, c);
}

DeviationFunction DeviationFunction::quadratic(double a) {
  if (!(a > 0)) throw std::invalid_argument("DeviationFunction: Quadratic needs a > 0");
  return DeviationFunction(Kind::Quadratic, a);
}

DeviationFunction DeviationFunction::tabulated(std::vector<double> grid_r,
                                               std::vector<double> grid_v) {
  if (grid_r.size() != grid_v.size() || grid_r.size() < 2)
    throw std::invalid_argument("DeviationFunction: tabulated grid needs >= 2 aligned points");
  if (grid_r.front() != 0.0 || grid_v.front() != 0.0)
    throw std::invalid_argument("DeviationFunction: tabulated grid must start at (0, 0)");
  double prev_slope = -kInf;
  for (std::size_t i = 1; i < grid_r.size(); ++i) {
    if (!(grid_r[i] > grid_r[i - 1]))
      throw std::invalid_argument("DeviationFunction: grid_r must be strictly increasing");
    if (grid_v[i] < grid_v[i - 1] - 1e-12)
      throw std::invalid_argument("DeviationFunction: tabulated values must be non-decreasing");
    double slope = (grid_v[i] - grid_v[i - 1]) / (grid_r[i] - grid_r[i - 1]);
    if (slope < prev_slope - 1e-9)
      throw std::invalid_argument("DeviationFunction: tabulated values must be convex");
    prev_slope = std::max(prev_slope, slope);
  }
  DeviationFunction f(Kind::Tabulated, 0.0);
  f.grid_r_ = std::move(grid_r);
  f.grid_v_ = std::move(grid_v);
  return f;
}

double DeviationFunction::operator()(double r) const {
  if (r < 0) throw std::domain_error("DeviationFunction: r must be >= 0");
  switch (kind_) {
    case Kind::PoissonH:
      return poisson_h_scaled(param_, r);
    case Kind::Quadratic:
      return 2.0 * r * r / (param_ * param_);
    case Kind::Tabulated: {
      if (r >= grid_r_.back()) {
        // continue with the final slope beyond the grid
        std::size_t n = grid_r_.size();
        double slope = (grid_v_[n - 1] - grid_v_[n - 2]) / (grid_r_[n - 1] - grid_r_[n - 2]);
        return grid_v_.back() + slope * (r - grid_r_.back());
      }
      auto it = std::upper_bound(grid_r_.begin(), grid_r_.end(), r);
      std::size_t i = static_cast<std::size_t>(it - grid_r_.begin());
      if (i == 0) return grid_v_.front();
      double t = (r - grid_r_[i - 1]) / (grid_r_[i] - grid_r_[i - 1]);
      return grid_v_[i - 1] + t * (grid_v_[i] - grid_v_[i - 1]);
    }
  }
  return 0;
}

double DeviationFunction::conjugate(double lambda) const {
  if (lambda < 0) throw std::domain_error("DeviationFunction: lambda must be >= 0");
  switch (kind_) {
    case Kind::PoissonH:
      return param_ * poisson_h_conj(lambda);
    case Kind::Quadratic:
      // sup_r (lambda r - 2 r^2/a^2) = a^2 lambda^2 / 8
      return param_ * param_ * lambda * lambda / 8.0;
    case Kind::Tabulated: {
      // lambda r - alpha(r) is piecewise linear; the max sits on a vertex.
      std::size_t n = grid_r_.size();
      double best = 0.0;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double v = lambda * grid_r_[i] - grid_v_[i];
        if (v > best) {
          best = v;
          arg = i;
        }
      }
      double last_slope = (grid_v_[n - 1] - grid_v_[n - 2]) / (grid_r_[n - 1] - grid_r_[n - 2]);
      if (arg == n - 1 && lambda > last_slope)
        throw std::domain_error("DeviationFunction: conjugate exceeds grid");
      return best;
    }
  }
  return 0;
}

nlohmann::json DeviationFunction::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::PoissonH:
      j["kind"] = "poisson_h";
      j["params"] = {{"c", param_}};
      break;
    case Kind::Quadratic:
      j["kind"] = "quadratic";
      j["params"] = {{"a", param_}};
      break;
    case Kind::Tabulated: {
      j["kind"] = "tabulated";
      auto grid = nlohmann::json::array();
      for (std::size_t i = 0; i < grid_r_.size(); ++i)
        grid.push_back({grid_r_[i], grid_v_[i]});
      j["grid"] = std::move(grid);
      break;
    }
  }
  return j;
}

DeviationFunction DeviationFunction::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "poisson_h") return poisson_h(j.at("params").at("c").get<double>());
  if (kind == "quadratic") return quadratic(j.at("params").at("a").get<double>());
  if (kind == "tabulated") {
    std::vector<double> r, v;
    for (const auto& p : j.at("grid")) {
      r.push_back(p.at(0).get<double>());
      v.push_back(p.at(1).get<double>());
    }
    return tabulated(std::move(r), std::move(v));
  }
  throw std::invalid_argument("DeviationFunction: unknown kind '" + kind + "'");
}

namespace {

// conjugate that reports +inf instead of throwing; used while growing the
// search bracket for the mixture sup
double conjugate_or_inf(const DeviationFunction& f, double lambda) {
  try {
    return f.conjugate(lambda);
  } catch (const std::domain_error&) {
    return kInf;
  }
}

}  // namespace

double mixture_sup(const DeviationFunction& alpha, const DeviationFunction& beta,
                   double M, double r) {
  if (!(M > 0)) throw std::invalid_argument("mixture_sup: M must be > 0");
  if (r < 0) throw std::domain_error("mixture_sup: r must be >= 0");
  if (r == 0) return 0.0;
  auto objective = [&](double b) -> double {
    double ca = conjugate_or_inf(alpha, b);
    double cb = conjugate_or_inf(beta, b * M);
    if (ca == kInf || cb == kInf) return -kInf;
    return b * r - ca - cb;
  };
  // Grow the bracket until the objective starts decreasing. Conjugates of
  // valid deviation functions grow superlinearly, so this terminates.
  double hi = 1.0;
  double f_hi = objective(hi);
  for (int it = 0; it < 200; ++it) {
    double f_next = objective(hi * 2.0);
    if (f_next <= f_hi) break;
    hi *= 2.0;
    f_hi = f_next;
    if (it == 199)
      throw std::runtime_error("mixture_sup: bracket growth did not terminate");
  }
  hi *= 2.0;
  double lo = 0.0;
  // Ternary search on the concave objective; the value converges
  // quadratically in the bracket width near the maximum.
  for (int it = 0; it < 300 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++it) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) < objective(m2))
      lo = m1;
    else
      hi = m2;
  }
  double best = std::max(objective(0.5 * (lo + hi)), 0.0);
  return best;
}

DeviationFunction combine_mixture(const DeviationFunction& alpha,
                                  const DeviationFunction& beta, double M,
                                  const MixtureGrid& grid) {
  if (grid.points < 2 || !(grid.r_max > 0))
    throw std::invalid_argument("combine_mixture: bad grid");
  std::vector<double> rs, vs;
  rs.reserve(grid.points + 1);
  rs.push_back(0.0);
  // log-spaced grid: the conjugate sup concentrates near small r
  const double r_min = grid.r_max * 1e-4;
  const double ratio = std::pow(grid.r_max / r_min, 1.0 / double(grid.points - 1));
  double r = r_min;
  for (std::size_t i = 0; i < grid.points; ++i, r *= ratio) rs.push_back(std::min(r, grid.r_max));
  rs.back() = grid.r_max;
  vs.reserve(rs.size());
  for (double x : rs) vs.push_back(mixture_sup(alpha, beta, M, x));
  // guard against float dips violating the convexity validator
  for (std::size_t i = 1; i < vs.size(); ++i) vs[i] = std::max(vs[i], vs[i - 1]);
  return DeviationFunction::tabulated(std::move(rs), std::move(vs));
}

}  // namespace w1h
