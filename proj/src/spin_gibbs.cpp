#include "w1h/spin_gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace w1h {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double json_gamma_entry(const nlohmann::json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    throw std::invalid_argument("SpinGibbsSpec: gamma entries must be numbers or \"inf\"");
  }
  return v.get<double>();
}
}  // namespace

void SpinGibbsSpec::validate() const {
  if (sites < 2) throw std::invalid_argument("SpinGibbsSpec: need at least 2 sites");
  if (static_cast<int>(delta.size()) != sites)
    throw std::invalid_argument("SpinGibbsSpec: delta size mismatch");
  for (double d : delta)
    if (!(d >= 0)) throw std::invalid_argument("SpinGibbsSpec: delta must be >= 0");
  if (static_cast<int>(gamma.size()) != sites)
    throw std::invalid_argument("SpinGibbsSpec: gamma must be sites x sites");
  for (int i = 0; i < sites; ++i) {
    if (static_cast<int>(gamma[i].size()) != sites)
      throw std::invalid_argument("SpinGibbsSpec: gamma must be sites x sites");
    if (gamma[i][i] != 0.0) throw std::invalid_argument("SpinGibbsSpec: gamma diagonal must be 0");
    for (int j = 0; j < sites; ++j) {
      if (std::isnan(gamma[i][j]) || gamma[i][j] < 0)
        throw std::invalid_argument("SpinGibbsSpec: gamma must be >= 0");
      if (gamma[i][j] != gamma[j][i])
        throw std::invalid_argument("SpinGibbsSpec: gamma must be symmetric");
    }
  }
  if (cap < 1) throw std::invalid_argument("SpinGibbsSpec: cap must be >= 1");
}

nlohmann::json SpinGibbsSpec::to_json() const {
  nlohmann::json g = nlohmann::json::array();
  for (const auto& row : gamma) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) {
      if (v == kInf)
        r.push_back("inf");
      else
        r.push_back(v);
    }
    g.push_back(std::move(r));
  }
  return {{"sites", sites}, {"delta", delta}, {"gamma", g}, {"cap", cap}};
}

SpinGibbsSpec SpinGibbsSpec::from_json(const nlohmann::json& j) {
  SpinGibbsSpec s;
  s.sites = j.at("sites").get<int>();
  s.delta = j.at("delta").get<std::vector<double>>();
  s.cap = j.at("cap").get<int>();
  for (const auto& row : j.at("gamma")) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(json_gamma_entry(v));
    s.gamma.push_back(std::move(r));
  }
  s.validate();
  return s;
}

double interaction_term(double gamma, int xi, int xj) {
  if (xi == 0 || xj == 0) return 0.0;  // 0 * inf = 0
  return gamma * xi * xj;
}

GibbsExact gibbs_exact(const SpinGibbsSpec& spec, std::size_t state_budget) {
  spec.validate();
  const BoxStates box{spec.sites, spec.cap};
  const std::size_t n_states = box.size();
  if (n_states > state_budget)
    throw std::invalid_argument(
        "gibbs_exact: state space " + std::to_string(n_states) + " exceeds budget " +
        std::to_string(state_budget) + "; use the sampler instead");

  // log Poisson factors per site and occupancy
  std::vector<std::vector<double>> log_pois(spec.sites);
  for (int i = 0; i < spec.sites; ++i) {
    log_pois[i].resize(spec.cap + 1);
    for (int k = 0; k <= spec.cap; ++k) {
      if (spec.delta[i] == 0.0)
        log_pois[i][k] = (k == 0) ? 0.0 : -kInf;
      else
        log_pois[i][k] = -spec.delta[i] + k * std::log(spec.delta[i]) - std::lgamma(k + 1.0);
    }
  }

  std::vector<double> w(n_states);
  std::vector<int> x(spec.sites, 0);
  double total = 0.0;
  for (std::size_t idx = 0; idx < n_states; ++idx) {
    double lw = 0.0;
    for (int i = 0; i < spec.sites && lw > -kInf; ++i) {
      lw += log_pois[i][x[i]];
      for (int j = i + 1; j < spec.sites; ++j) {
        double t = interaction_term(spec.gamma[i][j], x[i], x[j]);
        if (t == kInf) {
          lw = -kInf;
          break;
        }
        lw -= t;
      }
    }
    w[idx] = (lw == -kInf) ? 0.0 : std::exp(lw);
    total += w[idx];
    // odometer increment, row-major (last site fastest)
    for (int i = spec.sites - 1; i >= 0; --i) {
      if (++x[i] <= spec.cap) break;
      x[i] = 0;
    }
  }
  if (!(total > 0)) throw std::runtime_error("gibbs_exact: zero partition function");
  for (double& v : w) v /= total;
  // one-site tail bound: unnormalized mass outside the box is at most
  // sum_i P(X_i > cap) because the interaction factor is <= 1
  double outside = 0.0;
  for (int i = 0; i < spec.sites; ++i) outside += poisson_tail(spec.delta[i], spec.cap + 1);
  GibbsExact out{FiniteMeasure(StateSpace(box), std::move(w)), outside / total};
  return out;
}

TruncatedPoisson conditional_at_site(const SpinGibbsSpec& spec, int i, std::span<const int> x,
                                     TailPolicy policy) {
  if (i < 0 || i >= spec.sites) throw std::out_of_range("conditional_at_site: bad site");
  if (static_cast<int>(x.size()) != spec.sites)
    throw std::invalid_argument("conditional_at_site: state size mismatch");
  double field = 0.0;
  for (int j = 0; j < spec.sites; ++j) {
    if (j == i) continue;
    double t = interaction_term(spec.gamma[i][j], 1, x[j]);
    field += t;
    if (field == kInf) break;
  }
  double lambda = (field == kInf) ? 0.0 : spec.delta[i] * std::exp(-field);
  // tolerance is irrelevant here: the conditional is truncated by the model
  return TruncatedPoisson{lambda, spec.cap, policy, 1.0};
}

FiniteMeasure site_marginal(const FiniteMeasure& joint, int site) {
  const BoxStates& box = joint.box();
  if (site < 0 || site >= box.sites) throw std::out_of_range("site_marginal: bad site");
  std::vector<double> m(box.cap + 1, 0.0);
  std::vector<int> x(box.sites);
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    box_decode(box, idx, x.data());
    m[x[site]] += joint.weight(idx);
  }
  double total = 0.0;
  for (double v : m) total += v;
  for (double& v : m) v /= total;
  LineStates states;
  for (int k = 0; k <= box.cap; ++k) states.points.push_back(k);
  return FiniteMeasure(StateSpace(std::move(states)), std::move(m));
}

GlauberSampler::GlauberSampler(SpinGibbsSpec spec, Rng rng)
    : spec_(std::move(spec)), rng_(rng), x_(spec_.sites, 0), pmf_buf_(spec_.cap + 1) {
  spec_.validate();
}

void GlauberSampler::sweep() {
  for (int step = 0; step < spec_.sites; ++step) {
    int i = static_cast<int>(rng_.uniform_below(spec_.sites));
    TruncatedPoisson cond = conditional_at_site(spec_, i, x_, TailPolicy::Renormalize);
    // inverse-CDF draw from the renormalized truncated conditional
    double total = 0.0;
    for (int k = 0; k <= spec_.cap; ++k) {
      pmf_buf_[k] = poisson_weight(cond.lambda, k);
      total += pmf_buf_[k];
    }
    double u = rng_.uniform() * total;
    int k = 0;
    double acc = pmf_buf_[0];
    while (k < spec_.cap && u > acc) acc += pmf_buf_[++k];
    x_[i] = k;
  }
}

BirthDeathDiscrete::BirthDeathDiscrete(SpinGibbsSpec spec, Rng rng)
    : spec_(std::move(spec)), rng_(rng), x_(spec_.sites, 0) {
  spec_.validate();
  delta_total_ = 0.0;
  for (double d : spec_.delta) {
    delta_total_ += d;
    delta_cdf_.push_back(delta_total_);
  }
  if (!(delta_total_ > 0))
    throw std::invalid_argument("BirthDeathDiscrete: all-zero delta has no births");
}

double BirthDeathDiscrete::local_field(std::span<const int> x, int i) const {
  double field = 0.0;
  for (int j = 0; j < spec_.sites; ++j) {
    if (j == i) continue;
    field += interaction_term(spec_.gamma[i][j], 1, x[j]);
    if (field == kInf) break;
  }
  return field;
}

double BirthDeathDiscrete::birth_proposal_weight(int i) const {
  return spec_.delta[i] / delta_total_;
}

double BirthDeathDiscrete::birth_acceptance(std::span<const int> x, int i) const {
  if (x[i] >= spec_.cap) return 0.0;  // truncated target
  int n = 0;
  for (int v : x) n += v;
  double field = local_field(x, i);
  if (field == kInf) return 0.0;
  return std::min(1.0, delta_total_ * std::exp(-field) / (n + 1));
}

double BirthDeathDiscrete::death_acceptance(std::span<const int> x, int i) const {
  if (x[i] <= 0) return 0.0;
  int n = 0;
  for (int v : x) n += v;
  double field = local_field(x, i);
  // removing one particle at i releases field energy; e^{+field} can be inf
  // only if gamma is inf against an occupied neighbour, which cannot happen
  // in a state of positive weight
  return std::min(1.0, n * std::exp(field) / delta_total_);
}

void BirthDeathDiscrete::step() {
  if (rng_.uniform() < 0.5) {
    // birth at site i with probability delta_i / sum(delta)
    double u = rng_.uniform() * delta_total_;
    int i = static_cast<int>(std::lower_bound(delta_cdf_.begin(), delta_cdf_.end(), u) -
                             delta_cdf_.begin());
    i = std::min(i, spec_.sites - 1);
    if (rng_.uniform() < birth_acceptance(x_, i)) ++x_[i];
  } else {
    int n = 0;
    for (int v : x_) n += v;
    if (n == 0) return;
    // death of a uniformly chosen occurrence
    long pick = static_cast<long>(rng_.uniform_below(static_cast<std::uint64_t>(n)));
    int i = 0;
    while (pick >= x_[i]) pick -= x_[i++];
    if (rng_.uniform() < death_acceptance(x_, i)) --x_[i];
  }
}

}  // namespace w1h
