#include "opindyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <string>

#include "opindyn/binomial.hpp"
#include "opindyn/error.hpp"

namespace opindyn {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

bool is_update_probability(double q) { return std::isfinite(q) && q > 0.0 && q <= 1.0; }

bool is_unit_interval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

int StubbornParams::stubborn_zero() const { return floor_fraction(gamma0, n_agents); }
int StubbornParams::stubborn_one() const { return floor_fraction(gamma1, n_agents); }
int StubbornParams::free_agents() const { return n_agents - stubborn_zero() - stubborn_one(); }

ModelKind kind_of(const ModelParams& p) { return static_cast<ModelKind>(p.index()); }

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::voter: return "voter";
    case ModelKind::majority: return "majority";
    case ModelKind::stubborn: return "stubborn";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "voter") return ModelKind::voter;
  if (name == "majority") return ModelKind::majority;
  if (name == "stubborn") return ModelKind::stubborn;
  throw ValidationError("unknown model '" + std::string(name) + "' (expected voter, majority or stubborn)");
}

void validate(const VoterParams& p) {
  require(p.n_agents >= 2, "voter: n must be >= 2");
  require(is_update_probability(p.q0), "voter: q0 must be in (0, 1]");
  require(is_update_probability(p.q1), "voter: q1 must be in (0, 1]");
  require(is_unit_interval(p.alpha), "voter: alpha must be in [0, 1]");
}

void validate(const MajorityParams& p) {
  require(p.n_agents >= 2, "majority: n must be >= 2");
  require(is_update_probability(p.q0), "majority: q0 must be in (0, 1]");
  require(is_update_probability(p.q1), "majority: q1 must be in (0, 1]");
  require(p.k >= 1, "majority: k must be >= 1");
  require(p.k <= 31, "majority: k must be <= 31");
  require(is_unit_interval(p.alpha), "majority: alpha must be in [0, 1]");
}

void validate(const StubbornParams& p) {
  require(p.n_agents >= 1, "stubborn: n must be >= 1");
  require(p.k == 1, "stubborn: only k = 1 is supported");
  require(std::isfinite(p.gamma0) && p.gamma0 >= 0.0 && p.gamma0 < 1.0, "stubborn: gamma0 must be in [0, 1)");
  require(std::isfinite(p.gamma1) && p.gamma1 >= 0.0 && p.gamma1 < 1.0, "stubborn: gamma1 must be in [0, 1)");
  require(p.gamma0 + p.gamma1 < 1.0, "stubborn: gamma0 + gamma1 must be < 1");
  require(is_unit_interval(p.x0), "stubborn: x0 must be in [0, 1]");
  require(p.gamma0 == 0.0 || p.stubborn_zero() >= 1,
          "stubborn: floor(gamma0 * n) is zero although gamma0 > 0");
  require(p.gamma1 == 0.0 || p.stubborn_one() >= 1,
          "stubborn: floor(gamma1 * n) is zero although gamma1 > 0");
  require(p.free_agents() >= 1, "stubborn: no non-stubborn agents left after rounding");
}

void validate(const ModelParams& p) {
  std::visit([](const auto& v) { validate(v); }, p);
}

int floor_fraction(double fraction, int count) {
  const double product = fraction * static_cast<double>(count);
  return static_cast<int>(std::floor(product + 1e-9 * std::max(1.0, std::abs(product))));
}

int initial_state(const ModelParams& p) {
  if (const auto* v = std::get_if<VoterParams>(&p)) return floor_fraction(v->alpha, v->n_agents);
  if (const auto* m = std::get_if<MajorityParams>(&p)) return floor_fraction(m->alpha, m->n_agents);
  const auto& s = std::get<StubbornParams>(p);
  return floor_fraction(s.x0, s.free_agents());
}

BirthDeathChain::BirthDeathChain(std::vector<double> up_rate, std::vector<double> down_rate)
    : up_(std::move(up_rate)), down_(std::move(down_rate)) {
  require(up_.size() == down_.size(), "BirthDeathChain: rate vectors differ in length");
  require(up_.size() >= 2, "BirthDeathChain: need at least two states");
  for (std::size_t i = 0; i < up_.size(); ++i) {
    require(std::isfinite(up_[i]) && up_[i] >= 0.0, "BirthDeathChain: up rates must be finite and >= 0");
    require(std::isfinite(down_[i]) && down_[i] >= 0.0, "BirthDeathChain: down rates must be finite and >= 0");
  }
  require(down_.front() == 0.0, "BirthDeathChain: state 0 cannot jump down");
  require(up_.back() == 0.0, "BirthDeathChain: top state cannot jump up");
}

BirthDeathChain build_voter_chain(const VoterParams& p) {
  validate(p);
  const int n = p.n_agents;
  std::vector<double> up(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> down(up.size(), 0.0);
  for (int k = 1; k < n; ++k) {
    const double contact = static_cast<double>(k) * static_cast<double>(n - k) / n;
    up[static_cast<std::size_t>(k)] = p.q0 * contact;
    down[static_cast<std::size_t>(k)] = p.q1 * contact;
  }
  return BirthDeathChain(std::move(up), std::move(down));
}

BirthDeathChain build_majority_chain(const MajorityParams& p) {
  validate(p);
  const int n = p.n_agents;
  const int sample = 2 * p.k;
  std::vector<double> up(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> down(up.size(), 0.0);
  for (int s = 1; s < n; ++s) {
    const long double x = static_cast<long double>(s) / n;
    const long double tail_one = binomial_upper_tail(sample, x, p.k + 1);
    const long double tail_zero = binomial_upper_tail(sample, 1.0L - x, p.k + 1);
    up[static_cast<std::size_t>(s)] = static_cast<double>((n - s) * p.q0 * tail_one);
    down[static_cast<std::size_t>(s)] = static_cast<double>(s * p.q1 * tail_zero);
  }
  return BirthDeathChain(std::move(up), std::move(down));
}

BirthDeathChain build_stubborn_chain(const StubbornParams& p) {
  validate(p);
  const int n = p.n_agents;
  const int m_total = p.free_agents();
  const int s0 = p.stubborn_zero();
  const int s1 = p.stubborn_one();
  std::vector<double> up(static_cast<std::size_t>(m_total) + 1, 0.0);
  std::vector<double> down(up.size(), 0.0);
  for (int m = 0; m <= m_total; ++m) {
    // Probability that one draw (with replacement, from all N agents) holds opinion 1 / 0.
    const double draw_one = static_cast<double>(m + s1) / n;
    const double draw_zero = static_cast<double>(m_total - m + s0) / n;
    up[static_cast<std::size_t>(m)] = (m_total - m) * draw_one * draw_one;
    down[static_cast<std::size_t>(m)] = m * draw_zero * draw_zero;
  }
  return BirthDeathChain(std::move(up), std::move(down));
}

BirthDeathChain build_chain(const ModelParams& p) {
  return std::visit(
      [](const auto& v) -> BirthDeathChain {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, VoterParams>) return build_voter_chain(v);
        else if constexpr (std::is_same_v<T, MajorityParams>) return build_majority_chain(v);
        else return build_stubborn_chain(v);
      },
      p);
}

}  // namespace opindyn
