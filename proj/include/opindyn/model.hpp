#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

namespace opindyn {

/// Biased voter rule: an agent holding opinion i wakes at rate 1, updates with
/// probability q_i and copies one agent sampled uniformly (with replacement).
struct VoterParams {
  int n_agents = 0;
  double q0 = 1.0;
  double q1 = 1.0;
  double alpha = 0.0;  ///< initial fraction holding opinion 1

  bool biased_toward_one() const { return q0 > q1; }
};

/// Biased majority rule: an updating agent samples 2K agents and adopts the
/// majority of the 2K + 1 opinions including its own.
struct MajorityParams {
  int n_agents = 0;
  double q0 = 1.0;
  double q1 = 1.0;
  int k = 1;
  double alpha = 0.0;

  bool biased_toward_one() const { return q0 > q1; }
};

/// Majority rule (K = 1) with stubborn agents. gamma0 / gamma1 are the
/// fractions of all agents that hold opinion 0 / 1 forever; x0 is the initial
/// fraction of the non-stubborn agents that hold opinion 1.
struct StubbornParams {
  int n_agents = 0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double x0 = 0.0;
  int k = 1;

  int stubborn_zero() const;  ///< floor(gamma0 * N)
  int stubborn_one() const;   ///< floor(gamma1 * N)
  int free_agents() const;    ///< M = N - stubborn_zero - stubborn_one
};

using ModelParams = std::variant<VoterParams, MajorityParams, StubbornParams>;

enum class ModelKind { voter, majority, stubborn };

ModelKind kind_of(const ModelParams& p);
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

void validate(const VoterParams& p);
void validate(const MajorityParams& p);
void validate(const StubbornParams& p);
void validate(const ModelParams& p);

/// floor(fraction * count), robust to products that land a few ulps below an integer.
int floor_fraction(double fraction, int count);

/// Initial chain state implied by the parameters: floor(alpha N) or floor(x0 M).
int initial_state(const ModelParams& p);

/// Continuous-time birth-death chain on {0, ..., max_state()} with +-1 jumps.
///
/// Every model on the complete graph compiles into one of these. For the
/// stubborn model the state counts the non-stubborn agents holding opinion 1.
class BirthDeathChain {
 public:
  BirthDeathChain(std::vector<double> up_rate, std::vector<double> down_rate);

  std::size_t n_states() const { return up_.size(); }
  int max_state() const { return static_cast<int>(up_.size()) - 1; }

  double up(int state) const { return up_[static_cast<std::size_t>(state)]; }
  double down(int state) const { return down_[static_cast<std::size_t>(state)]; }
  double total(int state) const { return up(state) + down(state); }

  const std::vector<double>& up_rates() const { return up_; }
  const std::vector<double>& down_rates() const { return down_; }

  bool absorbing_low() const { return total(0) == 0.0; }
  bool absorbing_high() const { return total(max_state()) == 0.0; }
  bool is_absorbing(int state) const { return total(state) == 0.0; }

  double fraction(int state) const {
    return static_cast<double>(state) / static_cast<double>(max_state());
  }

 private:
  std::vector<double> up_;
  std::vector<double> down_;
};

BirthDeathChain build_voter_chain(const VoterParams& p);
BirthDeathChain build_majority_chain(const MajorityParams& p);
BirthDeathChain build_stubborn_chain(const StubbornParams& p);
BirthDeathChain build_chain(const ModelParams& p);

}  // namespace opindyn
