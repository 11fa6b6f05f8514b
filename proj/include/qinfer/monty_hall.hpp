#pragma once

// Monty Hall as a three-node network: prize position A, the player's first
// pick B, and the door C opened by the host, with C conditioned on (A, B).
// Quantum scenarios replace the product of the A and B priors with an
// entangled joint state.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qinfer/acausal_network.hpp"

namespace qinfer::monty {

inline constexpr Index kDoors = 3;
inline const std::string kPrize = "A";
inline const std::string kPick = "B";
inline const std::string kHost = "C";

struct ScenarioKind {
  enum class Tag { classical, tilde, hat, bar, breve };

  Tag tag = Tag::classical;
  double lambda = 0.0;  // mixture weight of tilde, bar only

  static ScenarioKind classical() { return {Tag::classical}; }
  static ScenarioKind tilde() { return {Tag::tilde}; }
  static ScenarioKind hat() { return {Tag::hat}; }
  static ScenarioKind breve() { return {Tag::breve}; }
  /// Throws PreconditionError unless 0 <= lambda <= 1.
  static ScenarioKind bar(double lambda);

  /// Accepts classical, tilde, hat, breve, bar(L) and bar:L.
  static ScenarioKind parse(std::string_view text);
  std::string name() const;
};

struct GameQuery {
  Index pick = 0;
  Index open = 1;
};

struct GameResult {
  GameQuery query;
  DensityOperator posterior;
  std::array<double, 3> by_door{};
  double stay_win = 0.0;
  double switch_win = 0.0;
  /// The unique door that is neither picked nor opened.
  Index switch_target = 0;
};

/// Host's door given prize and pick, diag over |a b c>: uniform over doors
/// hiding neither the prize nor the pick.
ComplexMatrix host_table();
DensityOperator uniform_door_state();
DensityOperator tilde_state();
DensityOperator hat_state();
DensityOperator bar_state(double lambda);
DensityOperator breve_state();
/// Joint prize/pick state of the scenario (the product of uniform priors for
/// the classical game).
DensityOperator prize_pick_state(const ScenarioKind& kind);

AcausalNetwork build_scenario(const ScenarioKind& kind);

GameResult play(const AcausalNetwork& net, const GameQuery& query);
GameResult play(const ScenarioKind& kind, const GameQuery& query);

struct PlayCell {
  GameQuery query;
  std::optional<GameResult> result;
  std::string error;  // set when result is empty
};

/// play() over the six legal (pick, open) pairs, pick-major order.
std::vector<PlayCell> all_plays(const ScenarioKind& kind);

struct SweepPoint {
  double lambda = 0.0;
  double stay_win = 0.0;  // mean over the six legal pairs
  std::vector<double> per_pair;
  /// max - min of per_pair; the pairs agree when this is <= 1e-10.
  double pair_spread = 0.0;
  bool symmetric() const { return pair_spread <= 1e-10; }
};

/// bar(lambda) at `steps` evenly spaced lambdas in [0, 1], endpoints included.
std::vector<SweepPoint> lambda_sweep(int steps);

struct HostOption {
  Index open = 0;
  double stay_win = 0.0;
  double switch_win = 0.0;
  /// Player's chance with the better of staying and switching.
  double best_response = 0.0;
};

struct HostAnalysis {
  Index pick = 0;
  std::vector<HostOption> options;
  /// Doors minimizing the player's best response (several on a tie).
  std::vector<Index> minimizing_opens;
  double minimized_best_response = 0.0;
  bool tie() const { return minimizing_opens.size() > 1; }
};

HostAnalysis host_strategy_analysis(const ScenarioKind& kind, Index pick);

}  // namespace qinfer::monty
