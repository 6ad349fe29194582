#pragma once

#include "powercast/model.hpp"
#include "powercast/strategy.hpp"

#include <string>
#include <vector>

namespace powercast {

struct DistEvent {
  Scalar time;
  std::string kind;  // depart, arrive, meet-edge, meet, saturate-node, stop, stranded, activate
  std::vector<int> agents;
  Location where;
};

struct DistOutcome {
  bool achieved = false;
  std::vector<Scalar> power;
  /// First time the goal held (some agent holds everything / every agent knows the source).
  Scalar completion_time;
  /// Time the last agent stopped moving.
  Scalar end_time;
  std::vector<DistEvent> log;
  /// Realized movement, replayable in the simulator.
  Strategy moves;
  std::vector<AgentSet> info;
  std::string failure;
};

/// Saturation protocol on a tree with agents at every leaf. Agents know only ports and
/// their own used power; the budget caps every agent's walk.
DistOutcome run_unknown_tree(const Network& tree, const Scalar& budget);

/// Saturation followed by the holders of full information walking their paths back,
/// waking every agent they pass, which then walks its own path back.
DistOutcome run_distributed_broadcast(const Network& tree, int source, const Scalar& budget);

struct CompetitiveReport {
  Scalar max_power;
  Scalar separation;
  /// max_power against the D/2 lower bound on the optimum.
  Scalar ratio;
  bool achieved = false;
  bool within_bound = false;
};

/// Runs the saturation protocol with budget D(T,A) and compares against D.
CompetitiveReport competitive_report(const Network& tree);

}  // namespace powercast
