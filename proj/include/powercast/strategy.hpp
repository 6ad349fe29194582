#pragma once

#include "powercast/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace powercast {

/// Set of agent ids 1..k as a bitset.
class AgentSet {
 public:
  AgentSet() = default;
  explicit AgentSet(std::size_t k) : k_(k), words_((k + 63) / 64, 0) {}

  void insert(int id) { words_[word(id)] |= bit(id); }
  bool contains(int id) const { return (words_[word(id)] & bit(id)) != 0; }
  /// Returns true when something was added.
  bool merge(const AgentSet& other) {
    bool grew = false;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t next = words_[i] | other.words_[i];
      grew |= next != words_[i];
      words_[i] = next;
    }
    return grew;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  bool full() const { return count() == k_; }
  bool subset_of(const AgentSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    }
    return true;
  }
  std::vector<int> ids() const {
    std::vector<int> out;
    for (std::size_t id = 1; id <= k_; ++id) {
      if (contains(static_cast<int>(id))) out.push_back(static_cast<int>(id));
    }
    return out;
  }
  friend bool operator==(const AgentSet& a, const AgentSet& b) { return a.words_ == b.words_; }

 private:
  static std::size_t word(int id) { return static_cast<std::size_t>(id - 1) / 64; }
  static std::uint64_t bit(int id) { return std::uint64_t{1} << (static_cast<std::size_t>(id - 1) % 64); }
  std::size_t k_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Unit-speed straight move between two points of one edge (or of the line).
struct TimedMove {
  int agent = 0;
  Scalar depart;
  Location from;
  Location to;
};

struct Strategy {
  std::vector<TimedMove> moves;
};

struct Meeting {
  Scalar time;
  Location where;
  std::vector<int> agents;
};

/// An agent's information set grew (or, at time 0, its initial set).
struct InfoEvent {
  Scalar time;
  int agent = 0;
  Location where;
  std::vector<int> info;
};

struct Trace {
  std::size_t agents = 0;
  std::vector<Meeting> meetings;
  std::vector<Scalar> power;
  std::vector<AgentSet> final_info;
  std::vector<Location> final_location;
  std::vector<InfoEvent> timeline;
};

class StrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(int agent, Scalar time);
  int agent;
  Scalar time;
};

/// Initial location of agent `id` in the arena.
Location initial_location(const Configuration& arena, int id);
std::size_t agent_count(const Configuration& arena);

/// Length of a straight move; throws StrategyError when the points share no edge.
Scalar move_length(const Configuration& arena, const Location& from, const Location& to);

/// Runs the strategy in continuous time. Budget, when given, bounds every agent's path length.
Trace simulate(const Configuration& arena, const Strategy& s, const std::optional<Scalar>& budget = std::nullopt);

struct ConvergecastWitness {
  bool ok = false;
  int agent = 0;
  Scalar time;
  Location where;
  std::vector<std::vector<int>> maximal_sets;
};
ConvergecastWitness verify_convergecast(const Trace& tr);

struct BroadcastCheck {
  bool ok = false;
  std::vector<int> uninformed;
};
BroadcastCheck verify_broadcast(const Trace& tr, int source);

struct PowerSummary {
  Scalar max;
  std::vector<Scalar> per_agent;
};
PowerSummary max_power_used(const Trace& tr);

/// Time at which the last move of the strategy ends (0 when empty).
Scalar makespan(const Configuration& arena, const Strategy& s);

}  // namespace powercast
