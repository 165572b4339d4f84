#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "chemlambda/mol.hpp"
#include "chemlambda/rewrites.hpp"

namespace chemlambda {

enum class SchedulerVariant : std::uint8_t { Deterministic, Random };

/// In the deterministic variant, matches are handled one priority group at a
/// time: distribution over the two fan-out kinds first, the remaining
/// distribution moves, then the two annihilations, then pruning.
std::vector<std::vector<MoveKind>> default_priorities();

struct AlgorithmConfig {
  SchedulerVariant variant = SchedulerVariant::Deterministic;
  std::vector<std::vector<MoveKind>> priorities = default_priorities();
  std::map<MoveKind, double> weights;  // unspecified kinds default to 0.5
  std::uint64_t seed = 0;
  int max_cycles = 10000;
  int snapshot_every = 0;  // 0 = endpoints only
  bool lt_literal = false;

  double weight_for(MoveKind kind) const;

  /// Throws std::invalid_argument when weights leave [0,1] or the priority
  /// groups do not cover every non-Comb kind exactly once.
  void check() const;
};

struct AppliedMove {
  MoveKind kind{};
  std::vector<NodeId> nodes;
};

/// One reduction step. Applied moves bind pairwise-disjoint node sets;
/// `blocked` counts matches skipped because a bound node was already taken
/// this step, `comb` the Arrow eliminations of the closing comb cycle.
struct StepReport {
  int cycle = 0;
  std::vector<AppliedMove> applied;
  int blocked = 0;
  int comb = 0;
};

enum class Termination : std::uint8_t { Normal, BudgetExhausted };

struct Snapshot {
  int cycle = 0;
  Molecule molecule;
};

struct Trace {
  AlgorithmConfig config;
  Molecule initial;
  std::vector<StepReport> steps;
  std::vector<Snapshot> snapshots;
  Molecule final_molecule;
  Termination termination = Termination::Normal;
};

using CoinRng = std::mt19937_64;

/// One deterministic step: matches are gathered on the step-start molecule,
/// walked in priority-group order and canonical order within a group, and
/// applied unless a bound node is blocked. Nodes created during the step are
/// invisible until the next step. Ends with a comb cycle.
std::pair<Molecule, StepReport> step_deterministic(const Molecule& m,
                                                   const AlgorithmConfig& cfg);

/// One random step: all matches over all non-Comb kinds are enumerated in
/// canonical order and a weighted coin decides each one. The coin is flipped
/// for every enumerated match, applied or not, so the stream position depends
/// only on the match list. Node blocking works as in the deterministic step.
std::pair<Molecule, StepReport> step_random(const Molecule& m, const AlgorithmConfig& cfg,
                                            CoinRng& rng);

/// True iff no non-Comb move kind has any match.
bool is_normal(const Molecule& m);

/// Runs the configured step until no non-Comb match exists or the cycle
/// budget runs out. Budget exhaustion is a recorded outcome, not an error.
Trace reduce(const Molecule& m, const AlgorithmConfig& cfg);

/// Re-applies the recorded moves (plus the end-of-step comb cycle) from the
/// initial molecule. `on_step` is invoked after every step with the cycle
/// index and the resulting molecule.
Molecule replay(const Molecule& initial, const std::vector<StepReport>& steps,
                bool lt_literal = false,
                const std::function<void(int, const Molecule&)>& on_step = nullptr);

/// Line-oriented trace format, byte-stable across runs for a fixed build.
std::string serialize_trace(const Trace& trace);

}  // namespace chemlambda
