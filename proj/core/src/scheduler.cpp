#include "chemlambda/scheduler.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chemlambda {

std::vector<std::vector<MoveKind>> default_priorities() {
  return {
      {MoveKind::FoFoe},
      {MoveKind::FiFo, MoveKind::LFoe, MoveKind::LFo, MoveKind::AFoe, MoveKind::AFo},
      {MoveKind::Beta, MoveKind::FanIn},
      {MoveKind::AT, MoveKind::FiT, MoveKind::LT, MoveKind::Fo2T, MoveKind::Foe2T,
       MoveKind::Fo3T, MoveKind::Foe3T},
  };
}

double AlgorithmConfig::weight_for(MoveKind kind) const {
  auto it = weights.find(kind);
  return it == weights.end() ? 0.5 : it->second;
}

void AlgorithmConfig::check() const {
  for (const auto& [kind, w] : weights) {
    if (w < 0.0 || w > 1.0)
      throw std::invalid_argument("weight for " + std::string(move_name(kind)) +
                                  " outside [0,1]");
  }
  std::set<MoveKind> seen;
  for (const auto& group : priorities) {
    for (MoveKind kind : group) {
      if (kind == MoveKind::Comb)
        throw std::invalid_argument("COMB cannot appear in the priority groups");
      if (!seen.insert(kind).second)
        throw std::invalid_argument(std::string(move_name(kind)) +
                                    " appears twice in the priority groups");
    }
  }
  if (seen.size() != rewrite_move_kinds().size())
    throw std::invalid_argument("priority groups must cover every non-COMB move kind");
  if (max_cycles <= 0) throw std::invalid_argument("max_cycles must be positive");
  if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be >= 0");
}

namespace {

bool any_node_blocked(const Match& match, const std::set<NodeId>& blocked) {
  return std::any_of(match.nodes.begin(), match.nodes.end(),
                     [&](NodeId id) { return blocked.count(id) > 0; });
}

void block_nodes(const Match& match, std::set<NodeId>& blocked) {
  blocked.insert(match.nodes.begin(), match.nodes.end());
}

/// Canonical order across kinds: bound-node tuple, then catalog order.
void sort_canonical(std::vector<Match>& matches) {
  std::stable_sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    if (a.nodes != b.nodes) return a.nodes < b.nodes;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
}

// 53-bit uniform in [0,1); independent of standard-library distributions so
// traces stay stable across toolchains.
double next_coin(CoinRng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

AppliedMove to_applied(const Match& match) { return {match.kind, match.nodes}; }

}  // namespace

std::pair<Molecule, StepReport> step_deterministic(const Molecule& m,
                                                   const AlgorithmConfig& cfg) {
  StepReport report;
  Molecule cur = m;
  std::set<NodeId> blocked;
  for (const auto& group : cfg.priorities) {
    std::vector<Match> matches;
    for (MoveKind kind : group) {
      auto found = find_matches(m, kind);  // matches come from the step-start molecule
      matches.insert(matches.end(), found.begin(), found.end());
    }
    sort_canonical(matches);
    for (const Match& match : matches) {
      if (any_node_blocked(match, blocked)) {
        ++report.blocked;
        continue;
      }
      cur = apply_move(cur, match, cfg.lt_literal);
      block_nodes(match, blocked);
      report.applied.push_back(to_applied(match));
    }
  }
  auto [combed, comb_count] = comb_cycle_counted(cur);
  report.comb = comb_count;
  return {std::move(combed), std::move(report)};
}

std::pair<Molecule, StepReport> step_random(const Molecule& m, const AlgorithmConfig& cfg,
                                            CoinRng& rng) {
  StepReport report;
  Molecule cur = m;
  std::set<NodeId> blocked;
  std::vector<Match> matches;
  for (MoveKind kind : rewrite_move_kinds()) {
    auto found = find_matches(m, kind);
    matches.insert(matches.end(), found.begin(), found.end());
  }
  sort_canonical(matches);
  for (const Match& match : matches) {
    bool accepted = next_coin(rng) < cfg.weight_for(match.kind);
    if (!accepted) continue;
    if (any_node_blocked(match, blocked)) {
      ++report.blocked;
      continue;
    }
    cur = apply_move(cur, match, cfg.lt_literal);
    block_nodes(match, blocked);
    report.applied.push_back(to_applied(match));
  }
  auto [combed, comb_count] = comb_cycle_counted(cur);
  report.comb = comb_count;
  return {std::move(combed), std::move(report)};
}

bool is_normal(const Molecule& m) {
  for (MoveKind kind : rewrite_move_kinds()) {
    if (!find_matches(m, kind).empty()) return false;
  }
  return true;
}

Trace reduce(const Molecule& m, const AlgorithmConfig& cfg) {
  cfg.check();
  Trace trace;
  trace.config = cfg;
  trace.initial = m;

  CoinRng rng(cfg.seed);
  Molecule cur = m;
  int cycle = 0;
  while (true) {
    if (is_normal(cur)) {
      trace.termination = Termination::Normal;
      break;
    }
    if (cycle >= cfg.max_cycles) {
      trace.termination = Termination::BudgetExhausted;
      break;
    }
    auto [next, report] = cfg.variant == SchedulerVariant::Deterministic
                              ? step_deterministic(cur, cfg)
                              : step_random(cur, cfg, rng);
    cur = std::move(next);
    report.cycle = cycle;
    trace.steps.push_back(std::move(report));
    ++cycle;
    if (cfg.snapshot_every > 0 && cycle % cfg.snapshot_every == 0)
      trace.snapshots.push_back({cycle, cur});
  }
  trace.final_molecule = std::move(cur);
  return trace;
}

Molecule replay(const Molecule& initial, const std::vector<StepReport>& steps,
                bool lt_literal, const std::function<void(int, const Molecule&)>& on_step) {
  Molecule cur = initial;
  for (const StepReport& step : steps) {
    for (const AppliedMove& applied : step.applied) {
      bool found = false;
      for (const Match& match : find_matches(cur, applied.kind)) {
        if (match.nodes == applied.nodes) {
          cur = apply_move(cur, match, lt_literal);
          found = true;
          break;
        }
      }
      if (!found)
        throw RewriteError("replay: recorded " + std::string(move_name(applied.kind)) +
                           " not found");
    }
    cur = comb_cycle(cur);
    if (on_step) on_step(step.cycle, cur);
  }
  return cur;
}

std::string serialize_trace(const Trace& trace) {
  std::ostringstream os;
  os << "chemlambda-trace v1\n";
  os << "algo " << (trace.config.variant == SchedulerVariant::Deterministic ? "det"
                                                                            : "random")
     << '\n';
  os << "seed " << trace.config.seed << '\n';
  os << "max-cycles " << trace.config.max_cycles << '\n';
  os << "lt-literal " << (trace.config.lt_literal ? 1 : 0) << '\n';
  if (trace.config.variant == SchedulerVariant::Random) {
    for (MoveKind kind : rewrite_move_kinds())
      os << "weight " << move_name(kind) << ' ' << trace.config.weight_for(kind) << '\n';
  }
  os << "cycles " << trace.steps.size() << '\n';
  os << "termination "
     << (trace.termination == Termination::Normal ? "normal" : "budget-exhausted") << '\n';
  os << "begin initial\n" << serialize_mol(trace.initial) << "end initial\n";
  for (const StepReport& step : trace.steps) {
    os << "step " << step.cycle << " applied " << step.applied.size() << " blocked "
       << step.blocked << " comb " << step.comb << '\n';
    for (const AppliedMove& applied : step.applied) {
      os << "  " << move_name(applied.kind);
      for (NodeId id : applied.nodes) os << ' ' << id;
      os << '\n';
    }
  }
  for (const Snapshot& snap : trace.snapshots) {
    os << "begin snapshot " << snap.cycle << '\n'
       << serialize_mol(snap.molecule) << "end snapshot\n";
  }
  os << "begin final\n" << serialize_mol(trace.final_molecule) << "end final\n";
  return os.str();
}

}  // namespace chemlambda
