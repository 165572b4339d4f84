#pragma once

#include <map>
#include <string>
#include <vector>

#include "chemlambda/mol.hpp"
#include "chemlambda/scheduler.hpp"

namespace chemlambda {

/// A total, renaming-invariant encoding of a molecule: canonical node order
/// and canonical wire names, serialized as mol text. Two molecules have equal
/// canonical forms iff they are isomorphic (same kinds, same wiring up to id
/// and variable renaming; cap labels are ignored).
using CanonicalForm = std::string;

/// Iterative neighbourhood refinement with exhaustive backtracking on ties.
/// Exponential in the worst case, fine at the molecule sizes this engine
/// targets.
CanonicalForm canonical_form(const Molecule& m);

bool isomorphic(const Molecule& a, const Molecule& b);

struct MoleculeStats {
  std::map<NodeKind, int> kind_counts;
  int bonds = 0;
  int free_ports = 0;
  int arrow_loops = 0;  // cycles made of Arrow nodes only

  int count(NodeKind kind) const {
    auto it = kind_counts.find(kind);
    return it == kind_counts.end() ? 0 : it->second;
  }
};

MoleculeStats stats(const Molecule& m);

struct QuineReport {
  bool is_quine = false;
  int period_checked = 0;
  std::vector<StepReport> witness_steps;
};

/// Runs up to max_period deterministic steps; the molecule is a quine iff
/// some step count p >= 1 returns a molecule isomorphic to the input with at
/// least one move applied in every step. Fixed points with zero moves do not
/// qualify. Requires cfg.variant == Deterministic.
QuineReport detect_quine(const Molecule& m, const AlgorithmConfig& cfg, int max_period);

}  // namespace chemlambda
