#pragma once

#include <string>

#include "chemlambda/mol.hpp"
#include "chemlambda/scheduler.hpp"

namespace chemlambda {

/// Graphviz digraph: one node per molecule node with a kind-specific shape,
/// one edge per bond labelled with the port positions it connects.
/// Byte-stable for a given molecule.
std::string to_dot(const Molecule& m);

/// Structured molecule dump with a format-version field.
std::string molecule_to_json(const Molecule& m);

/// The trace serialization wrapped with a format-version field.
std::string trace_to_json(const Trace& trace);

}  // namespace chemlambda
