#include "chemlambda/formats.hpp"

#include <sstream>

#include <json.hpp>

namespace chemlambda {

namespace {

std::string_view kind_shape(NodeKind kind) {
  switch (kind) {
    case NodeKind::L: return "invtriangle";
    case NodeKind::A: return "triangle";
    case NodeKind::FI: return "invtrapezium";
    case NodeKind::FO: return "trapezium";
    case NodeKind::FOE: return "house";
    case NodeKind::T: return "square";
    case NodeKind::Arrow: return "point";
    case NodeKind::FRIN: return "plaintext";
    case NodeKind::FROUT: return "plaintext";
  }
  return "ellipse";
}

char position_letter(PortPosition p) {
  switch (p) {
    case PortPosition::Middle: return 'm';
    case PortPosition::Left: return 'l';
    case PortPosition::Right: return 'r';
  }
  return '?';
}

nlohmann::ordered_json molecule_json(const Molecule& m) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& [id, n] : m.nodes()) {
    nlohmann::ordered_json node;
    node["id"] = id;
    node["kind"] = std::string(kind_name(n.kind));
    if (n.label) node["label"] = *n.label;
    nlohmann::ordered_json ports = nlohmann::ordered_json::array();
    auto sig = port_signature(n.kind);
    for (std::size_t slot = 0; slot < n.wires.size(); ++slot) {
      nlohmann::ordered_json port;
      port["position"] = std::string(1, position_letter(sig[slot].position));
      port["direction"] = std::string(direction_name(sig[slot].direction));
      port["wire"] = n.wires[slot];
      ports.push_back(std::move(port));
    }
    node["ports"] = std::move(ports);
    nodes.push_back(std::move(node));
  }
  nlohmann::ordered_json wires = nlohmann::ordered_json::array();
  for (const auto& [id, w] : m.wires()) {
    nlohmann::ordered_json wire;
    wire["id"] = id;
    if (w.source) wire["source"] = {{"node", w.source->node}, {"slot", w.source->slot}};
    if (w.target) wire["target"] = {{"node", w.target->node}, {"slot", w.target->slot}};
    if (w.name) wire["name"] = *w.name;
    wires.push_back(std::move(wire));
  }
  nlohmann::ordered_json out;
  out["nodes"] = std::move(nodes);
  out["wires"] = std::move(wires);
  return out;
}

}  // namespace

std::string to_dot(const Molecule& m) {
  std::ostringstream os;
  os << "digraph molecule {\n";
  os << "  rankdir=TB;\n";
  for (const auto& [id, n] : m.nodes()) {
    os << "  n" << id << " [shape=" << kind_shape(n.kind) << ",label=\""
       << kind_name(n.kind);
    if (n.label) os << ' ' << *n.label;
    os << "\"];\n";
  }
  for (const auto& [id, w] : m.wires()) {
    if (!w.source || !w.target) continue;
    const Node& from = m.node(w.source->node);
    const Node& to = m.node(w.target->node);
    os << "  n" << from.id << " -> n" << to.id << " [taillabel=\""
       << position_letter(port_signature(from.kind)[static_cast<std::size_t>(
              w.source->slot)].position)
       << "\",headlabel=\""
       << position_letter(port_signature(to.kind)[static_cast<std::size_t>(
              w.target->slot)].position)
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string molecule_to_json(const Molecule& m) {
  nlohmann::ordered_json out;
  out["format_version"] = 1;
  out["molecule"] = molecule_json(m);
  return out.dump(2) + "\n";
}

std::string trace_to_json(const Trace& trace) {
  nlohmann::ordered_json out;
  out["format_version"] = 1;
  out["algo"] =
      trace.config.variant == SchedulerVariant::Deterministic ? "det" : "random";
  out["seed"] = trace.config.seed;
  out["max_cycles"] = trace.config.max_cycles;
  out["lt_literal"] = trace.config.lt_literal;
  if (trace.config.variant == SchedulerVariant::Random) {
    nlohmann::ordered_json weights;
    for (MoveKind kind : rewrite_move_kinds())
      weights[std::string(move_name(kind))] = trace.config.weight_for(kind);
    out["weights"] = std::move(weights);
  }
  out["termination"] =
      trace.termination == Termination::Normal ? "normal" : "budget-exhausted";
  out["initial_mol"] = serialize_mol(trace.initial);
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const StepReport& step : trace.steps) {
    nlohmann::ordered_json record;
    record["cycle"] = step.cycle;
    nlohmann::ordered_json applied = nlohmann::ordered_json::array();
    for (const AppliedMove& move : step.applied) {
      nlohmann::ordered_json entry;
      entry["move"] = std::string(move_name(move.kind));
      entry["nodes"] = move.nodes;
      applied.push_back(std::move(entry));
    }
    record["applied"] = std::move(applied);
    record["blocked"] = step.blocked;
    record["comb"] = step.comb;
    steps.push_back(std::move(record));
  }
  out["steps"] = std::move(steps);
  if (!trace.snapshots.empty()) {
    nlohmann::ordered_json snaps = nlohmann::ordered_json::array();
    for (const Snapshot& snap : trace.snapshots) {
      nlohmann::ordered_json record;
      record["cycle"] = snap.cycle;
      record["mol"] = serialize_mol(snap.molecule);
      snaps.push_back(std::move(record));
    }
    out["snapshots"] = std::move(snaps);
  }
  out["final_mol"] = serialize_mol(trace.final_molecule);
  return out.dump(2) + "\n";
}

}  // namespace chemlambda
