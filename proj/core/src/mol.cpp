#include "chemlambda/mol.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace chemlambda {

namespace {

constexpr PortSlot kMidIn{PortPosition::Middle, PortDirection::In};
constexpr PortSlot kMidOut{PortPosition::Middle, PortDirection::Out};
constexpr PortSlot kLeftIn{PortPosition::Left, PortDirection::In};
constexpr PortSlot kLeftOut{PortPosition::Left, PortDirection::Out};
constexpr PortSlot kRightIn{PortPosition::Right, PortDirection::In};
constexpr PortSlot kRightOut{PortPosition::Right, PortDirection::Out};

constexpr std::array kSigL{kMidIn, kLeftOut, kRightOut};
constexpr std::array kSigA{kLeftIn, kRightIn, kMidOut};
constexpr std::array kSigFI{kLeftIn, kRightIn, kMidOut};
constexpr std::array kSigFO{kMidIn, kLeftOut, kRightOut};
constexpr std::array kSigFOE{kMidIn, kLeftOut, kRightOut};
constexpr std::array kSigT{kMidIn};
constexpr std::array kSigArrow{kMidIn, kMidOut};
constexpr std::array kSigFRIN{kMidOut};
constexpr std::array kSigFROUT{kMidIn};

constexpr std::array<NodeKind, kNodeKindCount> kAllKinds{
    NodeKind::L,  NodeKind::A,     NodeKind::FI,   NodeKind::FO,   NodeKind::FOE,
    NodeKind::T,  NodeKind::Arrow, NodeKind::FRIN, NodeKind::FROUT};

}  // namespace

std::span<const PortSlot> port_signature(NodeKind kind) {
  switch (kind) {
    case NodeKind::L: return kSigL;
    case NodeKind::A: return kSigA;
    case NodeKind::FI: return kSigFI;
    case NodeKind::FO: return kSigFO;
    case NodeKind::FOE: return kSigFOE;
    case NodeKind::T: return kSigT;
    case NodeKind::Arrow: return kSigArrow;
    case NodeKind::FRIN: return kSigFRIN;
    case NodeKind::FROUT: return kSigFROUT;
  }
  throw std::logic_error("unknown node kind");
}

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::L: return "L";
    case NodeKind::A: return "A";
    case NodeKind::FI: return "FI";
    case NodeKind::FO: return "FO";
    case NodeKind::FOE: return "FOE";
    case NodeKind::T: return "T";
    case NodeKind::Arrow: return "Arrow";
    case NodeKind::FRIN: return "FRIN";
    case NodeKind::FROUT: return "FROUT";
  }
  throw std::logic_error("unknown node kind");
}

std::optional<NodeKind> kind_from_token(std::string_view token) {
  for (NodeKind k : kAllKinds) {
    if (kind_name(k) == token) return k;
  }
  return std::nullopt;
}

std::span<const NodeKind> all_node_kinds() { return kAllKinds; }

std::string_view direction_name(PortDirection d) {
  return d == PortDirection::In ? "in" : "out";
}

const Node* Molecule::find_node(NodeId id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Node& Molecule::node(NodeId id) const {
  const Node* n = find_node(id);
  if (!n) throw std::out_of_range("no node with id " + std::to_string(id));
  return *n;
}

const Wire& Molecule::wire(WireId id) const {
  auto it = wires_.find(id);
  if (it == wires_.end()) throw std::out_of_range("no wire with id " + std::to_string(id));
  return it->second;
}

Node& Molecule::mutable_node(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw std::out_of_range("no node with id " + std::to_string(id));
  return it->second;
}

Wire& Molecule::mutable_wire(WireId id) {
  auto it = wires_.find(id);
  if (it == wires_.end()) throw std::out_of_range("no wire with id " + std::to_string(id));
  return it->second;
}

bool Molecule::closed() const {
  for (const auto& [id, n] : nodes_) {
    for (WireId w : n.wires) {
      if (w == kNoWire) return false;
    }
  }
  for (const auto& [id, w] : wires_) {
    if (!w.source || !w.target) return false;
  }
  return true;
}

WireId Molecule::wire_at(NodeId node_id, int slot) const {
  const Node& n = node(node_id);
  return n.wires.at(static_cast<std::size_t>(slot));
}

const PortSlot& Molecule::slot_info(NodeId node_id, int slot) const {
  return port_signature(node(node_id).kind)[static_cast<std::size_t>(slot)];
}

NodeId Molecule::add_node(NodeKind kind, std::optional<std::string> label) {
  NodeId id = next_node_++;
  Node n;
  n.id = id;
  n.kind = kind;
  n.wires.assign(static_cast<std::size_t>(arity(kind)), kNoWire);
  n.label = std::move(label);
  nodes_.emplace(id, std::move(n));
  return id;
}

WireId Molecule::add_wire(std::optional<std::string> name) {
  WireId id = next_wire_++;
  Wire w;
  w.id = id;
  w.name = std::move(name);
  wires_.emplace(id, std::move(w));
  return id;
}

void Molecule::attach(WireId wire_id, NodeId node_id, int slot) {
  Node& n = mutable_node(node_id);
  Wire& w = mutable_wire(wire_id);
  const PortSlot& ps = port_signature(n.kind)[static_cast<std::size_t>(slot)];
  if (n.wires[static_cast<std::size_t>(slot)] != kNoWire)
    throw std::logic_error("slot already bound");
  auto& side = ps.direction == PortDirection::Out ? w.source : w.target;
  if (side) throw std::logic_error("wire side already bound");
  side = WireEnd{node_id, slot};
  n.wires[static_cast<std::size_t>(slot)] = wire_id;
}

void Molecule::detach_node(NodeId id) {
  Node& n = mutable_node(id);
  for (std::size_t slot = 0; slot < n.wires.size(); ++slot) {
    WireId wid = n.wires[slot];
    if (wid == kNoWire) continue;
    Wire& w = mutable_wire(wid);
    WireEnd end{id, static_cast<int>(slot)};
    if (w.source == end) w.source.reset();
    if (w.target == end) w.target.reset();
  }
  nodes_.erase(id);
}

void Molecule::detach_slot(NodeId id, int slot) {
  Node& n = mutable_node(id);
  WireId wid = n.wires.at(static_cast<std::size_t>(slot));
  if (wid == kNoWire) return;
  Wire& w = mutable_wire(wid);
  WireEnd end{id, slot};
  if (w.source == end) w.source.reset();
  if (w.target == end) w.target.reset();
  n.wires[static_cast<std::size_t>(slot)] = kNoWire;
}

void Molecule::erase_wire(WireId id) {
  const Wire& w = wire(id);
  if (w.source || w.target) throw std::logic_error("erasing a wire with live endpoints");
  wires_.erase(id);
}

void Molecule::set_wire_name(WireId id, std::optional<std::string> name) {
  mutable_wire(id).name = std::move(name);
}

MolDocument tokenize_mol(std::string_view text) {
  MolDocument doc;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = eol == std::string_view::npos ? text.substr(pos)
                                                          : text.substr(pos, eol - pos);
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    if (!tokens.empty()) {
      MolDocument::Line rec;
      rec.line_no = line_no;
      rec.kind_token = tokens.front();
      rec.ports.assign(tokens.begin() + 1, tokens.end());
      doc.lines.push_back(std::move(rec));
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return doc;
}

ValidationReport validate(const MolDocument& doc) {
  ValidationReport report;
  struct Occurrence {
    int line_no;
    PortDirection direction;
  };
  std::unordered_map<std::string, std::vector<Occurrence>> occurrences;

  for (const auto& line : doc.lines) {
    auto kind = kind_from_token(line.kind_token);
    if (!kind) {
      report.errors.push_back({line.line_no, "unknown_kind",
                               "unknown node kind '" + line.kind_token + "'"});
      continue;
    }
    auto sig = port_signature(*kind);
    if (line.ports.size() != sig.size()) {
      report.errors.push_back(
          {line.line_no, "wrong_arity",
           line.kind_token + " takes " + std::to_string(sig.size()) + " port(s), got " +
               std::to_string(line.ports.size())});
      continue;
    }
    for (std::size_t i = 0; i < line.ports.size(); ++i) {
      const std::string& var = line.ports[i];
      if (var.starts_with("%")) {
        report.errors.push_back({line.line_no, "reserved_variable",
                                 "variable '" + var + "' uses the reserved '%' prefix"});
        continue;
      }
      occurrences[var].push_back({line.line_no, sig[i].direction});
    }
  }

  // Occurrence rules: at most twice, and twice only as one in plus one out.
  std::vector<std::pair<std::string, std::vector<Occurrence>>> sorted(occurrences.begin(),
                                                                      occurrences.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second.front().line_no != b.second.front().line_no)
      return a.second.front().line_no < b.second.front().line_no;
    return a.first < b.first;
  });
  for (const auto& [var, occ] : sorted) {
    if (occ.size() > 2) {
      report.errors.push_back({occ[2].line_no, "too_many_occurrences",
                               "variable '" + var + "' appears more than twice"});
    } else if (occ.size() == 2 && occ[0].direction == occ[1].direction) {
      report.errors.push_back(
          {occ[1].line_no, "direction_clash",
           "variable '" + var + "' occupies two " +
               std::string(direction_name(occ[0].direction)) + "-slots"});
    }
  }
  return report;
}

MolParseError::MolParseError(std::string message, std::vector<ValidationIssue> issues)
    : std::runtime_error(std::move(message)), issues_(std::move(issues)) {}

namespace {

std::string format_issues(const std::vector<ValidationIssue>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << '\n';
    os << "line " << issues[i].line_no << ": " << issues[i].message;
  }
  return os.str();
}

}  // namespace

Molecule parse_mol(std::string_view text) {
  MolDocument doc = tokenize_mol(text);
  ValidationReport report = validate(doc);
  if (!report.ok()) throw MolParseError(format_issues(report.errors), report.errors);

  Molecule m;
  std::unordered_map<std::string, WireId> wires_by_var;
  for (const auto& line : doc.lines) {
    NodeKind kind = *kind_from_token(line.kind_token);
    std::optional<std::string> label;
    if (kind == NodeKind::FRIN || kind == NodeKind::FROUT) label = line.ports.front();
    NodeId node = m.add_node(kind, std::move(label));
    for (std::size_t slot = 0; slot < line.ports.size(); ++slot) {
      const std::string& var = line.ports[slot];
      auto [it, inserted] = wires_by_var.try_emplace(var, kNoWire);
      if (inserted) it->second = m.add_wire(var);
      m.attach(it->second, node, static_cast<int>(slot));
    }
  }
  return add_free_caps(m);
}

Molecule add_free_caps(const Molecule& input) {
  Molecule m = input;
  // Collect open wires in (node id, slot) order of their existing endpoint so
  // cap node ids are deterministic.
  std::vector<std::pair<WireId, PortDirection>> open;
  for (const auto& [id, n] : m.nodes()) {
    for (std::size_t slot = 0; slot < n.wires.size(); ++slot) {
      WireId wid = n.wires[slot];
      if (wid == kNoWire) continue;
      const Wire& w = m.wire(wid);
      if (!w.source) open.emplace_back(wid, PortDirection::Out);  // needs a FRIN source
      if (!w.target) open.emplace_back(wid, PortDirection::In);   // needs a FROUT sink
    }
  }
  for (const auto& [wid, missing] : open) {
    const Wire& w = m.wire(wid);
    if (missing == PortDirection::Out) {
      NodeId cap = m.add_node(NodeKind::FRIN, w.name);
      m.attach(wid, cap, 0);
    } else {
      NodeId cap = m.add_node(NodeKind::FROUT, w.name);
      m.attach(wid, cap, 0);
    }
  }
  return m;
}

std::vector<std::pair<std::string, PortDirection>> free_ports(const Molecule& m) {
  std::vector<std::pair<std::string, PortDirection>> result;
  for (const auto& [id, n] : m.nodes()) {
    if (n.kind != NodeKind::FRIN && n.kind != NodeKind::FROUT) continue;
    if (!n.label) continue;
    WireId wid = n.wires.front();
    if (wid != kNoWire) {
      const Wire& w = m.wire(wid);
      const auto& far = n.kind == NodeKind::FRIN ? w.target : w.source;
      if (far) {
        const Node& far_node = m.node(far->node);
        bool far_is_cap =
            far_node.kind == NodeKind::FRIN || far_node.kind == NodeKind::FROUT;
        // Two labelled caps wired together form a closed inert pair. An
        // unlabelled cap (created by a rewrite) does not hide its partner.
        if (far_is_cap && far_node.label) continue;
      }
    }
    result.emplace_back(*n.label, n.kind == NodeKind::FRIN ? PortDirection::In
                                                           : PortDirection::Out);
  }
  return result;
}

std::string serialize_mol(const Molecule& m) {
  std::unordered_set<std::string> used;
  std::map<WireId, std::string> names;
  // Labelled caps anchor their free-edge names, so a parse of the output
  // labels the caps the same way. FRIN names first: decompilation reads
  // free-variable names from them.
  for (NodeKind cap_kind : {NodeKind::FRIN, NodeKind::FROUT}) {
    for (const auto& [id, n] : m.nodes()) {
      if (n.kind != cap_kind) continue;
      if (!n.label || n.label->starts_with("%")) continue;
      WireId wid = n.wires.front();
      if (wid == kNoWire || names.count(wid)) continue;
      if (used.insert(*n.label).second) names.emplace(wid, *n.label);
    }
  }
  // Other wires keep their source-text names when still unique.
  for (const auto& [id, w] : m.wires()) {
    if (names.count(id)) continue;
    if (w.name && !w.name->starts_with("%") && used.insert(*w.name).second)
      names.emplace(id, *w.name);
  }
  std::uint32_t counter = 0;
  for (const auto& [id, w] : m.wires()) {
    if (names.count(id)) continue;
    std::string candidate;
    do {
      candidate = "e" + std::to_string(counter++);
    } while (used.count(candidate));
    used.insert(candidate);
    names.emplace(id, candidate);
  }

  std::ostringstream os;
  for (const auto& [id, n] : m.nodes()) {
    os << kind_name(n.kind);
    for (WireId wid : n.wires) {
      os << ' ' << (wid == kNoWire ? std::string("?") : names.at(wid));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace chemlambda
