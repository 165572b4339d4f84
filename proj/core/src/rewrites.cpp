#include "chemlambda/rewrites.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <sstream>

namespace chemlambda {

namespace {

constexpr std::array<MoveKind, kMoveKindCount> kAllMoves{
    MoveKind::Beta, MoveKind::FanIn, MoveKind::FoFoe, MoveKind::FiFo,
    MoveKind::LFoe, MoveKind::LFo,   MoveKind::AFoe,  MoveKind::AFo,
    MoveKind::AT,   MoveKind::FiT,   MoveKind::LT,    MoveKind::Fo2T,
    MoveKind::Foe2T, MoveKind::Fo3T, MoveKind::Foe3T, MoveKind::Comb};

constexpr std::array<MoveKind, kMoveKindCount - 1> kRewriteMoves{
    MoveKind::Beta, MoveKind::FanIn, MoveKind::FoFoe, MoveKind::FiFo,
    MoveKind::LFoe, MoveKind::LFo,   MoveKind::AFoe,  MoveKind::AFo,
    MoveKind::AT,   MoveKind::FiT,   MoveKind::LT,    MoveKind::Fo2T,
    MoveKind::Foe2T, MoveKind::Fo3T, MoveKind::Foe3T};

struct RuleSpec {
  MoveKind kind;
  const char* lhs;
  const char* rhs;
};

// The move catalog in mol pattern syntax. "M" is the wildcard of the Comb
// rule: any node owning an out-port on the named wire. Lower-case variables
// appearing only on the right are fresh internal wires.
constexpr RuleSpec kCatalog[] = {
    {MoveKind::Beta, "L 1 2 c / A c 4 3", "Arrow 1 3 / Arrow 4 2"},
    {MoveKind::FanIn, "FI 1 4 c / FOE c 2 3", "Arrow 1 3 / Arrow 4 2"},
    {MoveKind::FoFoe, "FO 1 2 c / FOE c 3 4", "FI j i 2 / FO k i 3 / FO l j 4 / FOE 1 k l"},
    {MoveKind::FiFo, "FI 1 4 c / FO c 2 3", "FO 1 i j / FI i k 2 / FI j l 3 / FO 4 k l"},
    {MoveKind::LFoe, "L 1 2 c / FOE c 3 4", "FI j i 2 / L k i 3 / L l j 4 / FOE 1 k l"},
    {MoveKind::LFo, "L 1 2 c / FO c 3 4", "FI j i 2 / L k i 3 / L l j 4 / FOE 1 k l"},
    {MoveKind::AFoe, "A 1 4 c / FOE c 2 3", "FOE 1 i j / A i k 2 / A j l 3 / FOE 4 k l"},
    {MoveKind::AFo, "A 1 4 c / FO c 2 3", "FOE 1 i j / A i k 2 / A j l 3 / FOE 4 k l"},
    {MoveKind::AT, "A 1 2 3 / T 3", "T 1 / T 2"},
    {MoveKind::FiT, "FI 1 2 3 / T 3", "T 1 / T 2"},
    {MoveKind::LT, "L 1 2 3 / T 3", "T 1 / FRIN 2"},
    {MoveKind::Fo2T, "FO 1 2 3 / T 2", "Arrow 1 3"},
    {MoveKind::Foe2T, "FOE 1 2 3 / T 2", "Arrow 1 3"},
    {MoveKind::Fo3T, "FO 1 2 3 / T 3", "Arrow 1 2"},
    {MoveKind::Foe3T, "FOE 1 2 3 / T 3", "Arrow 1 2"},
    {MoveKind::Comb, "M 1 / Arrow 1 2", "M 2"},
};

// As printed: drops the binder edge (re-capped on application) and emits a
// disconnected T/FRIN pair.
constexpr const char* kLtLiteralRhs = "T 1 / T c / FRIN c";

constexpr const char* kWildcardToken = "M";

std::vector<std::string> split(std::string_view text, std::string_view sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      parts.emplace_back(text.substr(pos));
      return parts;
    }
    parts.emplace_back(text.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

MolPattern parse_pattern(std::string_view text) {
  MolPattern pattern;
  for (const std::string& raw : split(text, "/")) {
    std::istringstream is(raw);
    std::string token;
    PatternLine line;
    bool first = true;
    while (is >> token) {
      if (first) {
        first = false;
        if (token == kWildcardToken) {
          line.kind = std::nullopt;
        } else {
          auto kind = kind_from_token(token);
          if (!kind) throw RewriteError("bad pattern kind token '" + token + "'");
          line.kind = kind;
        }
      } else {
        line.vars.push_back(token);
      }
    }
    if (first) throw RewriteError("empty pattern line");
    if (line.kind && line.vars.size() != static_cast<std::size_t>(arity(*line.kind)))
      throw RewriteError("pattern arity mismatch for " + std::string(kind_name(*line.kind)));
    pattern.lines.push_back(std::move(line));
  }
  return pattern;
}

std::vector<RewriteRule> build_table(bool lt_literal) {
  std::vector<RewriteRule> rules;
  for (const RuleSpec& spec : kCatalog) {
    RewriteRule rule;
    rule.kind = spec.kind;
    rule.lhs = parse_pattern(spec.lhs);
    const char* rhs = spec.kind == MoveKind::LT && lt_literal ? kLtLiteralRhs : spec.rhs;
    rule.rhs = parse_pattern(rhs);
    rules.push_back(std::move(rule));
  }
  return rules;
}

/// Node-count and Arrow-count change of one application, checked after every
/// apply_move.
struct MoveDeltas {
  int nodes;
  int arrows;
};

MoveDeltas expected_deltas(MoveKind kind, bool lt_literal) {
  switch (kind) {
    case MoveKind::Beta:
    case MoveKind::FanIn:
      return {0, +2};
    case MoveKind::FoFoe:
    case MoveKind::FiFo:
    case MoveKind::LFoe:
    case MoveKind::LFo:
    case MoveKind::AFoe:
    case MoveKind::AFo:
      return {+2, 0};
    case MoveKind::AT:
    case MoveKind::FiT:
      return {0, 0};
    case MoveKind::LT:
      return lt_literal ? MoveDeltas{+2, 0} : MoveDeltas{0, 0};
    case MoveKind::Fo2T:
    case MoveKind::Foe2T:
    case MoveKind::Fo3T:
    case MoveKind::Foe3T:
      return {-1, +1};
    case MoveKind::Comb:
      return {-1, -1};
  }
  throw std::logic_error("unknown move kind");
}

int arrow_count(const Molecule& m) {
  int n = 0;
  for (const auto& [id, node] : m.nodes())
    if (node.kind == NodeKind::Arrow) ++n;
  return n;
}

/// Re-verifies a match against a molecule and returns the canonical binding
/// of lhs pattern variables to wires. Throws a RewriteError when the match is
/// stale or inconsistent.
std::map<std::string, WireId> verify_match(const Molecule& m, const RewriteRule& rule,
                                           const Match& match) {
  if (match.kind != rule.kind) throw RewriteError("match/rule kind mismatch");
  if (match.nodes.size() != rule.lhs.lines.size())
    throw RewriteError("match binds wrong number of nodes");
  for (std::size_t i = 0; i < match.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < match.nodes.size(); ++j)
      if (match.nodes[i] == match.nodes[j])
        throw RewriteError("match binds the same node twice");

  std::map<std::string, WireId> bindings;
  for (std::size_t i = 0; i < rule.lhs.lines.size(); ++i) {
    const PatternLine& line = rule.lhs.lines[i];
    const Node* n = m.find_node(match.nodes[i]);
    if (!n) throw RewriteError("stale match: node gone");
    if (line.kind) {
      if (n->kind != *line.kind) throw RewriteError("stale match: node kind changed");
      for (std::size_t slot = 0; slot < line.vars.size(); ++slot) {
        auto declared = match.bindings.find(line.vars[slot]);
        if (declared == match.bindings.end())
          throw RewriteError("match misses a binding");
        if (n->wires[slot] != declared->second)
          throw RewriteError("stale match: wiring changed");
        auto [it, inserted] = bindings.try_emplace(line.vars[slot], n->wires[slot]);
        if (!inserted && it->second != n->wires[slot])
          throw RewriteError("stale match: pattern bond broken");
      }
    } else {
      // Wildcard: the node must own the out-port of the bound wire.
      auto declared = match.bindings.find(line.vars.front());
      if (declared == match.bindings.end()) throw RewriteError("match misses a binding");
      const Wire& w = m.wire(declared->second);
      if (!w.source || w.source->node != n->id)
        throw RewriteError("stale match: wildcard port moved");
      bindings[line.vars.front()] = declared->second;
    }
  }
  return bindings;
}

Molecule apply_comb(const Molecule& m, const RewriteRule& rule, const Match& match) {
  verify_match(m, rule, match);
  NodeId holder = match.nodes[0];
  NodeId arrow = match.nodes[1];
  WireId in_wire = match.bindings.at("1");
  WireId out_wire = match.bindings.at("2");

  Molecule out = m;
  int slot = out.wire(in_wire).source->slot;
  out.detach_slot(holder, slot);
  out.detach_node(arrow);
  out.attach(out_wire, holder, slot);
  // The two wires merge; keep a source-text name if the survivor has none.
  if (!out.wire(out_wire).name && out.wire(in_wire).name)
    out.set_wire_name(out_wire, out.wire(in_wire).name);
  out.erase_wire(in_wire);
  return out;
}

}  // namespace

std::string_view move_name(MoveKind kind) {
  switch (kind) {
    case MoveKind::Beta: return "BETA";
    case MoveKind::FanIn: return "FAN_IN";
    case MoveKind::FoFoe: return "FO_FOE";
    case MoveKind::FiFo: return "FI_FO";
    case MoveKind::LFoe: return "L_FOE";
    case MoveKind::LFo: return "L_FO";
    case MoveKind::AFoe: return "A_FOE";
    case MoveKind::AFo: return "A_FO";
    case MoveKind::AT: return "A_T";
    case MoveKind::FiT: return "FI_T";
    case MoveKind::LT: return "L_T";
    case MoveKind::Fo2T: return "FO2_T";
    case MoveKind::Foe2T: return "FOE2_T";
    case MoveKind::Fo3T: return "FO3_T";
    case MoveKind::Foe3T: return "FOE3_T";
    case MoveKind::Comb: return "COMB";
  }
  throw std::logic_error("unknown move kind");
}

std::optional<MoveKind> move_from_token(std::string_view token) {
  for (MoveKind k : kAllMoves)
    if (move_name(k) == token) return k;
  return std::nullopt;
}

std::span<const MoveKind> all_move_kinds() { return kAllMoves; }

std::span<const MoveKind> rewrite_move_kinds() { return kRewriteMoves; }

const std::vector<RewriteRule>& rule_table(bool lt_literal) {
  static const std::vector<RewriteRule> corrected = build_table(false);
  static const std::vector<RewriteRule> literal = build_table(true);
  return lt_literal ? literal : corrected;
}

const RewriteRule& rule_for(MoveKind kind, bool lt_literal) {
  for (const RewriteRule& rule : rule_table(lt_literal))
    if (rule.kind == kind) return rule;
  throw std::logic_error("move kind missing from catalog");
}

std::string format_rule(const RewriteRule& rule) {
  auto render = [](const MolPattern& pattern) {
    std::ostringstream os;
    for (std::size_t i = 0; i < pattern.lines.size(); ++i) {
      if (i) os << " / ";
      const PatternLine& line = pattern.lines[i];
      os << (line.kind ? kind_name(*line.kind) : std::string_view(kWildcardToken));
      for (const std::string& var : line.vars) os << ' ' << var;
    }
    return os.str();
  };
  std::ostringstream os;
  os << move_name(rule.kind) << ": " << render(rule.lhs) << " => " << render(rule.rhs);
  return os.str();
}

RewriteRule parse_rule_record(std::string_view record) {
  std::size_t colon = record.find(':');
  if (colon == std::string_view::npos) throw RewriteError("rule record misses ':'");
  auto kind = move_from_token(trim(record.substr(0, colon)));
  if (!kind) throw RewriteError("unknown move name in rule record");
  std::string_view rest = record.substr(colon + 1);
  std::size_t sep = rest.find("=>");
  if (sep == std::string_view::npos) throw RewriteError("rule record misses '=>'");
  RewriteRule rule;
  rule.kind = *kind;
  rule.lhs = parse_pattern(trim(rest.substr(0, sep)));
  rule.rhs = parse_pattern(trim(rest.substr(sep + 2)));
  return rule;
}

std::vector<Match> find_matches(const Molecule& m, MoveKind kind) {
  std::vector<Match> matches;
  if (kind == MoveKind::Comb) {
    for (const auto& [id, n] : m.nodes()) {
      auto sig = port_signature(n.kind);
      for (std::size_t slot = 0; slot < sig.size(); ++slot) {
        if (sig[slot].direction != PortDirection::Out) continue;
        WireId wid = n.wires[slot];
        if (wid == kNoWire) continue;
        const Wire& w = m.wire(wid);
        if (!w.target) continue;
        const Node& cand = m.node(w.target->node);
        if (cand.kind != NodeKind::Arrow || w.target->slot != 0) continue;
        if (cand.id == id) continue;
        Match match;
        match.kind = kind;
        match.nodes = {id, cand.id};
        match.bindings = {{"1", wid}, {"2", cand.wires[1]}};
        matches.push_back(std::move(match));
      }
    }
  } else {
    const RewriteRule& rule = rule_for(kind, false);  // lhs is variant-independent
    const PatternLine& first = rule.lhs.lines[0];
    const PatternLine& second = rule.lhs.lines[1];
    // The connecting bond: first variable shared by both lines.
    std::size_t link_slot = 0;
    std::string link_var;
    for (std::size_t s = 0; s < second.vars.size() && link_var.empty(); ++s) {
      if (std::find(first.vars.begin(), first.vars.end(), second.vars[s]) !=
          first.vars.end()) {
        link_var = second.vars[s];
        link_slot = s;
      }
    }
    assert(!link_var.empty());
    auto second_sig = port_signature(*second.kind);

    for (const auto& [id, n] : m.nodes()) {
      if (n.kind != *first.kind) continue;
      std::map<std::string, WireId> bindings;
      for (std::size_t slot = 0; slot < first.vars.size(); ++slot)
        bindings[first.vars[slot]] = n.wires[slot];

      const Wire& link = m.wire(bindings[link_var]);
      const auto& far = second_sig[link_slot].direction == PortDirection::In
                            ? link.target
                            : link.source;
      if (!far || far->slot != static_cast<int>(link_slot)) continue;
      if (far->node == id) continue;
      const Node& cand = m.node(far->node);
      if (cand.kind != *second.kind) continue;

      bool ok = true;
      for (std::size_t slot = 0; slot < second.vars.size() && ok; ++slot) {
        auto [it, inserted] = bindings.try_emplace(second.vars[slot], cand.wires[slot]);
        if (!inserted && it->second != cand.wires[slot]) ok = false;
      }
      if (!ok) continue;
      Match match;
      match.kind = kind;
      match.nodes = {id, cand.id};
      match.bindings = std::move(bindings);
      matches.push_back(std::move(match));
    }
  }
  std::sort(matches.begin(), matches.end(),
            [](const Match& a, const Match& b) { return a.nodes < b.nodes; });
  return matches;
}

Molecule apply_move(const Molecule& m, const Match& match, bool lt_literal) {
  if (!m.closed()) throw RewriteError("apply_move requires a closed molecule");
  const RewriteRule& rule = rule_for(match.kind, lt_literal);

  const auto ports_before = free_ports(m);
  const int nodes_before = static_cast<int>(m.node_count());
  const int arrows_before = arrow_count(m);

  Molecule out;
  if (match.kind == MoveKind::Comb) {
    out = apply_comb(m, rule, match);
  } else {
    std::map<std::string, WireId> wires = verify_match(m, rule, match);
    out = m;
    for (NodeId id : match.nodes) out.detach_node(id);
    for (const PatternLine& line : rule.rhs.lines) {
      NodeId id = out.add_node(*line.kind);
      for (std::size_t slot = 0; slot < line.vars.size(); ++slot) {
        auto [it, inserted] = wires.try_emplace(line.vars[slot], kNoWire);
        if (inserted) it->second = out.add_wire();
        out.attach(it->second, id, static_cast<int>(slot));
      }
    }

    // Sweep: erase bonds that were internal to the pattern, cap any endpoint
    // the rhs left dangling (the literal LT variant drops the binder edge).
    std::vector<WireId> gone;
    std::vector<std::pair<WireId, NodeKind>> caps;
    for (const auto& [wid, w] : out.wires()) {
      if (!w.source && !w.target) gone.push_back(wid);
      else if (!w.source) caps.emplace_back(wid, NodeKind::FRIN);
      else if (!w.target) caps.emplace_back(wid, NodeKind::FROUT);
    }
    for (WireId wid : gone) out.erase_wire(wid);
    for (const auto& [wid, kind] : caps) out.attach(wid, out.add_node(kind), 0);
  }

  if (!out.closed()) throw RewriteError("apply_move produced an open molecule");

  const MoveDeltas deltas = expected_deltas(match.kind, lt_literal);
  if (static_cast<int>(out.node_count()) - nodes_before != deltas.nodes)
    throw RewriteError("node-count delta violated for " +
                       std::string(move_name(match.kind)));
  if (arrow_count(out) - arrows_before != deltas.arrows)
    throw RewriteError("arrow-count delta violated for " +
                       std::string(move_name(match.kind)));
  if (match.kind != MoveKind::Comb && free_ports(out) != ports_before)
    throw RewriteError("free ports not preserved by " +
                       std::string(move_name(match.kind)));
  return out;
}

std::pair<Molecule, int> comb_cycle_counted(const Molecule& m) {
  Molecule cur = m;
  int count = 0;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [id, n] : cur.nodes()) {
      if (n.kind != NodeKind::Arrow) continue;
      const Wire& in_wire = cur.wire(n.wires[0]);
      if (!in_wire.source) continue;
      const Node& feeder = cur.node(in_wire.source->node);
      if (feeder.kind == NodeKind::Arrow) continue;  // deferred, or a pure loop
      Match match;
      match.kind = MoveKind::Comb;
      match.nodes = {feeder.id, id};
      match.bindings = {{"1", n.wires[0]}, {"2", n.wires[1]}};
      cur = apply_move(cur, match);
      ++count;
      progress = true;
      break;
    }
  }
  return {std::move(cur), count};
}

Molecule comb_cycle(const Molecule& m) { return comb_cycle_counted(m).first; }

}  // namespace chemlambda
