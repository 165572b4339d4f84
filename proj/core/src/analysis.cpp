#include "chemlambda/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chemlambda {

namespace {

/// Canonical labelling of one connected component by colour refinement plus
/// individualization on ties. Backtracking is exhaustive; components at the
/// sizes this engine targets keep the tie cells small.
class Canonicalizer {
 public:
  Canonicalizer(const Molecule& m, const std::vector<NodeId>& component) {
    ids_ = component;
    for (std::size_t i = 0; i < ids_.size(); ++i) index_of_[ids_[i]] = static_cast<int>(i);
    kinds_.reserve(ids_.size());
    adjacency_.resize(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      const Node& n = m.node(ids_[i]);
      kinds_.push_back(static_cast<int>(n.kind));
      adjacency_[i].resize(n.wires.size());
      for (std::size_t slot = 0; slot < n.wires.size(); ++slot) {
        const Wire& w = m.wire(n.wires[slot]);
        WireEnd self{ids_[i], static_cast<int>(slot)};
        WireEnd other = *w.source == self ? *w.target : *w.source;
        adjacency_[i][slot] = {index_of_.at(other.node), other.slot};
      }
    }
  }

  /// Canonical node order plus the component-local text used for sorting.
  std::pair<std::string, std::vector<NodeId>> run() {
    std::vector<int> colors(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) colors[i] = kinds_[i];
    auto [text, order] = canon(std::move(colors));
    std::vector<NodeId> ordered;
    ordered.reserve(order.size());
    for (int idx : order) ordered.push_back(ids_[static_cast<std::size_t>(idx)]);
    return {std::move(text), std::move(ordered)};
  }

 private:
  std::vector<int> refine(std::vector<int> colors) const {
    while (true) {
      std::vector<std::vector<int>> sigs(colors.size());
      for (std::size_t i = 0; i < colors.size(); ++i) {
        std::vector<int>& sig = sigs[i];
        sig.push_back(colors[i]);
        for (const auto& [nbr, nbr_slot] : adjacency_[i]) {
          sig.push_back(colors[static_cast<std::size_t>(nbr)]);
          sig.push_back(nbr_slot);
        }
      }
      std::vector<std::vector<int>> unique_sigs = sigs;
      std::sort(unique_sigs.begin(), unique_sigs.end());
      unique_sigs.erase(std::unique(unique_sigs.begin(), unique_sigs.end()),
                        unique_sigs.end());
      std::vector<int> next(colors.size());
      for (std::size_t i = 0; i < colors.size(); ++i) {
        next[i] = static_cast<int>(
            std::lower_bound(unique_sigs.begin(), unique_sigs.end(), sigs[i]) -
            unique_sigs.begin());
      }
      if (next == colors) return colors;
      colors = std::move(next);
    }
  }

  std::pair<std::string, std::vector<int>> canon(std::vector<int> colors) const {
    colors = refine(std::move(colors));
    std::map<int, std::vector<int>> classes;
    for (std::size_t i = 0; i < colors.size(); ++i)
      classes[colors[i]].push_back(static_cast<int>(i));
    const std::vector<int>* tie = nullptr;
    for (const auto& [color, members] : classes) {
      if (members.size() > 1) {
        tie = &members;
        break;
      }
    }
    if (!tie) {
      std::vector<int> order(colors.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return colors[static_cast<std::size_t>(a)] < colors[static_cast<std::size_t>(b)];
      });
      return {render(order), order};
    }
    std::pair<std::string, std::vector<int>> best;
    for (int member : *tie) {
      std::vector<int> split = colors;
      split[static_cast<std::size_t>(member)] = static_cast<int>(colors.size()) + 1;
      auto candidate = canon(std::move(split));
      if (best.first.empty() || candidate.first < best.first) best = std::move(candidate);
    }
    return best;
  }

  std::string render(const std::vector<int>& order) const {
    std::vector<int> position(order.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank)
      position[static_cast<std::size_t>(order[rank])] = static_cast<int>(rank);

    std::map<std::pair<int, int>, std::string> pending;  // partner end -> name
    int counter = 0;
    std::ostringstream os;
    for (int idx : order) {
      const auto& adj = adjacency_[static_cast<std::size_t>(idx)];
      os << kind_name(static_cast<NodeKind>(kinds_[static_cast<std::size_t>(idx)]));
      for (std::size_t slot = 0; slot < adj.size(); ++slot) {
        std::pair<int, int> self{position[static_cast<std::size_t>(idx)],
                                 static_cast<int>(slot)};
        std::pair<int, int> other{position[static_cast<std::size_t>(adj[slot].first)],
                                  adj[slot].second};
        std::string name;
        if (auto it = pending.find(self); it != pending.end()) {
          name = it->second;
        } else {
          name = "w" + std::to_string(counter++);
          pending.emplace(other, name);
        }
        os << ' ' << name;
      }
      os << '\n';
    }
    return os.str();
  }

  std::vector<NodeId> ids_;
  std::map<NodeId, int> index_of_;
  std::vector<int> kinds_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

std::vector<std::vector<NodeId>> connected_components(const Molecule& m) {
  std::set<NodeId> seen;
  std::vector<std::vector<NodeId>> components;
  for (const auto& [start, unused] : m.nodes()) {
    if (seen.count(start)) continue;
    std::vector<NodeId> stack{start};
    std::vector<NodeId> component;
    seen.insert(start);
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      component.push_back(id);
      for (WireId wid : m.node(id).wires) {
        const Wire& w = m.wire(wid);
        for (const auto& end : {w.source, w.target}) {
          if (end && seen.insert(end->node).second) stack.push_back(end->node);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

/// Renders a whole molecule in the given node order with one global wire
/// namespace; the result re-parses as mol text.
std::string render_global(const Molecule& m, const std::vector<NodeId>& order) {
  std::map<NodeId, int> position;
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    position[order[rank]] = static_cast<int>(rank);

  std::map<std::pair<int, int>, std::string> pending;
  int counter = 0;
  std::ostringstream os;
  for (NodeId id : order) {
    const Node& n = m.node(id);
    os << kind_name(n.kind);
    for (std::size_t slot = 0; slot < n.wires.size(); ++slot) {
      const Wire& w = m.wire(n.wires[slot]);
      WireEnd self_end{id, static_cast<int>(slot)};
      WireEnd other_end = *w.source == self_end ? *w.target : *w.source;
      std::pair<int, int> self{position.at(id), static_cast<int>(slot)};
      std::pair<int, int> other{position.at(other_end.node), other_end.slot};
      std::string name;
      if (auto it = pending.find(self); it != pending.end()) {
        name = it->second;
      } else {
        name = "w" + std::to_string(counter++);
        pending.emplace(other, name);
      }
      os << ' ' << name;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

CanonicalForm canonical_form(const Molecule& m) {
  if (m.empty()) return {};
  if (!m.closed())
    throw std::invalid_argument("canonical_form requires a closed molecule");

  std::vector<std::pair<std::string, std::vector<NodeId>>> parts;
  for (const auto& component : connected_components(m))
    parts.push_back(Canonicalizer(m, component).run());
  std::sort(parts.begin(), parts.end());

  std::vector<NodeId> order;
  order.reserve(m.node_count());
  for (const auto& [text, ids] : parts) order.insert(order.end(), ids.begin(), ids.end());
  return render_global(m, order);
}

bool isomorphic(const Molecule& a, const Molecule& b) {
  if (a.node_count() != b.node_count() || a.wire_count() != b.wire_count()) return false;
  return canonical_form(a) == canonical_form(b);
}

MoleculeStats stats(const Molecule& m) {
  MoleculeStats s;
  for (const auto& [id, n] : m.nodes()) ++s.kind_counts[n.kind];
  s.bonds = static_cast<int>(m.wire_count());
  s.free_ports = static_cast<int>(free_ports(m).size());

  // Cycles of the partial map Arrow -> Arrow along out-wires.
  std::map<NodeId, NodeId> next;
  for (const auto& [id, n] : m.nodes()) {
    if (n.kind != NodeKind::Arrow) continue;
    const Wire& out = m.wire(n.wires[1]);
    if (!out.target) continue;
    const Node& to = m.node(out.target->node);
    if (to.kind == NodeKind::Arrow) next[id] = to.id;
  }
  std::set<NodeId> done;
  for (const auto& [start, unused] : next) {
    if (done.count(start)) continue;
    std::vector<NodeId> path;
    std::set<NodeId> on_path;
    NodeId cur = start;
    while (true) {
      path.push_back(cur);
      on_path.insert(cur);
      auto it = next.find(cur);
      if (it == next.end() || done.count(it->second)) break;
      cur = it->second;
      if (on_path.count(cur)) {
        ++s.arrow_loops;
        break;
      }
    }
    done.insert(path.begin(), path.end());
  }
  return s;
}

QuineReport detect_quine(const Molecule& m, const AlgorithmConfig& cfg, int max_period) {
  if (cfg.variant != SchedulerVariant::Deterministic)
    throw std::invalid_argument("quine detection is defined against the deterministic step");
  if (max_period <= 0) throw std::invalid_argument("max_period must be positive");

  QuineReport report;
  Molecule cur = m;
  for (int period = 1; period <= max_period; ++period) {
    auto [next, step] = step_deterministic(cur, cfg);
    step.cycle = period - 1;
    bool applied_any = !step.applied.empty();
    report.witness_steps.push_back(std::move(step));
    report.period_checked = period;
    cur = std::move(next);
    if (!applied_any) return report;  // inert from here on; not a quine
    if (isomorphic(cur, m)) {
      report.is_quine = true;
      return report;
    }
  }
  return report;
}

}  // namespace chemlambda
