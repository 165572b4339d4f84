#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chemlambda {

/// The nine node species. L and FO/FOE share a port signature, as do A and
/// FI; kind identity is never inferred from the signature.
enum class NodeKind : std::uint8_t { L, A, FI, FO, FOE, T, Arrow, FRIN, FROUT };

inline constexpr std::size_t kNodeKindCount = 9;

enum class PortPosition : std::uint8_t { Middle, Left, Right };
enum class PortDirection : std::uint8_t { In, Out };

/// A port's (position, direction) pair, fixed by the owning node's kind and
/// the port's index in the mol line.
struct PortSlot {
  PortPosition position;
  PortDirection direction;
};

/// Fixed port signature of a kind, in mol-line order.
std::span<const PortSlot> port_signature(NodeKind kind);

inline int arity(NodeKind kind) { return static_cast<int>(port_signature(kind).size()); }

std::string_view kind_name(NodeKind kind);
std::optional<NodeKind> kind_from_token(std::string_view token);
std::span<const NodeKind> all_node_kinds();

std::string_view direction_name(PortDirection d);

using NodeId = std::uint32_t;
using WireId = std::uint32_t;

inline constexpr WireId kNoWire = 0;

/// One endpoint of a wire: a node plus a slot index into its signature.
struct WireEnd {
  NodeId node = 0;
  int slot = 0;

  friend bool operator==(const WireEnd&, const WireEnd&) = default;
  friend auto operator<=>(const WireEnd&, const WireEnd&) = default;
};

struct Node {
  NodeId id = 0;
  NodeKind kind{};
  std::vector<WireId> wires;  // one entry per signature slot, kNoWire if unbound
  // Free-port name carried by FRIN/FROUT caps; parsing sets it from the port
  // variable, the lambda compiler sets it from the free variable name.
  std::optional<std::string> label;
};

/// A bond. `source` is the out-port end, `target` the in-port end; a wire
/// with a missing end belongs to an open (not yet capped) molecule.
struct Wire {
  WireId id = 0;
  std::optional<WireEnd> source;
  std::optional<WireEnd> target;
  std::optional<std::string> name;  // variable name from the source text, if any
};

/// A chemlambda molecule: nodes with kind-typed ports plus a wiring pairing
/// out-ports to in-ports. All engine operations treat molecules as immutable
/// values and return new ones; the mutating interface below exists for the
/// parser, the lambda compiler and the rewrite engine.
class Molecule {
 public:
  bool empty() const { return nodes_.empty(); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t wire_count() const { return wires_.size(); }

  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::map<WireId, Wire>& wires() const { return wires_; }

  const Node* find_node(NodeId id) const;
  const Node& node(NodeId id) const;
  const Wire& wire(WireId id) const;

  /// True when every port of every node lies on exactly one bond and every
  /// bond has both endpoints.
  bool closed() const;

  WireId wire_at(NodeId node, int slot) const;
  const PortSlot& slot_info(NodeId node, int slot) const;

  NodeId add_node(NodeKind kind, std::optional<std::string> label = std::nullopt);
  WireId add_wire(std::optional<std::string> name = std::nullopt);

  /// Binds a node slot to a wire, filling the wire's source or target side
  /// according to the slot's direction. The side must be vacant.
  void attach(WireId wire, NodeId node, int slot);

  /// Removes a node, vacating the endpoints of every wire it touched.
  /// Dangling wires are left behind for the caller to re-attach or erase.
  void detach_node(NodeId id);

  /// Vacates a single node slot and the matching wire side.
  void detach_slot(NodeId node, int slot);

  /// Erases a wire; both endpoints must already be vacant.
  void erase_wire(WireId id);

  void set_wire_name(WireId id, std::optional<std::string> name);

 private:
  Node& mutable_node(NodeId id);
  Wire& mutable_wire(WireId id);

  std::map<NodeId, Node> nodes_;
  std::map<WireId, Wire> wires_;
  NodeId next_node_ = 1;
  WireId next_wire_ = 1;
};

/// Tokenized mol document: one record per node line, source order preserved.
/// `line_no` is the 1-based line number in the original text.
struct MolDocument {
  struct Line {
    int line_no = 0;
    std::string kind_token;
    std::vector<std::string> ports;
  };
  std::vector<Line> lines;
};

struct ValidationIssue {
  int line_no = 0;
  std::string code;
  std::string message;
};

/// errors is empty if and only if the document is well-formed.
struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
};

class MolParseError : public std::runtime_error {
 public:
  MolParseError(std::string message, std::vector<ValidationIssue> issues);

  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Splits mol text into records. `#` starts a comment to end of line, blank
/// lines are skipped, tokens are whitespace-separated. Never fails: kind and
/// arity problems are the validator's business.
MolDocument tokenize_mol(std::string_view text);

/// Checks node kinds, arities and the variable occurrence rules: a variable
/// may appear at most twice, and twice only as one in-slot plus one out-slot.
/// Variables starting with '%' are reserved for the engine and rejected.
ValidationReport validate(const MolDocument& doc);

/// Parses mol text into a closed molecule. Node ids follow node-line order
/// (1-based); free ports are capped with FRIN/FROUT nodes labelled with the
/// port variable. Throws MolParseError on any validation error.
Molecule parse_mol(std::string_view text);

/// Emits one line per node in node-id order. Wire names from the source text
/// are kept when still unique; fresh wires get generated names.
std::string serialize_mol(const Molecule& m);

/// Adds a FRIN cap to every wire lacking a source and a FROUT cap to every
/// wire lacking a target, in (node id, slot) order of the existing endpoint.
/// Idempotent on closed molecules.
Molecule add_free_caps(const Molecule& m);

/// Free ports of a molecule, reported as (name, direction) for each labelled
/// FRIN/FROUT cap, in cap node-id order. A FRIN marks a free in-edge, a FROUT
/// a free out-edge. Two labelled caps wired to each other form a closed inert
/// pair and are not reported. Caps created by rewrites carry no label; they
/// are invisible to this report, both as subjects and as pair partners.
std::vector<std::pair<std::string, PortDirection>> free_ports(const Molecule& m);

}  // namespace chemlambda
