#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemlambda/mol.hpp"

namespace chemlambda {

/// The complete move catalog. Every applied rewrite carries exactly one kind.
enum class MoveKind : std::uint8_t {
  Beta,    // A-L annihilation
  FanIn,   // FI-FOE annihilation
  FoFoe,   // distribution moves
  FiFo,
  LFoe,
  LFo,
  AFoe,
  AFo,
  AT,      // pruning moves
  FiT,
  LT,
  Fo2T,
  Foe2T,
  Fo3T,
  Foe3T,
  Comb,    // arrow elimination
};

inline constexpr std::size_t kMoveKindCount = 16;

std::string_view move_name(MoveKind kind);
std::optional<MoveKind> move_from_token(std::string_view token);
std::span<const MoveKind> all_move_kinds();
/// Every kind except Comb, in catalog order.
std::span<const MoveKind> rewrite_move_kinds();

/// One line of a mol pattern. A missing kind is the wildcard node of the
/// Comb rule: any node owning an out-port on the named wire.
struct PatternLine {
  std::optional<NodeKind> kind;
  std::vector<std::string> vars;
};

struct MolPattern {
  std::vector<PatternLine> lines;
};

/// A move as data: left/right mol patterns over shared external variables.
/// Right-hand variables absent from the left are fresh internal wires.
struct RewriteRule {
  MoveKind kind{};
  MolPattern lhs;
  MolPattern rhs;
};

/// All 16 rules, directed left-to-right. The LT rule ships in two variants:
/// the default terminates the body input and gives the orphaned binder edge
/// a free source; `lt_literal` selects the variant that also emits a
/// disconnected T/FRIN pair and leaves the binder edge to be re-capped.
const std::vector<RewriteRule>& rule_table(bool lt_literal = false);
const RewriteRule& rule_for(MoveKind kind, bool lt_literal = false);

/// Catalog record: "NAME: lhs-line / lhs-line => rhs-line / rhs-line".
std::string format_rule(const RewriteRule& rule);
RewriteRule parse_rule_record(std::string_view record);

/// A concrete occurrence of a rule's lhs: the bound node ids in lhs line
/// order plus the binding of pattern variables to molecule wires. Distinct
/// pattern variables may alias the same wire.
struct Match {
  MoveKind kind{};
  std::vector<NodeId> nodes;
  std::map<std::string, WireId> bindings;
};

class RewriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every occurrence of the kind's lhs in `m`, in canonical order (sorted by
/// the tuple of bound node ids). Overlapping matches are all reported;
/// conflict resolution belongs to the scheduler.
std::vector<Match> find_matches(const Molecule& m, MoveKind kind);

/// Applies one move, returning a new molecule. Matched nodes are removed,
/// rhs nodes inserted with fresh ids, external wires reconnected in place and
/// fresh internal wires created; everything else is untouched. The match is
/// re-verified first and a RewriteError is thrown when it is stale.
Molecule apply_move(const Molecule& m, const Match& match, bool lt_literal = false);

/// Exhaustive Arrow elimination: repeatedly rewires any Arrow whose in-port
/// is fed by a non-Arrow out-port, until none is left. Pure Arrow loops
/// survive. Returns the result and the number of Comb applications.
std::pair<Molecule, int> comb_cycle_counted(const Molecule& m);
Molecule comb_cycle(const Molecule& m);

}  // namespace chemlambda
