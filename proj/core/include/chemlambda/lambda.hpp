#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chemlambda/mol.hpp"

namespace chemlambda {

/// Untyped lambda calculus syntax tree. Pure beta; no types, no eta.
struct LambdaTerm;
using TermPtr = std::shared_ptr<const LambdaTerm>;

struct LambdaTerm {
  enum class Kind : std::uint8_t { Variable, Abstraction, Application };
  Kind kind{};
  std::string name;  // variable name, or abstraction binder
  TermPtr left;      // abstraction body, or application function
  TermPtr right;     // application argument
};

TermPtr variable(std::string name);
TermPtr abstraction(std::string binder, TermPtr body);
TermPtr application(TermPtr fn, TermPtr arg);

class LambdaParseError : public std::runtime_error {
 public:
  LambdaParseError(std::string message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Grammar: variables are alphanumeric tokens; abstraction `\x.M` or `λx.M`;
/// application by juxtaposition, left-associative; parentheses group. Free
/// variables are permitted.
TermPtr parse_lambda(std::string_view text);

/// Re-parseable rendering using `λ`.
std::string print_lambda(const TermPtr& term);

/// Free variables in first-occurrence order.
std::vector<std::string> free_variables(const TermPtr& term);

bool alpha_eq(const TermPtr& a, const TermPtr& b);

struct NormalizeResult {
  TermPtr term;       // normal form, or the partial reduct on fuel exhaustion
  bool normalized = false;
  int steps = 0;
};

/// Normal-order (leftmost-outermost) capture-avoiding beta reduction, at most
/// `fuel` steps.
NormalizeResult beta_normalize(const TermPtr& term, int fuel);

/// λf.λx.fⁿ x
TermPtr church(unsigned n);

/// Term tree positions to node ids: "" for the root, then 'f'/'a' for an
/// application's function/argument and 'b' for an abstraction body. Every
/// application maps to exactly one A node, every abstraction to one L node.
using CompileMap = std::map<std::string, NodeId>;

struct CompileResult {
  Molecule molecule;
  CompileMap node_of;
};

/// Encodes a term as a molecule: applications become A nodes, abstractions L
/// nodes; a binder with no occurrence feeds a T node, one occurrence wires
/// directly, more go through a left-combed FO chain. Free variables are fed
/// from labelled FRIN caps, the root exits through a FROUT cap.
CompileResult compile_term(const TermPtr& term);
Molecule compile(const TermPtr& term);

class NotLambdaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partial inverse of compile: succeeds on molecules wired as a lambda-term
/// graph (fan-out trees rooted at binder ports or FRIN caps, exactly one
/// FROUT, termination nodes only on binder ports or as inert FRIN-fed
/// debris). Throws NotLambdaError otherwise, e.g. for any FI node.
TermPtr decompile(const Molecule& m);

/// Corpus records: one named term per line, name + tab + term text.
/// `#` comments and blank lines are skipped.
std::vector<std::pair<std::string, TermPtr>> load_corpus(std::istream& in);

}  // namespace chemlambda
