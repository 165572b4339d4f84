#include "chemlambda/lambda.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

namespace chemlambda {

TermPtr variable(std::string name) {
  auto t = std::make_shared<LambdaTerm>();
  t->kind = LambdaTerm::Kind::Variable;
  t->name = std::move(name);
  return t;
}

TermPtr abstraction(std::string binder, TermPtr body) {
  auto t = std::make_shared<LambdaTerm>();
  t->kind = LambdaTerm::Kind::Abstraction;
  t->name = std::move(binder);
  t->left = std::move(body);
  return t;
}

TermPtr application(TermPtr fn, TermPtr arg) {
  auto t = std::make_shared<LambdaTerm>();
  t->kind = LambdaTerm::Kind::Application;
  t->left = std::move(fn);
  t->right = std::move(arg);
  return t;
}

LambdaParseError::LambdaParseError(std::string message, std::size_t offset)
    : std::runtime_error(std::move(message)), offset_(offset) {}

namespace {

bool is_var_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_var_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TermPtr run() {
    TermPtr t = parse_term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw LambdaParseError("syntax error at offset " + std::to_string(pos_) + ": " + what,
                           pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool at_lambda() {
    if (pos_ >= text_.size()) return false;
    if (text_[pos_] == '\\') return true;
    // UTF-8 lambda
    return pos_ + 1 < text_.size() && static_cast<unsigned char>(text_[pos_]) == 0xCE &&
           static_cast<unsigned char>(text_[pos_ + 1]) == 0xBB;
  }

  void eat_lambda() { pos_ += text_[pos_] == '\\' ? 1 : 2; }

  std::string parse_var() {
    if (pos_ >= text_.size() || !is_var_start(text_[pos_])) fail("expected a variable");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_var_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  TermPtr parse_abstraction() {
    eat_lambda();
    skip_ws();
    std::string binder = parse_var();
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '.') fail("expected '.' after binder");
    ++pos_;
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] == ')') fail("abstraction misses a body");
    return abstraction(std::move(binder), parse_term());
  }

  TermPtr parse_atom_or_null() {
    skip_ws();
    if (pos_ >= text_.size()) return nullptr;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      TermPtr inner = parse_term();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (is_var_start(c)) return variable(parse_var());
    return nullptr;
  }

  TermPtr parse_term() {
    skip_ws();
    if (at_lambda()) return parse_abstraction();
    TermPtr acc = parse_atom_or_null();
    if (!acc) fail("expected a term");
    while (true) {
      skip_ws();
      if (at_lambda()) {  // trailing abstraction argument extends to the right
        acc = application(std::move(acc), parse_abstraction());
        return acc;
      }
      TermPtr next = parse_atom_or_null();
      if (!next) return acc;
      acc = application(std::move(acc), std::move(next));
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

enum class PrintContext { Top, Fn, Arg };

void print_into(const TermPtr& t, PrintContext ctx, std::string& out) {
  switch (t->kind) {
    case LambdaTerm::Kind::Variable:
      out += t->name;
      return;
    case LambdaTerm::Kind::Abstraction: {
      bool wrap = ctx != PrintContext::Top;
      if (wrap) out += '(';
      out += "\xce\xbb";
      out += t->name;
      out += '.';
      print_into(t->left, PrintContext::Top, out);
      if (wrap) out += ')';
      return;
    }
    case LambdaTerm::Kind::Application: {
      bool wrap = ctx == PrintContext::Arg;
      if (wrap) out += '(';
      print_into(t->left, PrintContext::Fn, out);
      out += ' ';
      print_into(t->right, PrintContext::Arg, out);
      if (wrap) out += ')';
      return;
    }
  }
}

void collect_free(const TermPtr& t, std::set<std::string>& bound,
                  std::vector<std::string>& order, std::set<std::string>& seen) {
  switch (t->kind) {
    case LambdaTerm::Kind::Variable:
      if (!bound.count(t->name) && seen.insert(t->name).second) order.push_back(t->name);
      return;
    case LambdaTerm::Kind::Abstraction: {
      bool added = bound.insert(t->name).second;
      collect_free(t->left, bound, order, seen);
      if (added) bound.erase(t->name);
      return;
    }
    case LambdaTerm::Kind::Application:
      collect_free(t->left, bound, order, seen);
      collect_free(t->right, bound, order, seen);
      return;
  }
}

std::set<std::string> free_set(const TermPtr& t) {
  std::set<std::string> bound, seen;
  std::vector<std::string> order;
  collect_free(t, bound, order, seen);
  return seen;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (unsigned n = 1;; ++n) {
    std::string candidate = base + std::to_string(n);
    if (!avoid.count(candidate)) return candidate;
  }
}

TermPtr substitute(const TermPtr& t, const std::string& name, const TermPtr& value) {
  switch (t->kind) {
    case LambdaTerm::Kind::Variable:
      return t->name == name ? value : t;
    case LambdaTerm::Kind::Application:
      return application(substitute(t->left, name, value),
                         substitute(t->right, name, value));
    case LambdaTerm::Kind::Abstraction: {
      if (t->name == name) return t;  // shadowed
      std::set<std::string> body_free = free_set(t->left);
      if (!body_free.count(name)) return t;  // nothing to do below
      std::set<std::string> value_free = free_set(value);
      if (value_free.count(t->name)) {
        // rename the binder before descending
        std::set<std::string> avoid = value_free;
        avoid.insert(body_free.begin(), body_free.end());
        avoid.insert(name);
        std::string renamed = fresh_name(t->name, avoid);
        TermPtr body = substitute(t->left, t->name, variable(renamed));
        return abstraction(renamed, substitute(body, name, value));
      }
      return abstraction(t->name, substitute(t->left, name, value));
    }
  }
  throw std::logic_error("bad term kind");
}

/// One leftmost-outermost step, or null at normal form.
TermPtr step_once(const TermPtr& t) {
  switch (t->kind) {
    case LambdaTerm::Kind::Variable:
      return nullptr;
    case LambdaTerm::Kind::Abstraction: {
      TermPtr body = step_once(t->left);
      return body ? abstraction(t->name, std::move(body)) : nullptr;
    }
    case LambdaTerm::Kind::Application: {
      if (t->left->kind == LambdaTerm::Kind::Abstraction)
        return substitute(t->left->left, t->left->name, t->right);
      if (TermPtr fn = step_once(t->left))
        return application(std::move(fn), t->right);
      if (TermPtr arg = step_once(t->right))
        return application(t->left, std::move(arg));
      return nullptr;
    }
  }
  throw std::logic_error("bad term kind");
}

bool alpha_eq_impl(const TermPtr& a, const TermPtr& b,
                   std::map<std::string, int>& env_a, std::map<std::string, int>& env_b,
                   int depth) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case LambdaTerm::Kind::Variable: {
      auto ia = env_a.find(a->name);
      auto ib = env_b.find(b->name);
      if ((ia == env_a.end()) != (ib == env_b.end())) return false;
      if (ia == env_a.end()) return a->name == b->name;  // both free
      return ia->second == ib->second;
    }
    case LambdaTerm::Kind::Abstraction: {
      auto old_a = env_a.find(a->name) == env_a.end()
                       ? std::optional<int>{}
                       : std::optional<int>{env_a[a->name]};
      auto old_b = env_b.find(b->name) == env_b.end()
                       ? std::optional<int>{}
                       : std::optional<int>{env_b[b->name]};
      env_a[a->name] = depth;
      env_b[b->name] = depth;
      bool eq = alpha_eq_impl(a->left, b->left, env_a, env_b, depth + 1);
      if (old_a) env_a[a->name] = *old_a; else env_a.erase(a->name);
      if (old_b) env_b[b->name] = *old_b; else env_b.erase(b->name);
      return eq;
    }
    case LambdaTerm::Kind::Application:
      return alpha_eq_impl(a->left, b->left, env_a, env_b, depth) &&
             alpha_eq_impl(a->right, b->right, env_a, env_b, depth);
  }
  return false;
}

}  // namespace

TermPtr parse_lambda(std::string_view text) { return Parser(text).run(); }

std::string print_lambda(const TermPtr& term) {
  std::string out;
  print_into(term, PrintContext::Top, out);
  return out;
}

std::vector<std::string> free_variables(const TermPtr& term) {
  std::set<std::string> bound, seen;
  std::vector<std::string> order;
  collect_free(term, bound, order, seen);
  return order;
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  std::map<std::string, int> env_a, env_b;
  return alpha_eq_impl(a, b, env_a, env_b, 0);
}

NormalizeResult beta_normalize(const TermPtr& term, int fuel) {
  NormalizeResult result;
  result.term = term;
  while (result.steps < fuel) {
    TermPtr next = step_once(result.term);
    if (!next) {
      result.normalized = true;
      return result;
    }
    result.term = std::move(next);
    ++result.steps;
  }
  result.normalized = step_once(result.term) == nullptr;
  return result;
}

TermPtr church(unsigned n) {
  TermPtr body = variable("x");
  for (unsigned i = 0; i < n; ++i) body = application(variable("f"), std::move(body));
  return abstraction("f", abstraction("x", std::move(body)));
}

namespace {

/// Compilation walks the tree once; variable occurrences are collected per
/// enclosing binder and wired when the binder's abstraction closes, so the
/// fan-out chains follow left-to-right body order.
class Compiler {
 public:
  CompileResult run(const TermPtr& term) {
    Source root = build(term, "");
    NodeId out_cap = m_.add_node(NodeKind::FROUT);
    connect(root, WireEnd{out_cap, 0});
    for (const std::string& name : free_order_) {
      NodeId cap = m_.add_node(NodeKind::FRIN, name);
      WireId first = fan_out(WireEnd{cap, 0}, free_occurrences_[name]);
      m_.set_wire_name(first, name);
    }
    return {std::move(m_), std::move(map_)};
  }

 private:
  // A subterm's value: either a concrete out-port or a variable occurrence
  // that the owning binder (or a free-variable cap) resolves later.
  struct Source {
    std::optional<WireEnd> port;
    std::string var;
  };

  Source build(const TermPtr& t, const std::string& path) {
    switch (t->kind) {
      case LambdaTerm::Kind::Variable:
        return {std::nullopt, t->name};
      case LambdaTerm::Kind::Abstraction: {
        NodeId node = m_.add_node(NodeKind::L);
        map_[path] = node;
        scopes_[t->name].push_back({});
        Source body = build(t->left, path + 'b');
        connect(body, WireEnd{node, 0});
        std::vector<WireEnd> occ = std::move(scopes_[t->name].back());
        scopes_[t->name].pop_back();
        if (occ.empty()) {
          NodeId sink = m_.add_node(NodeKind::T);
          link(WireEnd{node, 1}, WireEnd{sink, 0});
        } else {
          fan_out(WireEnd{node, 1}, occ);
        }
        return {WireEnd{node, 2}, ""};
      }
      case LambdaTerm::Kind::Application: {
        NodeId node = m_.add_node(NodeKind::A);
        map_[path] = node;
        Source fn = build(t->left, path + 'f');
        connect(fn, WireEnd{node, 0});
        Source arg = build(t->right, path + 'a');
        connect(arg, WireEnd{node, 1});
        return {WireEnd{node, 2}, ""};
      }
    }
    throw std::logic_error("bad term kind");
  }

  void connect(const Source& src, WireEnd in_port) {
    if (src.port) {
      link(*src.port, in_port);
      return;
    }
    auto scope = scopes_.find(src.var);
    if (scope != scopes_.end() && !scope->second.empty()) {
      scope->second.back().push_back(in_port);
    } else {
      if (!free_occurrences_.count(src.var)) free_order_.push_back(src.var);
      free_occurrences_[src.var].push_back(in_port);
    }
  }

  WireId link(WireEnd out_port, WireEnd in_port) {
    WireId w = m_.add_wire();
    m_.attach(w, out_port.node, out_port.slot);
    m_.attach(w, in_port.node, in_port.slot);
    return w;
  }

  // Left-combed chain: each FO's left branch feeds the next occurrence, the
  // right branch continues. Returns the wire leaving `source`.
  WireId fan_out(WireEnd source, const std::vector<WireEnd>& occurrences) {
    if (occurrences.size() == 1) return link(source, occurrences.front());
    WireId first = kNoWire;
    WireEnd chain = source;
    for (std::size_t i = 0; i + 1 < occurrences.size(); ++i) {
      NodeId fo = m_.add_node(NodeKind::FO);
      WireId w = link(chain, WireEnd{fo, 0});
      if (first == kNoWire) first = w;
      link(WireEnd{fo, 1}, occurrences[i]);
      chain = WireEnd{fo, 2};
    }
    link(chain, occurrences.back());
    return first;
  }

  Molecule m_;
  CompileMap map_;
  std::map<std::string, std::vector<std::vector<WireEnd>>> scopes_;
  std::vector<std::string> free_order_;
  std::map<std::string, std::vector<WireEnd>> free_occurrences_;
};

}  // namespace

CompileResult compile_term(const TermPtr& term) { return Compiler().run(term); }

Molecule compile(const TermPtr& term) { return compile_term(term).molecule; }

TermPtr decompile(const Molecule& m) {
  std::vector<NodeId> frouts;
  for (const auto& [id, n] : m.nodes()) {
    switch (n.kind) {
      case NodeKind::FI:
        throw NotLambdaError("fan-in node has no lambda correspondent");
      case NodeKind::Arrow:
        throw NotLambdaError("arrow nodes present; run a comb cycle first");
      case NodeKind::FROUT:
        frouts.push_back(id);
        break;
      default:
        break;
    }
  }
  if (frouts.size() != 1)
    throw NotLambdaError("expected exactly one FROUT, found " +
                         std::to_string(frouts.size()));
  if (!m.closed()) throw NotLambdaError("molecule is not closed");

  std::set<std::string> used_names;
  for (const auto& [id, n] : m.nodes())
    if (n.kind == NodeKind::FRIN && n.label) used_names.insert(*n.label);

  std::map<NodeId, std::string> binder_names;
  std::set<NodeId> walking;
  std::set<NodeId> reached;
  unsigned name_counter = 0;

  std::function<TermPtr(WireId)> term_of = [&](WireId wid) -> TermPtr {
    const Wire& w = m.wire(wid);
    const WireEnd src = *w.source;
    const Node& n = m.node(src.node);
    reached.insert(n.id);
    switch (n.kind) {
      case NodeKind::A: {
        if (walking.count(n.id))
          throw NotLambdaError("cyclic application/abstraction skeleton");
        walking.insert(n.id);
        TermPtr fn = term_of(n.wires[0]);
        TermPtr arg = term_of(n.wires[1]);
        walking.erase(n.id);
        return application(std::move(fn), std::move(arg));
      }
      case NodeKind::L: {
        if (src.slot == 1) {
          // binder occurrence; only valid inside the abstraction body
          if (!walking.count(n.id))
            throw NotLambdaError("binder wire escapes its abstraction");
          return variable(binder_names.at(n.id));
        }
        if (walking.count(n.id))
          throw NotLambdaError("cyclic application/abstraction skeleton");
        std::string name;
        do {
          name = "x" + std::to_string(++name_counter);
        } while (used_names.count(name));
        binder_names[n.id] = name;
        walking.insert(n.id);
        TermPtr body = term_of(n.wires[0]);
        walking.erase(n.id);
        return abstraction(std::move(name), std::move(body));
      }
      case NodeKind::FO:
      case NodeKind::FOE: {
        // fan-out leaf: resolve toward the root of the fan tree
        if (walking.count(n.id)) throw NotLambdaError("cyclic fan-out tree");
        walking.insert(n.id);
        TermPtr t = term_of(n.wires[0]);
        walking.erase(n.id);
        return t;
      }
      case NodeKind::FRIN:
        return variable(n.label ? *n.label : "f" + std::to_string(n.id));
      default:
        throw NotLambdaError("unexpected wire source " + std::string(kind_name(n.kind)));
    }
  };

  const Node& root_cap = m.node(frouts.front());
  reached.insert(root_cap.id);
  TermPtr term = term_of(root_cap.wires[0]);

  for (const auto& [id, n] : m.nodes()) {
    if (reached.count(id)) continue;
    if (n.kind != NodeKind::T && n.kind != NodeKind::FRIN)
      throw NotLambdaError("node " + std::string(kind_name(n.kind)) +
                           " unreachable from the root");
  }
  // Termination nodes may only discard a binder, or hang off a free-input
  // cap as inert debris.
  for (const auto& [id, n] : m.nodes()) {
    if (n.kind != NodeKind::T) continue;
    const WireEnd src = *m.wire(n.wires[0]).source;
    NodeKind feeder = m.node(src.node).kind;
    bool ok = (feeder == NodeKind::L && src.slot == 1) || feeder == NodeKind::FRIN;
    if (!ok)
      throw NotLambdaError("termination node not anchored to a binder port");
  }
  return term;
}

std::vector<std::pair<std::string, TermPtr>> load_corpus(std::istream& in) {
  std::vector<std::pair<std::string, TermPtr>> corpus;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("corpus line " + std::to_string(line_no) +
                               ": expected name<TAB>term");
    std::string name = line.substr(0, tab);
    try {
      corpus.emplace_back(std::move(name), parse_lambda(line.substr(tab + 1)));
    } catch (const LambdaParseError& e) {
      throw std::runtime_error("corpus line " + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return corpus;
}

}  // namespace chemlambda
