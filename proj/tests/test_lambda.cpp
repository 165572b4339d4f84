#include <doctest.h>

#include <fstream>
#include <sstream>

#include "chemlambda/analysis.hpp"
#include "chemlambda/lambda.hpp"
#include "chemlambda/scheduler.hpp"

using namespace chemlambda;

namespace {

// The oracle-side Ackermann on Church numerals: iterating the functional
// B g = \n. n g (g one) from the successor.
TermPtr ackermann_term() {
  return parse_lambda(
      "\\m.\\n.m (\\g.\\h.h g (g (\\s.\\z.s z))) (\\k.\\s.\\z.s (k s z)) n");
}

TermPtr reduce_endpoint(const TermPtr& term) {
  AlgorithmConfig cfg;
  Trace trace = reduce(compile(term), cfg);
  REQUIRE(trace.termination == Termination::Normal);
  return decompile(trace.final_molecule);
}

}  // namespace

TEST_CASE("parse_lambda handles the grammar") {
  CHECK(alpha_eq(parse_lambda("\\x.x"), abstraction("x", variable("x"))));
  CHECK(alpha_eq(parse_lambda("\xce\xbbx.x"), parse_lambda("\\x.x")));
  CHECK(alpha_eq(parse_lambda("\\f.\\x.f (f x)"), church(2)));
  // application is left-associative
  CHECK(alpha_eq(parse_lambda("a b c"),
                 application(application(variable("a"), variable("b")), variable("c"))));
  // an abstraction body extends as far right as possible
  CHECK(alpha_eq(parse_lambda("\\x.x y"),
                 abstraction("x", application(variable("x"), variable("y")))));

  CHECK_THROWS_AS(parse_lambda("\\x."), LambdaParseError);
  CHECK_THROWS_AS(parse_lambda("(a b"), LambdaParseError);
  CHECK_THROWS_AS(parse_lambda(""), LambdaParseError);
  CHECK_THROWS_AS(parse_lambda("a )"), LambdaParseError);
}

TEST_CASE("print_lambda roundtrips") {
  const char* samples[] = {"\\x.x", "\\f.\\x.f (f x)", "(\\x.x x) (\\x.x x)",
                           "\\m.\\n.m (n f) x", "f (g h) k"};
  for (const char* text : samples) {
    TermPtr t = parse_lambda(text);
    CHECK(alpha_eq(parse_lambda(print_lambda(t)), t));
  }
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(parse_lambda("\\x.x"), parse_lambda("\\y.y")));
  CHECK(!alpha_eq(parse_lambda("\\x.\\y.x"), parse_lambda("\\x.\\y.y")));
  CHECK(!alpha_eq(parse_lambda("x"), parse_lambda("y")));  // free names matter
  CHECK(alpha_eq(parse_lambda("\\x.x z"), parse_lambda("\\w.w z")));
  CHECK(!alpha_eq(parse_lambda("\\x.x"), parse_lambda("\\x.x x")));
}

TEST_CASE("church numerals") {
  CHECK(alpha_eq(church(0), parse_lambda("\\f.\\x.x")));
  CHECK(alpha_eq(church(1), parse_lambda("\\f.\\x.f x")));
  CHECK(alpha_eq(church(3), parse_lambda("\\f.\\x.f (f (f x))")));
}

TEST_CASE("beta_normalize is a normal-order reducer") {
  CHECK(alpha_eq(beta_normalize(parse_lambda("(\\x.x) y"), 10).term, variable("y")));

  // normal order ignores the diverging argument
  NormalizeResult k = beta_normalize(
      parse_lambda("(\\x.\\y.x) z ((\\x.x x) (\\x.x x))"), 100);
  CHECK(k.normalized);
  CHECK(alpha_eq(k.term, variable("z")));

  NormalizeResult omega =
      beta_normalize(parse_lambda("(\\x.x x) (\\x.x x)"), 100);
  CHECK(!omega.normalized);

  // capture avoidance: (\x.\y.x) y must not capture the free y
  NormalizeResult capture = beta_normalize(parse_lambda("(\\x.\\y.x) y"), 10);
  REQUIRE(capture.normalized);
  CHECK(capture.term->kind == LambdaTerm::Kind::Abstraction);
  CHECK(alpha_eq(capture.term, abstraction("q", variable("y"))));
}

TEST_CASE("the oracle computes Ackermann(2,2) = 7") {
  TermPtr term = application(application(ackermann_term(), church(2)), church(2));
  NormalizeResult result = beta_normalize(term, 1000000);
  REQUIRE(result.normalized);
  CHECK(alpha_eq(result.term, church(7)));
}

TEST_CASE("compile shapes: identity") {
  Molecule m = compile(parse_lambda("\\x.x"));
  CHECK(isomorphic(m, parse_mol("L a a r\nFROUT r")));
}

TEST_CASE("compile shapes: unused binder feeds a termination node") {
  Molecule m = compile(parse_lambda("\\x.\\y.x"));
  CHECK(isomorphic(m, parse_mol("L r2 xv r1\nL xv yv r2\nT yv\nFROUT r1")));
}

TEST_CASE("compile node census") {
  // #A = applications, #L = abstractions, #FO = extra occurrences, #T = dropped binders
  struct Case {
    const char* term;
    int l, a, fo, t;
  };
  const Case cases[] = {
      {"\\f.\\x.f (f x)", 2, 2, 1, 0},
      {"\\f.\\x.x", 2, 0, 0, 1},
      {"\\x.x", 1, 0, 0, 0},
      {"\\x.\\y.\\z.x z (y z)", 3, 3, 1, 0},  // one duplicated binder
  };
  for (const Case& c : cases) {
    CAPTURE(c.term);
    MoleculeStats s = stats(compile(parse_lambda(c.term)));
    CHECK(s.count(NodeKind::L) == c.l);
    CHECK(s.count(NodeKind::A) == c.a);
    CHECK(s.count(NodeKind::FO) == c.fo);
    CHECK(s.count(NodeKind::T) == c.t);
    CHECK(s.count(NodeKind::FROUT) == 1);
  }
  MoleculeStats church3 = stats(compile(church(3)));
  CHECK(church3.count(NodeKind::L) == 2);
  CHECK(church3.count(NodeKind::A) == 3);
  CHECK(church3.count(NodeKind::FO) == 2);
  CHECK(church3.count(NodeKind::FROUT) == 1);
}

TEST_CASE("compile of a normal form has no redex") {
  for (unsigned n = 0; n <= 4; ++n) CHECK(is_normal(compile(church(n))));
  CHECK(is_normal(compile(parse_lambda("\\x.\\y.\\z.x z (y z)"))));
}

TEST_CASE("free variables become labelled FRIN caps") {
  Molecule m = compile(parse_lambda("f (f x)"));
  auto ports = free_ports(m);
  REQUIRE(ports.size() == 2);  // the root cap carries no label
  CHECK(ports[0] == std::pair<std::string, PortDirection>{"f", PortDirection::In});
  CHECK(ports[1] == std::pair<std::string, PortDirection>{"x", PortDirection::In});
  MoleculeStats s = stats(m);
  CHECK(s.count(NodeKind::FRIN) == 2);
  CHECK(s.count(NodeKind::FROUT) == 1);
  CHECK(s.count(NodeKind::FO) == 1);  // f used twice
}

TEST_CASE("compile map tracks tree positions") {
  CompileResult result = compile_term(parse_lambda("(\\x.x) y"));
  REQUIRE(result.node_of.count(""));   // root application
  REQUIRE(result.node_of.count("f"));  // the abstraction
  CHECK(result.molecule.node(result.node_of.at("")).kind == NodeKind::A);
  CHECK(result.molecule.node(result.node_of.at("f")).kind == NodeKind::L);
}

TEST_CASE("decompile inverts compile up to alpha") {
  const char* corpus[] = {
      "\\x.x",
      "\\x.\\y.x",
      "\\f.\\x.f (f (f x))",
      "\\x.\\y.\\z.x z (y z)",
      "(\\x.x) y",
      "f (g x) (\\u.u)",
      "\\n.\\f.\\x.f (n f x)",
      "\\n.\\f.\\x.n (\\g.\\h.h (g f)) (\\u.x) (\\u.u)",
  };
  for (const char* text : corpus) {
    CAPTURE(text);
    TermPtr t = parse_lambda(text);
    CHECK(alpha_eq(decompile(compile(t)), t));
  }
}

TEST_CASE("decompile rejects graphs outside the lambda fragment") {
  CHECK_THROWS_AS(decompile(parse_mol("FI 1 2 3")), NotLambdaError);
  CHECK_THROWS_AS(decompile(parse_mol("Arrow a b")), NotLambdaError);
  CHECK_THROWS_AS(decompile(parse_mol("FRIN a\nT a")), NotLambdaError);  // no FROUT
  CHECK_THROWS_AS(decompile(parse_mol("FROUT a\nFROUT b")), NotLambdaError);
  // a lone capped free edge is the term `a`
  CHECK(alpha_eq(decompile(parse_mol("FRIN a")), variable("a")));
  // a fan-out anchored to an application output is not a lambda-term graph
  CHECK_THROWS_AS(decompile(parse_mol("A x y m\nFO m p q\nFROUT p")), NotLambdaError);
}

TEST_CASE("decompile tolerates inert pruning debris") {
  // a reachable term plus a FRIN-fed termination pair
  Molecule m = parse_mol("L a a r\nFROUT r\nFRIN c\nT c");
  CHECK(alpha_eq(decompile(m), parse_lambda("\\x.x")));
}

TEST_CASE("reduced endpoints decompile to the oracle's answer") {
  CHECK(alpha_eq(reduce_endpoint(parse_lambda("(\\x.x) y")), variable("y")));
  TermPtr succ2 = parse_lambda("(\\n.\\f.\\x.f (n f x)) (\\f.\\x.f (f x))");
  CHECK(alpha_eq(reduce_endpoint(succ2), church(3)));
}

TEST_CASE("corpus loader reads name-tab-term records") {
  std::istringstream in(
      "# comment line\n"
      "id\t\\x.x\n"
      "\n"
      "two\t\\f.\\x.f (f x)  # church two\n");
  auto corpus = load_corpus(in);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].first == "id");
  CHECK(alpha_eq(corpus[1].second, church(2)));

  std::istringstream bad("name-without-term\n");
  CHECK_THROWS(load_corpus(bad));
}

TEST_CASE("the shipped corpus parses and closes") {
  std::ifstream in(std::string(CHEMLAMBDA_CORPUS_DIR) + "/lambda_corpus.tsv");
  REQUIRE(in.good());
  auto corpus = load_corpus(in);
  CHECK(corpus.size() >= 20);
  for (const auto& [name, term] : corpus) {
    CAPTURE(name);
    CHECK(free_variables(term).empty());
  }
}
