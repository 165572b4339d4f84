#include <doctest.h>

#include <algorithm>

#include "chemlambda/analysis.hpp"
#include "chemlambda/mol.hpp"
#include "support/generators.hpp"

using namespace chemlambda;

TEST_CASE("port signatures match the node catalog") {
  auto sig_l = port_signature(NodeKind::L);
  REQUIRE(sig_l.size() == 3);
  CHECK(sig_l[0].position == PortPosition::Middle);
  CHECK(sig_l[0].direction == PortDirection::In);
  CHECK(sig_l[1].position == PortPosition::Left);
  CHECK(sig_l[1].direction == PortDirection::Out);
  CHECK(sig_l[2].position == PortPosition::Right);
  CHECK(sig_l[2].direction == PortDirection::Out);

  auto sig_a = port_signature(NodeKind::A);
  CHECK(sig_a[0].position == PortPosition::Left);
  CHECK(sig_a[0].direction == PortDirection::In);
  CHECK(sig_a[1].position == PortPosition::Right);
  CHECK(sig_a[1].direction == PortDirection::In);
  CHECK(sig_a[2].position == PortPosition::Middle);
  CHECK(sig_a[2].direction == PortDirection::Out);

  CHECK(arity(NodeKind::Arrow) == 2);
  CHECK(arity(NodeKind::T) == 1);
  CHECK(arity(NodeKind::FRIN) == 1);
  CHECK(arity(NodeKind::FROUT) == 1);

  // same signature, distinct kinds
  CHECK(kind_from_token("L") != kind_from_token("FO"));
  CHECK(kind_from_token("A") != kind_from_token("FI"));
  CHECK(!kind_from_token("l"));  // tokens are case-sensitive
  CHECK(!kind_from_token("FOO"));
}

TEST_CASE("parse_mol caps free ports and keeps line order") {
  Molecule m = parse_mol("L 1 2 c\nA c 4 3");
  CHECK(m.node_count() == 6);  // L, A + four caps
  CHECK(m.closed());

  const Node& l = m.node(1);
  const Node& a = m.node(2);
  CHECK(l.kind == NodeKind::L);
  CHECK(a.kind == NodeKind::A);
  // the c bond runs from L.right.out to A.left.in
  CHECK(l.wires[2] == a.wires[0]);

  auto ports = free_ports(m);
  REQUIRE(ports.size() == 4);
  CHECK(ports[0] == std::pair<std::string, PortDirection>{"1", PortDirection::In});
  CHECK(ports[1] == std::pair<std::string, PortDirection>{"2", PortDirection::Out});
  CHECK(ports[2] == std::pair<std::string, PortDirection>{"4", PortDirection::In});
  CHECK(ports[3] == std::pair<std::string, PortDirection>{"3", PortDirection::Out});
}

TEST_CASE("parse_mol accepts comments, blank lines and an Arrow at rest") {
  Molecule m = parse_mol("# a comment\n\nArrow a b  # trailing\n");
  CHECK(m.node_count() == 3);  // Arrow + FRIN + FROUT
  CHECK(m.closed());
}

TEST_CASE("parse_mol on empty input gives the empty molecule") {
  Molecule m = parse_mol("");
  CHECK(m.empty());
  CHECK(serialize_mol(m).empty());
}

TEST_CASE("parse_mol rejects malformed documents") {
  CHECK_THROWS_AS(parse_mol("A 1 1 2"), MolParseError);      // two in-slots
  CHECK_THROWS_AS(parse_mol("A 1 2"), MolParseError);        // arity
  CHECK_THROWS_AS(parse_mol("Q 1 2 3"), MolParseError);      // unknown kind
  CHECK_THROWS_AS(parse_mol("T a\nFRIN a\nFRIN a"), MolParseError);  // three uses
  CHECK_THROWS_AS(parse_mol("T %x"), MolParseError);         // reserved prefix

  try {
    parse_mol("L 1 2 3\nA 1 2");
    FAIL("expected MolParseError");
  } catch (const MolParseError& e) {
    REQUIRE(e.issues().size() == 1);
    CHECK(e.issues()[0].line_no == 2);
    CHECK(e.issues()[0].code == "wrong_arity");
  }
}

TEST_CASE("validate reports instead of throwing") {
  CHECK(validate(tokenize_mol("L 1 2 c\nA c 4 3")).ok());

  ValidationReport r1 = validate(tokenize_mol("A 1 2"));
  REQUIRE(r1.errors.size() == 1);
  CHECK(r1.errors[0].code == "wrong_arity");

  ValidationReport r2 = validate(tokenize_mol("FO a b c\nFO a d e"));
  REQUIRE(r2.errors.size() == 1);
  CHECK(r2.errors[0].code == "direction_clash");
  CHECK(r2.errors[0].line_no == 2);
}

TEST_CASE("add_free_caps is idempotent and follows the FRIN/FROUT rule") {
  Molecule lone_t = parse_mol("T 1");
  CHECK(lone_t.node_count() == 2);
  CHECK(lone_t.node(2).kind == NodeKind::FRIN);
  CHECK(lone_t.node(2).label == "1");

  Molecule lone_frin = parse_mol("FRIN 1");
  CHECK(lone_frin.node_count() == 2);
  CHECK(lone_frin.node(2).kind == NodeKind::FROUT);

  Molecule again = add_free_caps(lone_t);
  CHECK(again.node_count() == lone_t.node_count());
}

TEST_CASE("free_ports ignores cap-to-cap pairs") {
  Molecule m = parse_mol("FRIN a\nFROUT a");
  CHECK(m.node_count() == 2);
  CHECK(m.closed());
  CHECK(free_ports(m).empty());
  CHECK(free_ports(Molecule{}).empty());
}

TEST_CASE("serialize/parse roundtrip is an isomorphism") {
  const char* samples[] = {
      "T 1\nFRIN 1",
      "L 1 2 c\nA c 4 3",
      "FO d f a\nFOE a d e\nFI g f b\nT b\nFO e g c\nT c",
      "Arrow x x",  // a pure arrow loop
      "L a a r",
  };
  for (const char* text : samples) {
    CAPTURE(text);
    Molecule m = parse_mol(text);
    Molecule back = parse_mol(serialize_mol(m));
    CHECK(isomorphic(m, back));
    CHECK(back.node_count() == m.node_count());
  }

  // the BETA left pattern roundtrips through six nodes
  Molecule beta = parse_mol("L 1 2 c\nA c 4 3");
  Molecule beta_back = parse_mol(serialize_mol(beta));
  CHECK(beta_back.node_count() == 6);
  CHECK(isomorphic(beta, beta_back));
}

TEST_CASE("property: roundtrip and closure on random molecules") {
  test_support::Rng rng(20240801);
  for (int i = 0; i < 60; ++i) {
    Molecule m = test_support::random_molecule(rng);
    CAPTURE(serialize_mol(m));
    CHECK(m.closed());
    Molecule back = parse_mol(serialize_mol(m));
    CHECK(isomorphic(m, back));
  }
}

TEST_CASE("property: renaming equivariance of parsing") {
  test_support::Rng rng(7);
  for (int i = 0; i < 40; ++i) {
    Molecule m = test_support::random_molecule(rng);
    std::string text = serialize_mol(m);
    std::string renamed = test_support::rename_variables(text, rng);
    CHECK(isomorphic(parse_mol(text), parse_mol(renamed)));
  }
}
