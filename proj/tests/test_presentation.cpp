#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "solenoid/error.hpp"
#include "solenoid/presentation.hpp"

using namespace solenoid;
using testutil::load_fixture;

TEST_CASE("parsing the circle fixtures") {
  Presentation p = load_fixture("ex2_3_Xf.sol");
  CHECK(p.name == "ex2_3_Xf");
  CHECK(p.vertices.size() == 2);
  CHECK(p.edges.size() == 2);
  CHECK(p.rule[0].size() == 2);
  // z -> z^2 sends both vertices to the first one
  CHECK(p.vertex_map[0] == 0);
  CHECK(p.vertex_map[1] == 0);

  Presentation g = load_fixture("ex2_3_Xg.sol");
  CHECK(g.rule[1][0].sign == -1);
  CHECK(g.rule[1][0].edge == 1);
}

TEST_CASE("parse errors carry line information") {
  CHECK_THROWS_WITH_AS(parse_presentation(""), "empty presentation file", Error);

  // endpoint mismatch: b ends away from a's start
  std::string text =
      "presentation bad\nvertices: u v\nedge a u u\nedge b u v\nmap a = b a\nmap b = a b\n";
  CHECK_THROWS_AS(parse_presentation(text), Error);

  std::string dup = "presentation bad\nvertices: u u\nedge a u u\nmap a = a\n";
  CHECK_THROWS_AS(parse_presentation(dup), Error);

  std::string empty_img = "presentation bad\nvertices: u\nedge a u u\nmap a =\n";
  CHECK_THROWS_AS(parse_presentation(empty_img), Error);

  std::string unknown = "presentation bad\nvertices: u\nedge a u u\nmap a = q\n";
  CHECK_THROWS_AS(parse_presentation(unknown), Error);

  std::string isolated = "presentation bad\nvertices: u w\nedge a u u\nmap a = a\n";
  CHECK_THROWS_AS(parse_presentation(isolated), Error);

  std::string backtrack = "presentation bad\nvertices: u\nedge a u u\nmap a = a a^-1\n";
  CHECK_THROWS_AS(parse_presentation(backtrack), Error);

  std::string badvmap =
      "presentation bad\nvertices: u v\nedge a u v\nedge b v u\nvmap u -> v\n"
      "map a = a b a\nmap b = b a b\n";
  CHECK_THROWS_AS(parse_presentation(badvmap), Error);
}

TEST_CASE("a one-edge identity-like loop is valid") {
  Presentation p = parse_presentation("presentation loop\nvertices: w\nedge a w w\nmap a = a\n");
  CHECK(p.edges.size() == 1);
  CHECK(p.rule[0].size() == 1);
}

TEST_CASE("serialize then parse is the identity on values") {
  for (const char* name :
       {"ex2_3_Xf.sol", "ex2_3_Xg.sol", "ex2_6_Yh.sol", "ex2_18_Zg.sol", "ex4_3.sol",
        "ex4_4.sol", "ex4_e.sol", "ex4_10.sol", "ex5_7_g1.sol", "ex5_7_g2.sol",
        "ex5a.sol", "appA_Yp.sol", "appA_Y1.sol", "appB_be.sol", "appB_bee.sol",
        "ex4_4_Yp.sol"}) {
    Presentation p = load_fixture(name);
    CHECK(parse_presentation(serialize(p)) == p);
  }
}

TEST_CASE("apply_rule handles signs without cancellation") {
  Presentation g = load_fixture("ex2_3_Xg.sol");
  int e1 = g.edge_index("e1"), e2 = g.edge_index("e2");

  // inverse of e2^-1 e1^-1 is e1 e2
  EdgeWord w = apply_rule(g, {{e2, -1}});
  REQUIRE(w.size() == 2);
  CHECK(w[0] == SignedLetter{e1, +1});
  CHECK(w[1] == SignedLetter{e2, +1});

  CHECK(apply_rule(g, {}).empty());

  // the fold of g^2 is kept verbatim
  EdgeWord folded = apply_rule(g, {{e1, +1}, {e2, +1}});
  REQUIRE(folded.size() == 4);
  CHECK(folded[0] == SignedLetter{e1, +1});
  CHECK(folded[1] == SignedLetter{e2, +1});
  CHECK(folded[2] == SignedLetter{e2, -1});
  CHECK(folded[3] == SignedLetter{e1, -1});
  CHECK(has_backtrack(folded));
}

TEST_CASE("iterate_rule") {
  Presentation f = load_fixture("ex2_3_Xf.sol");
  int e1 = f.edge_index("e1"), e2 = f.edge_index("e2");
  EdgeWord w = iterate_rule(f, e1, 2);
  EdgeWord expect{{e1, +1}, {e2, +1}, {e1, +1}, {e2, +1}};
  CHECK(w == expect);
  CHECK(iterate_rule(f, e1, 0) == EdgeWord{{e1, +1}});

  Presentation yp = load_fixture("ex4_4_Yp.sol");
  EdgeWord we = iterate_rule(yp, yp.edge_index("e"), 1);
  CHECK(yp.word_string(we) == "e f f f");
}

TEST_CASE("abelianization matches the printed cover matrices") {
  CHECK(abelianization(load_fixture("ex2_3_Xf.sol")) == parse_matrix_literal("[[1,1],[1,1]]"));
  CHECK(abelianization(load_fixture("ex2_6_Yh.sol")) ==
        parse_matrix_literal("[[1,1,1,1],[0,0,1,1],[1,1,0,0],[1,1,1,0]]"));
  // signs are ignored
  Presentation z = load_fixture("ex4_e.sol");
  IntMatrix m = abelianization(z);
  CHECK(m == parse_matrix_literal("[[1,2],[2,1]]"));
}

TEST_CASE("apply_rule commutes with inversion") {
  std::mt19937_64 rng(5);
  for (const char* name : {"ex2_3_Xg.sol", "ex4_e.sol", "appB_be.sol", "ex5_7_g1.sol"}) {
    Presentation p = load_fixture(name);
    for (int trial = 0; trial < 50; ++trial) {
      // random word, not necessarily a path: apply_rule is letterwise
      EdgeWord w;
      std::size_t len = rng() % 6;
      for (std::size_t k = 0; k < len; ++k)
        w.push_back({static_cast<int>(rng() % p.edges.size()), rng() % 2 ? +1 : -1});
      CHECK(apply_rule(p, inverse(w)) == inverse(apply_rule(p, w)));
    }
  }
}

TEST_CASE("abelianization of the iterate is the matrix power") {
  for (const char* name :
       {"ex2_3_Xf.sol", "ex2_6_Yh.sol", "ex4_3.sol", "ex4_e.sol", "ex5_7_g1.sol",
        "ex5_7_g2.sol", "appA_Yp.sol", "appB_be.sol"}) {
    Presentation p = load_fixture(name);
    IntMatrix m = abelianization(p);
    for (unsigned n = 1; n <= 4; ++n) {
      Presentation q = iterate_presentation(p, n);
      CHECK(abelianization(q) == m.pow(n));
      CHECK_NOTHROW(check_structure(q));  // path compatibility survives iteration
    }
  }
}

TEST_CASE("isomorphism finds identity and rejects different systems") {
  Presentation p = load_fixture("ex5a.sol");
  auto self = presentations_isomorphic(p, p);
  REQUIRE(self.has_value());
  CHECK(self->edge_map[0] == 0);

  Presentation q = parse_presentation(
      "presentation two\nvertices: w\nedge a w w\nedge b w w\nmap a = a a\nmap b = b b\n");
  Presentation r = parse_presentation(
      "presentation three\nvertices: w\nedge a w w\nedge b w w\nmap a = a a\nmap b = b b b\n");
  CHECK_FALSE(presentations_isomorphic(q, r).has_value());
}

TEST_CASE("isomorphism may flip orientations") {
  Presentation p = parse_presentation(
      "presentation flip\nvertices: u v\nedge a u v\nedge b v u\nmap a = a b a\nmap b = b a b\n");
  // same system with edge a reversed: a' = a^-1
  Presentation q = parse_presentation(
      "presentation flipped\nvertices: u v\nedge a v u\nedge b v u\n"
      "map a = a b^-1 a\nmap b = b a^-1 b\n");
  auto iso = presentations_isomorphic(p, q);
  REQUIRE(iso.has_value());
  CHECK(iso->edge_sign[0] == -1);
}
