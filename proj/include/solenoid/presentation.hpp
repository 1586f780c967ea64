#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solenoid/intmatrix.hpp"

namespace solenoid {

// An oriented occurrence of an edge inside a word.
struct SignedLetter {
  int edge = -1;
  int sign = +1;  // +1 or -1

  bool operator==(const SignedLetter& o) const { return edge == o.edge && sign == o.sign; }
  bool operator<(const SignedLetter& o) const {
    if (edge != o.edge) return edge < o.edge;
    return sign > o.sign;  // '+' sorts before '-'
  }
};

// Words are stored unreduced: an x x^-1 pair is kept verbatim, since folding
// detection depends on seeing it.
using EdgeWord = std::vector<SignedLetter>;

EdgeWord inverse(const EdgeWord& w);
bool has_backtrack(const EdgeWord& w);  // adjacent x^s x^-s

struct EdgeDecl {
  std::string name;
  int init = -1;
  int term = -1;

  bool operator==(const EdgeDecl& o) const {
    return name == o.name && init == o.init && term == o.term;
  }
};

// A directed graph with a vertex map and a wrapping rule: the combinatorial
// object (X, f) presented by its substitution on edges.
struct Presentation {
  std::string name;
  std::vector<std::string> vertices;
  std::vector<EdgeDecl> edges;
  std::vector<int> vertex_map;    // F, indexed by vertex
  std::vector<EdgeWord> rule;     // image word per edge

  bool operator==(const Presentation& o) const {
    return name == o.name && vertices == o.vertices && edges == o.edges &&
           vertex_map == o.vertex_map && rule == o.rule;
  }

  int vertex_index(const std::string& n) const;  // -1 if absent
  int edge_index(const std::string& n) const;

  // Endpoints of a signed letter as traversed.
  int letter_start(const SignedLetter& l) const {
    return l.sign > 0 ? edges[l.edge].init : edges[l.edge].term;
  }
  int letter_end(const SignedLetter& l) const {
    return l.sign > 0 ? edges[l.edge].term : edges[l.edge].init;
  }

  std::string word_string(const EdgeWord& w) const;
};

// Checks every structural invariant (Markov vertex map, path compatibility,
// nonempty images, no immediate backtracks, no isolated vertices).
// Raises ErrorKind::Parse with a description on violation.
void check_structure(const Presentation& p);

// Parses the line-oriented presentation grammar; see the fixture files.
// parse(serialize(p)) == p for every valid presentation value.
Presentation parse_presentation(const std::string& text);
std::string serialize(const Presentation& p);

EdgeWord apply_rule(const Presentation& p, const EdgeWord& w);
EdgeWord iterate_rule(const Presentation& p, int edge, unsigned n);

// The presentation whose rule is the n-th iterate of p's rule.
Presentation iterate_presentation(const Presentation& p, unsigned n);

// Unsigned occurrence counts: entry (i,j) = occurrences of edge j, either
// orientation, in the image of edge i. Rows follow declaration order.
IntMatrix abelianization(const Presentation& p);

struct Isomorphism {
  std::vector<std::size_t> vertex_map;  // p1 vertex -> p2 vertex
  std::vector<std::size_t> edge_map;    // p1 edge -> p2 edge
  std::vector<int> edge_sign;           // +1 direct, -1 reversed
};

// Bijection of graphs carrying vertex maps and wrapping rules onto each
// other exactly, allowing per-edge orientation flips. Brute force; inputs
// above the edge limit raise a usage error.
std::optional<Isomorphism> presentations_isomorphic(const Presentation& p1,
                                                    const Presentation& p2,
                                                    std::size_t edge_limit = 10);

bool valid_name_token(const std::string& s);

}  // namespace solenoid
