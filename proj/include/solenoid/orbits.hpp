#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solenoid/axioms.hpp"
#include "solenoid/presentation.hpp"

namespace solenoid {

// One maximal interval of an edge mapping onto a single edge: the j-th
// letter of the edge's image word, 1-based.
struct PartitionLetter {
  int edge = -1;
  int index = 1;

  bool operator==(const PartitionLetter& o) const { return edge == o.edge && index == o.index; }
  bool operator<(const PartitionLetter& o) const {
    if (edge != o.edge) return edge < o.edge;
    return index < o.index;
  }
};

inline SignedLetter letter_image(const Presentation& p, const PartitionLetter& l) {
  return p.rule[l.edge][l.index - 1];
}

std::string letter_token(const Presentation& p, const PartitionLetter& l);  // "a.1"

// An eventually periodic stream of partition letters: the forward itinerary
// of a point read inside an edge.
struct AddrStream {
  std::vector<PartitionLetter> pre;
  std::vector<PartitionLetter> period;  // nonempty

  const PartitionLetter& at(std::size_t k) const {
    return k < pre.size() ? pre[k] : period[(k - pre.size()) % period.size()];
  }
};

bool streams_equal(const AddrStream& a, const AddrStream& b);

// A primitive cyclic word of partition letters, stored in its minimal
// rotation under (edge declaration order, index).
struct LetterCycle {
  std::vector<PartitionLetter> letters;

  bool operator==(const LetterCycle& o) const { return letters == o.letters; }
  bool operator<(const LetterCycle& o) const { return letters < o.letters; }

  AddrStream stream_from(std::size_t phase) const;
};

LetterCycle canonical_rotation(std::vector<PartitionLetter> letters);

struct Orbit {
  enum class Kind { Interior, Vertex } kind = Kind::Interior;
  LetterCycle cycle;              // Interior
  std::vector<int> vertices;      // Vertex: F maps each entry to the next, cyclically
  std::size_t period() const {
    return kind == Kind::Interior ? cycle.letters.size() : vertices.size();
  }
  bool operator==(const Orbit& o) const {
    return kind == o.kind && cycle == o.cycle && vertices == o.vertices;
  }
};

std::string orbit_name(const Presentation& p, const Orbit& o);  // cycle(a.1 a.2) / vertex(p)

// All partition letters in declaration order, and the arc relation of the
// letter transition graph (arrows (e,j) -> letters of the image edge).
std::vector<PartitionLetter> all_letters(const Presentation& p);
IntMatrix letter_adjacency(const Presentation& p);

// Address stream of each vertex read from inside each incident half-edge.
std::map<Germ, AddrStream> vertex_boundary_addresses(const Presentation& p);

// Every primitive length-p cycle of the letter transition graph, canonical
// rotations, deterministic order. No boundary exclusion applied.
std::vector<LetterCycle> all_letter_cycles(const Presentation& p, std::size_t period);

// The vertex of the presentation this cycle point coincides with, if its
// address stream equals a boundary address (read from either half-edge end).
std::optional<int> cycle_point_vertex(const Presentation& p, const LetterCycle& c,
                                      std::size_t phase);

// Interior orbits of exact period p (cycles whose streams match the address
// of a vertex read from an outgoing half-edge are dropped: those points are
// the vertices themselves), plus vertex orbits of exact period p under F.
std::vector<Orbit> enumerate_orbits(const Presentation& p, std::size_t period);

enum class Position { Less, Equal, Greater };

// Orientation-aware lexicographic comparison of two points on one edge,
// given by their address streams.
Position compare_positions(const Presentation& p, const AddrStream& a, const AddrStream& b);

// CLI / map-file orbit syntax: interior "a.1 a.2", vertex "@p @q",
// multiple orbits separated by ';'. Each orbit is validated against the
// presentation and canonicalized.
std::vector<Orbit> parse_orbit_specs(const Presentation& p, const std::string& spec);

}  // namespace solenoid
