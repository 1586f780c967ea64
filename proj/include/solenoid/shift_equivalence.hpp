#pragma once

#include <map>
#include <string>
#include <vector>

#include "solenoid/orbits.hpp"
#include "solenoid/presentation.hpp"

namespace solenoid {

// A pair of graph maps r: X -> Y and s: Y -> X presented by edge words,
// witnessing a lag-m shift equivalence.
struct GraphMapPair {
  unsigned lag = 1;
  std::vector<EdgeWord> rmap;  // X edge -> word over Y edges
  std::vector<EdgeWord> smap;  // Y edge -> word over X edges
  std::vector<int> rvert;      // X vertex -> Y vertex
  std::vector<int> svert;      // Y vertex -> X vertex
};

// Map-file grammar: 'lag m', 'rmap EDGE = letters...', 'smap EDGE = ...',
// 'rvert v -> w', 'svert v -> w'. Vertex maps are derived from the edge
// words and cross-checked against explicit lines.
GraphMapPair parse_map_file(const Presentation& px, const Presentation& py,
                            const std::string& text);

std::string serialize_map_file(const Presentation& px, const Presentation& py,
                               const GraphMapPair& pair);

EdgeWord apply_graph_map(const std::vector<EdgeWord>& words, const EdgeWord& w);

struct SeIdentity {
  std::string name;
  bool pass = false;
  std::string detail;  // witness words on failure
};

struct SeReport {
  std::vector<SeIdentity> identities;
  bool all_pass = true;
};

// The four defining identities as exact word equalities, edge by edge,
// plus vertex-map commutation. Failures are verdicts, not errors.
SeReport verify_shift_equivalence(const Presentation& px, const Presentation& py,
                                  const GraphMapPair& pair);

// A == R*S and B == S*R, exactly.
bool verify_elementary_sse(const IntMatrix& a, const IntMatrix& b,
                           const IntMatrix& r, const IntMatrix& s);

// A sliding block code between the SFT covers, tabulated on all allowed
// windows. offset is the output alignment: m for a memory-m code (the
// output letter sits at the window's right end), 0 for anticipation-m.
struct BlockMap {
  unsigned window = 2;
  unsigned offset = 0;
  std::map<std::vector<PartitionLetter>, PartitionLetter> table;

  PartitionLetter apply_at(const std::vector<PartitionLetter>& w, std::size_t i) const;
  // Image of a periodic letter sequence, one period.
  std::vector<PartitionLetter> apply_periodic(const std::vector<PartitionLetter>& cycle) const;
};

struct LiftResult {
  BlockMap phi;  // source cover -> target cover, memory = lag
  BlockMap psi;  // target cover -> source cover, anticipation = lag
};

// Builds the block maps induced by a verified graph-map shift equivalence.
// Both presentations must satisfy the expansion, nonfolding and Markov
// axioms; the identities must verify first.
LiftResult lift_block_map(const Presentation& px, const Presentation& py,
                          const GraphMapPair& pair);

std::string serialize_block_map(const Presentation& src, const Presentation& dst,
                                const BlockMap& bm);

// Allowed windows of the edge-shift cover (walks of the letter graph).
std::vector<std::vector<PartitionLetter>> allowed_blocks(const Presentation& p,
                                                         unsigned length);

}  // namespace solenoid
