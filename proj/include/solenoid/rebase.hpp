#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solenoid/orbits.hpp"
#include "solenoid/presentation.hpp"

namespace solenoid {

// The input presentation with the orbit points inserted as vertices.
// Sub-edges of a split edge concatenate back to the original edge.
struct RefinedPresentation {
  Presentation pres;
  std::vector<std::vector<int>> table;   // original edge -> refined edge ids
  std::vector<int> marked;               // refined vertex ids forming the invariant set
  std::vector<int> original_vertex;      // refined vertex -> original id, or -1 for new
  std::vector<std::vector<int>> orbit_vertices;  // per input orbit, refined vertex per phase
};

struct PathClass {
  EdgeWord word;  // canonical representative over refined edges
  bool pure = false;
  std::vector<std::pair<int, int>> factors;  // (class id, sign) of each path factor, in order
};

struct ClosureResult {
  std::vector<PathClass> classes;
  std::size_t steps = 0;
};

struct ExtractResult {
  std::vector<int> selected;  // class ids of the minimal closed path set
  std::size_t candidate_count = 0;
  bool primitive = true;  // occurrence matrix of the selected set
};

struct RebaseOptions {
  bool force = false;             // run on branched-solenoid inputs
  bool orientation_max = false;   // flip the canonical-direction rule
  std::size_t seed_budget = 0;    // 0: default 4 * refined edge count
  std::size_t class_budget = 100000;
  std::size_t step_budget = 1000000;
};

struct RebaseResult {
  Presentation output;
  std::vector<EdgeWord> rho;  // output edge -> word over refined edges
  RefinedPresentation refined;
  std::size_t closure_size = 0;
  std::size_t candidate_count = 0;
  bool factor_graph_primitive = true;
  bool forced_branched = false;
  double lambda_in = 0.0;
  double lambda_out = 0.0;
  std::optional<unsigned> psi_exponent;  // present when the graph map psi materialized
  std::vector<EdgeWord> psi;             // input edge -> word over output edges
};

RefinedPresentation refine_at_orbits(const Presentation& p, const std::vector<Orbit>& orbits);

ClosureResult path_closure(const RefinedPresentation& r, const RebaseOptions& opt = {});

ExtractResult extract_path_set(const RefinedPresentation& r, const ClosureResult& closure);

RebaseResult rebase(const Presentation& p, const std::vector<Orbit>& orbits,
                    const RebaseOptions& opt = {});

// Rebase at a single fixed point; the result is a wedge of circles with the
// fixed point as its only vertex.
RebaseResult elementary_presentation(const Presentation& p, const Orbit& fixed_point,
                                     const RebaseOptions& opt = {});

}  // namespace solenoid
