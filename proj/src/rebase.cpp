#include "solenoid/rebase.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "solenoid/error.hpp"

namespace solenoid {

namespace {

struct MarkedInterior {
  int edge = -1;
  AddrStream address;
  std::size_t orbit = 0;
  std::size_t phase = 0;
  std::string name;
  int refined_vertex = -1;  // assigned during refinement
};

std::string point_name(const Presentation& p, const LetterCycle& cycle, std::size_t phase) {
  std::string s;
  for (std::size_t k = 0; k < cycle.letters.size(); ++k) {
    const PartitionLetter& l = cycle.letters[(phase + k) % cycle.letters.size()];
    if (!s.empty()) s += '-';
    s += p.edges[l.edge].name + "_" + std::to_string(l.index);
  }
  return s;
}

}  // namespace

RefinedPresentation refine_at_orbits(const Presentation& p, const std::vector<Orbit>& orbits) {
  for (std::size_t i = 0; i < orbits.size(); ++i)
    for (std::size_t j = i + 1; j < orbits.size(); ++j)
      if (orbits[i] == orbits[j]) fail(ErrorKind::Usage, "duplicate orbit");

  // Locate every orbit point: an original vertex, or an interior point with
  // host edge and address. A cycle whose address reads a vertex from inside
  // a half-edge is that vertex, and is treated as a vertex mark.
  std::vector<MarkedInterior> interior;
  std::set<int> marked_original;
  std::vector<std::vector<std::pair<bool, int>>> orbit_points(orbits.size());
  // pair: (is_interior, index into `interior` or original vertex id)

  for (std::size_t oi = 0; oi < orbits.size(); ++oi) {
    const Orbit& o = orbits[oi];
    if (o.kind == Orbit::Kind::Vertex) {
      for (int v : o.vertices) {
        if (marked_original.count(v))
          fail(ErrorKind::Usage, "duplicate marked point at vertex '" + p.vertices[v] + "'");
        marked_original.insert(v);
        orbit_points[oi].emplace_back(false, v);
      }
      continue;
    }
    std::size_t n = o.cycle.letters.size();
    std::size_t folded = 0;
    for (std::size_t phase = 0; phase < n; ++phase)
      if (cycle_point_vertex(p, o.cycle, phase)) ++folded;
    if (folded != 0 && folded != n)
      fail(ErrorKind::Internal, "orbit mixes vertex and interior points");
    for (std::size_t phase = 0; phase < n; ++phase) {
      if (folded) {
        int v = *cycle_point_vertex(p, o.cycle, phase);
        if (marked_original.count(v))
          fail(ErrorKind::Usage, "duplicate marked point at vertex '" + p.vertices[v] + "'");
        marked_original.insert(v);
        orbit_points[oi].emplace_back(false, v);
      } else {
        MarkedInterior m;
        m.edge = o.cycle.letters[phase].edge;
        m.address = o.cycle.stream_from(phase);
        m.orbit = oi;
        m.phase = phase;
        m.name = point_name(p, o.cycle, phase);
        orbit_points[oi].emplace_back(true, static_cast<int>(interior.size()));
        interior.push_back(std::move(m));
      }
    }
  }

  for (std::size_t i = 0; i < interior.size(); ++i)
    for (std::size_t j = i + 1; j < interior.size(); ++j)
      if (interior[i].edge == interior[j].edge &&
          streams_equal(interior[i].address, interior[j].address))
        fail(ErrorKind::Usage, "duplicate marked points (orbits share a point)");

  // Sort points within each edge by position.
  std::vector<std::vector<std::size_t>> per_edge(p.edges.size());
  for (std::size_t i = 0; i < interior.size(); ++i) per_edge[interior[i].edge].push_back(i);
  for (auto& pts : per_edge)
    std::sort(pts.begin(), pts.end(), [&](std::size_t a, std::size_t b) {
      Position pos = compare_positions(p, interior[a].address, interior[b].address);
      if (pos == Position::Equal)
        fail(ErrorKind::Internal, "distinct marked points compare equal");
      return pos == Position::Less;
    });

  RefinedPresentation r;
  r.pres.name = p.name + "_refined";
  r.pres.vertices = p.vertices;
  r.original_vertex.resize(p.vertices.size());
  for (std::size_t v = 0; v < p.vertices.size(); ++v) r.original_vertex[v] = static_cast<int>(v);

  auto unique_name = [&](std::string base, const std::vector<std::string>& pool) {
    while (std::find(pool.begin(), pool.end(), base) != pool.end()) base += "_";
    return base;
  };
  for (std::size_t e = 0; e < p.edges.size(); ++e)
    for (std::size_t i : per_edge[e]) {
      interior[i].name = unique_name(interior[i].name, r.pres.vertices);
      interior[i].refined_vertex = static_cast<int>(r.pres.vertices.size());
      r.pres.vertices.push_back(interior[i].name);
      r.original_vertex.push_back(-1);
    }

  // Sub-edges in declaration order; unsplit edges keep their names.
  r.table.resize(p.edges.size());
  std::vector<std::string> edge_names;
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    const auto& pts = per_edge[e];
    if (pts.empty()) {
      r.table[e] = {static_cast<int>(r.pres.edges.size())};
      r.pres.edges.push_back(p.edges[e]);
      continue;
    }
    int prev = p.edges[e].init;
    for (std::size_t k = 0; k <= pts.size(); ++k) {
      int next = (k == pts.size()) ? p.edges[e].term : interior[pts[k]].refined_vertex;
      EdgeDecl d;
      d.name = p.edges[e].name + "[" + std::to_string(k) + "]";
      d.init = prev;
      d.term = next;
      r.table[e].push_back(static_cast<int>(r.pres.edges.size()));
      r.pres.edges.push_back(d);
      prev = next;
    }
  }

  // Vertex map: original vertices keep F; a marked point maps to the next
  // point of its orbit.
  r.pres.vertex_map.assign(r.pres.vertices.size(), -1);
  for (std::size_t v = 0; v < p.vertices.size(); ++v) r.pres.vertex_map[v] = p.vertex_map[v];
  auto point_vertex = [&](std::size_t oi, std::size_t phase) {
    auto [is_interior, id] = orbit_points[oi][phase % orbit_points[oi].size()];
    return is_interior ? interior[id].refined_vertex : id;
  };
  for (std::size_t oi = 0; oi < orbits.size(); ++oi) {
    std::vector<int> cycle_vertices;
    for (std::size_t phase = 0; phase < orbit_points[oi].size(); ++phase) {
      int v = point_vertex(oi, phase);
      r.pres.vertex_map[v] = point_vertex(oi, phase + 1);
      cycle_vertices.push_back(v);
    }
    r.orbit_vertices.push_back(cycle_vertices);
  }

  // Blockwise image words. Block t of W(e) is the refined word of the t-th
  // image letter; a marked point m in letter t splits W(e) at the unique
  // occurrence of its image point inside block t.
  auto refined_word = [&](const SignedLetter& l) {
    EdgeWord w;
    for (int sub : r.table[l.edge]) w.push_back({sub, +1});
    return l.sign > 0 ? w : inverse(w);
  };

  r.pres.rule.assign(r.pres.edges.size(), {});
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    EdgeWord full;
    std::vector<std::size_t> block_start{0};
    for (const SignedLetter& l : p.rule[e]) {
      EdgeWord blk = refined_word(l);
      full.insert(full.end(), blk.begin(), blk.end());
      block_start.push_back(full.size());
    }

    std::vector<std::size_t> cuts;
    for (std::size_t k = 0; k < per_edge[e].size(); ++k) {
      const MarkedInterior& m = interior[per_edge[e][k]];
      int block = m.address.at(0).index;  // 1-based letter hosting the point
      int image_vertex = point_vertex(m.orbit, m.phase + 1);
      std::size_t lo = block_start[block - 1], hi = block_start[block];
      std::vector<std::size_t> hits;
      for (std::size_t u = lo + 1; u < hi; ++u)
        if (r.pres.letter_end(full[u - 1]) == image_vertex) hits.push_back(u);
      if (hits.size() != 1)
        fail(ErrorKind::Internal,
             "marked-point image occurrence not found uniquely inside its block (edge '" +
                 p.edges[e].name + "')");
      cuts.push_back(hits[0]);
    }
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      if (cuts[k] >= cuts[k + 1])
        fail(ErrorKind::Internal, "marked-point image positions out of order");

    std::size_t from = 0;
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
      std::size_t to = (k == cuts.size()) ? full.size() : cuts[k];
      r.pres.rule[r.table[e][k]] = EdgeWord(full.begin() + from, full.begin() + to);
      from = to;
    }
  }

  for (int v : marked_original) r.marked.push_back(v);
  for (std::size_t e = 0; e < p.edges.size(); ++e)
    for (std::size_t i : per_edge[e]) r.marked.push_back(interior[i].refined_vertex);
  std::sort(r.marked.begin(), r.marked.end());

  check_structure(r.pres);
  return r;
}

namespace {

// Canonical representative of a path class: the lexicographically smaller of
// (word, inverse) — or larger, under the flipped orientation rule.
std::pair<EdgeWord, int> canonicalize(const EdgeWord& w, bool orientation_max) {
  EdgeWord inv = inverse(w);
  bool take_inv = orientation_max ? (inv > w) : (inv < w);
  return take_inv ? std::make_pair(inv, -1) : std::make_pair(w, +1);
}

struct Splitter {
  const Presentation& pres;
  std::vector<char> in_o;  // per refined vertex

  Splitter(const RefinedPresentation& r) : pres(r.pres), in_o(r.pres.vertices.size(), 0) {
    for (int v : r.marked) in_o[v] = 1;
  }

  // Positions 0..len whose junction vertex lies in O.
  std::vector<std::size_t> o_positions(const EdgeWord& w) const {
    std::vector<std::size_t> out;
    if (w.empty()) return out;
    if (in_o[pres.letter_start(w[0])]) out.push_back(0);
    for (std::size_t i = 1; i <= w.size(); ++i)
      if (in_o[pres.letter_end(w[i - 1])]) out.push_back(i);
    return out;
  }
};

}  // namespace

ClosureResult path_closure(const RefinedPresentation& r, const RebaseOptions& opt) {
  if (r.marked.empty()) fail(ErrorKind::Precondition, "path closure requires marked vertices");
  Splitter split(r);
  const Presentation& rp = r.pres;

  ClosureResult res;
  std::map<EdgeWord, int> index;
  std::vector<int> worklist;

  auto add_class = [&](const EdgeWord& factor) -> int {
    auto [canon, sign] = canonicalize(factor, opt.orientation_max);
    auto it = index.find(canon);
    if (it != index.end()) return it->second * 2 + (sign < 0 ? 1 : 0);
    if (res.classes.size() >= opt.class_budget)
      fail(ErrorKind::AssumptionViolated, "path closure exceeded the class budget");
    int id = static_cast<int>(res.classes.size());
    index[canon] = id;
    res.classes.push_back({canon, false, {}});
    worklist.push_back(id);
    return id * 2 + (sign < 0 ? 1 : 0);
  };

  // Seeding: iterate each refined edge, keeping only the unsplit margin
  // pieces; every complete path factor between marked vertices becomes a
  // class. Margins stay bounded once splits appear.
  const std::size_t piece_cap = 200000;
  std::size_t seed_budget = opt.seed_budget ? opt.seed_budget : 4 * rp.edges.size();
  for (std::size_t e = 0; e < rp.edges.size(); ++e) {
    bool whole = true;
    EdgeWord prefix{{static_cast<int>(e), +1}}, suffix;
    for (std::size_t k = 0; k < seed_budget; ++k) {
      auto step = [&](const EdgeWord& piece, bool keep_front, bool keep_back,
                      EdgeWord& front_out, EdgeWord& back_out) -> bool {
        // returns true if any O position appeared
        EdgeWord img = apply_rule(rp, piece);
        auto pos = split.o_positions(img);
        for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
          EdgeWord factor(img.begin() + pos[i], img.begin() + pos[i + 1]);
          if (!has_backtrack(factor)) add_class(factor);
        }
        if (pos.empty()) {
          front_out = img;
          back_out = img;
          return false;
        }
        if (keep_front) front_out = EdgeWord(img.begin(), img.begin() + pos.front());
        if (keep_back) back_out = EdgeWord(img.begin() + pos.back(), img.end());
        return true;
      };
      if (whole) {
        EdgeWord front, back;
        if (step(prefix, true, true, front, back)) {
          whole = false;
          prefix = front;
          suffix = back;
        } else {
          prefix = front;
          if (prefix.size() > piece_cap) break;
        }
      } else {
        EdgeWord front, ignore;
        if (!prefix.empty()) {
          // the prefix ends at a marked vertex, so its image splits cleanly
          step(prefix, true, false, front, ignore);
          prefix = front;
        }
        EdgeWord back;
        if (!suffix.empty()) {
          step(suffix, false, true, ignore, back);
          suffix = back;
        }
        if (prefix.size() > piece_cap || suffix.size() > piece_cap) break;
      }
    }
  }

  // Worklist closure over class images.
  std::size_t steps = 0;
  while (!worklist.empty()) {
    if (++steps > opt.step_budget)
      fail(ErrorKind::AssumptionViolated, "path closure exceeded the step budget");
    int id = worklist.back();
    worklist.pop_back();
    EdgeWord img = apply_rule(rp, res.classes[id].word);
    auto pos = split.o_positions(img);
    if (pos.empty() || pos.front() != 0 || pos.back() != img.size())
      fail(ErrorKind::Internal, "class image does not run between marked vertices");
    bool pure = true;
    std::vector<std::pair<int, int>> factors;
    for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
      EdgeWord factor(img.begin() + pos[i], img.begin() + pos[i + 1]);
      if (has_backtrack(factor)) {
        pure = false;
        continue;
      }
      int enc = add_class(factor);
      factors.emplace_back(enc / 2, enc % 2 ? -1 : +1);
    }
    res.classes[id].pure = pure;
    res.classes[id].factors = std::move(factors);
  }
  res.steps = steps;
  return res;
}

ExtractResult extract_path_set(const RefinedPresentation& r, const ClosureResult& closure) {
  const auto& classes = closure.classes;
  if (classes.empty())
    fail(ErrorKind::AssumptionViolated, "path closure found no path classes");

  // Tarjan SCC on the factor digraph.
  const std::size_t n = classes.size();
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  int counter = 0, comp_count = 0;
  std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (auto [w, sign] : classes[v].factors) {
      (void)sign;
      if (idx[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      for (;;) {
        std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = comp_count;
        if (w == v) break;
      }
      ++comp_count;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (idx[v] < 0) strongconnect(v);

  std::vector<std::vector<int>> members(comp_count);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(static_cast<int>(v));

  ExtractResult out;
  std::vector<int> chosen;
  for (int c = 0; c < comp_count; ++c) {
    bool ok = true;
    for (int v : members[c]) {
      if (!classes[v].pure) { ok = false; break; }
      for (auto [w, sign] : classes[v].factors) {
        (void)sign;
        if (comp[w] != c) { ok = false; break; }
      }
      if (!ok) break;
    }
    if (ok) {
      ++out.candidate_count;
      chosen = members[c];
    }
  }
  if (out.candidate_count != 1)
    fail(ErrorKind::AssumptionViolated,
         "expected exactly one closed set of path classes, found " +
             std::to_string(out.candidate_count));

  // Covering: every refined edge occurs in some selected word.
  std::vector<char> covered(r.pres.edges.size(), 0);
  for (int v : chosen)
    for (const auto& l : classes[v].word) covered[l.edge] = 1;
  for (std::size_t e = 0; e < covered.size(); ++e)
    if (!covered[e])
      fail(ErrorKind::AssumptionViolated,
           "selected path set does not cover edge '" + r.pres.edges[e].name + "'");

  // Primitivity of the occurrence matrix (uniform mixing exponent).
  IntMatrix occ(chosen.size(), chosen.size());
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < chosen.size(); ++i) pos[chosen[i]] = i;
  for (std::size_t i = 0; i < chosen.size(); ++i)
    for (auto [w, sign] : classes[chosen[i]].factors) {
      (void)sign;
      occ.at(i, pos[w]) += 1;
    }
  out.primitive = is_primitive(occ);
  out.selected = chosen;
  std::sort(out.selected.begin(), out.selected.end());
  return out;
}

RebaseResult rebase(const Presentation& p, const std::vector<Orbit>& orbits,
                    const RebaseOptions& opt) {
  AxiomReport rep = validate(p);
  if (rep.classification == Classification::Invalid)
    fail(ErrorKind::Precondition, "rebase requires a solenoid presentation");
  if (rep.classification == Classification::BranchedSolenoid && !opt.force)
    fail(ErrorKind::Precondition,
         "rebase requires the flattening property; the input is a branched solenoid "
         "(use --force to run without the conjugacy guarantee)");

  RebaseResult res;
  res.forced_branched = rep.classification == Classification::BranchedSolenoid;
  res.refined = refine_at_orbits(p, orbits);
  ClosureResult closure = path_closure(res.refined, opt);
  ExtractResult extract = extract_path_set(res.refined, closure);
  res.closure_size = closure.classes.size();
  res.candidate_count = extract.candidate_count;
  res.factor_graph_primitive = extract.primitive;

  const Presentation& rp = res.refined.pres;

  // Output vertices: the marked set, in refined declaration order.
  std::vector<int> vertex_of(rp.vertices.size(), -1);
  Presentation out;
  out.name = p.name + "_rebased";
  for (int v : res.refined.marked) {
    vertex_of[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(rp.vertices[v]);
  }

  // Output edges: selected classes sorted by (initial vertex, word).
  std::vector<int> order = extract.selected;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int va = vertex_of[rp.letter_start(closure.classes[a].word[0])];
    int vb = vertex_of[rp.letter_start(closure.classes[b].word[0])];
    if (va != vb) return va < vb;
    return closure.classes[a].word < closure.classes[b].word;
  });
  std::map<int, int> edge_of;  // class id -> output edge
  for (std::size_t i = 0; i < order.size(); ++i) {
    const EdgeWord& w = closure.classes[order[i]].word;
    EdgeDecl d;
    d.name = "e" + std::to_string(i + 1);
    d.init = vertex_of[rp.letter_start(w.front())];
    d.term = vertex_of[rp.letter_end(w.back())];
    if (d.init < 0 || d.term < 0)
      fail(ErrorKind::Internal, "path class endpoint is not a marked vertex");
    edge_of[order[i]] = static_cast<int>(i);
    out.edges.push_back(d);
  }

  out.vertex_map.assign(out.vertices.size(), -1);
  for (int v : res.refined.marked) {
    int image = rp.vertex_map[v];
    if (vertex_of[image] < 0)
      fail(ErrorKind::Internal, "marked set is not invariant");
    out.vertex_map[vertex_of[v]] = vertex_of[image];
  }

  out.rule.assign(out.edges.size(), {});
  res.rho.assign(out.edges.size(), {});
  for (int cls : order) {
    EdgeWord image;
    for (auto [w, sign] : closure.classes[cls].factors)
      image.push_back({edge_of.at(w), sign});
    out.rule[edge_of.at(cls)] = std::move(image);
    res.rho[edge_of.at(cls)] = closure.classes[cls].word;
  }
  check_structure(out);
  res.output = std::move(out);

  // rho intertwining: substituting rho into the output rule letter for
  // letter reproduces the refined image of each rho word.
  for (std::size_t e = 0; e < res.output.edges.size(); ++e) {
    EdgeWord lhs = apply_rule(rp, res.rho[e]);
    EdgeWord rhs;
    for (const SignedLetter& l : res.output.rule[e]) {
      EdgeWord part = l.sign > 0 ? res.rho[l.edge] : inverse(res.rho[l.edge]);
      rhs.insert(rhs.end(), part.begin(), part.end());
    }
    if (!(lhs == rhs))
      fail(ErrorKind::Internal, "rho does not intertwine the rules");
  }

  AxiomReport out_rep = validate(res.output);
  if (!opt.force && out_rep.classification != Classification::Solenoid)
    fail(ErrorKind::Internal, "rebase output failed validation");
  res.lambda_in = rep.perron ? rep.perron->lambda : 0.0;
  res.lambda_out = out_rep.perron ? out_rep.perron->lambda : 0.0;

  // The companion graph map psi exists when the invariant set consists of
  // original vertices: the smallest exponent whose iterated images all
  // factorize over the selected path set.
  bool vertices_only = std::all_of(
      res.refined.marked.begin(), res.refined.marked.end(),
      [&](int v) { return res.refined.original_vertex[v] >= 0; });
  if (vertices_only) {
    Splitter split(res.refined);
    for (unsigned n = 1; n <= 12 && !res.psi_exponent; ++n) {
      bool ok = true;
      for (std::size_t v = 0; v < rp.vertices.size() && ok; ++v) {
        int w = static_cast<int>(v);
        for (unsigned k = 0; k < n; ++k) w = rp.vertex_map[w];
        ok = split.in_o[w];
      }
      std::vector<EdgeWord> psi(rp.edges.size());
      for (std::size_t e = 0; e < rp.edges.size() && ok; ++e) {
        EdgeWord img = iterate_rule(rp, static_cast<int>(e), n);
        auto pos = split.o_positions(img);
        if (pos.empty() || pos.front() != 0 || pos.back() != img.size()) { ok = false; break; }
        for (std::size_t i = 0; i + 1 < pos.size() && ok; ++i) {
          EdgeWord factor(img.begin() + pos[i], img.begin() + pos[i + 1]);
          if (has_backtrack(factor)) { ok = false; break; }
          auto [canon, sign] = canonicalize(factor, opt.orientation_max);
          bool matched = false;
          for (int cls : extract.selected)
            if (closure.classes[cls].word == canon) {
              psi[e].push_back({edge_of.at(cls), sign});
              matched = true;
              break;
            }
          if (!matched) { ok = false; break; }
        }
      }
      if (!ok) continue;
      // verify rho(psi(e)) == f^n(e)
      for (std::size_t e = 0; e < rp.edges.size() && ok; ++e) {
        EdgeWord lhs;
        for (const SignedLetter& l : psi[e]) {
          EdgeWord part = l.sign > 0 ? res.rho[l.edge] : inverse(res.rho[l.edge]);
          lhs.insert(lhs.end(), part.begin(), part.end());
        }
        ok = lhs == iterate_rule(rp, static_cast<int>(e), n);
      }
      if (ok) {
        res.psi_exponent = n;
        res.psi = std::move(psi);
      }
    }
  }
  return res;
}

RebaseResult elementary_presentation(const Presentation& p, const Orbit& fixed_point,
                                     const RebaseOptions& opt) {
  if (fixed_point.period() != 1)
    fail(ErrorKind::Precondition, "elementary presentation requires a period-1 orbit");
  RebaseResult r = rebase(p, {fixed_point}, opt);
  if (r.output.vertices.size() != 1)
    fail(ErrorKind::Internal, "elementary presentation has more than one vertex");
  for (const auto& e : r.output.edges)
    if (e.init != e.term)
      fail(ErrorKind::Internal, "elementary presentation has a non-loop edge");
  return r;
}

}  // namespace solenoid
