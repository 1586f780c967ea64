#include "solenoid/orbits.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "solenoid/error.hpp"

namespace solenoid {

std::string letter_token(const Presentation& p, const PartitionLetter& l) {
  return p.edges[l.edge].name + "." + std::to_string(l.index);
}

bool streams_equal(const AddrStream& a, const AddrStream& b) {
  std::size_t bound = std::max(a.pre.size(), b.pre.size()) +
                      std::lcm(a.period.size(), b.period.size());
  for (std::size_t k = 0; k < bound; ++k)
    if (!(a.at(k) == b.at(k))) return false;
  return true;
}

AddrStream LetterCycle::stream_from(std::size_t phase) const {
  AddrStream s;
  s.period.reserve(letters.size());
  for (std::size_t k = 0; k < letters.size(); ++k)
    s.period.push_back(letters[(phase + k) % letters.size()]);
  return s;
}

LetterCycle canonical_rotation(std::vector<PartitionLetter> letters) {
  std::vector<PartitionLetter> best = letters;
  for (std::size_t r = 1; r < letters.size(); ++r) {
    std::rotate(letters.begin(), letters.begin() + 1, letters.end());
    if (letters < best) best = letters;
  }
  return LetterCycle{best};
}

std::string orbit_name(const Presentation& p, const Orbit& o) {
  std::ostringstream os;
  if (o.kind == Orbit::Kind::Interior) {
    os << "cycle(";
    for (std::size_t i = 0; i < o.cycle.letters.size(); ++i) {
      if (i) os << ' ';
      os << letter_token(p, o.cycle.letters[i]);
    }
    os << ')';
  } else {
    os << "vertex(";
    for (std::size_t i = 0; i < o.vertices.size(); ++i) {
      if (i) os << ' ';
      os << p.vertices[o.vertices[i]];
    }
    os << ')';
  }
  return os.str();
}

std::vector<PartitionLetter> all_letters(const Presentation& p) {
  std::vector<PartitionLetter> out;
  for (std::size_t e = 0; e < p.edges.size(); ++e)
    for (std::size_t j = 1; j <= p.rule[e].size(); ++j)
      out.push_back({static_cast<int>(e), static_cast<int>(j)});
  return out;
}

IntMatrix letter_adjacency(const Presentation& p) {
  auto letters = all_letters(p);
  IntMatrix m(letters.size(), letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i) {
    m.row_labels[i] = letter_token(p, letters[i]);
    m.col_labels[i] = m.row_labels[i];
    int target = letter_image(p, letters[i]).edge;
    for (std::size_t j = 0; j < letters.size(); ++j)
      if (letters[j].edge == target) m.at(i, j) = 1;
  }
  return m;
}

namespace {

PartitionLetter germ_letter(const Presentation& p, const Germ& g) {
  return g.term ? PartitionLetter{g.edge, static_cast<int>(p.rule[g.edge].size())}
                : PartitionLetter{g.edge, 1};
}

}  // namespace

std::map<Germ, AddrStream> vertex_boundary_addresses(const Presentation& p) {
  std::map<Germ, AddrStream> out;
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    for (bool term : {false, true}) {
      Germ start{static_cast<int>(e), term};
      // Walk the germ orbit until it repeats; the stream is the letter
      // sequence along the walk, periodic from the first repeat.
      std::vector<Germ> walk;
      std::map<Germ, std::size_t> seen;
      Germ g = start;
      while (!seen.count(g)) {
        seen[g] = walk.size();
        walk.push_back(g);
        g = germ_image(p, g);
      }
      std::size_t loop_at = seen[g];
      AddrStream s;
      for (std::size_t k = 0; k < loop_at; ++k) s.pre.push_back(germ_letter(p, walk[k]));
      for (std::size_t k = loop_at; k < walk.size(); ++k)
        s.period.push_back(germ_letter(p, walk[k]));
      out[start] = std::move(s);
    }
  }
  return out;
}

std::vector<LetterCycle> all_letter_cycles(const Presentation& p, std::size_t period) {
  if (period == 0) fail(ErrorKind::Usage, "period must be at least 1");
  auto letters = all_letters(p);
  std::set<LetterCycle> found;

  std::vector<PartitionLetter> path;
  std::function<void(const PartitionLetter&)> extend = [&](const PartitionLetter& cur) {
    path.push_back(cur);
    if (path.size() == period) {
      if (letter_image(p, cur).edge == path.front().edge) {
        // primitive: not a proper power of a shorter cycle
        bool primitive = true;
        for (std::size_t d = 1; d < period && primitive; ++d) {
          if (period % d) continue;
          bool repeats = true;
          for (std::size_t k = 0; k < period && repeats; ++k)
            repeats = path[k] == path[k % d];
          if (repeats) primitive = false;
        }
        if (primitive) found.insert(canonical_rotation(path));
      }
    } else {
      int target = letter_image(p, cur).edge;
      for (std::size_t j = 1; j <= p.rule[target].size(); ++j)
        extend({target, static_cast<int>(j)});
    }
    path.pop_back();
  };
  for (const auto& l : letters) extend(l);

  return {found.begin(), found.end()};
}

std::optional<int> cycle_point_vertex(const Presentation& p, const LetterCycle& c,
                                      std::size_t phase) {
  auto boundary = vertex_boundary_addresses(p);
  AddrStream s = c.stream_from(phase);
  for (const auto& [germ, addr] : boundary)
    if (streams_equal(s, addr)) return germ_base(p, germ);
  return std::nullopt;
}

std::vector<Orbit> enumerate_orbits(const Presentation& p, std::size_t period) {
  if (period == 0) fail(ErrorKind::Usage, "period must be at least 1");
  AxiomReport rep = validate(p);
  if (rep.classification == Classification::Invalid)
    fail(ErrorKind::Precondition, "orbit enumeration requires a solenoid or branched solenoid");

  std::vector<Orbit> out;

  // Vertex orbits of exact period under F.
  std::set<std::vector<int>> vertex_cycles;
  for (std::size_t v = 0; v < p.vertices.size(); ++v) {
    std::vector<int> walk{static_cast<int>(v)};
    std::set<int> seen{static_cast<int>(v)};
    int cur = static_cast<int>(v);
    for (;;) {
      cur = p.vertex_map[cur];
      if (cur == static_cast<int>(v)) break;
      if (seen.count(cur)) { walk.clear(); break; }  // preperiodic tail
      seen.insert(cur);
      walk.push_back(cur);
    }
    if (walk.size() == period) {
      auto mn = std::min_element(walk.begin(), walk.end());
      std::rotate(walk.begin(), mn, walk.end());
      vertex_cycles.insert(walk);
    }
  }
  for (const auto& vc : vertex_cycles) out.push_back({Orbit::Kind::Vertex, {}, vc});

  // Interior orbits: letter cycles minus those sitting at a vertex when the
  // vertex is read from an outgoing half-edge.
  auto boundary = vertex_boundary_addresses(p);
  std::vector<std::pair<Germ, AddrStream>> init_streams;
  for (const auto& [germ, addr] : boundary)
    if (!germ.term) init_streams.emplace_back(germ, addr);

  for (const auto& cyc : all_letter_cycles(p, period)) {
    bool excluded = false;
    for (std::size_t phase = 0; phase < cyc.letters.size() && !excluded; ++phase) {
      AddrStream s = cyc.stream_from(phase);
      for (const auto& [germ, addr] : init_streams)
        if (streams_equal(s, addr)) { excluded = true; break; }
    }
    if (!excluded) out.push_back({Orbit::Kind::Interior, cyc, {}});
  }
  return out;
}

Position compare_positions(const Presentation& p, const AddrStream& a, const AddrStream& b) {
  if (a.at(0).edge != b.at(0).edge)
    fail(ErrorKind::Usage, "compare_positions requires points on one edge");
  std::size_t bound = std::max(a.pre.size(), b.pre.size()) +
                      std::lcm(a.period.size(), b.period.size());
  const std::size_t budget = 10000;
  int sigma = +1;
  for (std::size_t k = 0; k < std::min(bound, budget); ++k) {
    const PartitionLetter &la = a.at(k), &lb = b.at(k);
    if (la.edge != lb.edge)
      fail(ErrorKind::Internal, "address streams diverged to different edges");
    if (la.index != lb.index) {
      bool less = la.index < lb.index;
      if (sigma < 0) less = !less;
      return less ? Position::Less : Position::Greater;
    }
    sigma *= letter_image(p, la).sign;
  }
  if (bound > budget)
    fail(ErrorKind::Internal, "compare_positions depth budget exceeded");
  return Position::Equal;
}

std::vector<Orbit> parse_orbit_specs(const Presentation& p, const std::string& spec) {
  std::vector<Orbit> out;
  std::stringstream groups(spec);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::istringstream toks(group);
    std::vector<std::string> tokens;
    std::string t;
    while (toks >> t) tokens.push_back(t);
    if (tokens.empty()) continue;

    bool vertex_kind = tokens[0].rfind('@', 0) == 0;
    for (const auto& tok : tokens)
      if ((tok.rfind('@', 0) == 0) != vertex_kind)
        fail(ErrorKind::Usage, "orbit spec mixes vertex and interior tokens: '" + group + "'");

    if (vertex_kind) {
      std::vector<int> verts;
      for (const auto& tok : tokens) {
        int v = p.vertex_index(tok.substr(1));
        if (v < 0) fail(ErrorKind::Usage, "unknown vertex in orbit spec: '" + tok + "'");
        verts.push_back(v);
      }
      for (std::size_t i = 0; i < verts.size(); ++i) {
        int expect = verts[(i + 1) % verts.size()];
        if (p.vertex_map[verts[i]] != expect)
          fail(ErrorKind::Precondition,
               "vertex set in '" + group + "' is not a periodic orbit of the vertex map; "
               "only unions of periodic orbits are accepted (a forward-invariant preperiodic "
               "set reduces to its eventual periodic image: rebase at that orbit instead)");
      }
      for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
          if (verts[i] == verts[j])
            fail(ErrorKind::Usage, "repeated vertex in orbit spec '" + group + "'");
      auto mn = std::min_element(verts.begin(), verts.end());
      std::rotate(verts.begin(), mn, verts.end());
      out.push_back({Orbit::Kind::Vertex, {}, verts});
    } else {
      std::vector<PartitionLetter> letters;
      for (const auto& tok : tokens) {
        auto dot = tok.find('.');
        if (dot == std::string::npos)
          fail(ErrorKind::Usage, "interior orbit token must be EDGE.INDEX: '" + tok + "'");
        int e = p.edge_index(tok.substr(0, dot));
        if (e < 0) fail(ErrorKind::Usage, "unknown edge in orbit spec: '" + tok + "'");
        std::string digits = tok.substr(dot + 1);
        bool numeric = !digits.empty() && digits.size() <= 6 &&
                       std::all_of(digits.begin(), digits.end(),
                                   [](unsigned char c) { return std::isdigit(c); });
        if (!numeric)
          fail(ErrorKind::Usage, "bad letter index in orbit spec: '" + tok + "'");
        int idx = std::stoi(digits);
        if (idx < 1 || idx > static_cast<int>(p.rule[e].size()))
          fail(ErrorKind::Usage, "letter index out of range in orbit spec: '" + tok + "'");
        letters.push_back({e, idx});
      }
      for (std::size_t i = 0; i < letters.size(); ++i) {
        int target = letter_image(p, letters[i]).edge;
        if (letters[(i + 1) % letters.size()].edge != target)
          fail(ErrorKind::Precondition,
               "letter cycle in '" + group + "' is not closed under the rule");
      }
      LetterCycle cyc = canonical_rotation(letters);
      for (std::size_t d = 1; d < cyc.letters.size(); ++d) {
        if (cyc.letters.size() % d) continue;
        bool repeats = true;
        for (std::size_t k = 0; k < cyc.letters.size() && repeats; ++k)
          repeats = cyc.letters[k] == cyc.letters[k % d];
        if (repeats)
          fail(ErrorKind::Usage, "letter cycle in '" + group + "' is not primitive");
      }
      // An initial-side boundary cycle is the vertex itself; demand @v syntax.
      auto boundary = vertex_boundary_addresses(p);
      for (std::size_t phase = 0; phase < cyc.letters.size(); ++phase) {
        AddrStream s = cyc.stream_from(phase);
        for (const auto& [germ, addr] : boundary)
          if (!germ.term && streams_equal(s, addr))
            fail(ErrorKind::Precondition,
                 "cycle in '" + group + "' is the vertex '" +
                     p.vertices[germ_base(p, germ)] + "'; name it with @" +
                     p.vertices[germ_base(p, germ)]);
      }
      out.push_back({Orbit::Kind::Interior, cyc, {}});
    }
  }
  if (out.empty()) fail(ErrorKind::Usage, "empty orbit spec");
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (out[i] == out[j]) fail(ErrorKind::Usage, "duplicate orbit in spec");
  return out;
}

}  // namespace solenoid
