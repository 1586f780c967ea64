#include "solenoid/presentation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "solenoid/error.hpp"

namespace solenoid {

EdgeWord inverse(const EdgeWord& w) {
  EdgeWord r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back({it->edge, -it->sign});
  return r;
}

bool has_backtrack(const EdgeWord& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i].edge == w[i + 1].edge && w[i].sign == -w[i + 1].sign) return true;
  return false;
}

int Presentation::vertex_index(const std::string& n) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == n) return static_cast<int>(i);
  return -1;
}

int Presentation::edge_index(const std::string& n) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].name == n) return static_cast<int>(i);
  return -1;
}

std::string Presentation::word_string(const EdgeWord& w) const {
  std::string s;
  for (const auto& l : w) {
    if (!s.empty()) s += ' ';
    s += edges[l.edge].name;
    if (l.sign < 0) s += "^-1";
  }
  return s;
}

bool valid_name_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    switch (c) {
      case '^': case '.': case ',': case ':': case ';': case '#':
      case '(': case ')':
        return false;
      default: break;
    }
  }
  return true;
}

void check_structure(const Presentation& p) {
  auto bad = [&](const std::string& msg) { fail(ErrorKind::Parse, p.name + ": " + msg); };

  if (p.vertices.empty()) bad("no vertices");
  if (p.edges.empty()) bad("no edges");
  if (!valid_name_token(p.name)) bad("invalid presentation name");

  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    if (!valid_name_token(p.vertices[i])) bad("invalid vertex name '" + p.vertices[i] + "'");
    for (std::size_t j = i + 1; j < p.vertices.size(); ++j)
      if (p.vertices[i] == p.vertices[j]) bad("duplicate vertex '" + p.vertices[i] + "'");
  }
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& e = p.edges[i];
    if (!valid_name_token(e.name)) bad("invalid edge name '" + e.name + "'");
    for (std::size_t j = i + 1; j < p.edges.size(); ++j)
      if (e.name == p.edges[j].name) bad("duplicate edge '" + e.name + "'");
    if (e.init < 0 || e.init >= static_cast<int>(p.vertices.size()) ||
        e.term < 0 || e.term >= static_cast<int>(p.vertices.size()))
      bad("edge '" + e.name + "' has an unknown endpoint");
  }

  std::vector<char> touched(p.vertices.size(), 0);
  for (const auto& e : p.edges) { touched[e.init] = 1; touched[e.term] = 1; }
  for (std::size_t v = 0; v < p.vertices.size(); ++v)
    if (!touched[v]) bad("isolated vertex '" + p.vertices[v] + "'");

  if (p.vertex_map.size() != p.vertices.size()) bad("vertex map is not total");
  for (int w : p.vertex_map)
    if (w < 0 || w >= static_cast<int>(p.vertices.size())) bad("vertex map leaves the vertex set");

  if (p.rule.size() != p.edges.size()) bad("missing map line for some edge");
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& e = p.edges[i];
    const EdgeWord& w = p.rule[i];
    if (w.empty()) bad("empty image word for edge '" + e.name + "'");
    for (const auto& l : w)
      if (l.edge < 0 || l.edge >= static_cast<int>(p.edges.size()))
        bad("unknown edge in image of '" + e.name + "'");
    if (has_backtrack(w))
      bad("immediate backtrack in image of '" + e.name + "'");
    if (p.letter_start(w.front()) != p.vertex_map[e.init])
      bad("image of '" + e.name + "' does not start at the image of its initial vertex");
    if (p.letter_end(w.back()) != p.vertex_map[e.term])
      bad("image of '" + e.name + "' does not end at the image of its terminal vertex");
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
      if (p.letter_end(w[k]) != p.letter_start(w[k + 1]))
        bad("endpoint mismatch inside image of '" + e.name + "' at position " +
            std::to_string(k + 2));
  }
}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

SignedLetter parse_letter(const Presentation& p, const std::string& tok,
                          std::size_t line_no) {
  std::string name = tok;
  int sign = +1;
  auto caret = tok.find('^');
  if (caret != std::string::npos) {
    if (tok.substr(caret) != "^-1")
      fail(ErrorKind::Parse, "line " + std::to_string(line_no) +
                                 ": bad exponent in letter '" + tok + "'");
    name = tok.substr(0, caret);
    sign = -1;
  }
  int e = p.edge_index(name);
  if (e < 0)
    fail(ErrorKind::Parse,
         "line " + std::to_string(line_no) + ": unknown edge '" + name + "'");
  return {e, sign};
}

}  // namespace

Presentation parse_presentation(const std::string& text) {
  auto lines = tokenize(text);
  auto syntax = [](std::size_t n, const std::string& msg) {
    fail(ErrorKind::Parse, "line " + std::to_string(n) + ": " + msg);
  };

  if (lines.empty()) fail(ErrorKind::Parse, "empty presentation file");

  Presentation p;
  std::size_t at = 0;
  {
    const Line& l = lines[at];
    if (l.tokens.size() != 2 || l.tokens[0] != "presentation")
      syntax(l.number, "expected 'presentation NAME'");
    p.name = l.tokens[1];
    ++at;
  }
  if (at >= lines.size() || lines[at].tokens[0] != "vertices:")
    fail(ErrorKind::Parse, "expected 'vertices:' line");
  {
    const Line& l = lines[at];
    for (std::size_t i = 1; i < l.tokens.size(); ++i) {
      if (!valid_name_token(l.tokens[i])) syntax(l.number, "bad vertex name '" + l.tokens[i] + "'");
      if (p.vertex_index(l.tokens[i]) >= 0) syntax(l.number, "duplicate vertex '" + l.tokens[i] + "'");
      p.vertices.push_back(l.tokens[i]);
    }
    ++at;
  }

  std::vector<std::pair<std::size_t, std::vector<std::string>>> map_lines;
  std::vector<std::pair<int, int>> explicit_vmap;  // (v, w)
  for (; at < lines.size(); ++at) {
    const Line& l = lines[at];
    const std::string& kw = l.tokens[0];
    if (kw == "edge") {
      if (l.tokens.size() != 4) syntax(l.number, "expected 'edge NAME INIT TERM'");
      if (!valid_name_token(l.tokens[1])) syntax(l.number, "bad edge name '" + l.tokens[1] + "'");
      if (p.edge_index(l.tokens[1]) >= 0) syntax(l.number, "duplicate edge '" + l.tokens[1] + "'");
      int vi = p.vertex_index(l.tokens[2]);
      int vt = p.vertex_index(l.tokens[3]);
      if (vi < 0) syntax(l.number, "unknown vertex '" + l.tokens[2] + "'");
      if (vt < 0) syntax(l.number, "unknown vertex '" + l.tokens[3] + "'");
      p.edges.push_back({l.tokens[1], vi, vt});
    } else if (kw == "vmap") {
      if (l.tokens.size() != 4 || l.tokens[2] != "->")
        syntax(l.number, "expected 'vmap V -> W'");
      int v = p.vertex_index(l.tokens[1]);
      int w = p.vertex_index(l.tokens[3]);
      if (v < 0) syntax(l.number, "unknown vertex '" + l.tokens[1] + "'");
      if (w < 0) syntax(l.number, "unknown vertex '" + l.tokens[3] + "'");
      explicit_vmap.emplace_back(v, w);
    } else if (kw == "map") {
      if (l.tokens.size() < 4 || l.tokens[2] != "=")
        syntax(l.number, "expected 'map EDGE = L1 L2 ...'");
      map_lines.emplace_back(l.number,
                             std::vector<std::string>(l.tokens.begin() + 1, l.tokens.end()));
    } else {
      syntax(l.number, "unrecognized directive '" + kw + "'");
    }
  }

  p.rule.assign(p.edges.size(), {});
  std::vector<char> have_rule(p.edges.size(), 0);
  for (const auto& [line_no, toks] : map_lines) {
    int e = p.edge_index(toks[0]);
    if (e < 0) syntax(line_no, "map for unknown edge '" + toks[0] + "'");
    if (have_rule[e]) syntax(line_no, "duplicate map for edge '" + toks[0] + "'");
    have_rule[e] = 1;
    EdgeWord w;
    for (std::size_t i = 2; i < toks.size(); ++i) w.push_back(parse_letter(p, toks[i], line_no));
    if (w.empty()) syntax(line_no, "empty image word for edge '" + toks[0] + "'");
    p.rule[e] = std::move(w);
  }
  for (std::size_t e = 0; e < p.edges.size(); ++e)
    if (!have_rule[e])
      fail(ErrorKind::Parse, "no map line for edge '" + p.edges[e].name + "'");

  // Derive the vertex map from edge images, then cross-check explicit lines.
  p.vertex_map.assign(p.vertices.size(), -1);
  auto constrain = [&](int v, int w, const std::string& why) {
    if (p.vertex_map[v] < 0)
      p.vertex_map[v] = w;
    else if (p.vertex_map[v] != w)
      fail(ErrorKind::Parse, "inconsistent vertex image for '" + p.vertices[v] + "' (" + why + ")");
  };
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    if (p.rule[e].empty()) continue;
    constrain(p.edges[e].init, p.letter_start(p.rule[e].front()),
              "from image of " + p.edges[e].name);
    constrain(p.edges[e].term, p.letter_end(p.rule[e].back()),
              "from image of " + p.edges[e].name);
  }
  for (auto [v, w] : explicit_vmap) constrain(v, w, "explicit vmap line");
  for (std::size_t v = 0; v < p.vertices.size(); ++v)
    if (p.vertex_map[v] < 0)
      fail(ErrorKind::Parse, "vertex '" + p.vertices[v] + "' has no derivable image");

  check_structure(p);
  return p;
}

std::string serialize(const Presentation& p) {
  std::ostringstream os;
  os << "presentation " << p.name << "\n";
  os << "vertices:";
  for (const auto& v : p.vertices) os << ' ' << v;
  os << "\n";
  for (const auto& e : p.edges)
    os << "edge " << e.name << ' ' << p.vertices[e.init] << ' ' << p.vertices[e.term] << "\n";
  for (std::size_t v = 0; v < p.vertices.size(); ++v)
    os << "vmap " << p.vertices[v] << " -> " << p.vertices[p.vertex_map[v]] << "\n";
  for (std::size_t e = 0; e < p.edges.size(); ++e)
    os << "map " << p.edges[e].name << " = " << p.word_string(p.rule[e]) << "\n";
  return os.str();
}

EdgeWord apply_rule(const Presentation& p, const EdgeWord& w) {
  EdgeWord out;
  for (const auto& l : w) {
    if (l.edge < 0 || l.edge >= static_cast<int>(p.edges.size()))
      fail(ErrorKind::Usage, "apply_rule: unknown edge");
    if (l.sign > 0) {
      out.insert(out.end(), p.rule[l.edge].begin(), p.rule[l.edge].end());
    } else {
      EdgeWord inv = inverse(p.rule[l.edge]);
      out.insert(out.end(), inv.begin(), inv.end());
    }
  }
  return out;
}

EdgeWord iterate_rule(const Presentation& p, int edge, unsigned n) {
  EdgeWord w{{edge, +1}};
  for (unsigned k = 0; k < n; ++k) w = apply_rule(p, w);
  return w;
}

Presentation iterate_presentation(const Presentation& p, unsigned n) {
  Presentation q = p;
  q.name = p.name + "_iter" + std::to_string(n);
  for (std::size_t e = 0; e < p.edges.size(); ++e) q.rule[e] = iterate_rule(p, static_cast<int>(e), n);
  for (std::size_t v = 0; v < p.vertices.size(); ++v) {
    int w = static_cast<int>(v);
    for (unsigned k = 0; k < n; ++k) w = p.vertex_map[w];
    q.vertex_map[v] = w;
  }
  return q;
}

IntMatrix abelianization(const Presentation& p) {
  IntMatrix m(p.edges.size(), p.edges.size());
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    m.row_labels[e] = p.edges[e].name;
    m.col_labels[e] = p.edges[e].name;
    for (const auto& l : p.rule[e]) m.at(e, l.edge) += 1;
  }
  return m;
}

namespace {

// Maps a word letterwise through a candidate isomorphism.
EdgeWord map_word(const EdgeWord& w, const std::vector<std::size_t>& edge_map,
                  const std::vector<int>& edge_sign) {
  EdgeWord out;
  out.reserve(w.size());
  for (const auto& l : w)
    out.push_back({static_cast<int>(edge_map[l.edge]), l.sign * edge_sign[l.edge]});
  return out;
}

}  // namespace

std::optional<Isomorphism> presentations_isomorphic(const Presentation& p1,
                                                    const Presentation& p2,
                                                    std::size_t edge_limit) {
  if (p1.edges.size() > edge_limit || p2.edges.size() > edge_limit)
    fail(ErrorKind::Usage, "isomorphism search limited to " + std::to_string(edge_limit) + " edges");
  if (p1.vertices.size() != p2.vertices.size() || p1.edges.size() != p2.edges.size())
    return std::nullopt;

  const std::size_t nv = p1.vertices.size();
  const std::size_t ne = p1.edges.size();

  std::vector<std::size_t> vmap(nv, nv);
  std::vector<char> vused(nv, 0);
  std::vector<std::size_t> emap(ne, ne);
  std::vector<int> esign(ne, 0);
  std::vector<char> eused(ne, 0);

  std::function<bool()> assign_edges_and_check = [&]() -> bool {
    std::function<bool(std::size_t)> rec = [&](std::size_t e) -> bool {
      if (e == ne) {
        for (std::size_t i = 0; i < ne; ++i) {
          EdgeWord lhs = (esign[i] > 0) ? p2.rule[emap[i]] : inverse(p2.rule[emap[i]]);
          EdgeWord rhs = map_word(p1.rule[i], emap, esign);
          if (!(lhs == rhs)) return false;
        }
        return true;
      }
      int a = p1.edges[e].init, b = p1.edges[e].term;
      for (std::size_t f = 0; f < ne; ++f) {
        if (eused[f]) continue;
        int fa = p2.edges[f].init, fb = p2.edges[f].term;
        for (int s : {+1, -1}) {
          int need_a = (s > 0) ? fa : fb;
          int need_b = (s > 0) ? fb : fa;
          if (static_cast<int>(vmap[a]) != need_a || static_cast<int>(vmap[b]) != need_b) continue;
          emap[e] = f;
          esign[e] = s;
          eused[f] = 1;
          if (rec(e + 1)) return true;
          eused[f] = 0;
        }
      }
      return false;
    };
    return rec(0);
  };

  std::function<bool(std::size_t)> assign_vertices = [&](std::size_t v) -> bool {
    if (v == nv) {
      for (std::size_t i = 0; i < nv; ++i)
        if (vmap[p1.vertex_map[i]] != static_cast<std::size_t>(p2.vertex_map[vmap[i]]))
          return false;
      return assign_edges_and_check();
    }
    for (std::size_t w = 0; w < nv; ++w) {
      if (vused[w]) continue;
      vmap[v] = w;
      vused[w] = 1;
      if (assign_vertices(v + 1)) return true;
      vused[w] = 0;
    }
    return false;
  };

  if (!assign_vertices(0)) return std::nullopt;
  return Isomorphism{vmap, emap, esign};
}

}  // namespace solenoid
