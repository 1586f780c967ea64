#include "solenoid/shift_equivalence.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "solenoid/axioms.hpp"
#include "solenoid/error.hpp"

namespace solenoid {

EdgeWord apply_graph_map(const std::vector<EdgeWord>& words, const EdgeWord& w) {
  EdgeWord out;
  for (const auto& l : w) {
    if (l.edge < 0 || l.edge >= static_cast<int>(words.size()))
      fail(ErrorKind::Usage, "graph map applied to unknown edge");
    if (l.sign > 0) {
      out.insert(out.end(), words[l.edge].begin(), words[l.edge].end());
    } else {
      EdgeWord inv = inverse(words[l.edge]);
      out.insert(out.end(), inv.begin(), inv.end());
    }
  }
  return out;
}

namespace {

// Path-consistency of a word table against a vertex map; derives missing
// vertex images the same way presentation parsing does.
void close_vertex_map(const Presentation& src, const Presentation& dst,
                      const std::vector<EdgeWord>& words, std::vector<int>& vmap,
                      const std::string& what) {
  auto constrain = [&](int v, int w) {
    if (vmap[v] < 0)
      vmap[v] = w;
    else if (vmap[v] != w)
      fail(ErrorKind::Parse, what + ": inconsistent image for vertex '" + src.vertices[v] + "'");
  };
  for (std::size_t e = 0; e < src.edges.size(); ++e) {
    const EdgeWord& w = words[e];
    if (w.empty()) fail(ErrorKind::Parse, what + ": empty image for edge '" + src.edges[e].name + "'");
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
      if (dst.letter_end(w[k]) != dst.letter_start(w[k + 1]))
        fail(ErrorKind::Parse,
             what + ": image of '" + src.edges[e].name + "' is not a path");
    constrain(src.edges[e].init, dst.letter_start(w.front()));
    constrain(src.edges[e].term, dst.letter_end(w.back()));
  }
  for (std::size_t v = 0; v < src.vertices.size(); ++v)
    if (vmap[v] < 0)
      fail(ErrorKind::Parse, what + ": vertex '" + src.vertices[v] + "' has no derivable image");
}

SignedLetter parse_map_letter(const Presentation& p, const std::string& tok,
                              std::size_t line_no) {
  std::string name = tok;
  int sign = +1;
  auto caret = tok.find('^');
  if (caret != std::string::npos) {
    if (tok.substr(caret) != "^-1")
      fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad exponent '" + tok + "'");
    name = tok.substr(0, caret);
    sign = -1;
  }
  int e = p.edge_index(name);
  if (e < 0)
    fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown edge '" + name + "'");
  return {e, sign};
}

}  // namespace

GraphMapPair parse_map_file(const Presentation& px, const Presentation& py,
                            const std::string& text) {
  GraphMapPair pair;
  pair.rmap.assign(px.edges.size(), {});
  pair.smap.assign(py.edges.size(), {});
  pair.rvert.assign(px.vertices.size(), -1);
  pair.svert.assign(py.vertices.size(), -1);
  std::vector<std::pair<int, int>> explicit_r, explicit_s;
  bool have_lag = false;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> t;
    std::string tok;
    while (ls >> tok) t.push_back(tok);
    if (t.empty()) continue;
    auto syntax = [&](const std::string& msg) {
      fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + msg);
    };

    if (t[0] == "lag") {
      if (t.size() != 2) syntax("expected 'lag M'");
      bool numeric = !t[1].empty() && t[1].size() <= 3 &&
                     std::all_of(t[1].begin(), t[1].end(),
                                 [](unsigned char c) { return std::isdigit(c); });
      if (!numeric) syntax("bad lag");
      int m = std::stoi(t[1]);
      if (m < 1) syntax("lag must be at least 1");
      pair.lag = static_cast<unsigned>(m);
      have_lag = true;
    } else if (t[0] == "rmap" || t[0] == "smap") {
      bool is_r = t[0] == "rmap";
      const Presentation& src = is_r ? px : py;
      const Presentation& dst = is_r ? py : px;
      if (t.size() < 4 || t[2] != "=") syntax("expected '" + t[0] + " EDGE = letters...'");
      int e = src.edge_index(t[1]);
      if (e < 0) syntax("unknown edge '" + t[1] + "'");
      EdgeWord w;
      for (std::size_t i = 3; i < t.size(); ++i) w.push_back(parse_map_letter(dst, t[i], line_no));
      auto& slot = is_r ? pair.rmap[e] : pair.smap[e];
      if (!slot.empty()) syntax("duplicate " + t[0] + " for '" + t[1] + "'");
      slot = std::move(w);
    } else if (t[0] == "rvert" || t[0] == "svert") {
      bool is_r = t[0] == "rvert";
      const Presentation& src = is_r ? px : py;
      const Presentation& dst = is_r ? py : px;
      if (t.size() != 4 || t[2] != "->") syntax("expected '" + t[0] + " V -> W'");
      int v = src.vertex_index(t[1]);
      int w = dst.vertex_index(t[3]);
      if (v < 0) syntax("unknown vertex '" + t[1] + "'");
      if (w < 0) syntax("unknown vertex '" + t[3] + "'");
      (is_r ? explicit_r : explicit_s).emplace_back(v, w);
    } else {
      syntax("unrecognized directive '" + t[0] + "'");
    }
  }
  if (!have_lag) fail(ErrorKind::Parse, "map file missing 'lag' line");
  for (std::size_t e = 0; e < px.edges.size(); ++e)
    if (pair.rmap[e].empty())
      fail(ErrorKind::Parse, "missing rmap for edge '" + px.edges[e].name + "'");
  for (std::size_t e = 0; e < py.edges.size(); ++e)
    if (pair.smap[e].empty())
      fail(ErrorKind::Parse, "missing smap for edge '" + py.edges[e].name + "'");

  close_vertex_map(px, py, pair.rmap, pair.rvert, "rmap");
  close_vertex_map(py, px, pair.smap, pair.svert, "smap");
  for (auto [v, w] : explicit_r)
    if (pair.rvert[v] != w)
      fail(ErrorKind::Parse, "rvert line contradicts the edge words for '" + px.vertices[v] + "'");
  for (auto [v, w] : explicit_s)
    if (pair.svert[v] != w)
      fail(ErrorKind::Parse, "svert line contradicts the edge words for '" + py.vertices[v] + "'");
  return pair;
}

std::string serialize_map_file(const Presentation& px, const Presentation& py,
                               const GraphMapPair& pair) {
  std::ostringstream os;
  os << "lag " << pair.lag << "\n";
  for (std::size_t e = 0; e < px.edges.size(); ++e)
    os << "rmap " << px.edges[e].name << " = " << py.word_string(pair.rmap[e]) << "\n";
  for (std::size_t e = 0; e < py.edges.size(); ++e)
    os << "smap " << py.edges[e].name << " = " << px.word_string(pair.smap[e]) << "\n";
  for (std::size_t v = 0; v < px.vertices.size(); ++v)
    os << "rvert " << px.vertices[v] << " -> " << py.vertices[pair.rvert[v]] << "\n";
  for (std::size_t v = 0; v < py.vertices.size(); ++v)
    os << "svert " << py.vertices[v] << " -> " << px.vertices[pair.svert[v]] << "\n";
  return os.str();
}

SeReport verify_shift_equivalence(const Presentation& px, const Presentation& py,
                                  const GraphMapPair& pair) {
  SeReport rep;
  auto word_identity = [&](const std::string& name, const Presentation& printer,
                           const EdgeWord& lhs, const EdgeWord& rhs) {
    SeIdentity id{name, lhs == rhs, ""};
    if (!id.pass)
      id.detail = printer.word_string(lhs) + "  !=  " + printer.word_string(rhs);
    rep.all_pass = rep.all_pass && id.pass;
    rep.identities.push_back(std::move(id));
  };

  for (std::size_t e = 0; e < px.edges.size(); ++e)
    word_identity("r(f(" + px.edges[e].name + ")) = g(r(" + px.edges[e].name + "))", py,
                  apply_graph_map(pair.rmap, px.rule[e]),
                  apply_rule(py, pair.rmap[e]));
  for (std::size_t e = 0; e < py.edges.size(); ++e)
    word_identity("s(g(" + py.edges[e].name + ")) = f(s(" + py.edges[e].name + "))", px,
                  apply_graph_map(pair.smap, py.rule[e]),
                  apply_rule(px, pair.smap[e]));
  for (std::size_t e = 0; e < px.edges.size(); ++e) {
    EdgeWord fm{{static_cast<int>(e), +1}};
    for (unsigned k = 0; k < pair.lag; ++k) fm = apply_rule(px, fm);
    word_identity("s(r(" + px.edges[e].name + ")) = f^" + std::to_string(pair.lag) + "(" +
                      px.edges[e].name + ")", px,
                  apply_graph_map(pair.smap, pair.rmap[e]), fm);
  }
  for (std::size_t e = 0; e < py.edges.size(); ++e) {
    EdgeWord gm{{static_cast<int>(e), +1}};
    for (unsigned k = 0; k < pair.lag; ++k) gm = apply_rule(py, gm);
    word_identity("r(s(" + py.edges[e].name + ")) = g^" + std::to_string(pair.lag) + "(" +
                      py.edges[e].name + ")", py,
                  apply_graph_map(pair.rmap, pair.smap[e]), gm);
  }

  auto vertex_identity = [&](const std::string& name, bool ok, const std::string& detail) {
    rep.all_pass = rep.all_pass && ok;
    rep.identities.push_back({name, ok, ok ? "" : detail});
  };
  for (std::size_t v = 0; v < px.vertices.size(); ++v) {
    bool ok = pair.rvert[px.vertex_map[v]] == py.vertex_map[pair.rvert[v]];
    vertex_identity("r(F(" + px.vertices[v] + ")) = G(r(" + px.vertices[v] + "))", ok,
                    "vertex images differ");
    int w = static_cast<int>(v);
    for (unsigned k = 0; k < pair.lag; ++k) w = px.vertex_map[w];
    vertex_identity("s(r(" + px.vertices[v] + ")) = F^" + std::to_string(pair.lag) + "(" +
                        px.vertices[v] + ")",
                    pair.svert[pair.rvert[v]] == w, "vertex images differ");
  }
  for (std::size_t v = 0; v < py.vertices.size(); ++v) {
    bool ok = pair.svert[py.vertex_map[v]] == px.vertex_map[pair.svert[v]];
    vertex_identity("s(G(" + py.vertices[v] + ")) = F(s(" + py.vertices[v] + "))", ok,
                    "vertex images differ");
    int w = static_cast<int>(v);
    for (unsigned k = 0; k < pair.lag; ++k) w = py.vertex_map[w];
    vertex_identity("r(s(" + py.vertices[v] + ")) = G^" + std::to_string(pair.lag) + "(" +
                        py.vertices[v] + ")",
                    pair.rvert[pair.svert[v]] == w, "vertex images differ");
  }
  return rep;
}

bool verify_elementary_sse(const IntMatrix& a, const IntMatrix& b,
                           const IntMatrix& r, const IntMatrix& s) {
  if (!r.nonnegative() || !s.nonnegative())
    fail(ErrorKind::Precondition, "elementary sse requires nonnegative R and S");
  if (r.rows != a.rows || s.cols != a.cols || s.rows != b.rows || r.cols != b.cols)
    fail(ErrorKind::Usage, "elementary sse shape mismatch");
  return r.mul(s) == a && s.mul(r) == b;
}

std::vector<std::vector<PartitionLetter>> allowed_blocks(const Presentation& p,
                                                         unsigned length) {
  std::vector<std::vector<PartitionLetter>> out;
  std::vector<PartitionLetter> cur;
  std::function<void()> extend = [&]() {
    if (cur.size() == length) {
      out.push_back(cur);
      return;
    }
    int target = letter_image(p, cur.back()).edge;
    for (std::size_t j = 1; j <= p.rule[target].size(); ++j) {
      cur.push_back({target, static_cast<int>(j)});
      extend();
      cur.pop_back();
    }
  };
  for (const auto& l : all_letters(p)) {
    cur = {l};
    if (length == 1)
      out.push_back(cur);
    else
      extend();
  }
  return out;
}

namespace {

using Count = unsigned long long;

// Sum over the f^d-cells of an edge of weight(image edge of the cell).
struct CellWeights {
  std::vector<std::vector<Count>> w;  // w[d][edge]

  CellWeights(const Presentation& p, const std::vector<Count>& base, unsigned depth) {
    w.assign(depth + 1, std::vector<Count>(p.edges.size(), 0));
    w[0] = base;
    for (unsigned d = 1; d <= depth; ++d)
      for (std::size_t e = 0; e < p.edges.size(); ++e)
        for (const SignedLetter& l : p.rule[e]) w[d][e] += w[d - 1][l.edge];
  }
};

// The one-sided block map induced by a graph map t: src -> dst along the
// lag-m descent. For each allowed (m+1)-window, locate the window's
// depth-(m+1) cell, allocate target-partition segments across the source
// cells in order, and read off the target letter containing the cell's run.
BlockMap build_block_map(const Presentation& src, const Presentation& dst,
                         const std::vector<EdgeWord>& tmap, unsigned lag,
                         unsigned offset) {
  const unsigned window = lag + 1;

  std::vector<Count> tlen(src.edges.size());
  for (std::size_t e = 0; e < src.edges.size(); ++e) tlen[e] = tmap[e].size();
  CellWeights alloc(src, tlen, window);  // alloc.w[d][e]: segments across f^d-cells of e

  std::vector<Count> ones(dst.edges.size(), 1);
  CellWeights cells(dst, ones, window);  // cells.w[d][eps]: number of g^d-cells of eps

  // Tag stream of the image path t(e): the g-letter owning each g^(m+1)
  // cell of each image edge, orientation-aware.
  std::vector<std::vector<PartitionLetter>> tags(src.edges.size());
  for (std::size_t e = 0; e < src.edges.size(); ++e) {
    for (const SignedLetter& l : tmap[e]) {
      std::vector<PartitionLetter> block;
      for (std::size_t j = 1; j <= dst.rule[l.edge].size(); ++j) {
        Count reps = cells.w[window - 1][dst.rule[l.edge][j - 1].edge];
        for (Count k = 0; k < reps; ++k)
          block.push_back({l.edge, static_cast<int>(j)});
      }
      if (l.sign < 0) std::reverse(block.begin(), block.end());
      tags[e].insert(tags[e].end(), block.begin(), block.end());
    }
    if (static_cast<Count>(tags[e].size()) != alloc.w[window][e])
      fail(ErrorKind::Internal,
           "segment totals disagree for edge '" + src.edges[e].name +
               "'; the pair does not satisfy the lifting hypotheses");
  }

  BlockMap bm;
  bm.window = window;
  bm.offset = offset;
  for (const auto& block : allowed_blocks(src, window)) {
    // Orientation-aware descent accumulating the segment offset.
    Count seg_offset = 0;
    int x = block[0].edge;
    int sigma = +1;
    for (unsigned k = 0; k < window; ++k) {
      int j = block[k].index;  // chosen letter of x
      const EdgeWord& rule = src.rule[x];
      unsigned remaining = window - k - 1;
      for (std::size_t jp = 1; jp <= rule.size(); ++jp) {
        bool before = sigma > 0 ? static_cast<int>(jp) < j : static_cast<int>(jp) > j;
        if (before) seg_offset += alloc.w[remaining][rule[jp - 1].edge];
      }
      sigma *= rule[j - 1].sign;
      x = rule[j - 1].edge;
    }
    Count seg_len = tlen[x];  // x is now the f^(m+1)-image edge of the cell
    if (seg_len == 0) fail(ErrorKind::Internal, "empty graph-map image");

    const auto& stream = tags[block[0].edge];
    if (seg_offset + seg_len > stream.size())
      fail(ErrorKind::Internal, "segment run exceeds the target stream");
    PartitionLetter target = stream[seg_offset];
    for (Count k = 1; k < seg_len; ++k)
      if (!(stream[seg_offset + k] == target))
        fail(ErrorKind::Internal,
             "segment run crosses a target letter boundary; the pair does not "
             "satisfy the lifting hypotheses");
    bm.table[block] = target;
  }
  return bm;
}

}  // namespace

PartitionLetter BlockMap::apply_at(const std::vector<PartitionLetter>& w, std::size_t i) const {
  if (i < offset || i - offset + window > w.size())
    fail(ErrorKind::Usage, "block map window out of range");
  std::vector<PartitionLetter> key(w.begin() + (i - offset), w.begin() + (i - offset) + window);
  auto it = table.find(key);
  if (it == table.end()) fail(ErrorKind::Usage, "block not in table");
  return it->second;
}

std::vector<PartitionLetter> BlockMap::apply_periodic(
    const std::vector<PartitionLetter>& cycle) const {
  std::vector<PartitionLetter> out;
  const std::size_t n = cycle.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<PartitionLetter> key;
    for (unsigned k = 0; k < window; ++k)
      key.push_back(cycle[(i + n * window - offset + k) % n]);
    auto it = table.find(key);
    if (it == table.end()) fail(ErrorKind::Usage, "block not in table");
    out.push_back(it->second);
  }
  return out;
}

LiftResult lift_block_map(const Presentation& px, const Presentation& py,
                          const GraphMapPair& pair) {
  for (const auto* p : {&px, &py}) {
    if (check_expansion(*p) != Verdict::Pass)
      fail(ErrorKind::Precondition, "lifting requires the expansion axiom on both presentations");
    if (check_nonfolding(*p).verdict != Verdict::Pass)
      fail(ErrorKind::Precondition, "lifting requires the nonfolding axiom on both presentations");
  }
  SeReport rep = verify_shift_equivalence(px, py, pair);
  if (!rep.all_pass)
    fail(ErrorKind::Precondition,
         "lifting requires a verified shift equivalence; run the verifier for details");

  LiftResult out;
  out.phi = build_block_map(px, py, pair.rmap, pair.lag, pair.lag);  // memory m
  out.psi = build_block_map(py, px, pair.smap, pair.lag, 0);        // anticipation m
  return out;
}

std::string serialize_block_map(const Presentation& src, const Presentation& dst,
                                const BlockMap& bm) {
  std::ostringstream os;
  for (const auto& [block, target] : bm.table) {
    os << "block";
    for (const auto& l : block) os << ' ' << letter_token(src, l);
    os << " -> " << letter_token(dst, target) << "\n";
  }
  return os.str();
}

}  // namespace solenoid
