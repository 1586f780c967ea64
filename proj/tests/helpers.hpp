#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "solenoid/axioms.hpp"
#include "solenoid/intmatrix.hpp"
#include "solenoid/orbits.hpp"
#include "solenoid/presentation.hpp"

namespace testutil {

using namespace solenoid;

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Presentation load_fixture(const std::string& name) {
  return parse_presentation(read_file(fixture_path(name)));
}

// Independent nonfolding oracle: expand the iterated words outright and
// scan for an adjacent x^s x^-s pair.
inline bool brute_force_folds(const Presentation& p, unsigned max_depth) {
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    EdgeWord w{{static_cast<int>(e), +1}};
    for (unsigned n = 1; n <= max_depth; ++n) {
      w = apply_rule(p, w);
      if (has_backtrack(w)) return true;
    }
  }
  return false;
}

// Random valid presentations: random small graph, random vertex map,
// image words built as non-backtracking walks compatible with it.
inline std::optional<Presentation> random_presentation(std::mt19937_64& rng) {
  auto pick = [&](std::size_t n) { return static_cast<int>(rng() % n); };
  Presentation p;
  p.name = "random";
  std::size_t nv = 1 + rng() % 2;
  std::size_t ne = 1 + rng() % 4;
  for (std::size_t v = 0; v < nv; ++v) p.vertices.push_back("v" + std::to_string(v));
  for (std::size_t e = 0; e < ne; ++e)
    p.edges.push_back({"x" + std::to_string(e), pick(nv), pick(nv)});
  // every vertex must meet an edge
  std::vector<char> touched(nv, 0);
  for (const auto& e : p.edges) { touched[e.init] = 1; touched[e.term] = 1; }
  for (std::size_t v = 0; v < nv; ++v)
    if (!touched[v]) return std::nullopt;

  p.vertex_map.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) p.vertex_map[v] = pick(nv);

  p.rule.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    int from = p.vertex_map[p.edges[e].init];
    int to = p.vertex_map[p.edges[e].term];
    std::size_t len = 1 + rng() % 4;
    // random non-backtracking walk from `from` to `to` of exactly `len` letters
    bool built = false;
    for (int attempt = 0; attempt < 200 && !built; ++attempt) {
      EdgeWord w;
      int cur = from;
      bool dead = false;
      for (std::size_t k = 0; k < len; ++k) {
        std::vector<SignedLetter> options;
        for (std::size_t f = 0; f < ne; ++f)
          for (int s : {+1, -1}) {
            SignedLetter l{static_cast<int>(f), s};
            if (p.letter_start(l) != cur) continue;
            if (!w.empty() && w.back().edge == l.edge && w.back().sign == -l.sign) continue;
            options.push_back(l);
          }
        if (options.empty()) { dead = true; break; }
        SignedLetter l = options[rng() % options.size()];
        w.push_back(l);
        cur = p.letter_end(l);
      }
      if (!dead && cur == to) {
        p.rule[e] = w;
        built = true;
      }
    }
    if (!built) return std::nullopt;
  }
  try {
    check_structure(p);
  } catch (...) {
    return std::nullopt;
  }
  return p;
}

// Float-coordinate oracle for point positions: coordinates inside an edge
// are reconstructed from the natural lengths by descending the address to a
// fixed depth. Positions are in [0, length(edge)].
struct CoordinateOracle {
  const Presentation& p;
  double lambda;
  std::vector<double> len;  // per edge

  explicit CoordinateOracle(const Presentation& pres) : p(pres) {
    PerronData pd = perron(abelianization(p));
    lambda = pd.lambda;
    len = pd.lengths;
  }

  double letter_length(const PartitionLetter& l) const {
    return len[letter_image(p, l).edge] / lambda;
  }

  double letter_offset(const PartitionLetter& l) const {
    double off = 0.0;
    for (int j = 1; j < l.index; ++j) off += letter_length({l.edge, j});
    return off;
  }

  double coordinate(const AddrStream& s, unsigned depth = 40) const {
    double t = 0.0;  // position within the edge at level `depth`
    for (int k = static_cast<int>(depth) - 1; k >= 0; --k) {
      const PartitionLetter& l = s.at(static_cast<std::size_t>(k));
      double inner = t / lambda;
      if (letter_image(p, l).sign < 0)
        inner = letter_length(l) - inner;
      t = letter_offset(l) + inner;
    }
    return t;
  }
};

// Order and exponent of Z^3 / row-lattice(A) for nonsingular 3x3 A,
// computed without the Smith form: membership of x in the lattice is
// decided through the adjugate (x * adj(A) divisible by det(A)).
struct LatticeOracle {
  Int det;
  std::vector<Int> adj;  // 3x3 adjugate, row-major

  explicit LatticeOracle(const IntMatrix& a) {
    auto at = [&](int i, int j) { return a.at(i, j); };
    auto cof = [&](int i, int j) {
      int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      if (r0 > r1) std::swap(r0, r1);
      if (c0 > c1) std::swap(c0, c1);
      Int minor = at(r0, c0) * at(r1, c1) - at(r0, c1) * at(r1, c0);
      return ((i + j) % 2 == 0) ? minor : -minor;
    };
    det = determinant(a);
    adj.resize(9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) adj[i * 3 + j] = cof(j, i);  // transpose of cofactors
  }

  bool in_lattice(const Int& x0, const Int& x1, const Int& x2) const {
    for (int j = 0; j < 3; ++j) {
      Int t = x0 * adj[0 * 3 + j] + x1 * adj[1 * 3 + j] + x2 * adj[2 * 3 + j];
      if (t % det != 0) return false;
    }
    return true;
  }

  Int order() const { return abs(det); }

  // smallest k >= 1 with k*e_i in the lattice, lcm over i
  Int exponent() const {
    Int result = 1;
    for (int i = 0; i < 3; ++i) {
      Int k = 1;
      for (; k <= abs(det); ++k) {
        Int x[3] = {0, 0, 0};
        x[i] = k;
        if (in_lattice(x[0], x[1], x[2])) break;
      }
      result = boost::multiprecision::lcm(result, k);
    }
    return result;
  }
};

}  // namespace testutil
