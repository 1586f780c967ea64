#include "solenoid/axioms.hpp"

#include <algorithm>
#include <set>

#include "solenoid/error.hpp"

namespace solenoid {

int germ_base(const Presentation& p, const Germ& g) {
  return g.term ? p.edges[g.edge].term : p.edges[g.edge].init;
}

Germ germ_image(const Presentation& p, const Germ& g) {
  const EdgeWord& w = p.rule[g.edge];
  if (!g.term) {
    const SignedLetter& first = w.front();
    return Germ{first.edge, first.sign < 0};
  }
  const SignedLetter& last = w.back();
  return Germ{last.edge, last.sign > 0};
}

std::string verdict_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::string classification_string(Classification c) {
  switch (c) {
    case Classification::Solenoid: return "solenoid";
    case Classification::BranchedSolenoid: return "branched solenoid";
    case Classification::Invalid: return "invalid";
  }
  return "invalid";
}

NonfoldingResult check_nonfolding(const Presentation& p) {
  // Ordered signed adjacent pairs, closed under the junction map
  //   (x^s, y^t) -> (last of image(x^s), first of image(y^t)).
  // A reachable (z, z^-1) pair is exactly a fold of some iterate.
  auto image_first = [&](const SignedLetter& l) -> SignedLetter {
    const EdgeWord& w = p.rule[l.edge];
    return l.sign > 0 ? w.front() : SignedLetter{w.back().edge, -w.back().sign};
  };
  auto image_last = [&](const SignedLetter& l) -> SignedLetter {
    const EdgeWord& w = p.rule[l.edge];
    return l.sign > 0 ? w.back() : SignedLetter{w.front().edge, -w.front().sign};
  };

  std::set<std::pair<SignedLetter, SignedLetter>> seen;
  std::vector<std::pair<SignedLetter, SignedLetter>> work;
  auto push = [&](SignedLetter a, SignedLetter b) {
    if (seen.insert({a, b}).second) work.push_back({a, b});
  };
  for (const EdgeWord& w : p.rule)
    for (std::size_t i = 0; i + 1 < w.size(); ++i) push(w[i], w[i + 1]);

  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    if (a.edge == b.edge && a.sign == -b.sign)
      return {Verdict::Fail, std::make_pair(a, b)};
    push(image_last(a), image_first(b));
  }
  return {Verdict::Pass, std::nullopt};
}

FlatteningResult check_flattening(const Presentation& p) {
  FlatteningResult r;
  r.vertex_exponent.assign(p.vertices.size(), -1);
  r.verdict = Verdict::Pass;

  std::vector<std::vector<Germ>> at_vertex(p.vertices.size());
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    at_vertex[p.edges[e].init].push_back({static_cast<int>(e), false});
    at_vertex[p.edges[e].term].push_back({static_cast<int>(e), true});
  }

  // The image cardinality is non-increasing, so it can drop at most 2|E|
  // times; iterating past that bound reads off the stabilized value.
  const std::size_t germ_count = 2 * p.edges.size();
  for (std::size_t v = 0; v < p.vertices.size(); ++v) {
    std::set<Germ> cur(at_vertex[v].begin(), at_vertex[v].end());
    std::size_t prev_size = cur.size();
    int first_two = -1;
    std::size_t stabilized = cur.size();
    for (std::size_t k = 1; k <= germ_count + 1; ++k) {
      std::set<Germ> next;
      for (const Germ& g : cur) next.insert(germ_image(p, g));
      if (next.size() > prev_size)
        fail(ErrorKind::Internal, "germ image cardinality increased");
      prev_size = next.size();
      cur = std::move(next);
      if (cur.size() == 2 && first_two < 0) first_two = static_cast<int>(k);
      stabilized = cur.size();
    }
    if (stabilized != 2) {
      // Above 2: no iterate flattens v. Exactly 1: the image of every
      // neighborhood is a half-open arc, not an open interval.
      r.verdict = Verdict::Fail;
    } else {
      r.vertex_exponent[v] = first_two;
      r.exponent = std::max(r.exponent, first_two);
    }
  }
  if (r.verdict == Verdict::Fail) r.exponent = 0;
  return r;
}

IrreducibilityResult check_irreducibility(const Presentation& p) {
  IntMatrix m = abelianization(p);
  IrreducibilityResult r;
  r.irreducible = is_irreducible(m);
  r.primitive = is_primitive(m);
  return r;
}

Verdict check_expansion(const Presentation& p) {
  IntMatrix m = abelianization(p);
  if (!is_irreducible(m)) return Verdict::Indeterminate;
  return m.is_permutation() ? Verdict::Fail : Verdict::Pass;
}

ExpansionReport natural_lengths(const Presentation& p) {
  IntMatrix m = abelianization(p);
  PerronData pd = perron(m);
  ExpansionReport r;
  r.lambda = pd.lambda;
  for (std::size_t e = 0; e < p.edges.size(); ++e)
    r.lengths[p.edges[e].name] = pd.lengths[e];
  r.exact_verdict = check_expansion(p) == Verdict::Pass;
  return r;
}

AxiomReport validate(const Presentation& p) {
  AxiomReport rep;
  rep.markov = Verdict::Pass;  // enforced structurally at parse time
  rep.irreducibility = check_irreducibility(p);
  rep.nonfolding = check_nonfolding(p);
  rep.expansion = check_expansion(p);
  if (rep.nonfolding.verdict == Verdict::Pass)
    rep.flattening = check_flattening(p);
  else
    rep.flattening.verdict = Verdict::Indeterminate;
  if (rep.irreducibility.irreducible) rep.perron = natural_lengths(p);

  bool core = rep.irreducibility.irreducible && rep.expansion == Verdict::Pass &&
              rep.nonfolding.verdict == Verdict::Pass;
  if (!core)
    rep.classification = Classification::Invalid;
  else if (rep.flattening.verdict == Verdict::Pass)
    rep.classification = Classification::Solenoid;
  else
    rep.classification = Classification::BranchedSolenoid;
  return rep;
}

}  // namespace solenoid
