#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solenoid/presentation.hpp"

namespace solenoid {

// A directed half-edge: the outgoing end at the edge's initial vertex, or
// the incoming end at its terminal vertex.
struct Germ {
  int edge = -1;
  bool term = false;  // false = Init, true = Term

  bool operator==(const Germ& o) const { return edge == o.edge && term == o.term; }
  bool operator<(const Germ& o) const {
    if (edge != o.edge) return edge < o.edge;
    return term < o.term;
  }
};

int germ_base(const Presentation& p, const Germ& g);

// One application of the rule to a half-edge: where the germ's arc lands.
Germ germ_image(const Presentation& p, const Germ& g);

enum class Verdict { Pass, Fail, Indeterminate };
std::string verdict_string(Verdict v);

enum class Classification { Solenoid, BranchedSolenoid, Invalid };
std::string classification_string(Classification c);

struct NonfoldingResult {
  Verdict verdict = Verdict::Indeterminate;
  std::optional<std::pair<SignedLetter, SignedLetter>> witness;  // a (z, z^-1) pair
};

struct FlatteningResult {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<int> vertex_exponent;  // -1 where the germ set never reaches size 2
  int exponent = 0;                  // max over vertices
};

struct IrreducibilityResult {
  bool irreducible = false;
  bool primitive = false;
};

struct ExpansionReport {
  double lambda = 0.0;
  std::map<std::string, double> lengths;  // edge name -> natural length, sum 1
  bool exact_verdict = false;             // the integer-only expansion verdict
};

struct AxiomReport {
  IrreducibilityResult irreducibility;      // axioms 0-1 proxy + mixing flag
  FlatteningResult flattening;              // axiom 2
  Verdict expansion = Verdict::Indeterminate;  // axiom 3, exact
  NonfoldingResult nonfolding;              // axiom 4
  Verdict markov = Verdict::Pass;           // axiom 5, structural
  Classification classification = Classification::Invalid;
  std::optional<ExpansionReport> perron;    // present when irreducible
};

NonfoldingResult check_nonfolding(const Presentation& p);
FlatteningResult check_flattening(const Presentation& p);
IrreducibilityResult check_irreducibility(const Presentation& p);
Verdict check_expansion(const Presentation& p);
ExpansionReport natural_lengths(const Presentation& p);
AxiomReport validate(const Presentation& p);

}  // namespace solenoid
