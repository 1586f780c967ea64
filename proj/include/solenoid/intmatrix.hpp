#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace solenoid {

using Int = boost::multiprecision::cpp_int;

// Dense rectangular matrix over unbounded signed integers.
// Row/column labels are carried along for reports; they default to indices.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Int> a;  // row-major
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c);

  Int& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  bool square() const { return rows == cols; }
  bool operator==(const IntMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);

  IntMatrix mul(const IntMatrix& o) const;
  IntMatrix pow(unsigned n) const;
  IntMatrix transpose() const;
  Int trace() const;
  bool nonnegative() const;
  bool is_permutation() const;

  std::string to_literal() const;  // [[0,1],[1,0]] form
};

// Parses the CLI matrix literal syntax, e.g. [[0,1,0],[1,0,3],[1,1,1]].
IntMatrix parse_matrix_literal(const std::string& text);

// Exact determinant (fraction-free Gaussian elimination).
Int determinant(const IntMatrix& m);

struct SmithResult {
  IntMatrix d;  // diagonal, d1 | d2 | ..., entries >= 0
  IntMatrix u;  // unimodular, u*a*v = d
  IntMatrix v;  // unimodular
};

// Smith normal form with unimodular certificates. The factorization
// u*a*v == d and |det u| == |det v| == 1 are re-checked on every call.
SmithResult smith_normal_form(const IntMatrix& a);

// Invariant-factor description of a finitely generated abelian group.
struct AbelianGroup {
  std::vector<Int> torsion;  // divisibility chain, each entry >= 2
  std::size_t free_rank = 0;

  bool operator==(const AbelianGroup& o) const {
    return torsion == o.torsion && free_rank == o.free_rank;
  }
  bool operator<(const AbelianGroup& o) const {
    if (free_rank != o.free_rank) return free_rank < o.free_rank;
    return torsion < o.torsion;
  }
  std::string to_string() const;  // "0", "Z8", "Z2+Z4", "Z^2", ...
};

// coker(Id - A) via the Smith form.
AbelianGroup bf_group(const IntMatrix& a);

// Total column amalgamation: repeatedly merge the first pair of states
// with identical columns until none remain. Deterministic.
IntMatrix total_column_amalgamation(const IntMatrix& a);

// Same fixpoint, but the merged pair at each step is chosen by the callback
// (given the list of currently equal column pairs). Used by confluence tests.
IntMatrix total_column_amalgamation_with_choice(
    const IntMatrix& a,
    const std::function<std::size_t(std::size_t)>& pick);

// Reachability irreducibility and primitivity of a nonnegative matrix,
// decided exactly on the support digraph.
bool is_irreducible(const IntMatrix& a);
bool is_primitive(const IntMatrix& a);

struct PerronData {
  double lambda = 0.0;
  std::vector<double> lengths;  // normalized to sum 1
};

// Dominant eigenvalue and eigenvector of an irreducible nonnegative matrix
// by power iteration (relative tolerance 1e-12, at most 1e6 iterations).
// The returned vector x satisfies A x = lambda x, so x lists the natural
// edge lengths: the image of edge i has total length lambda * x[i].
PerronData perron(const IntMatrix& a);

// A permutation p with B(i,j) == A(p(i), p(j)), if one exists. Inputs are
// limited to 10x10; larger matrices raise a usage error.
std::optional<std::vector<std::size_t>> matrices_permutation_equivalent(
    const IntMatrix& a, const IntMatrix& b, std::size_t size_limit = 10);

}  // namespace solenoid
