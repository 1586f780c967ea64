#include "solenoid/intmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "solenoid/error.hpp"

namespace solenoid {

IntMatrix::IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {
  row_labels.resize(r);
  col_labels.resize(c);
  for (std::size_t i = 0; i < r; ++i) row_labels[i] = std::to_string(i);
  for (std::size_t j = 0; j < c; ++j) col_labels[j] = std::to_string(j);
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  if (rows.empty()) return IntMatrix();
  IntMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols)
      fail(ErrorKind::Usage, "ragged matrix rows");
    for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::mul(const IntMatrix& o) const {
  if (cols != o.rows) fail(ErrorKind::Usage, "matrix shape mismatch in product");
  IntMatrix r(rows, o.cols);
  r.row_labels = row_labels;
  r.col_labels = o.col_labels;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) {
      const Int& aik = at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < o.cols; ++j) r.at(i, j) += aik * o.at(k, j);
    }
  return r;
}

IntMatrix IntMatrix::pow(unsigned n) const {
  if (!square()) fail(ErrorKind::Usage, "matrix power requires a square matrix");
  IntMatrix r = identity(rows);
  r.row_labels = row_labels;
  r.col_labels = col_labels;
  for (unsigned k = 0; k < n; ++k) r = r.mul(*this);
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols, rows);
  t.row_labels = col_labels;
  t.col_labels = row_labels;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

Int IntMatrix::trace() const {
  Int t = 0;
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) t += at(i, i);
  return t;
}

bool IntMatrix::nonnegative() const {
  return std::all_of(a.begin(), a.end(), [](const Int& x) { return x >= 0; });
}

bool IntMatrix::is_permutation() const {
  if (!square()) return false;
  std::vector<int> colcount(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    int rowcount = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      const Int& x = at(i, j);
      if (x == 0) continue;
      if (x != 1) return false;
      ++rowcount;
      ++colcount[j];
    }
    if (rowcount != 1) return false;
  }
  return std::all_of(colcount.begin(), colcount.end(), [](int c) { return c == 1; });
}

std::string IntMatrix::to_literal() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows; ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) os << ',';
      os << at(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix parse_matrix_literal(const std::string& text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(ErrorKind::Usage,
           "malformed matrix literal: expected '" + std::string(1, c) +
               "' at position " + std::to_string(pos));
    ++pos;
  };
  auto peek = [&](char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  };

  std::vector<std::vector<Int>> rows;
  expect('[');
  if (!peek(']')) {
    for (;;) {
      expect('[');
      std::vector<Int> row;
      if (!peek(']')) {
        for (;;) {
          skip_ws();
          std::size_t start = pos;
          if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
            fail(ErrorKind::Usage, "malformed matrix literal: expected integer at position " +
                                       std::to_string(start));
          row.emplace_back(Int(text.substr(start, pos - start)));
          if (peek(',')) { ++pos; continue; }
          break;
        }
      }
      expect(']');
      rows.push_back(std::move(row));
      if (peek(',')) { ++pos; continue; }
      break;
    }
  }
  expect(']');
  skip_ws();
  if (pos != text.size())
    fail(ErrorKind::Usage, "trailing characters after matrix literal");

  if (rows.empty()) fail(ErrorKind::Usage, "empty matrix literal");
  IntMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols)
      fail(ErrorKind::Usage, "ragged matrix literal");
    for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

Int determinant(const IntMatrix& m) {
  if (!m.square()) fail(ErrorKind::Usage, "determinant of non-square matrix");
  const std::size_t n = m.rows;
  if (n == 0) return 1;
  // Bareiss: exact, division-free up to guaranteed-exact divisions.
  std::vector<Int> w = m.a;
  auto at = [&](std::size_t i, std::size_t j) -> Int& { return w[i * n + j]; };
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && at(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

namespace {

struct SmithWork {
  IntMatrix d, u, v;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < d.cols; ++k) std::swap(d.at(i, k), d.at(j, k));
    for (std::size_t k = 0; k < u.cols; ++k) std::swap(u.at(i, k), u.at(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < d.rows; ++k) std::swap(d.at(k, i), d.at(k, j));
    for (std::size_t k = 0; k < v.rows; ++k) std::swap(v.at(k, i), v.at(k, j));
  }
  void add_row(std::size_t dst, std::size_t src, const Int& c) {
    for (std::size_t k = 0; k < d.cols; ++k) d.at(dst, k) += c * d.at(src, k);
    for (std::size_t k = 0; k < u.cols; ++k) u.at(dst, k) += c * u.at(src, k);
  }
  void add_col(std::size_t dst, std::size_t src, const Int& c) {
    for (std::size_t k = 0; k < d.rows; ++k) d.at(k, dst) += c * d.at(k, src);
    for (std::size_t k = 0; k < v.rows; ++k) v.at(k, dst) += c * v.at(k, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < d.cols; ++k) d.at(i, k) = -d.at(i, k);
    for (std::size_t k = 0; k < u.cols; ++k) u.at(i, k) = -u.at(i, k);
  }
};

}  // namespace

SmithResult smith_normal_form(const IntMatrix& a) {
  SmithWork w{a, IntMatrix::identity(a.rows), IntMatrix::identity(a.cols)};
  const std::size_t n = std::min(a.rows, a.cols);

  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // Smallest nonzero absolute value in the trailing submatrix.
      std::size_t pi = t, pj = t;
      Int best = 0;
      for (std::size_t i = t; i < a.rows; ++i)
        for (std::size_t j = t; j < a.cols; ++j) {
          const Int& x = w.d.at(i, j);
          if (x == 0) continue;
          Int ax = abs(x);
          if (best == 0 || ax < best) { best = ax; pi = i; pj = j; }
        }
      if (best == 0) goto done;  // trailing block is zero
      w.swap_rows(t, pi);
      w.swap_cols(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < a.rows; ++i) {
        if (w.d.at(i, t) == 0) continue;
        Int q = w.d.at(i, t) / w.d.at(t, t);
        if (q != 0) w.add_row(i, t, -q);
        if (w.d.at(i, t) != 0) dirty = true;  // remainder left, pivot shrinks next pass
      }
      for (std::size_t j = t + 1; j < a.cols; ++j) {
        if (w.d.at(t, j) == 0) continue;
        Int q = w.d.at(t, j) / w.d.at(t, t);
        if (q != 0) w.add_col(j, t, -q);
        if (w.d.at(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // Divisibility: the pivot must divide the trailing submatrix.
      bool divides = true;
      for (std::size_t i = t + 1; i < a.rows && divides; ++i)
        for (std::size_t j = t + 1; j < a.cols && divides; ++j)
          if (w.d.at(i, j) % w.d.at(t, t) != 0) {
            w.add_row(t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
    if (w.d.at(t, t) < 0) w.negate_row(t);
  }
done:

  SmithResult r{std::move(w.d), std::move(w.u), std::move(w.v)};
  for (std::size_t t = 0; t < n; ++t)
    if (r.d.at(t, t) < 0)
      fail(ErrorKind::Internal, "smith_normal_form: negative invariant factor");

  // Certificate: U*A*V == D exactly, U and V unimodular.
  if (!(r.u.mul(a).mul(r.v) == r.d))
    fail(ErrorKind::Internal, "smith_normal_form: certificate U*A*V != D");
  Int du = determinant(r.u), dv = determinant(r.v);
  if (abs(du) != 1 || abs(dv) != 1)
    fail(ErrorKind::Internal, "smith_normal_form: transform not unimodular");
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const Int& x = r.d.at(t, t);
    const Int& y = r.d.at(t + 1, t + 1);
    if (x == 0 && y != 0)
      fail(ErrorKind::Internal, "smith_normal_form: zero before nonzero factor");
    if (x != 0 && y % x != 0)
      fail(ErrorKind::Internal, "smith_normal_form: divisibility chain broken");
  }
  return r;
}

std::string AbelianGroup::to_string() const {
  if (torsion.empty() && free_rank == 0) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Int& d : torsion) {
    if (!first) os << '+';
    os << 'Z' << d;
    first = false;
  }
  if (free_rank == 1) {
    if (!first) os << '+';
    os << 'Z';
  } else if (free_rank > 1) {
    if (!first) os << '+';
    os << "Z^" << free_rank;
  }
  return os.str();
}

AbelianGroup bf_group(const IntMatrix& a) {
  if (!a.square()) fail(ErrorKind::Usage, "bf_group requires a square matrix");
  IntMatrix m = IntMatrix::identity(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) m.at(i, j) -= a.at(i, j);
  SmithResult s = smith_normal_form(m);
  AbelianGroup g;
  for (std::size_t t = 0; t < a.rows; ++t) {
    const Int& d = s.d.at(t, t);
    if (d == 0)
      ++g.free_rank;
    else if (d > 1)
      g.torsion.push_back(d);
  }
  return g;
}

IntMatrix total_column_amalgamation_with_choice(
    const IntMatrix& a,
    const std::function<std::size_t(std::size_t)>& pick) {
  if (!a.square()) fail(ErrorKind::Usage, "amalgamation requires a square matrix");
  if (!a.nonnegative()) fail(ErrorKind::Usage, "amalgamation requires a nonnegative matrix");
  IntMatrix m = a;
  for (;;) {
    std::vector<std::pair<std::size_t, std::size_t>> equal_pairs;
    for (std::size_t i = 0; i < m.cols; ++i)
      for (std::size_t j = i + 1; j < m.cols; ++j) {
        bool eq = true;
        for (std::size_t k = 0; k < m.rows && eq; ++k) eq = m.at(k, i) == m.at(k, j);
        if (eq) equal_pairs.emplace_back(i, j);
      }
    if (equal_pairs.empty()) return m;
    auto [i, j] = equal_pairs[pick(equal_pairs.size())];

    IntMatrix next(m.rows - 1, m.cols - 1);
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < m.rows; ++k)
      if (k != j) keep.push_back(k);
    for (std::size_t r = 0; r < keep.size(); ++r) {
      next.row_labels[r] = m.row_labels[keep[r]];
      next.col_labels[r] = m.col_labels[keep[r]];
      for (std::size_t c = 0; c < keep.size(); ++c) {
        Int val = m.at(keep[r], keep[c]);
        if (keep[r] == i) val += m.at(j, keep[c]);
        next.at(r, c) = val;
      }
    }
    // merging j into i: i's row gains j's row, labels concatenate
    for (std::size_t r = 0; r < keep.size(); ++r)
      if (keep[r] == i) {
        next.row_labels[r] = m.row_labels[i] + m.row_labels[j];
        next.col_labels[r] = next.row_labels[r];
      }
    m = std::move(next);
  }
}

IntMatrix total_column_amalgamation(const IntMatrix& a) {
  return total_column_amalgamation_with_choice(a, [](std::size_t) { return 0; });
}

namespace {

std::vector<std::vector<std::size_t>> support_adjacency(const IntMatrix& a) {
  std::vector<std::vector<std::size_t>> adj(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      if (a.at(i, j) > 0) adj[i].push_back(j);
  return adj;
}

bool all_reachable(const std::vector<std::vector<std::size_t>>& adj, std::size_t from) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::size_t> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v])
      if (!seen[w]) { seen[w] = 1; stack.push_back(w); }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace

bool is_irreducible(const IntMatrix& a) {
  if (!a.square() || a.rows == 0) return false;
  auto adj = support_adjacency(a);
  if (!all_reachable(adj, 0)) return false;
  // reverse reachability
  std::vector<std::vector<std::size_t>> radj(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j : adj[i]) radj[j].push_back(i);
  if (!all_reachable(radj, 0)) return false;
  // 1x1 zero matrix is not irreducible in the dynamical sense
  if (a.rows == 1 && a.at(0, 0) == 0) return false;
  return true;
}

bool is_primitive(const IntMatrix& a) {
  if (!is_irreducible(a)) return false;
  // period = gcd over arcs (u,v) of dist(u)+1-dist(v), on a BFS tree
  auto adj = support_adjacency(a);
  std::vector<long long> dist(a.rows, -1);
  std::vector<std::size_t> queue{0};
  dist[0] = 0;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    std::size_t v = queue[q];
    for (std::size_t w : adj[v])
      if (dist[w] < 0) { dist[w] = dist[v] + 1; queue.push_back(w); }
  }
  long long g = 0;
  for (std::size_t v = 0; v < a.rows; ++v)
    for (std::size_t w : adj[v]) g = std::gcd(g, dist[v] + 1 - dist[w]);
  return g == 1 || g == -1;
}

PerronData perron(const IntMatrix& a) {
  if (!a.square()) fail(ErrorKind::Usage, "perron data requires a square matrix");
  if (!is_irreducible(a))
    fail(ErrorKind::Precondition, "perron data requires an irreducible matrix");
  const std::size_t n = a.rows;
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i * n + j] = static_cast<double>(a.at(i, j));

  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  const double tol = 1e-12;
  const std::size_t max_iter = 1000000;
  for (std::size_t it = 0; it < max_iter; ++it) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m[i * n + j] * x[j];
      y[i] = s;
      norm += s;
    }
    double drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      drift = std::max(drift, std::abs(y[i] - x[i]) / std::max(1e-300, y[i]));
    }
    x.swap(y);
    if (drift < tol) {
      // Rayleigh quotient for the reported eigenvalue
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += m[i * n + j] * x[j];
        num += x[i] * s;
        den += x[i] * x[i];
      }
      return PerronData{num / den, x};
    }
  }
  fail(ErrorKind::Precondition, "perron iteration did not converge within budget");
}

std::optional<std::vector<std::size_t>> matrices_permutation_equivalent(
    const IntMatrix& a, const IntMatrix& b, std::size_t size_limit) {
  if (!a.square() || !b.square()) return std::nullopt;
  if (a.rows != b.rows) return std::nullopt;
  const std::size_t n = a.rows;
  if (n > size_limit)
    fail(ErrorKind::Usage, "permutation equivalence limited to " +
                               std::to_string(size_limit) + "x" + std::to_string(size_limit));

  // signature pruning: diagonal entry plus sorted row/column multisets
  auto signature = [](const IntMatrix& m, std::size_t i) {
    std::vector<Int> row, col;
    for (std::size_t j = 0; j < m.cols; ++j) {
      row.push_back(m.at(i, j));
      col.push_back(m.at(j, i));
    }
    std::sort(row.begin(), row.end());
    std::sort(col.begin(), col.end());
    return std::make_tuple(m.at(i, i), row, col);
  };
  std::vector<decltype(signature(a, 0))> siga(n), sigb(n);
  for (std::size_t i = 0; i < n; ++i) { siga[i] = signature(a, i); sigb[i] = signature(b, i); }

  std::vector<std::size_t> perm(n, n);
  std::vector<char> used(n, 0);
  std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c] || !(sigb[i] == siga[c])) continue;
      bool ok = true;
      for (std::size_t j = 0; j <= i && ok; ++j) {
        if (perm[j] == n && j != i) continue;
        std::size_t pj = (j == i) ? c : perm[j];
        if (b.at(i, j) != a.at(c, pj) || b.at(j, i) != a.at(pj, c)) ok = false;
      }
      if (!ok) continue;
      perm[i] = c;
      used[c] = 1;
      if (assign(i + 1)) return true;
      perm[i] = n;
      used[c] = 0;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  return perm;
}

}  // namespace solenoid
