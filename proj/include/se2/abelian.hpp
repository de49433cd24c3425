#ifndef SE2_ABELIAN_HPP
#define SE2_ABELIAN_HPP

// Smith normal form over the integers and the abelian invariants of finitely
// presented groups read off from relator exponent vectors.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "se2/presentation.hpp"
#include "se2/words.hpp"

namespace se2 {

class AbelianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<mpz_class>>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw AbelianError("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }
  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, k));
  }
  /// row_i += q * row_k
  void add_row(std::size_t i, std::size_t k, const mpz_class& q) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) += q * (*this)(k, j);
  }
  /// col_j += q * col_k
  void add_col(std::size_t j, std::size_t k, const mpz_class& q) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) += q * (*this)(i, k);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols_ != y.rows_) throw AbelianError("matrix dimension mismatch");
    IntMatrix out(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) out(i, j) += x(i, k) * y(k, j);
      }
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> a_;
};

/// Exact determinant of a square matrix (fraction-free Bareiss elimination).
inline mpz_class determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw AbelianError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct SnfResult {
  /// min(rows, cols) invariant factors, nonnegative, each dividing the next
  /// (zeros trail).
  std::vector<mpz_class> diag;
  std::optional<IntMatrix> U;
  std::optional<IntMatrix> V;
};

/// Smith normal form. With transforms, U * A * V = diag exactly.
inline SnfResult smith_normal_form(IntMatrix a, bool want_transforms = false) {
  const std::size_t m = a.rows(), n = a.cols();
  std::optional<IntMatrix> U, V;
  if (want_transforms) {
    U = IntMatrix::identity(m);
    V = IntMatrix::identity(n);
  }
  auto swap_rows = [&](std::size_t i, std::size_t k) {
    a.swap_rows(i, k);
    if (U) U->swap_rows(i, k);
  };
  auto swap_cols = [&](std::size_t j, std::size_t k) {
    a.swap_cols(j, k);
    if (V) V->swap_cols(j, k);
  };
  auto add_row = [&](std::size_t i, std::size_t k, const mpz_class& q) {
    a.add_row(i, k, q);
    if (U) U->add_row(i, k, q);
  };
  auto add_col = [&](std::size_t j, std::size_t k, const mpz_class& q) {
    a.add_col(j, k, q);
    if (V) V->add_col(j, k, q);
  };

  const std::size_t steps = std::min(m, n);
  std::size_t t = 0;
  for (; t < steps; ++t) {
    while (true) {
      // Least absolute value in the trailing block; ties go to the lowest row, then column.
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (a(i, j) == 0) continue;
          if (pi == m || mpz_cmpabs(a(i, j).get_mpz_t(), a(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      if (pi == m) goto done;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        add_row(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        add_col(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // The pivot must divide the whole trailing block.
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == m) break;
      add_row(t, bad, 1);
    }
    if (a(t, t) < 0) {
      a.negate_row(t);
      if (U) U->negate_row(t);
    }
  }
done:
  SnfResult out;
  out.diag.resize(steps);
  for (std::size_t i = 0; i < steps; ++i) out.diag[i] = a(i, i);
  out.U = std::move(U);
  out.V = std::move(V);
  return out;
}

/// Rows are relators, columns generators.
inline IntMatrix exponent_matrix(const Alphabet& alphabet, const std::vector<Word>& relators) {
  IntMatrix m(relators.size(), alphabet.size());
  for (std::size_t i = 0; i < relators.size(); ++i) {
    const auto v = exponent_vector(relators[i]);
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = static_cast<long>(v[j]);
  }
  return m;
}

struct AbelianInvariants {
  std::vector<mpz_class> torsion;  // factors > 1, ascending
  std::size_t free_rank = 0;

  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

inline AbelianInvariants invariants_of(const IntMatrix& relations) {
  const SnfResult snf = smith_normal_form(relations);
  AbelianInvariants out;
  std::size_t rank = 0;
  for (const auto& d : snf.diag) {
    if (d == 0) continue;
    ++rank;
    if (d > 1) out.torsion.push_back(d);
  }
  out.free_rank = relations.cols() - rank;
  return out;
}

inline AbelianInvariants abelian_invariants(const Alphabet& alphabet, const std::vector<Word>& relators) {
  return invariants_of(exponent_matrix(alphabet, relators));
}

inline std::string format_invariants(const AbelianInvariants& inv) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < inv.torsion.size(); ++i) out << (i ? ", " : "") << inv.torsion[i];
  out << "] free_rank " << inv.free_rank;
  return out.str();
}

struct QuotientSize {
  bool infinite = false;
  mpz_class order;  // meaningful when finite
};

namespace detail {

inline std::vector<Letter> cyclic_reduce(std::vector<Letter> w) {
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == inverse_letter(w[hi - 1])) {
    ++lo;
    --hi;
  }
  return {w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi)};
}

inline bool cyclic_conjugate(const std::vector<Letter>& x, const std::vector<Letter>& y) {
  if (x.size() != y.size()) return false;
  if (x.empty()) return true;
  std::vector<Letter> doubled = x;
  doubled.insert(doubled.end(), x.begin(), x.end());
  return std::search(doubled.begin(), doubled.end(), y.begin(), y.end()) != doubled.end();
}

}  // namespace detail

/// Whether some relator is conjugate to [g_i, g_j] or its inverse, for every i < j.
inline bool has_all_generator_commutators(const Alphabet& alphabet, const std::vector<Word>& relators) {
  std::vector<std::vector<Letter>> reduced;
  reduced.reserve(relators.size());
  for (const auto& w : relators) reduced.push_back(detail::cyclic_reduce({w.letters().begin(), w.letters().end()}));
  const std::size_t n = alphabet.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Letter x = make_letter(i, 1), y = make_letter(j, 1);
      const std::vector<Letter> c{x, y, inverse_letter(x), inverse_letter(y)};
      const std::vector<Letter> ci{y, x, inverse_letter(y), inverse_letter(x)};
      bool found = false;
      for (const auto& r : reduced)
        if (detail::cyclic_conjugate(r, c) || detail::cyclic_conjugate(r, ci)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  return true;
}

/// Order of the group <alphabet | relators>, which must contain every
/// generator commutator so that the group is abelian.
inline QuotientSize abelian_quotient_size(const Alphabet& alphabet, const std::vector<Word>& relators) {
  if (!has_all_generator_commutators(alphabet, relators))
    throw AbelianError("relators do not include all generator commutators; the quotient may be non-abelian");
  const AbelianInvariants inv = abelian_invariants(alphabet, relators);
  QuotientSize out;
  if (inv.free_rank > 0) {
    out.infinite = true;
    return out;
  }
  out.order = 1;
  for (const auto& d : inv.torsion) out.order *= d;
  return out;
}

/// Trivial abelianization of <p.alphabet | p.relators>.
inline bool perfectness_check(const Presentation& p) {
  const AbelianInvariants inv = abelian_invariants(*p.alphabet, p.words());
  return inv.torsion.empty() && inv.free_rank == 0;
}

// Matrix text format: "rows cols" then row-major entries.
inline IntMatrix read_matrix(std::istream& in) {
  std::size_t rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw AbelianError("matrix header must be 'rows cols'");
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      std::string tok;
      if (!(in >> tok)) throw AbelianError("matrix has fewer entries than rows*cols");
      if (m(i, j).set_str(tok, 10) != 0)
        throw AbelianError("bad matrix entry '" + tok + "' at row " + std::to_string(i + 1));
    }
  std::string extra;
  if (in >> extra) throw AbelianError("trailing data after matrix entries");
  return m;
}

inline IntMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in);
}

inline void write_matrix(std::ostream& out, const IntMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

}  // namespace se2

#endif
