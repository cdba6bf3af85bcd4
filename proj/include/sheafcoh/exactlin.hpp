#pragma once

// Exact integer linear algebra: Smith and Hermite normal forms, lattice
// membership, integer solving and saturated kernel bases.

#include <cstddef>
#include <optional>
#include <vector>

#include "sheafcoh/int_matrix.hpp"

namespace sheafcoh::exactlin {

struct SmithOptions {
  bool track_left = true;      // U
  bool track_right = true;     // V
  bool track_inverses = false; // U^-1 and V^-1 (only for the tracked sides)
};

/// U * A * V = S with S diagonal, d_i >= 0, d_i | d_{i+1}, zeros trailing.
struct SmithDecomposition {
  IntMatrix U, S, V;
  IntMatrix U_inv, V_inv;  // empty unless requested

  std::vector<Integer> diagonal() const;
  std::size_t rank() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& a, SmithOptions options = {});

/// Diagonal of the Smith form only (no transforms tracked).
std::vector<Integer> smith_diagonal(const IntMatrix& a);

/// Row-style Hermite form: U * A = H, |det U| = 1. Nonzero rows of H come
/// first; pivots strictly move right, are positive, and entries above each
/// pivot lie in [0, pivot).
struct HermiteForm {
  IntMatrix H, U;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

HermiteForm hermite_normal_form(const IntMatrix& a, bool track_u = true, bool reduce_above = true);

/// Solves A x = b over the integers for many right-hand sides against one A.
class LatticeSolver {
 public:
  explicit LatticeSolver(const IntMatrix& a);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t rank() const noexcept { return rank_; }

  std::optional<IntVector> solve(std::span<const Integer> b) const;
  bool contains(std::span<const Integer> b) const;

 private:
  bool reduce(std::span<const Integer> b, IntVector* coeffs) const;

  std::size_t rows_ = 0, cols_ = 0, rank_ = 0;
  IntMatrix pivot_rows_;  // first rank rows of H (H = U * A^T)
  IntMatrix transforms_;  // first rank rows of U
  std::vector<std::size_t> pivots_;
};

/// Some x with A x = b, or nullopt if b is outside the column lattice of A.
std::optional<IntVector> solve_in_lattice(const IntMatrix& a, std::span<const Integer> b);

/// Columns form a basis of the saturated lattice {x : A x = 0}.
IntMatrix kernel_basis(const IntMatrix& a);

/// Columns form a basis of the lattice spanned by the columns of gens.
IntMatrix lattice_basis(const IntMatrix& gens);

std::size_t rank(const IntMatrix& a);

/// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& a);

/// Inverse of a unimodular matrix; throws if |det| != 1.
IntMatrix unimodular_inverse(const IntMatrix& a);

}  // namespace sheafcoh::exactlin
