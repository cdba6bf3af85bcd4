#include <algorithm>
#include <stdexcept>

#include "sheafcoh/errors.hpp"
#include "sheafcoh/exactlin.hpp"

namespace sheafcoh::exactlin {

namespace {

// row_dst -= q * row_src over columns [from, cols).
void row_sub_mul(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q, std::size_t from = 0) {
  auto d = m.row(dst);
  auto s = m.row(src);
  for (std::size_t j = from; j < m.cols(); ++j)
    if (!s[j].is_zero()) d[j].sub_mul(q, s[j]);
}

// col_dst -= q * col_src over rows [from, rows).
void col_sub_mul(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q, std::size_t from = 0) {
  for (std::size_t i = from; i < m.rows(); ++i) {
    const Integer& s = m(i, src);
    if (!s.is_zero()) m(i, dst).sub_mul(q, s);
  }
}

void negate_row(IntMatrix& m, std::size_t i) {
  for (auto& v : m.row(i)) v.negate();
}

void negate_col(IntMatrix& m, std::size_t j) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, j).negate();
}

// Smith elimination state: S plus whichever transforms are tracked.
struct SmithState {
  IntMatrix& S;
  IntMatrix* U;
  IntMatrix* U_inv;
  IntMatrix* V;
  IntMatrix* V_inv;

  void row_op(std::size_t dst, std::size_t src, const Integer& q, std::size_t from) {
    row_sub_mul(S, dst, src, q, from);
    if (U) row_sub_mul(*U, dst, src, q);
    if (U_inv) {
      Integer mq = -q;
      col_sub_mul(*U_inv, src, dst, mq);
    }
  }
  void col_op(std::size_t dst, std::size_t src, const Integer& q, std::size_t from) {
    col_sub_mul(S, dst, src, q, from);
    if (V) col_sub_mul(*V, dst, src, q);
    if (V_inv) {
      Integer mq = -q;
      row_sub_mul(*V_inv, src, dst, mq);
    }
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    S.swap_rows(a, b);
    if (U) U->swap_rows(a, b);
    if (U_inv) U_inv->swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    S.swap_cols(a, b);
    if (V) V->swap_cols(a, b);
    if (V_inv) V_inv->swap_rows(a, b);
  }
  void negate_row_t(std::size_t t) {
    negate_row(S, t);
    if (U) negate_row(*U, t);
    if (U_inv) negate_col(*U_inv, t);
  }
};

}  // namespace

std::vector<Integer> SmithDecomposition::diagonal() const {
  std::vector<Integer> d(std::min(S.rows(), S.cols()));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = S(i, i);
  return d;
}

std::size_t SmithDecomposition::rank() const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
    if (!S(i, i).is_zero()) ++r;
  return r;
}

SmithDecomposition smith_normal_form(const IntMatrix& a, SmithOptions options) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithDecomposition out;
  out.S = a;
  if (options.track_left) out.U = IntMatrix::identity(m);
  if (options.track_right) out.V = IntMatrix::identity(n);
  if (options.track_inverses && options.track_left) out.U_inv = IntMatrix::identity(m);
  if (options.track_inverses && options.track_right) out.V_inv = IntMatrix::identity(n);

  SmithState st{out.S,
                options.track_left ? &out.U : nullptr,
                options.track_inverses && options.track_left ? &out.U_inv : nullptr,
                options.track_right ? &out.V : nullptr,
                options.track_inverses && options.track_right ? &out.V_inv : nullptr};
  IntMatrix& S = out.S;

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // Smallest nonzero |entry| in the trailing block becomes the pivot.
    std::size_t pi = m, pj = n;
    Integer best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const Integer& v = S(i, j);
        if (v.is_zero()) continue;
        if (pi == m || compare(abs(v), best) < 0) {
          best = abs(v);
          pi = i;
          pj = j;
        }
      }
    if (pi == m) break;
    st.swap_rows(t, pi);
    st.swap_cols(t, pj);

    while (true) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (S(i, t).is_zero()) continue;
        Integer q = round_div(S(i, t), S(t, t));
        st.row_op(i, t, q, t);
        if (!S(i, t).is_zero()) dirty = true;
      }
      if (dirty) {
        std::size_t bi = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (!S(i, t).is_zero() && (bi == t || compare(abs(S(i, t)), abs(S(bi, t))) < 0)) bi = i;
        st.swap_rows(t, bi);
        continue;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (S(t, j).is_zero()) continue;
        Integer q = round_div(S(t, j), S(t, t));
        st.col_op(j, t, q, t);
        if (!S(t, j).is_zero()) dirty = true;
      }
      if (dirty) {
        std::size_t bj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (!S(t, j).is_zero() && (bj == t || compare(abs(S(t, j)), abs(S(t, bj))) < 0)) bj = j;
        st.swap_cols(t, bj);
        continue;
      }
      // Row and column are clear; enforce divisibility of the trailing block.
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!divides(S(t, t), S(i, j))) {
            bad = i;
            break;
          }
      if (bad == m) break;
      st.row_op(t, bad, Integer(-1), t);
    }
    if (S(t, t).sign() < 0) st.negate_row_t(t);
  }
  return out;
}

std::vector<Integer> smith_diagonal(const IntMatrix& a) {
  return smith_normal_form(a, {.track_left = false, .track_right = false, .track_inverses = false}).diagonal();
}

HermiteForm hermite_normal_form(const IntMatrix& a, bool track_u, bool reduce_above) {
  const std::size_t m = a.rows(), n = a.cols();
  HermiteForm out;
  out.H = a;
  if (track_u) out.U = IntMatrix::identity(m);
  IntMatrix& H = out.H;

  auto row_op = [&](std::size_t dst, std::size_t src, const Integer& q, std::size_t from) {
    row_sub_mul(H, dst, src, q, from);
    if (track_u) row_sub_mul(out.U, dst, src, q);
  };
  auto swap = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    H.swap_rows(x, y);
    if (track_u) out.U.swap_rows(x, y);
  };

  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    bool found = false;
    while (true) {
      std::size_t p = m;
      for (std::size_t i = r; i < m; ++i) {
        if (H(i, c).is_zero()) continue;
        if (p == m || compare(abs(H(i, c)), abs(H(p, c))) < 0) p = i;
      }
      if (p == m) break;
      found = true;
      swap(r, p);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (H(i, c).is_zero()) continue;
        Integer q = round_div(H(i, c), H(r, c));
        row_op(i, r, q, c);
        if (!H(i, c).is_zero()) done = false;
      }
      if (done) break;
    }
    if (!found) continue;
    if (H(r, c).sign() < 0) {
      negate_row(H, r);
      if (track_u) negate_row(out.U, r);
    }
    if (reduce_above) {
      for (std::size_t i = 0; i < r; ++i) {
        if (H(i, c).is_zero()) continue;
        Integer q = floor_div(H(i, c), H(r, c));
        if (!q.is_zero()) row_op(i, r, q, c);
      }
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

LatticeSolver::LatticeSolver(const IntMatrix& a) : rows_(a.rows()), cols_(a.cols()) {
  HermiteForm hf = hermite_normal_form(a.transpose(), true, false);
  rank_ = hf.rank;
  pivots_ = hf.pivot_cols;
  pivot_rows_ = hf.H.row_range(0, rank_);
  transforms_ = hf.U.row_range(0, rank_);
}

bool LatticeSolver::reduce(std::span<const Integer> b, IntVector* coeffs) const {
  if (b.size() != rows_) throw std::invalid_argument("right-hand side has wrong length");
  IntVector res(b.begin(), b.end());
  std::size_t checked = 0;
  if (coeffs) coeffs->assign(rank_, Integer());
  for (std::size_t i = 0; i < rank_; ++i) {
    const std::size_t p = pivots_[i];
    for (; checked < p; ++checked)
      if (!res[checked].is_zero()) return false;
    checked = p + 1;
    if (res[p].is_zero()) continue;
    const Integer& piv = pivot_rows_(i, p);
    if (!divides(piv, res[p])) return false;
    Integer y = exact_div(res[p], piv);
    auto hrow = pivot_rows_.row(i);
    for (std::size_t j = p; j < rows_; ++j)
      if (!hrow[j].is_zero()) res[j].sub_mul(y, hrow[j]);
    if (coeffs) (*coeffs)[i] = std::move(y);
  }
  for (; checked < rows_; ++checked)
    if (!res[checked].is_zero()) return false;
  return true;
}

bool LatticeSolver::contains(std::span<const Integer> b) const { return reduce(b, nullptr); }

std::optional<IntVector> LatticeSolver::solve(std::span<const Integer> b) const {
  IntVector y;
  if (!reduce(b, &y)) return std::nullopt;
  IntVector x(cols_);
  for (std::size_t i = 0; i < rank_; ++i) {
    if (y[i].is_zero()) continue;
    auto urow = transforms_.row(i);
    for (std::size_t j = 0; j < cols_; ++j)
      if (!urow[j].is_zero()) x[j].add_mul(y[i], urow[j]);
  }
  return x;
}

std::optional<IntVector> solve_in_lattice(const IntMatrix& a, std::span<const Integer> b) {
  if (b.size() != a.rows()) throw InputError("solve_in_lattice: dimension mismatch");
  return LatticeSolver(a).solve(b);
}

IntMatrix kernel_basis(const IntMatrix& a) {
  HermiteForm hf = hermite_normal_form(a.transpose(), true, false);
  const std::size_t n = a.cols();
  IntMatrix k(n, n - hf.rank);
  for (std::size_t c = 0; c < n - hf.rank; ++c)
    for (std::size_t j = 0; j < n; ++j) k(j, c) = hf.U(hf.rank + c, j);
  return k;
}

IntMatrix lattice_basis(const IntMatrix& gens) {
  HermiteForm hf = hermite_normal_form(gens.transpose(), false, true);
  return hf.H.row_range(0, hf.rank).transpose();
}

std::size_t rank(const IntMatrix& a) { return hermite_normal_form(a, false, false).rank; }

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return Integer(1);
  IntMatrix m = a;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m(p, k).is_zero()) ++p;
      if (p == n) return Integer(0);
      m.swap_rows(k, p);
      sign.negate();
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m(i, j) * m(k, k);
        v.sub_mul(m(i, k), m(k, j));
        m(i, j) = exact_div(v, prev);
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
  HermiteForm hf = hermite_normal_form(a, true, true);
  if (!hf.H.is_identity()) throw std::invalid_argument("matrix is not unimodular");
  return hf.U;
}

}  // namespace sheafcoh::exactlin
