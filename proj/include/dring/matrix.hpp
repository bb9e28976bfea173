// Dense matrices over a division ring, with exact noncommutative Gaussian
// elimination. Row operations multiply by ring elements on the left only and
// column operations on the right only, so everything stays valid when the
// scalars do not commute. Zero-dimensional matrices are first-class: every
// routine accepts and produces 0xN / Mx0 shapes without special cases.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dring/errors.hpp"
#include "dring/scalar.hpp"

namespace dring {

// e_t of the ring viewed over its base field (1 for fields; 1,i,j,k for H(Q)).
template <Ring R>
typename R::Elem basis_elem(const R& r, int t) {
  using SC = ScalarCoords<R>;
  typename SC::Base base = SC::base_ring(r);
  typename SC::Base::Elem coords[SC::dim];
  for (int d = 0; d < SC::dim; ++d) coords[d] = (d == t) ? base.one() : base.zero();
  return SC::from_coords(r, coords);
}

template <Ring R>
class Matrix {
public:
  using Elem = typename R::Elem;

  Matrix(const R& ring, int rows, int cols) : ring_(ring), rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
      throw ShapeMismatch("negative matrix dimensions " + std::to_string(rows) + "x" +
                          std::to_string(cols));
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), ring_.zero());
  }

  static Matrix from_rows(const R& ring, const std::vector<std::vector<Elem>>& rows) {
    int m = static_cast<int>(rows.size());
    int n = m == 0 ? 0 : static_cast<int>(rows.front().size());
    Matrix out(ring, m, n);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        throw ShapeMismatch("ragged row " + std::to_string(i) + " in matrix literal");
      for (int j = 0; j < n; ++j) out.at(i, j) = rows[i][j];
    }
    return out;
  }

  static Matrix from_int_rows(const R& ring, const std::vector<std::vector<std::int64_t>>& rows) {
    int m = static_cast<int>(rows.size());
    int n = m == 0 ? 0 : static_cast<int>(rows.front().size());
    Matrix out(ring, m, n);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        throw ShapeMismatch("ragged row " + std::to_string(i) + " in matrix literal");
      for (int j = 0; j < n; ++j) out.at(i, j) = ring.from_int(rows[i][j]);
    }
    return out;
  }

  const R& ring() const { return ring_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Elem& at(int i, int j) {
    check_index(i, j);
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  const Elem& at(int i, int j) const {
    check_index(i, j);
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

private:
  void check_index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw InternalInconsistency("matrix index (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") out of range for " + std::to_string(rows_) + "x" +
                                  std::to_string(cols_));
  }

  R ring_;
  int rows_;
  int cols_;
  std::vector<Elem> data_;
};

namespace detail {
template <Ring R>
void require_same_ring(const Matrix<R>& a, const Matrix<R>& b, const char* op) {
  if (!(a.ring().descriptor() == b.ring().descriptor()))
    throw ShapeMismatch(std::string(op) + ": operands live over different rings");
}
}  // namespace detail

template <Ring R>
Matrix<R> zeros(const R& ring, int rows, int cols) {
  return Matrix<R>(ring, rows, cols);
}

template <Ring R>
Matrix<R> identity(const R& ring, int n) {
  Matrix<R> out(ring, n, n);
  for (int i = 0; i < n; ++i) out.at(i, i) = ring.one();
  return out;
}

template <Ring R>
bool matrix_eq(const Matrix<R>& a, const Matrix<R>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const R& r = a.ring();
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!r.eq(a.at(i, j), b.at(i, j))) return false;
  return true;
}

template <Ring R>
Matrix<R> add(const Matrix<R>& a, const Matrix<R>& b) {
  detail::require_same_ring(a, b, "add");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("add: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  Matrix<R> out(a.ring(), a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.ring().add(a.at(i, j), b.at(i, j));
  return out;
}

template <Ring R>
Matrix<R> sub(const Matrix<R>& a, const Matrix<R>& b) {
  detail::require_same_ring(a, b, "sub");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("sub: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  Matrix<R> out(a.ring(), a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.ring().sub(a.at(i, j), b.at(i, j));
  return out;
}

template <Ring R>
Matrix<R> neg(const Matrix<R>& a) {
  Matrix<R> out(a.ring(), a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.ring().neg(a.at(i, j));
  return out;
}

template <Ring R>
Matrix<R> mul(const Matrix<R>& a, const Matrix<R>& b) {
  detail::require_same_ring(a, b, "mul");
  if (a.cols() != b.rows())
    throw ShapeMismatch("mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  const R& r = a.ring();
  Matrix<R> out(r, a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int t = 0; t < a.cols(); ++t) {
      const auto& ait = a.at(i, t);
      if (r.is_zero(ait)) continue;
      for (int j = 0; j < b.cols(); ++j) {
        if (r.is_zero(b.at(t, j))) continue;
        out.at(i, j) = r.add(out.at(i, j), r.mul(ait, b.at(t, j)));
      }
    }
  return out;
}

template <Ring R>
Matrix<R> scale_left(const typename R::Elem& c, const Matrix<R>& a) {
  Matrix<R> out(a.ring(), a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.ring().mul(c, a.at(i, j));
  return out;
}

template <Ring R>
Matrix<R> scale_right(const Matrix<R>& a, const typename R::Elem& c) {
  Matrix<R> out(a.ring(), a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.ring().mul(a.at(i, j), c);
  return out;
}

template <Ring R>
Matrix<R> conjugate_transpose(const Matrix<R>& a) {
  Matrix<R> out(a.ring(), a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(j, i) = a.ring().conj(a.at(i, j));
  return out;
}

template <Ring R>
bool is_zero_matrix(const Matrix<R>& a) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!a.ring().is_zero(a.at(i, j))) return false;
  return true;
}

template <Ring R>
bool is_identity_matrix(const Matrix<R>& a) {
  if (a.rows() != a.cols()) return false;
  return matrix_eq(a, identity(a.ring(), a.rows()));
}

template <Ring R>
bool is_hermitian(const Matrix<R>& a) {
  if (a.rows() != a.cols()) return false;
  return matrix_eq(a, conjugate_transpose(a));
}

// Copy of the h x w window of `a` with top-left corner (r0, c0).
template <Ring R>
Matrix<R> block(const Matrix<R>& a, int r0, int c0, int h, int w) {
  if (h < 0 || w < 0 || r0 < 0 || c0 < 0 || r0 + h > a.rows() || c0 + w > a.cols())
    throw ShapeMismatch("block: window " + std::to_string(h) + "x" + std::to_string(w) + " at (" +
                        std::to_string(r0) + "," + std::to_string(c0) + ") exceeds " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  Matrix<R> out(a.ring(), h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) out.at(i, j) = a.at(r0 + i, c0 + j);
  return out;
}

template <Ring R>
void set_block(Matrix<R>& a, int r0, int c0, const Matrix<R>& b) {
  if (r0 < 0 || c0 < 0 || r0 + b.rows() > a.rows() || c0 + b.cols() > a.cols())
    throw ShapeMismatch("set_block: " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                        " at (" + std::to_string(r0) + "," + std::to_string(c0) +
                        ") exceeds " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) a.at(r0 + i, c0 + j) = b.at(i, j);
}

template <Ring R>
Matrix<R> hcat(const std::vector<Matrix<R>>& parts) {
  if (parts.empty()) throw ShapeMismatch("hcat: no blocks");
  int m = parts.front().rows(), n = 0;
  for (const auto& p : parts) {
    if (p.rows() != m) throw ShapeMismatch("hcat: row counts differ");
    n += p.cols();
  }
  Matrix<R> out(parts.front().ring(), m, n);
  int c = 0;
  for (const auto& p : parts) {
    set_block(out, 0, c, p);
    c += p.cols();
  }
  return out;
}

template <Ring R>
Matrix<R> vcat(const std::vector<Matrix<R>>& parts) {
  if (parts.empty()) throw ShapeMismatch("vcat: no blocks");
  int n = parts.front().cols(), m = 0;
  for (const auto& p : parts) {
    if (p.cols() != n) throw ShapeMismatch("vcat: column counts differ");
    m += p.rows();
  }
  Matrix<R> out(parts.front().ring(), m, n);
  int r = 0;
  for (const auto& p : parts) {
    set_block(out, r, 0, p);
    r += p.rows();
  }
  return out;
}

// Assemble a block grid. A std::nullopt cell is a zero block whose dimensions
// are inferred from the present blocks in its row and column; every inference
// conflict or underdetermined cell is reported with its grid coordinates.
template <Ring R>
Matrix<R> block_matrix(const R& ring,
                       const std::vector<std::vector<std::optional<Matrix<R>>>>& grid) {
  int gr = static_cast<int>(grid.size());
  if (gr == 0) return Matrix<R>(ring, 0, 0);
  int gc = static_cast<int>(grid.front().size());
  for (int i = 0; i < gr; ++i)
    if (static_cast<int>(grid[i].size()) != gc)
      throw ShapeMismatch("block grid row " + std::to_string(i) + " has " +
                          std::to_string(grid[i].size()) + " cells, expected " +
                          std::to_string(gc));
  std::vector<int> heights(gr, -1), widths(gc, -1);
  for (int i = 0; i < gr; ++i)
    for (int j = 0; j < gc; ++j) {
      if (!grid[i][j]) continue;
      const Matrix<R>& b = *grid[i][j];
      if (heights[i] == -1) heights[i] = b.rows();
      else if (heights[i] != b.rows())
        throw ShapeMismatch("block (" + std::to_string(i) + "," + std::to_string(j) + ") has " +
                            std::to_string(b.rows()) + " rows but block row " + std::to_string(i) +
                            " was fixed at " + std::to_string(heights[i]));
      if (widths[j] == -1) widths[j] = b.cols();
      else if (widths[j] != b.cols())
        throw ShapeMismatch("block (" + std::to_string(i) + "," + std::to_string(j) + ") has " +
                            std::to_string(b.cols()) + " cols but block column " +
                            std::to_string(j) + " was fixed at " + std::to_string(widths[j]));
    }
  for (int i = 0; i < gr; ++i)
    if (heights[i] == -1)
      throw ShapeMismatch("cannot infer height of all-zero block row " + std::to_string(i));
  for (int j = 0; j < gc; ++j)
    if (widths[j] == -1)
      throw ShapeMismatch("cannot infer width of all-zero block column " + std::to_string(j));
  int m = 0, n = 0;
  for (int h : heights) m += h;
  for (int w : widths) n += w;
  Matrix<R> out(ring, m, n);
  int r0 = 0;
  for (int i = 0; i < gr; ++i) {
    int c0 = 0;
    for (int j = 0; j < gc; ++j) {
      if (grid[i][j]) set_block(out, r0, c0, *grid[i][j]);
      c0 += widths[j];
    }
    r0 += heights[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tracked reductions. Row reduction returns L with L * a == reduced, L a
// product of elementary row operations (hence invertible); column reduction
// independently returns T with a * T == reduced. Pivot choice is the first
// nonzero entry in scan order, which keeps runs bit-for-bit deterministic.
// ---------------------------------------------------------------------------

template <Ring R>
struct RowReduceResult {
  Matrix<R> reduced;
  Matrix<R> transform;  // transform * input == reduced
  std::vector<int> pivot_cols;
  int rank = 0;
};

template <Ring R>
RowReduceResult<R> row_reduce_tracked(const Matrix<R>& a) {
  const R& r = a.ring();
  RowReduceResult<R> res{a, identity(r, a.rows()), {}, 0};
  Matrix<R>& w = res.reduced;
  Matrix<R>& t = res.transform;
  int m = a.rows(), n = a.cols(), lead = 0;
  auto swap_rows = [&](Matrix<R>& x, int i1, int i2) {
    for (int j = 0; j < x.cols(); ++j) std::swap(x.at(i1, j), x.at(i2, j));
  };
  for (int c = 0; c < n && lead < m; ++c) {
    int piv_row = -1;
    for (int i = lead; i < m; ++i)
      if (!r.is_zero(w.at(i, c))) {
        piv_row = i;
        break;
      }
    if (piv_row < 0) continue;
    if (piv_row != lead) {
      swap_rows(w, lead, piv_row);
      swap_rows(t, lead, piv_row);
    }
    typename R::Elem pinv = r.inv(w.at(lead, c));
    for (int j = 0; j < n; ++j) w.at(lead, j) = r.mul(pinv, w.at(lead, j));
    for (int j = 0; j < m; ++j) t.at(lead, j) = r.mul(pinv, t.at(lead, j));
    for (int i = 0; i < m; ++i) {
      if (i == lead || r.is_zero(w.at(i, c))) continue;
      typename R::Elem f = w.at(i, c);
      for (int j = 0; j < n; ++j) w.at(i, j) = r.sub(w.at(i, j), r.mul(f, w.at(lead, j)));
      for (int j = 0; j < m; ++j) t.at(i, j) = r.sub(t.at(i, j), r.mul(f, t.at(lead, j)));
    }
    res.pivot_cols.push_back(c);
    ++lead;
  }
  res.rank = lead;
  return res;
}

template <Ring R>
struct ColReduceResult {
  Matrix<R> reduced;
  Matrix<R> transform;  // input * transform == reduced
  std::vector<int> pivot_rows;
  int rank = 0;
};

template <Ring R>
ColReduceResult<R> col_reduce_tracked(const Matrix<R>& a) {
  const R& r = a.ring();
  ColReduceResult<R> res{a, identity(r, a.cols()), {}, 0};
  Matrix<R>& w = res.reduced;
  Matrix<R>& t = res.transform;
  int m = a.rows(), n = a.cols(), lead = 0;
  auto swap_cols = [&](Matrix<R>& x, int j1, int j2) {
    for (int i = 0; i < x.rows(); ++i) std::swap(x.at(i, j1), x.at(i, j2));
  };
  for (int i = 0; i < m && lead < n; ++i) {
    int piv_col = -1;
    for (int j = lead; j < n; ++j)
      if (!r.is_zero(w.at(i, j))) {
        piv_col = j;
        break;
      }
    if (piv_col < 0) continue;
    if (piv_col != lead) {
      swap_cols(w, lead, piv_col);
      swap_cols(t, lead, piv_col);
    }
    typename R::Elem pinv = r.inv(w.at(i, lead));
    for (int i2 = 0; i2 < m; ++i2) w.at(i2, lead) = r.mul(w.at(i2, lead), pinv);
    for (int i2 = 0; i2 < n; ++i2) t.at(i2, lead) = r.mul(t.at(i2, lead), pinv);
    for (int j = 0; j < n; ++j) {
      if (j == lead || r.is_zero(w.at(i, j))) continue;
      typename R::Elem f = w.at(i, j);
      for (int i2 = 0; i2 < m; ++i2) w.at(i2, j) = r.sub(w.at(i2, j), r.mul(w.at(i2, lead), f));
      for (int i2 = 0; i2 < n; ++i2) t.at(i2, j) = r.sub(t.at(i2, j), r.mul(t.at(i2, lead), f));
    }
    res.pivot_rows.push_back(i);
    ++lead;
  }
  res.rank = lead;
  return res;
}

template <Ring R>
int rank(const Matrix<R>& a) {
  return row_reduce_tracked(a).rank;
}

template <Ring R>
int rank_via_cols(const Matrix<R>& a) {
  return col_reduce_tracked(a).rank;
}

template <Ring R>
Matrix<R> invert_matrix(const Matrix<R>& a) {
  if (a.rows() != a.cols())
    throw SingularMatrix("cannot invert non-square " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " matrix");
  auto rr = row_reduce_tracked(a);
  if (rr.rank < a.rows())
    throw SingularMatrix("matrix of size " + std::to_string(a.rows()) + " has rank " +
                         std::to_string(rr.rank));
  if (!is_identity_matrix(rr.reduced))
    throw InternalInconsistency("full-rank square reduction did not reach the identity");
  return rr.transform;
}

// Entrywise expansion over the base field: each scalar becomes the dim x dim
// matrix of left multiplication on base-field coordinates. Multiplicative:
// the expansion of a product is the product of the expansions.
template <Ring R>
Matrix<typename ScalarCoords<R>::Base> regular_representation(const Matrix<R>& a) {
  using SC = ScalarCoords<R>;
  using B = typename SC::Base;
  const R& r = a.ring();
  B base = SC::base_ring(r);
  constexpr int d = SC::dim;
  Matrix<B> out(base, d * a.rows(), d * a.cols());
  typename B::Elem coords[d];
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int t = 0; t < d; ++t) {
        SC::to_coords(r, r.mul(a.at(i, j), basis_elem(r, t)), coords);
        for (int s = 0; s < d; ++s) out.at(d * i + s, d * j + t) = coords[s];
      }
  return out;
}

}  // namespace dring
