#include "gf.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace ska {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

FieldOrder::FieldOrder(int q) : q_(q) {
  if (q < 2 || q > 251 || !is_prime(q))
    fail(ErrorCode::validation_error,
         "field order must be a prime in [2, 251], got " + std::to_string(q));
}

std::uint8_t FieldOrder::inv(std::uint8_t a) const {
  require_internal(a != 0, "inverse of zero");
  // Extended Euclid on (q, a).
  int t = 0, new_t = 1, r = q_, new_r = a;
  while (new_r != 0) {
    int quot = r / new_r;
    t -= quot * new_t;
    std::swap(t, new_t);
    r -= quot * new_r;
    std::swap(r, new_r);
  }
  require_internal(r == 1, "non-invertible element");
  if (t < 0) t += q_;
  return static_cast<std::uint8_t>(t);
}

GfMatrix::GfMatrix(FieldOrder field, int rows, int cols)
    : field_(field), rows_(rows), cols_(cols),
      data_(static_cast<size_t>(rows) * static_cast<size_t>(cols), 0) {
  require_internal(rows >= 0 && cols >= 0, "negative matrix shape");
}

GfMatrix::GfMatrix(FieldOrder field, int rows, int cols,
                   std::vector<std::uint8_t> entries)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(entries)) {
  require_internal(rows >= 0 && cols >= 0, "negative matrix shape");
  require_internal(data_.size() ==
                       static_cast<size_t>(rows) * static_cast<size_t>(cols),
                   "entry count does not match shape");
  for (std::uint8_t e : data_)
    require_internal(e < field_.order(), "entry out of field range");
}

bool GfMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](std::uint8_t e) { return e == 0; });
}

GfMatrix GfMatrix::identity(FieldOrder field, int n) {
  GfMatrix m(field, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

GfMatrix GfMatrix::from_columns(
    FieldOrder field, int n,
    const std::vector<std::vector<std::uint8_t>>& columns) {
  GfMatrix m(field, n, static_cast<int>(columns.size()));
  for (int c = 0; c < m.cols(); ++c) {
    require_internal(columns[static_cast<size_t>(c)].size() ==
                         static_cast<size_t>(n),
                     "column length mismatch");
    for (int r = 0; r < n; ++r) m.at(r, c) = columns[static_cast<size_t>(c)][static_cast<size_t>(r)];
  }
  return m;
}

GfMatrix transpose(const GfMatrix& m) {
  GfMatrix t(m.field(), m.cols(), m.rows());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) t.at(c, r) = m.at(r, c);
  return t;
}

GfMatrix mul(const GfMatrix& a, const GfMatrix& b) {
  if (a.cols() != b.rows() || !(a.field() == b.field()))
    fail(ErrorCode::dimension_mismatch, "matrix product shape mismatch");
  GfMatrix out(a.field(), a.rows(), b.cols());
  int q = a.q();
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      int aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        int v = out.at(i, j) + aik * b.at(k, j);
        out.at(i, j) = static_cast<std::uint8_t>(v % q);
      }
    }
  return out;
}

GfMatrix hconcat(const GfMatrix& a, const GfMatrix& b) {
  if (a.rows() != b.rows() || !(a.field() == b.field()))
    fail(ErrorCode::dimension_mismatch, "horizontal concat shape mismatch");
  GfMatrix out(a.field(), a.rows(), a.cols() + b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) out.at(r, c) = a.at(r, c);
    for (int c = 0; c < b.cols(); ++c) out.at(r, a.cols() + c) = b.at(r, c);
  }
  return out;
}

GfMatrix take_columns(const GfMatrix& m, int first, int count) {
  require_internal(first >= 0 && count >= 0 && first + count <= m.cols(),
                   "column slice out of range");
  GfMatrix out(m.field(), m.rows(), count);
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < count; ++c) out.at(r, c) = m.at(r, first + c);
  return out;
}

GfMatrix drop_last_row(const GfMatrix& m) {
  require_internal(m.rows() > 0, "no row to drop");
  GfMatrix out(m.field(), m.rows() - 1, m.cols());
  for (int r = 0; r + 1 < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out.at(r, c) = m.at(r, c);
  return out;
}

GfMatrix drop_last_column(const GfMatrix& m) {
  require_internal(m.cols() > 0, "no column to drop");
  return take_columns(m, 0, m.cols() - 1);
}

std::vector<std::uint8_t> row_times(const std::vector<std::uint8_t>& x,
                                    const GfMatrix& m) {
  if (static_cast<int>(x.size()) != m.rows())
    fail(ErrorCode::dimension_mismatch, "row-vector product shape mismatch");
  std::vector<std::uint8_t> out(static_cast<size_t>(m.cols()), 0);
  int q = m.q();
  for (int r = 0; r < m.rows(); ++r) {
    int xr = x[static_cast<size_t>(r)];
    if (xr == 0) continue;
    for (int c = 0; c < m.cols(); ++c) {
      int v = out[static_cast<size_t>(c)] + xr * m.at(r, c);
      out[static_cast<size_t>(c)] = static_cast<std::uint8_t>(v % q);
    }
  }
  return out;
}

namespace {

RrefResult rref_generic(const GfMatrix& m) {
  GfMatrix r = m;
  const FieldOrder& f = r.field();
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < r.cols() && row < r.rows(); ++col) {
    int sel = -1;
    for (int i = row; i < r.rows(); ++i)
      if (r.at(i, col) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int c = 0; c < r.cols(); ++c) std::swap(r.at(sel, c), r.at(row, c));
    std::uint8_t piv_inv = f.inv(r.at(row, col));
    for (int c = 0; c < r.cols(); ++c) r.at(row, c) = f.mul(r.at(row, c), piv_inv);
    for (int i = 0; i < r.rows(); ++i) {
      if (i == row) continue;
      std::uint8_t factor = r.at(i, col);
      if (factor == 0) continue;
      for (int c = 0; c < r.cols(); ++c)
        r.at(i, c) = f.sub(r.at(i, c), f.mul(factor, r.at(row, c)));
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(r), std::move(pivots)};
}

// Word-packed elimination for F_2.
RrefResult rref_binary(const GfMatrix& m) {
  const int rows = m.rows(), cols = m.cols();
  const int words = (cols + 63) / 64;
  std::vector<std::uint64_t> bits(static_cast<size_t>(rows) * words, 0);
  auto word = [&](int r, int w) -> std::uint64_t& {
    return bits[static_cast<size_t>(r) * words + w];
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (m.at(r, c)) word(r, c >> 6) |= std::uint64_t{1} << (c & 63);

  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    const int w = col >> 6;
    const std::uint64_t mask = std::uint64_t{1} << (col & 63);
    int sel = -1;
    for (int i = row; i < rows; ++i)
      if (word(i, w) & mask) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int k = 0; k < words; ++k) std::swap(word(sel, k), word(row, k));
    for (int i = 0; i < rows; ++i) {
      if (i == row) continue;
      if (word(i, w) & mask)
        for (int k = 0; k < words; ++k) word(i, k) ^= word(row, k);
    }
    pivots.push_back(col);
    ++row;
  }

  GfMatrix out(m.field(), rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      out.at(r, c) = static_cast<std::uint8_t>((word(r, c >> 6) >> (c & 63)) & 1);
  return {std::move(out), std::move(pivots)};
}

}  // namespace

RrefResult rref(const GfMatrix& m) {
  return m.q() == 2 ? rref_binary(m) : rref_generic(m);
}

int rank(const GfMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

GfMatrix right_nullspace(const GfMatrix& m) {
  RrefResult r = rref(m);
  const FieldOrder& f = m.field();
  std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
  for (int p : r.pivots) is_pivot[static_cast<size_t>(p)] = true;

  std::vector<std::vector<std::uint8_t>> columns;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    std::vector<std::uint8_t> v(static_cast<size_t>(m.cols()), 0);
    v[static_cast<size_t>(free)] = 1;
    for (size_t i = 0; i < r.pivots.size(); ++i)
      v[static_cast<size_t>(r.pivots[i])] =
          f.neg(r.mat.at(static_cast<int>(i), free));
    columns.push_back(std::move(v));
  }
  return GfMatrix::from_columns(f, m.cols(), columns);
}

GfMatrix left_nullspace(const GfMatrix& m) {
  return transpose(right_nullspace(transpose(m)));
}

GfMatrix column_space_basis(const GfMatrix& m) {
  RrefResult r = rref(transpose(m));
  int d = static_cast<int>(r.pivots.size());
  GfMatrix basis(m.field(), m.rows(), d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < m.rows(); ++j) basis.at(j, i) = r.mat.at(i, j);
  return basis;
}

GfMatrix column_space_intersection(const GfMatrix& a, const GfMatrix& b) {
  if (a.rows() != b.rows() || !(a.field() == b.field()))
    fail(ErrorCode::dimension_mismatch,
         "intersection requires matching ambient space");
  const int n = a.rows();
  const FieldOrder& f = a.field();
  // Zassenhaus block [[Aᵀ Aᵀ],[Bᵀ 0]] on the row spaces of the transposes.
  GfMatrix at = transpose(a), bt = transpose(b);
  GfMatrix block(f, at.rows() + bt.rows(), 2 * n);
  for (int r = 0; r < at.rows(); ++r)
    for (int c = 0; c < n; ++c) {
      block.at(r, c) = at.at(r, c);
      block.at(r, n + c) = at.at(r, c);
    }
  for (int r = 0; r < bt.rows(); ++r)
    for (int c = 0; c < n; ++c) block.at(at.rows() + r, c) = bt.at(r, c);

  RrefResult red = rref(block);
  std::vector<std::vector<std::uint8_t>> rows;
  for (int r = 0; r < red.mat.rows(); ++r) {
    bool left_zero = true, right_zero = true;
    for (int c = 0; c < n && left_zero; ++c)
      if (red.mat.at(r, c) != 0) left_zero = false;
    for (int c = 0; c < n && right_zero; ++c)
      if (red.mat.at(r, n + c) != 0) right_zero = false;
    if (left_zero && !right_zero) {
      std::vector<std::uint8_t> v(static_cast<size_t>(n));
      for (int c = 0; c < n; ++c) v[static_cast<size_t>(c)] = red.mat.at(r, n + c);
      rows.push_back(std::move(v));
    }
  }
  GfMatrix row_basis(f, static_cast<int>(rows.size()), n);
  for (int r = 0; r < row_basis.rows(); ++r)
    for (int c = 0; c < n; ++c) row_basis.at(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
  // Canonicalize before handing the basis back as columns.
  RrefResult canon = rref(row_basis);
  int d = static_cast<int>(canon.pivots.size());
  GfMatrix out(f, n, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) out.at(j, i) = canon.mat.at(i, j);
  return out;
}

std::optional<GfMatrix> span_witness(const GfMatrix& v, const GfMatrix& basis) {
  if (v.rows() != basis.rows() || !(v.field() == basis.field()))
    fail(ErrorCode::dimension_mismatch, "span test shape mismatch");
  RrefResult r = rref(hconcat(basis, v));
  for (int p : r.pivots)
    if (p >= basis.cols()) return std::nullopt;
  GfMatrix x(v.field(), basis.cols(), v.cols());
  for (size_t i = 0; i < r.pivots.size(); ++i)
    for (int j = 0; j < v.cols(); ++j)
      x.at(r.pivots[i], j) = r.mat.at(static_cast<int>(i), basis.cols() + j);
  return x;
}

bool is_in_span(const GfMatrix& v, const GfMatrix& basis) {
  return span_witness(v, basis).has_value();
}

GfMatrix complete_to_full_column_rank(const GfMatrix& t) {
  RrefResult r = rref(transpose(t));
  std::vector<bool> covered(static_cast<size_t>(t.rows()), false);
  for (int p : r.pivots) covered[static_cast<size_t>(p)] = true;
  std::vector<std::vector<std::uint8_t>> columns;
  for (int j = 0; j < t.rows(); ++j) {
    if (covered[static_cast<size_t>(j)]) continue;
    std::vector<std::uint8_t> e(static_cast<size_t>(t.rows()), 0);
    e[static_cast<size_t>(j)] = 1;
    columns.push_back(std::move(e));
  }
  return GfMatrix::from_columns(t.field(), t.rows(), columns);
}

GfMatrix invert(const GfMatrix& m) {
  require_internal(m.rows() == m.cols(), "inverse of non-square matrix");
  RrefResult r = rref(hconcat(m, GfMatrix::identity(m.field(), m.rows())));
  require_internal(static_cast<int>(r.pivots.size()) == m.rows(),
                   "inverse of singular matrix");
  return take_columns(r.mat, m.cols(), m.cols());
}

void for_each_rref(FieldOrder field, int d, int k,
                   const std::function<bool(const GfMatrix&)>& visit) {
  require_internal(0 <= k && k <= d, "rref enumeration shape");
  if (k == 0) {
    visit(GfMatrix(field, 0, d));
    return;
  }
  const int q = field.order();
  std::vector<int> pivots(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) pivots[static_cast<size_t>(i)] = i;

  auto next_combination = [&]() -> bool {
    int i = k - 1;
    while (i >= 0 && pivots[static_cast<size_t>(i)] == d - k + i) --i;
    if (i < 0) return false;
    ++pivots[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      pivots[static_cast<size_t>(j)] = pivots[static_cast<size_t>(j - 1)] + 1;
    return true;
  };

  do {
    std::vector<bool> is_pivot(static_cast<size_t>(d), false);
    for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;
    // Free slots: entries right of each row's pivot in non-pivot columns.
    std::vector<std::pair<int, int>> free_slots;
    for (int r = 0; r < k; ++r)
      for (int c = pivots[static_cast<size_t>(r)] + 1; c < d; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) free_slots.emplace_back(r, c);

    std::vector<std::uint8_t> values(free_slots.size(), 0);
    while (true) {
      GfMatrix r(field, k, d);
      for (int i = 0; i < k; ++i) r.at(i, pivots[static_cast<size_t>(i)]) = 1;
      for (size_t s = 0; s < free_slots.size(); ++s)
        r.at(free_slots[s].first, free_slots[s].second) = values[s];
      if (!visit(r)) return;
      // Base-q odometer, last slot fastest.
      size_t s = free_slots.size();
      while (s > 0) {
        --s;
        if (++values[s] < q) break;
        values[s] = 0;
        if (s == 0) goto combination_done;
      }
      if (free_slots.empty()) break;
    }
  combination_done:;
  } while (next_combination());
}

void for_each_subspace(const GfMatrix& basis, int dim_cap,
                       const std::function<bool(const GfMatrix&)>& visit) {
  const int d = basis.cols();
  if (d > dim_cap)
    fail(ErrorCode::search_budget_exceeded,
         "subspace lattice dimension " + std::to_string(d) +
             " exceeds cap " + std::to_string(dim_cap));
  require_internal(rank(basis) == d, "subspace enumeration needs independent columns");
  bool keep_going = true;
  for (int k = 0; k <= d && keep_going; ++k) {
    for_each_rref(basis.field(), d, k, [&](const GfMatrix& coeffs) {
      keep_going = visit(mul(basis, transpose(coeffs)));
      return keep_going;
    });
  }
}

std::uint64_t gaussian_binomial(int q, int n, int k) {
  if (k < 0 || k > n) return 0;
  // q-Pascal recurrence; overflow-guarded since callers budget with this.
  std::vector<std::vector<std::uint64_t>> g(static_cast<size_t>(n + 1),
                                            std::vector<std::uint64_t>(static_cast<size_t>(n + 1), 0));
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() / 2;
  for (int i = 0; i <= n; ++i) {
    g[static_cast<size_t>(i)][0] = 1;
    for (int j = 1; j <= i; ++j) {
      std::uint64_t qpow = 1;
      for (int t = 0; t < j; ++t) {
        require_internal(qpow <= cap / static_cast<std::uint64_t>(q), "gaussian binomial overflow");
        qpow *= static_cast<std::uint64_t>(q);
      }
      std::uint64_t a = g[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)];
      std::uint64_t b = g[static_cast<size_t>(i - 1)][static_cast<size_t>(j)];
      require_internal(b == 0 || qpow <= cap / std::max<std::uint64_t>(b, 1),
                       "gaussian binomial overflow");
      g[static_cast<size_t>(i)][static_cast<size_t>(j)] = a + qpow * b;
    }
  }
  return g[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

std::uint64_t galois_number(int q, int d) {
  std::uint64_t total = 0;
  for (int k = 0; k <= d; ++k) total += gaussian_binomial(q, d, k);
  return total;
}

std::string matrix_to_string(const GfMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols() << " [";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) os << "; ";
    for (int c = 0; c < m.cols(); ++c) {
      if (c) os << " ";
      os << static_cast<int>(m.at(r, c));
    }
  }
  os << "]";
  return os.str();
}

}  // namespace ska
