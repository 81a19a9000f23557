#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ska {

// Prime field order. Primality is checked once at construction; everything
// downstream can then trust that inverses exist.
class FieldOrder {
 public:
  explicit FieldOrder(int q);

  int order() const noexcept { return q_; }
  std::uint8_t add(std::uint8_t a, std::uint8_t b) const {
    int s = a + b;
    return static_cast<std::uint8_t>(s >= q_ ? s - q_ : s);
  }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const {
    int s = a - b;
    return static_cast<std::uint8_t>(s < 0 ? s + q_ : s);
  }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
    return static_cast<std::uint8_t>((a * b) % q_);
  }
  std::uint8_t neg(std::uint8_t a) const {
    return a == 0 ? 0 : static_cast<std::uint8_t>(q_ - a);
  }
  std::uint8_t inv(std::uint8_t a) const;

  friend bool operator==(const FieldOrder& a, const FieldOrder& b) {
    return a.q_ == b.q_;
  }

 private:
  int q_;
};

// Dense matrix over F_q, row-major, entries reduced mod q. Empty shapes
// (zero rows or columns) are ordinary values: the rank of an empty matrix is
// zero and products with compatible empty operands behave as expected.
class GfMatrix {
 public:
  GfMatrix() : field_(2), rows_(0), cols_(0) {}
  GfMatrix(FieldOrder field, int rows, int cols);
  GfMatrix(FieldOrder field, int rows, int cols, std::vector<std::uint8_t> entries);

  const FieldOrder& field() const noexcept { return field_; }
  int q() const noexcept { return field_.order(); }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  std::uint8_t at(int r, int c) const {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }
  std::uint8_t& at(int r, int c) {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }
  const std::vector<std::uint8_t>& data() const noexcept { return data_; }

  bool is_zero() const;

  static GfMatrix identity(FieldOrder field, int n);
  // Builds an n x k matrix from k column vectors of length n.
  static GfMatrix from_columns(FieldOrder field, int n,
                               const std::vector<std::vector<std::uint8_t>>& columns);

  friend bool operator==(const GfMatrix& a, const GfMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.field_ == b.field_ && a.data_ == b.data_;
  }

 private:
  FieldOrder field_;
  int rows_;
  int cols_;
  std::vector<std::uint8_t> data_;
};

struct RrefResult {
  GfMatrix mat;
  std::vector<int> pivots;  // pivot column indices, ascending
};

GfMatrix transpose(const GfMatrix& m);
GfMatrix mul(const GfMatrix& a, const GfMatrix& b);
GfMatrix hconcat(const GfMatrix& a, const GfMatrix& b);
GfMatrix take_columns(const GfMatrix& m, int first, int count);
GfMatrix drop_last_row(const GfMatrix& m);
GfMatrix drop_last_column(const GfMatrix& m);
std::vector<std::uint8_t> row_times(const std::vector<std::uint8_t>& x, const GfMatrix& m);

// Unique reduced row echelon form. Binary matrices take a word-packed
// elimination path; other primes use residue arithmetic.
RrefResult rref(const GfMatrix& m);
int rank(const GfMatrix& m);

// Columns form the canonical basis (induced by the RREF free columns) of
// { v : m v = 0 }.
GfMatrix right_nullspace(const GfMatrix& m);
// Rows form a basis of { v : v m = 0 }.
GfMatrix left_nullspace(const GfMatrix& m);

// Basis of colspace(a) ∩ colspace(b) via the Zassenhaus sum/intersection
// trick, returned in canonical column form.
GfMatrix column_space_intersection(const GfMatrix& a, const GfMatrix& b);

// If every column of v lies in colspace(basis), returns x with basis x = v.
std::optional<GfMatrix> span_witness(const GfMatrix& v, const GfMatrix& basis);
bool is_in_span(const GfMatrix& v, const GfMatrix& basis);

// Completes t (with full-rank column space of dimension p <= rows) to a full
// column rank matrix [t | N]: N's columns are the standard basis vectors at
// the coordinate positions not covered by t.
GfMatrix complete_to_full_column_rank(const GfMatrix& t);

// Canonical basis (RREF of the transpose, transposed back) of colspace(m).
GfMatrix column_space_basis(const GfMatrix& m);
GfMatrix invert(const GfMatrix& m);

// Enumerates every k x d matrix in reduced row echelon form with rank k, in
// canonical order (pivot sets lexicographic, then free entries as a base-q
// odometer). Each row space of dimension k appears exactly once.
void for_each_rref(FieldOrder field, int d, int k,
                   const std::function<bool(const GfMatrix&)>& visit);

// Streams one canonical basis per subspace of colspace(basis), all dimensions
// 0..d in ascending order. `basis` must have independent columns. Throws
// search_budget_exceeded when d exceeds dim_cap.
void for_each_subspace(const GfMatrix& basis, int dim_cap,
                       const std::function<bool(const GfMatrix&)>& visit);

std::uint64_t gaussian_binomial(int q, int n, int k);
std::uint64_t galois_number(int q, int d);  // total subspace count of F_q^d

std::string matrix_to_string(const GfMatrix& m);

}  // namespace ska
