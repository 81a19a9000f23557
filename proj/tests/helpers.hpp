#pragma once

#include <initializer_list>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gf.hpp"
#include "scheme.hpp"
#include "source.hpp"

namespace ska::testing {

inline GfMatrix mat(int q, int rows, int cols, std::initializer_list<int> entries) {
  std::vector<std::uint8_t> data;
  for (int e : entries) data.push_back(static_cast<std::uint8_t>(e));
  return GfMatrix(FieldOrder(q), rows, cols, std::move(data));
}

// The four-user binary sample used throughout: observations
//   z1 = (x1, x2+x3), z2 = (x1, x2+x4), z3 = (x1+x2, x3), z4 = (x1+x3+x4).
inline FiniteLinearSource four_user_source() {
  FieldOrder f(2);
  std::vector<SourceUser> users;
  users.push_back({"1", GfMatrix::from_columns(f, 4, {{1, 0, 0, 0}, {0, 1, 1, 0}})});
  users.push_back({"2", GfMatrix::from_columns(f, 4, {{1, 0, 0, 0}, {0, 1, 0, 1}})});
  users.push_back({"3", GfMatrix::from_columns(f, 4, {{1, 1, 0, 0}, {0, 0, 1, 0}})});
  users.push_back({"4", GfMatrix::from_columns(f, 4, {{1, 0, 1, 1}})});
  return FiniteLinearSource(f, 4, std::move(users));
}

// Two broadcast bits (x2+x3 from user 1, x2+x4 from user 2) and key x1.
inline SkaScheme two_bit_scheme() {
  FieldOrder f(2);
  SkaScheme s;
  s.mode = SchemeMode::direct;
  s.users.push_back({"1", mat(2, 2, 1, {0, 1})});
  s.users.push_back({"2", mat(2, 2, 1, {0, 1})});
  s.users.push_back({"3", GfMatrix(f, 2, 0)});
  s.users.push_back({"4", GfMatrix(f, 1, 0)});
  s.key_matrix = mat(2, 4, 1, {1, 0, 0, 0});
  return s;
}

inline FiniteLinearSource two_user_identical(int q, int l) {
  FieldOrder f(q);
  std::vector<SourceUser> users;
  users.push_back({"a", GfMatrix::identity(f, l)});
  users.push_back({"b", GfMatrix::identity(f, l)});
  return FiniteLinearSource(f, l, std::move(users));
}

inline FiniteLinearSource two_user_independent() {
  FieldOrder f(2);
  std::vector<SourceUser> users;
  users.push_back({"a", GfMatrix::from_columns(f, 2, {{1, 0}})});
  users.push_back({"b", GfMatrix::from_columns(f, 2, {{0, 1}})});
  return FiniteLinearSource(f, 2, std::move(users));
}

inline GfMatrix random_matrix(std::mt19937_64& rng, int q, int rows, int cols) {
  GfMatrix m(FieldOrder(q), rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m.at(r, c) = static_cast<std::uint8_t>(rng() % static_cast<std::uint64_t>(q));
  return m;
}

struct SourceShape {
  int q = 2;
  int max_base = 5;
  int min_users = 2;
  int max_users = 4;
  int max_width = 3;   // per-user observation symbols
  int sum_width_cap = 64;
};

inline FiniteLinearSource random_source(std::mt19937_64& rng, const SourceShape& shape) {
  FieldOrder f(shape.q);
  const int l = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(shape.max_base));
  const int m = shape.min_users +
                static_cast<int>(rng() % static_cast<std::uint64_t>(
                                     shape.max_users - shape.min_users + 1));
  std::vector<SourceUser> users;
  int budget = shape.sum_width_cap;
  for (int i = 0; i < m; ++i) {
    int width = static_cast<int>(rng() % static_cast<std::uint64_t>(shape.max_width + 1));
    width = std::min(width, budget);
    budget -= width;
    users.push_back({"u" + std::to_string(i), random_matrix(rng, shape.q, l, width)});
  }
  return FiniteLinearSource(f, l, std::move(users));
}

// Every vector in the column space, enumerated by coefficient odometer; no
// elimination machinery involved, so tests can use it as independent truth.
inline std::set<std::vector<std::uint8_t>> column_span_set(const GfMatrix& m) {
  const int q = m.q();
  std::set<std::vector<std::uint8_t>> out;
  std::vector<std::uint8_t> coeff(static_cast<size_t>(m.cols()), 0);
  while (true) {
    std::vector<std::uint8_t> v(static_cast<size_t>(m.rows()), 0);
    for (int c = 0; c < m.cols(); ++c)
      for (int r = 0; r < m.rows(); ++r)
        v[static_cast<size_t>(r)] = static_cast<std::uint8_t>(
            (v[static_cast<size_t>(r)] + coeff[static_cast<size_t>(c)] * m.at(r, c)) % q);
    out.insert(v);
    int pos = m.cols();
    while (pos > 0) {
      --pos;
      if (++coeff[static_cast<size_t>(pos)] < q) break;
      coeff[static_cast<size_t>(pos)] = 0;
      if (pos == 0) return out;
    }
    if (m.cols() == 0) return out;
  }
}

inline int log_q(std::uint64_t count, int q) {
  int log = 0;
  while (count > 1) {
    count /= static_cast<std::uint64_t>(q);
    ++log;
  }
  return log;
}

}  // namespace ska::testing
