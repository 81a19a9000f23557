#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gf.hpp"
#include "helpers.hpp"

using namespace ska;
using namespace ska::testing;

TEST_CASE("field order validation") {
  CHECK_NOTHROW(FieldOrder(2));
  CHECK_NOTHROW(FieldOrder(251));
  CHECK_THROWS_AS(FieldOrder(1), Error);
  CHECK_THROWS_AS(FieldOrder(4), Error);
  CHECK_THROWS_AS(FieldOrder(255), Error);
  FieldOrder f(7);
  for (int a = 1; a < 7; ++a)
    CHECK(f.mul(static_cast<std::uint8_t>(a), f.inv(static_cast<std::uint8_t>(a))) == 1);
}

TEST_CASE("rref on duplicate binary rows") {
  auto r = rref(mat(2, 2, 2, {1, 1, 1, 1}));
  CHECK(r.mat == mat(2, 2, 2, {1, 1, 0, 0}));
  CHECK(r.pivots == std::vector<int>{0});
}

TEST_CASE("rref fixes the identity") {
  GfMatrix id = GfMatrix::identity(FieldOrder(3), 3);
  auto r = rref(id);
  CHECK(r.mat == id);
  CHECK(r.pivots == std::vector<int>{0, 1, 2});
}

TEST_CASE("rref over GF(3) normalizes the pivot") {
  auto r = rref(mat(3, 2, 2, {2, 1, 1, 2}));
  CHECK(r.mat == mat(3, 2, 2, {1, 2, 0, 0}));
  CHECK(r.pivots == std::vector<int>{0});
}

TEST_CASE("rref is idempotent on random matrices") {
  std::mt19937_64 rng(7);
  for (int q : {2, 3, 5}) {
    for (int trial = 0; trial < 40; ++trial) {
      GfMatrix m = random_matrix(rng, q, 1 + static_cast<int>(rng() % 5),
                                 1 + static_cast<int>(rng() % 5));
      auto once = rref(m);
      auto twice = rref(once.mat);
      CHECK(once.mat == twice.mat);
      CHECK(once.pivots == twice.pivots);
    }
  }
}

TEST_CASE("rank basics") {
  CHECK(rank(GfMatrix(FieldOrder(2), 2, 2)) == 0);
  CHECK(rank(mat(7, 1, 1, {5})) == 1);
  CHECK(rank(GfMatrix(FieldOrder(2), 0, 5)) == 0);
  CHECK(rank(four_user_source().concat(0xf)) == 4);
}

TEST_CASE("rank equals brute-force span size") {
  std::mt19937_64 rng(11);
  for (int q : {2, 3}) {
    for (int trial = 0; trial < 25; ++trial) {
      GfMatrix m = random_matrix(rng, q, 1 + static_cast<int>(rng() % 4),
                                 1 + static_cast<int>(rng() % 4));
      auto span = column_span_set(m);
      CHECK(rank(m) == log_q(span.size(), q));
    }
  }
}

TEST_CASE("rank is invariant under transpose and row swaps") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    GfMatrix m = random_matrix(rng, 3, 2 + static_cast<int>(rng() % 3),
                               2 + static_cast<int>(rng() % 3));
    CHECK(rank(m) == rank(transpose(m)));
    GfMatrix swapped = m;
    for (int c = 0; c < m.cols(); ++c)
      std::swap(swapped.at(0, c), swapped.at(m.rows() - 1, c));
    CHECK(rank(m) == rank(swapped));
    CHECK(rank(hconcat(m, m)) == rank(m));
  }
}

TEST_CASE("right nullspace") {
  CHECK(right_nullspace(GfMatrix::identity(FieldOrder(2), 3)).cols() == 0);
  CHECK(right_nullspace(mat(2, 1, 2, {1, 1})) == mat(2, 2, 1, {1, 1}));
  CHECK(right_nullspace(mat(2, 2, 3, {1, 0, 1, 0, 1, 1})) == mat(2, 3, 1, {1, 1, 1}));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    GfMatrix m = random_matrix(rng, 5, 1 + static_cast<int>(rng() % 4),
                               1 + static_cast<int>(rng() % 4));
    GfMatrix basis = right_nullspace(m);
    CHECK(basis.cols() == m.cols() - rank(m));
    CHECK(mul(m, basis).is_zero());
    CHECK(rank(basis) == basis.cols());
  }
}

TEST_CASE("left nullspace mirrors the right one") {
  CHECK(left_nullspace(GfMatrix::identity(FieldOrder(2), 3)).rows() == 0);
  CHECK(left_nullspace(mat(2, 2, 1, {1, 1})) == mat(2, 1, 2, {1, 1}));
  GfMatrix m = mat(2, 3, 2, {1, 0, 0, 1, 1, 1});
  GfMatrix basis = left_nullspace(m);
  CHECK(basis == mat(2, 1, 3, {1, 1, 1}));
  CHECK(mul(basis, m).is_zero());
}

TEST_CASE("column space intersection matches brute force") {
  FieldOrder f2(2);
  GfMatrix id2 = GfMatrix::identity(f2, 2);
  CHECK(column_space_intersection(id2, id2).cols() == 2);
  CHECK(column_space_intersection(mat(2, 2, 1, {1, 0}), mat(2, 2, 1, {0, 1})).cols() == 0);

  auto s = four_user_source();
  GfMatrix common =
      column_space_intersection(s.user(0).observation, s.user(1).observation);
  CHECK(common == mat(2, 4, 1, {1, 0, 0, 0}));

  std::mt19937_64 rng(19);
  for (int q : {2, 3}) {
    for (int trial = 0; trial < 30; ++trial) {
      int n = 1 + static_cast<int>(rng() % 4);
      GfMatrix a = random_matrix(rng, q, n, 1 + static_cast<int>(rng() % 3));
      GfMatrix b = random_matrix(rng, q, n, 1 + static_cast<int>(rng() % 3));
      GfMatrix inter = column_space_intersection(a, b);
      CHECK(inter.cols() + rank(hconcat(a, b)) == rank(a) + rank(b));
      auto sa = column_span_set(a);
      auto sb = column_span_set(b);
      std::set<std::vector<std::uint8_t>> both;
      for (const auto& v : sa)
        if (sb.count(v)) both.insert(v);
      CHECK(inter.cols() == log_q(both.size(), q));
      for (const auto& v : column_span_set(inter)) CHECK(both.count(v) == 1);
    }
  }
}

TEST_CASE("span membership with witness") {
  FieldOrder f2(2);
  GfMatrix id2 = GfMatrix::identity(f2, 2);
  CHECK(is_in_span(mat(2, 2, 1, {1, 1}), id2));
  CHECK_FALSE(is_in_span(mat(2, 2, 1, {1, 0}), mat(2, 2, 1, {0, 1})));

  auto s = four_user_source();
  GfMatrix v = mat(2, 4, 1, {1, 1, 1, 0});  // x1+x2+x3
  auto witness = span_witness(v, s.user(2).observation);
  REQUIRE(witness.has_value());
  CHECK(*witness == mat(2, 2, 1, {1, 1}));
  CHECK(mul(s.user(2).observation, *witness) == v);
}

TEST_CASE("completion to full column rank") {
  FieldOrder f2(2);
  CHECK(complete_to_full_column_rank(GfMatrix::identity(f2, 3)).cols() == 0);
  CHECK(complete_to_full_column_rank(GfMatrix(f2, 3, 0)) == GfMatrix::identity(f2, 3));

  // Omniscience discussion of the four-user sample: x2+x3, x2+x4, x3.
  GfMatrix t =
      GfMatrix::from_columns(f2, 4, {{0, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}});
  CHECK(complete_to_full_column_rank(t) == mat(2, 4, 1, {1, 0, 0, 0}));

  std::mt19937_64 rng(23);
  for (int q : {2, 5}) {
    for (int trial = 0; trial < 25; ++trial) {
      GfMatrix m = random_matrix(rng, q, 1 + static_cast<int>(rng() % 5),
                                 static_cast<int>(rng() % 5));
      GfMatrix n = complete_to_full_column_rank(m);
      CHECK(rank(hconcat(m, n)) == m.rows());
      CHECK(n.cols() == m.rows() - rank(m));
      for (int c = 0; c < n.cols(); ++c)
        CHECK_FALSE(is_in_span(take_columns(n, c, 1), m));
    }
  }
}

TEST_CASE("subspace counts match Galois numbers") {
  CHECK(galois_number(2, 0) == 1);
  CHECK(galois_number(2, 1) == 2);
  CHECK(galois_number(2, 2) == 5);
  CHECK(galois_number(2, 3) == 16);
  CHECK(galois_number(2, 4) == 67);
  CHECK(galois_number(3, 2) == 6);

  for (int d = 0; d <= 4; ++d) {
    std::uint64_t count = 0;
    for_each_subspace(GfMatrix::identity(FieldOrder(2), d), 6, [&](const GfMatrix&) {
      ++count;
      return true;
    });
    CHECK(count == galois_number(2, d));
  }
}

TEST_CASE("enumerated subspaces are distinct and closed under addition") {
  for (int q : {2, 3}) {
    const int d = 3;
    std::set<std::set<std::vector<std::uint8_t>>> seen;
    for_each_subspace(GfMatrix::identity(FieldOrder(q), d), 6,
                      [&](const GfMatrix& basis) {
                        auto span = column_span_set(basis);
                        for (const auto& u : span)
                          for (const auto& v : span) {
                            std::vector<std::uint8_t> sum(u.size());
                            for (size_t i = 0; i < u.size(); ++i)
                              sum[i] = static_cast<std::uint8_t>((u[i] + v[i]) % q);
                            CHECK(span.count(sum) == 1);
                          }
                        CHECK(seen.insert(span).second);
                        return true;
                      });
    CHECK(seen.size() == galois_number(q, d));
  }
}

TEST_CASE("subspace enumeration honors the dimension cap") {
  try {
    for_each_subspace(GfMatrix::identity(FieldOrder(2), 7), 6,
                      [](const GfMatrix&) { return true; });
    FAIL("expected search_budget_exceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::search_budget_exceeded);
  }
}

TEST_CASE("matrix inverse round trip") {
  std::mt19937_64 rng(29);
  for (int q : {2, 3, 7}) {
    int found = 0;
    for (int trial = 0; trial < 40 && found < 10; ++trial) {
      int n = 1 + static_cast<int>(rng() % 4);
      GfMatrix m = random_matrix(rng, q, n, n);
      if (rank(m) != n) continue;
      ++found;
      CHECK(mul(m, invert(m)) == GfMatrix::identity(FieldOrder(q), n));
    }
    CHECK(found > 0);
  }
}
