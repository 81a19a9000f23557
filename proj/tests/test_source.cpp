#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "helpers.hpp"
#include "source.hpp"

using namespace ska;
using namespace ska::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::internal_inconsistency;
}

}  // namespace

TEST_CASE("parse accepts the four-user sample document") {
  auto s = FiniteLinearSource::parse(four_user_source().serialize());
  CHECK(s.q() == 2);
  CHECK(s.base_len() == 4);
  CHECK(s.user_count() == 4);
  CHECK(s.user(0).name == "1");
  CHECK(s.user(0).observation.cols() == 2);
  CHECK(s.user(3).observation.cols() == 1);
}

TEST_CASE("parse rejects bad documents") {
  CHECK(code_of([] { FiniteLinearSource::parse("not json"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { FiniteLinearSource::parse("{\"field\": 2}"); }) ==
        ErrorCode::parse_error);
  // composite field order
  CHECK(code_of([] {
          FiniteLinearSource::parse(
              R"({"field": 4, "base_len": 1, "users": [
                 {"name": "a", "columns": [[1]]},
                 {"name": "b", "columns": [[1]]}]})");
        }) == ErrorCode::validation_error);
  // single user
  CHECK(code_of([] {
          FiniteLinearSource::parse(
              R"({"field": 2, "base_len": 1, "users": [
                 {"name": "a", "columns": [[1]]}]})");
        }) == ErrorCode::validation_error);
  // entry outside the field
  CHECK(code_of([] {
          FiniteLinearSource::parse(
              R"({"field": 2, "base_len": 1, "users": [
                 {"name": "a", "columns": [[2]]},
                 {"name": "b", "columns": [[1]]}]})");
        }) == ErrorCode::validation_error);
  // column length mismatch
  CHECK(code_of([] {
          FiniteLinearSource::parse(
              R"({"field": 2, "base_len": 2, "users": [
                 {"name": "a", "columns": [[1]]},
                 {"name": "b", "columns": [[1, 0]]}]})");
        }) == ErrorCode::validation_error);
}

TEST_CASE("serialization round trips and digests are stable") {
  auto s = four_user_source();
  auto reparsed = FiniteLinearSource::parse(s.serialize());
  CHECK(reparsed.serialize() == s.serialize());
  CHECK(reparsed.digest() == s.digest());
}

TEST_CASE("entropy of subsets") {
  auto s = four_user_source();
  CHECK(s.entropy(0) == 0);
  CHECK(s.entropy(0b0001) == 2);
  CHECK(s.entropy(0b1111) == 4);
  CHECK(s.is_normalized());
}

TEST_CASE("conditional entropy") {
  auto s = four_user_source();
  CHECK(s.conditional_entropy(0b0010, 0b0010) == 0);
  CHECK(s.conditional_entropy(0b1000, 0b0111) == 0);  // H(z4 | z1 z2 z3)
  CHECK(s.conditional_entropy(0b0111, 0b1000) == 3);  // H(z1 z2 z3 | z4)
}

TEST_CASE("entropy equals log of distinct observation tuples") {
  std::mt19937_64 rng(31);
  for (int q : {2, 3}) {
    SourceShape shape;
    shape.q = q;
    shape.max_base = 4;
    shape.max_users = 3;
    for (int trial = 0; trial < 10; ++trial) {
      auto s = random_source(rng, shape);
      std::uint64_t n = 1;
      for (int i = 0; i < s.base_len(); ++i) n *= static_cast<std::uint64_t>(q);
      for (std::uint32_t mask = 0; mask <= s.full_mask(); ++mask) {
        std::set<std::string> tuples;
        for (std::uint64_t idx = 0; idx < n; ++idx) {
          std::uint64_t rest = idx;
          std::vector<std::uint8_t> x(static_cast<size_t>(s.base_len()));
          for (auto& d : x) {
            d = static_cast<std::uint8_t>(rest % q);
            rest /= static_cast<std::uint64_t>(q);
          }
          auto z = s.evaluate(x);
          std::string key;
          for (int i = 0; i < s.user_count(); ++i)
            if (mask & (std::uint32_t{1} << i))
              key += std::string(z[static_cast<size_t>(i)].begin(),
                                 z[static_cast<size_t>(i)].end()) +
                     '\x01';
          tuples.insert(key);
        }
        CHECK(s.entropy(mask) == log_q(tuples.size(), q));
      }
    }
  }
}

TEST_CASE("entropy is monotone and submodular") {
  std::mt19937_64 rng(37);
  SourceShape shape;
  shape.max_users = 4;
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_source(rng, shape);
    const std::uint32_t full = s.full_mask();
    for (std::uint32_t b = 0; b <= full; ++b) {
      for (std::uint32_t c = 0; c <= full; ++c) {
        if ((b & c) == b) CHECK(s.entropy(b) <= s.entropy(c));
        CHECK(s.entropy(b | c) + s.entropy(b & c) <= s.entropy(b) + s.entropy(c));
      }
    }
  }
}

TEST_CASE("normalize keeps an already minimal source") {
  auto [normalized, change] = normalize(four_user_source());
  CHECK(normalized.base_len() == 4);
  CHECK(normalized.is_normalized());
  CHECK(change.rows() == 4);
  CHECK(change.cols() == 4);
}

TEST_CASE("normalize drops unused base coordinates") {
  FieldOrder f(2);
  // Second base coordinate reaches nobody.
  std::vector<SourceUser> users;
  users.push_back({"a", GfMatrix::from_columns(f, 3, {{1, 0, 0}})});
  users.push_back({"b", GfMatrix::from_columns(f, 3, {{0, 0, 1}})});
  auto s = FiniteLinearSource(f, 3, std::move(users));
  auto [normalized, change] = normalize(s);
  CHECK(normalized.base_len() == 2);
  CHECK(normalized.is_normalized());
  (void)change;
}

TEST_CASE("normalize preserves every subset entropy") {
  std::mt19937_64 rng(41);
  SourceShape shape;
  shape.max_base = 5;
  shape.max_users = 4;
  for (int trial = 0; trial < 25; ++trial) {
    auto s = random_source(rng, shape);
    auto [normalized, change] = normalize(s);
    CHECK(normalized.base_len() == s.entropy_all());
    for (std::uint32_t mask = 0; mask <= s.full_mask(); ++mask)
      CHECK(normalized.entropy(mask) == s.entropy(mask));
    // The recorded base change reproduces the original observations.
    for (int i = 0; i < s.user_count(); ++i)
      CHECK(mul(change, normalized.user(i).observation) == s.user(i).observation);
  }
}

TEST_CASE("apply_reduction") {
  auto s = four_user_source();
  std::vector<GfMatrix> identity_procs;
  for (int i = 0; i < 4; ++i)
    identity_procs.push_back(
        GfMatrix::identity(s.field(), s.user(i).observation.cols()));
  auto same = s.apply_reduction(identity_procs);
  for (int i = 0; i < 4; ++i)
    CHECK(same.user(i).observation == s.user(i).observation);

  // z3' = x1+x2+x3 drops the joint entropy to 3.
  auto procs = identity_procs;
  procs[2] = mat(2, 2, 1, {1, 1});
  auto reduced = s.apply_reduction(procs);
  CHECK(reduced.entropy_all() == 3);
  CHECK(reduced.user(2).observation == mat(2, 4, 1, {1, 1, 1, 0}));

  std::vector<GfMatrix> empty_procs;
  for (int i = 0; i < 4; ++i)
    empty_procs.push_back(GfMatrix(s.field(), s.user(i).observation.cols(), 0));
  CHECK(s.apply_reduction(empty_procs).entropy_all() == 0);
}

TEST_CASE("reductions never increase subset entropies") {
  std::mt19937_64 rng(43);
  SourceShape shape;
  shape.max_users = 3;
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_source(rng, shape);
    std::vector<GfMatrix> procs;
    for (int i = 0; i < s.user_count(); ++i) {
      int t_i = s.user(i).observation.cols();
      procs.push_back(random_matrix(rng, s.q(), t_i, static_cast<int>(rng() % (t_i + 1))));
    }
    auto reduced = s.apply_reduction(procs);
    for (std::uint32_t mask = 0; mask <= s.full_mask(); ++mask)
      CHECK(reduced.entropy(mask) <= s.entropy(mask));
  }
}

TEST_CASE("evaluate on sample realizations") {
  auto s = four_user_source();
  auto zero = s.evaluate({0, 0, 0, 0});
  for (const auto& z : zero)
    for (auto v : z) CHECK(v == 0);

  auto z1 = s.evaluate({1, 0, 0, 0});
  CHECK(z1[0] == std::vector<std::uint8_t>{1, 0});
  CHECK(z1[1] == std::vector<std::uint8_t>{1, 0});
  CHECK(z1[2] == std::vector<std::uint8_t>{1, 0});
  CHECK(z1[3] == std::vector<std::uint8_t>{1});

  auto z2 = s.evaluate({0, 1, 1, 0});
  CHECK(z2[0] == std::vector<std::uint8_t>{0, 0});
  CHECK(z2[1] == std::vector<std::uint8_t>{0, 1});
  CHECK(z2[2] == std::vector<std::uint8_t>{1, 1});
  CHECK(z2[3] == std::vector<std::uint8_t>{1});

  CHECK(code_of([&] { s.evaluate({0, 0}); }) == ErrorCode::dimension_mismatch);
}
