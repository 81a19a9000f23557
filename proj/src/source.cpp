#include "source.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace ska {

using nlohmann::json;
using nlohmann::ordered_json;

FiniteLinearSource::FiniteLinearSource(FieldOrder field, int base_len,
                                       std::vector<SourceUser> users)
    : field_(field), base_len_(base_len), users_(std::move(users)),
      memo_(std::make_unique<EntropyMemo>()) {
  if (base_len_ < 0)
    fail(ErrorCode::validation_error, "base_len must be non-negative");
  if (users_.size() < 2)
    fail(ErrorCode::validation_error, "a source needs at least two users");
  std::set<std::string> seen;
  for (const auto& u : users_) {
    if (u.name.empty())
      fail(ErrorCode::validation_error, "user names must be non-empty");
    if (!seen.insert(u.name).second)
      fail(ErrorCode::validation_error, "duplicate user name: " + u.name);
    if (!(u.observation.field() == field_))
      fail(ErrorCode::validation_error, "field mismatch for user " + u.name);
    if (u.observation.rows() != base_len_)
      fail(ErrorCode::validation_error,
           "observation of user " + u.name + " has wrong base length");
  }
}

FiniteLinearSource::FiniteLinearSource(const FiniteLinearSource& other)
    : field_(other.field_), base_len_(other.base_len_), users_(other.users_),
      memo_(std::make_unique<EntropyMemo>()) {}

GfMatrix FiniteLinearSource::concat(std::uint32_t mask) const {
  GfMatrix out(field_, base_len_, 0);
  for (int i = 0; i < user_count(); ++i)
    if (mask & (std::uint32_t{1} << i)) out = hconcat(out, users_[static_cast<size_t>(i)].observation);
  return out;
}

int FiniteLinearSource::entropy(std::uint32_t mask) const {
  mask &= full_mask();
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto it = memo_->table.find(mask);
    if (it != memo_->table.end()) return it->second;
  }
  int r = rank(concat(mask));
  std::lock_guard<std::mutex> lock(memo_->mutex);
  memo_->table.emplace(mask, r);
  return r;
}

int FiniteLinearSource::conditional_entropy(std::uint32_t b, std::uint32_t c) const {
  return entropy(b | c) - entropy(c);
}

FiniteLinearSource FiniteLinearSource::apply_reduction(
    const std::vector<GfMatrix>& processors) const {
  if (static_cast<int>(processors.size()) != user_count())
    fail(ErrorCode::dimension_mismatch, "one processor per user required");
  std::vector<SourceUser> reduced;
  reduced.reserve(users_.size());
  for (int i = 0; i < user_count(); ++i) {
    const GfMatrix& c = processors[static_cast<size_t>(i)];
    if (c.rows() != users_[static_cast<size_t>(i)].observation.cols())
      fail(ErrorCode::dimension_mismatch,
           "processor rows must match observation width for user " +
               users_[static_cast<size_t>(i)].name);
    reduced.push_back(
        {users_[static_cast<size_t>(i)].name, mul(users_[static_cast<size_t>(i)].observation, c)});
  }
  return FiniteLinearSource(field_, base_len_, std::move(reduced));
}

std::vector<std::vector<std::uint8_t>> FiniteLinearSource::evaluate(
    const std::vector<std::uint8_t>& x) const {
  if (static_cast<int>(x.size()) != base_len_)
    fail(ErrorCode::dimension_mismatch, "realization length must equal base_len");
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(users_.size());
  for (const auto& u : users_) out.push_back(row_times(x, u.observation));
  return out;
}

namespace {

[[noreturn]] void bad_document(const std::string& what) {
  fail(ErrorCode::parse_error, "malformed source document: " + what);
}

}  // namespace

FiniteLinearSource FiniteLinearSource::parse(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    bad_document(e.what());
  }
  if (!doc.is_object()) bad_document("top level must be an object");
  for (const char* key : {"field", "base_len", "users"})
    if (!doc.contains(key)) bad_document(std::string("missing key '") + key + "'");
  if (!doc["field"].is_number_integer() || !doc["base_len"].is_number_integer() ||
      !doc["users"].is_array())
    bad_document("wrong type for 'field', 'base_len' or 'users'");

  const int q = doc["field"].get<int>();
  FieldOrder field(q);  // validates primality and range
  const int base_len = doc["base_len"].get<int>();
  if (base_len < 0)
    fail(ErrorCode::validation_error, "base_len must be non-negative");

  std::vector<SourceUser> users;
  for (const auto& ju : doc["users"]) {
    if (!ju.is_object() || !ju.contains("name") || !ju.contains("columns") ||
        !ju["name"].is_string() || !ju["columns"].is_array())
      bad_document("each user needs a 'name' string and a 'columns' array");
    std::vector<std::vector<std::uint8_t>> columns;
    for (const auto& jc : ju["columns"]) {
      if (!jc.is_array()) bad_document("columns must be arrays");
      if (static_cast<int>(jc.size()) != base_len)
        fail(ErrorCode::validation_error,
             "every column must have base_len entries");
      std::vector<std::uint8_t> col;
      for (const auto& je : jc) {
        if (!je.is_number_integer()) bad_document("entries must be integers");
        const long long v = je.get<long long>();
        if (v < 0 || v >= q)
          fail(ErrorCode::validation_error,
               "entry " + std::to_string(v) + " outside [0, " + std::to_string(q) + ")");
        col.push_back(static_cast<std::uint8_t>(v));
      }
      columns.push_back(std::move(col));
    }
    users.push_back({ju["name"].get<std::string>(),
                     GfMatrix::from_columns(field, base_len, columns)});
  }
  return FiniteLinearSource(field, base_len, std::move(users));
}

std::string FiniteLinearSource::serialize(bool pretty) const {
  ordered_json doc;
  doc["field"] = q();
  doc["base_len"] = base_len_;
  doc["users"] = ordered_json::array();
  for (const auto& u : users_) {
    ordered_json ju;
    ju["name"] = u.name;
    ju["columns"] = ordered_json::array();
    for (int c = 0; c < u.observation.cols(); ++c) {
      ordered_json col = ordered_json::array();
      for (int r = 0; r < base_len_; ++r) col.push_back(static_cast<int>(u.observation.at(r, c)));
      ju["columns"].push_back(col);
    }
    doc["users"].push_back(ju);
  }
  return pretty ? doc.dump(2) + "\n" : doc.dump();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string FiniteLinearSource::digest() const {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a64(serialize(false));
  return os.str();
}

std::pair<FiniteLinearSource, GfMatrix> normalize(const FiniteLinearSource& s) {
  GfMatrix m = s.concat(s.full_mask());
  RrefResult red = rref(m);
  const int rho = static_cast<int>(red.pivots.size());

  // Minimal-base observation matrices: the nonzero RREF rows of the joint
  // matrix, sliced back per user.
  GfMatrix reduced_rows(s.field(), rho, m.cols());
  for (int r = 0; r < rho; ++r)
    for (int c = 0; c < m.cols(); ++c) reduced_rows.at(r, c) = red.mat.at(r, c);

  std::vector<SourceUser> users;
  int offset = 0;
  for (int i = 0; i < s.user_count(); ++i) {
    int width = s.user(i).observation.cols();
    users.push_back({s.user(i).name, take_columns(reduced_rows, offset, width)});
    offset += width;
  }

  // Change of base B with M = B M': expresses the old rows over the new ones.
  auto witness = span_witness(transpose(m), transpose(reduced_rows));
  require_internal(witness.has_value(), "row space lost during normalization");
  GfMatrix base_change = transpose(*witness);  // base_len x rho

  FiniteLinearSource out(s.field(), rho, std::move(users));
  require_internal(out.is_normalized(), "normalization did not reach full rank");
  return {std::move(out), std::move(base_change)};
}

std::string digits_to_string(const std::vector<std::uint8_t>& digits) {
  std::string out;
  out.reserve(digits.size());
  for (std::uint8_t d : digits) {
    if (d < 10) {
      out.push_back(static_cast<char>('0' + d));
    } else {
      out.push_back('(');
      out += std::to_string(static_cast<int>(d));
      out.push_back(')');
    }
  }
  return out;
}

}  // namespace ska
