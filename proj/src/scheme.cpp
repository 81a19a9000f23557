#include "scheme.hpp"

#include <json.hpp>

namespace ska {

using nlohmann::json;
using nlohmann::ordered_json;

int SkaScheme::total_discussion() const {
  int total = 0;
  for (const auto& u : users) total += u.discussion.cols();
  return total;
}

namespace {

[[noreturn]] void bad_scheme(const std::string& what) {
  fail(ErrorCode::parse_error, "malformed scheme document: " + what);
}

GfMatrix parse_matrix(const json& j, FieldOrder field, const char* what) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data") || !j["rows"].is_number_integer() ||
      !j["cols"].is_number_integer() || !j["data"].is_array())
    bad_scheme(std::string(what) + " must carry rows, cols and data");
  const int rows = j["rows"].get<int>();
  const int cols = j["cols"].get<int>();
  if (rows < 0 || cols < 0 || static_cast<int>(j["data"].size()) != rows)
    bad_scheme(std::string(what) + " has inconsistent row count");
  std::vector<std::uint8_t> entries;
  entries.reserve(static_cast<size_t>(rows) * static_cast<size_t>(cols));
  for (const auto& jr : j["data"]) {
    if (!jr.is_array() || static_cast<int>(jr.size()) != cols)
      bad_scheme(std::string(what) + " has inconsistent column count");
    for (const auto& je : jr) {
      if (!je.is_number_integer()) bad_scheme("matrix entries must be integers");
      const long long v = je.get<long long>();
      if (v < 0 || v >= field.order())
        fail(ErrorCode::validation_error,
             "matrix entry " + std::to_string(v) + " outside the field");
      entries.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return GfMatrix(field, rows, cols, std::move(entries));
}

ordered_json matrix_to_json(const GfMatrix& m) {
  ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(static_cast<int>(m.at(r, c)));
    j["data"].push_back(row);
  }
  return j;
}

}  // namespace

SkaScheme SkaScheme::parse(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    bad_scheme(e.what());
  }
  if (!doc.is_object()) bad_scheme("top level must be an object");
  for (const char* key : {"field", "mode", "users", "key"})
    if (!doc.contains(key)) bad_scheme(std::string("missing key '") + key + "'");
  if (!doc["field"].is_number_integer() || !doc["mode"].is_string() ||
      !doc["users"].is_array())
    bad_scheme("wrong type for 'field', 'mode' or 'users'");

  FieldOrder field(doc["field"].get<int>());
  SkaScheme scheme;
  const std::string mode = doc["mode"].get<std::string>();
  if (mode == "omniscience")
    scheme.mode = SchemeMode::omniscience;
  else if (mode == "direct")
    scheme.mode = SchemeMode::direct;
  else
    bad_scheme("mode must be 'omniscience' or 'direct'");

  for (const auto& ju : doc["users"]) {
    if (!ju.is_object() || !ju.contains("name") || !ju.contains("discussion") ||
        !ju["name"].is_string())
      bad_scheme("each user needs a 'name' and a 'discussion' matrix");
    scheme.users.push_back({ju["name"].get<std::string>(),
                            parse_matrix(ju["discussion"], field, "discussion")});
  }
  scheme.key_matrix = parse_matrix(doc["key"], field, "key");

  if (doc.contains("provenance") && doc["provenance"].is_object()) {
    const auto& p = doc["provenance"];
    if (p.contains("source_digest") && p["source_digest"].is_string())
      scheme.source_digest = p["source_digest"].get<std::string>();
    if (p.contains("seed") && p["seed"].is_number_unsigned())
      scheme.seed = p["seed"].get<std::uint64_t>();
    if (p.contains("greedy") && p["greedy"].is_boolean())
      scheme.greedy = p["greedy"].get<bool>();
  }
  return scheme;
}

std::string SkaScheme::serialize(bool pretty) const {
  ordered_json doc;
  doc["field"] = key_matrix.q();
  doc["mode"] = mode == SchemeMode::omniscience ? "omniscience" : "direct";
  doc["users"] = ordered_json::array();
  for (const auto& u : users) {
    ordered_json ju;
    ju["name"] = u.name;
    ju["discussion"] = matrix_to_json(u.discussion);
    doc["users"].push_back(ju);
  }
  doc["key"] = matrix_to_json(key_matrix);
  ordered_json prov;
  if (!source_digest.empty()) prov["source_digest"] = source_digest;
  if (seed.has_value()) prov["seed"] = *seed;
  if (greedy) prov["greedy"] = true;
  if (!prov.empty()) doc["provenance"] = prov;
  return pretty ? doc.dump(2) + "\n" : doc.dump();
}

void check_scheme_shape(const FiniteLinearSource& s, const SkaScheme& scheme) {
  if (static_cast<int>(scheme.users.size()) != s.user_count())
    fail(ErrorCode::dimension_mismatch, "scheme and source disagree on user count");
  for (int i = 0; i < s.user_count(); ++i) {
    const auto& su = scheme.users[static_cast<size_t>(i)];
    if (su.name != s.user(i).name)
      fail(ErrorCode::dimension_mismatch,
           "scheme user '" + su.name + "' does not match source user '" +
               s.user(i).name + "'");
    if (!(su.discussion.field() == s.field()))
      fail(ErrorCode::dimension_mismatch, "scheme field does not match source");
    if (su.discussion.rows() != s.user(i).observation.cols())
      fail(ErrorCode::dimension_mismatch,
           "discussion of user '" + su.name + "' does not fit the observation width");
  }
  if (!(scheme.key_matrix.field() == s.field()) ||
      scheme.key_matrix.rows() != s.base_len())
    fail(ErrorCode::dimension_mismatch, "key matrix does not fit the source base");
}

GfMatrix discussion_total(const FiniteLinearSource& s, const SkaScheme& scheme) {
  check_scheme_shape(s, scheme);
  GfMatrix t(s.field(), s.base_len(), 0);
  for (int i = 0; i < s.user_count(); ++i)
    t = hconcat(t, mul(s.user(i).observation,
                       scheme.users[static_cast<size_t>(i)].discussion));
  return t;
}

Transcript execute(const FiniteLinearSource& s, const SkaScheme& scheme,
                   const std::vector<std::uint8_t>& x) {
  check_scheme_shape(s, scheme);
  if (static_cast<int>(x.size()) != s.base_len())
    fail(ErrorCode::dimension_mismatch, "realization length must equal base_len");
  Transcript t;
  for (int i = 0; i < s.user_count(); ++i) {
    auto z = row_times(x, s.user(i).observation);
    t.messages.push_back(row_times(z, scheme.users[static_cast<size_t>(i)].discussion));
  }
  t.key = row_times(x, scheme.key_matrix);
  return t;
}

}  // namespace ska
