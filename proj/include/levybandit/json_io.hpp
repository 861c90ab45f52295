#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "levybandit/info.hpp"
#include "levybandit/problem.hpp"

namespace levybandit {

// Problem documents are strict: every field is required, unknown fields are
// rejected, numbers must be numbers. Shapes:
//
//   base      {"safe_rate", "discount", "sigma", "mu_high", "mu_low",
//              "atoms": [{"size", "rate_high", "rate_low"}, ...]}
//   info      {"safe_rate", "discount", "stream_a": {...}, "stream_b": {...},
//              "g_c_high", "g_c_low"}  with stream objects shaped like the
//              base document minus safe_rate/discount.

namespace detail {

inline void require_keys(const nlohmann::json& j,
                         const std::set<std::string>& keys,
                         const char* where) {
  if (!j.is_object())
    throw SchemaError(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!keys.count(item.key()))
      throw SchemaError(std::string("unknown field \"") + item.key() +
                        "\" in " + where);
  }
  for (const std::string& k : keys) {
    if (!j.contains(k))
      throw SchemaError(std::string("missing field \"") + k + "\" in " + where);
  }
}

inline double number(const nlohmann::json& j, const char* key,
                     const char* where) {
  const nlohmann::json& v = j.at(key);
  if (!v.is_number())
    throw SchemaError(std::string("field \"") + key + "\" in " + where +
                      " must be a number");
  return v.get<double>();
}

inline std::vector<JumpAtom> parse_atoms(const nlohmann::json& j,
                                         const char* where) {
  const nlohmann::json& arr = j.at("atoms");
  if (!arr.is_array())
    throw SchemaError(std::string("field \"atoms\" in ") + where +
                      " must be an array");
  std::vector<JumpAtom> atoms;
  atoms.reserve(arr.size());
  for (const nlohmann::json& a : arr) {
    require_keys(a, {"size", "rate_high", "rate_low"}, "atom");
    atoms.push_back(JumpAtom{number(a, "size", "atom"),
                             number(a, "rate_high", "atom"),
                             number(a, "rate_low", "atom")});
  }
  return atoms;
}

inline StreamSpec parse_stream(const nlohmann::json& j, const char* where) {
  require_keys(j, {"sigma", "mu_high", "mu_low", "atoms"}, where);
  return make_stream(number(j, "mu_high", where), number(j, "mu_low", where),
                     number(j, "sigma", where), parse_atoms(j, where));
}

inline nlohmann::json atoms_to_json(const std::vector<JumpAtom>& atoms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const JumpAtom& a : atoms)
    arr.push_back({{"size", a.size},
                   {"rate_high", a.rate_high},
                   {"rate_low", a.rate_low}});
  return arr;
}

}  // namespace detail

inline bool is_info_document(const nlohmann::json& j) {
  return j.is_object() && j.contains("stream_a");
}

inline BanditProblem parse_problem(const nlohmann::json& j) {
  detail::require_keys(
      j, {"safe_rate", "discount", "sigma", "mu_high", "mu_low", "atoms"},
      "problem document");
  BanditProblem p;
  p.safe_rate = detail::number(j, "safe_rate", "problem document");
  p.discount = detail::number(j, "discount", "problem document");
  p.stream = make_stream(detail::number(j, "mu_high", "problem document"),
                         detail::number(j, "mu_low", "problem document"),
                         detail::number(j, "sigma", "problem document"),
                         detail::parse_atoms(j, "problem document"));
  return p;
}

inline InfoProblem parse_info_problem(const nlohmann::json& j) {
  detail::require_keys(j,
                       {"safe_rate", "discount", "stream_a", "stream_b",
                        "g_c_high", "g_c_low"},
                       "info problem document");
  InfoProblem p;
  p.safe_rate = detail::number(j, "safe_rate", "info problem document");
  p.discount = detail::number(j, "discount", "info problem document");
  p.stream_a = detail::parse_stream(j.at("stream_a"), "stream_a");
  p.stream_b = detail::parse_stream(j.at("stream_b"), "stream_b");
  p.g_c_high = detail::number(j, "g_c_high", "info problem document");
  p.g_c_low = detail::number(j, "g_c_low", "info problem document");
  return p;
}

inline nlohmann::json to_json(const BanditProblem& p) {
  return {{"safe_rate", p.safe_rate},
          {"discount", p.discount},
          {"sigma", p.sigma()},
          {"mu_high", p.stream.mu_high},
          {"mu_low", p.stream.mu_low},
          {"atoms", detail::atoms_to_json(p.stream.atoms)}};
}

inline nlohmann::json to_json(const InfoProblem& p) {
  auto stream = [](const StreamSpec& s) {
    return nlohmann::json{{"sigma", s.sigma()},
                          {"mu_high", s.mu_high},
                          {"mu_low", s.mu_low},
                          {"atoms", detail::atoms_to_json(s.atoms)}};
  };
  return {{"safe_rate", p.safe_rate}, {"discount", p.discount},
          {"stream_a", stream(p.stream_a)}, {"stream_b", stream(p.stream_b)},
          {"g_c_high", p.g_c_high}, {"g_c_low", p.g_c_low}};
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open problem document: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline BanditProblem load_problem(const std::string& path) {
  return parse_problem(load_json_file(path));
}

inline InfoProblem load_info_problem(const std::string& path) {
  return parse_info_problem(load_json_file(path));
}

}  // namespace levybandit
