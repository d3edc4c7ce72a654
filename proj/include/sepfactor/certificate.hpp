#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "permutation.hpp"
#include "separable.hpp"

namespace sepfactor {

struct trace_entry {
  int step = 0;
  std::string method;
  nlohmann::json params = nlohmann::json::object();
};

// Factors are listed in application order: the product is
// factors[m-1] o ... o factors[0].
struct certificate {
  permutation input;
  std::vector<permutation> factors;
  std::vector<std::string> trees;
  std::string method;
  int k = 0;
  std::optional<long long> bound;
  bool verified = false;
  std::vector<trace_entry> trace;
};

inline permutation certificate_product(const std::vector<permutation>& factors, int n) {
  auto acc = permutation::identity(n);
  for (const auto& f : factors) {
    if (f.size() != n) throw error("certificate: factor size differs from input size");
    acc = compose(f, acc);
  }
  return acc;
}

// Fills trees from the factors; a non-separable factor gets an empty tree.
inline void attach_trees(certificate& c) {
  c.trees.clear();
  for (const auto& f : c.factors) {
    auto t = is_separable(f);
    c.trees.push_back(t ? t->str() : std::string());
  }
}

struct verification_report {
  bool product_matches = false;
  bool all_separable = false;
  bool within_bound = false;
  bool pass() const { return product_matches && all_separable && within_bound; }
};

inline verification_report verify_certificate(const certificate& c) {
  verification_report r;
  const int n = c.input.size();
  bool sizes_ok = true;
  for (const auto& f : c.factors) sizes_ok = sizes_ok && f.size() == n;
  r.product_matches = sizes_ok && certificate_product(c.factors, n) == c.input;
  r.all_separable = true;
  for (const auto& f : c.factors)
    if (f.size() > 0 && !is_separable(f)) r.all_separable = false;
  r.within_bound = !c.bound || static_cast<long long>(c.factors.size()) <= *c.bound;
  return r;
}

inline nlohmann::json report_json(const verification_report& r) {
  return {{"product_matches", r.product_matches},
          {"all_separable", r.all_separable},
          {"within_bound", r.within_bound},
          {"pass", r.pass()}};
}

inline nlohmann::json to_json(const certificate& c) {
  nlohmann::json j;
  j["n"] = c.input.size();
  j["input"] = c.input.images();
  j["method"] = c.method;
  j["k"] = c.k;
  j["bound"] = c.bound ? nlohmann::json(*c.bound) : nlohmann::json(nullptr);
  j["verified"] = c.verified;
  j["factors"] = nlohmann::json::array();
  for (const auto& f : c.factors) j["factors"].push_back(f.images());
  j["trees"] = c.trees;
  j["trace"] = nlohmann::json::array();
  for (const auto& t : c.trace) j["trace"].push_back({{"step", t.step}, {"method", t.method}, {"params", t.params}});
  return j;
}

inline certificate certificate_from_json(const nlohmann::json& j) {
  try {
    certificate c;
    c.input = permutation(j.at("input").get<std::vector<int>>());
    if (j.contains("n") && j.at("n").get<int>() != c.input.size()) throw error("certificate: n does not match input");
    for (const auto& f : j.at("factors")) c.factors.push_back(permutation(f.get<std::vector<int>>()));
    if (j.contains("trees")) c.trees = j.at("trees").get<std::vector<std::string>>();
    c.method = j.value("method", std::string("given"));
    c.k = j.value("k", 0);
    if (j.contains("bound") && !j.at("bound").is_null()) c.bound = j.at("bound").get<long long>();
    c.verified = j.value("verified", false);
    if (j.contains("trace"))
      for (const auto& t : j.at("trace"))
        c.trace.push_back({t.value("step", 0), t.value("method", std::string()),
                           t.contains("params") ? t.at("params") : nlohmann::json::object()});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw error(std::string("certificate: malformed JSON: ") + e.what());
  }
}

}  // namespace sepfactor
