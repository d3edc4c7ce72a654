#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "sepfactor/sepfactor.hpp"

using namespace sepfactor;

namespace {

permutation P(std::vector<int> v) { return permutation(v); }

certificate three_factor_certificate() {
  certificate c;
  c.input = P({1, 6, 3, 5, 2, 4});
  c.factors = {P({1, 2, 3, 5, 4, 6}), P({1, 4, 5, 2, 3, 6}), P({1, 2, 5, 6, 3, 4})};
  c.method = "manual";
  c.k = 2;
  c.bound = 3;
  c.verified = true;
  attach_trees(c);
  return c;
}

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Certificate, ThreeFactorExamplePasses) {
  auto r = verify_certificate(three_factor_certificate());
  EXPECT_TRUE(r.product_matches);
  EXPECT_TRUE(r.all_separable);
  EXPECT_TRUE(r.within_bound);
  EXPECT_TRUE(r.pass());
}

TEST(Certificate, NonSeparableFactorFlagged) {
  auto c = three_factor_certificate();
  c.factors[1] = P({3, 1, 4, 2, 5, 6});
  auto r = verify_certificate(c);
  EXPECT_FALSE(r.all_separable);
  EXPECT_FALSE(r.pass());
}

TEST(Certificate, PermutedFactorsBreakProduct) {
  auto c = three_factor_certificate();
  std::swap(c.factors[0], c.factors[1]);
  // 145236 o 123546 differs from 123546 o 145236 at position 2
  EXPECT_NE(compose(c.factors[1], c.factors[0]), compose(c.factors[0], c.factors[1]));
  auto r = verify_certificate(c);
  EXPECT_FALSE(r.product_matches);
  EXPECT_TRUE(r.all_separable);
}

TEST(Certificate, BoundExceededFlagged) {
  auto c = three_factor_certificate();
  c.bound = 2;
  EXPECT_FALSE(verify_certificate(c).within_bound);
  c.bound.reset();
  EXPECT_TRUE(verify_certificate(c).within_bound);
}

TEST(Certificate, SizeMismatchIsProductFailure) {
  auto c = three_factor_certificate();
  c.factors.push_back(permutation::identity(5));
  EXPECT_FALSE(verify_certificate(c).product_matches);
}

TEST(Certificate, JsonRoundTrip) {
  auto c = factor_almost_mixed_free(P({3, 1, 4, 2}), 3);
  auto j = to_json(c);
  for (const char* key : {"n", "input", "method", "k", "bound", "verified", "factors", "trees", "trace"})
    EXPECT_TRUE(j.contains(key)) << key;
  auto back = certificate_from_json(j);
  EXPECT_EQ(back.input, c.input);
  EXPECT_EQ(back.factors, c.factors);
  EXPECT_EQ(back.trees, c.trees);
  EXPECT_EQ(back.bound, c.bound);
  EXPECT_EQ(to_json(back).dump(), j.dump());
}

TEST(Certificate, NullBoundSerializes) {
  auto c = three_factor_certificate();
  c.bound.reset();
  auto j = to_json(c);
  EXPECT_TRUE(j["bound"].is_null());
  EXPECT_FALSE(certificate_from_json(j).bound.has_value());
}

TEST(Certificate, MalformedJsonRejected) {
  EXPECT_THROW(certificate_from_json(nlohmann::json::parse(R"({"input":[1,2]})")), error);
  EXPECT_THROW(certificate_from_json(nlohmann::json::parse(R"({"n":2,"input":[1,1],"factors":[]})")), error);
}

TEST(Certificate, DataFiles) {
  std::string dir = SEPFACTOR_DATA;
  auto good = certificate_from_json(nlohmann::json::parse(read(dir + "/three_factor_certificate.json")));
  EXPECT_TRUE(verify_certificate(good).pass());
  EXPECT_EQ(good.input, P({1, 6, 3, 5, 2, 4}));
  auto bad = certificate_from_json(nlohmann::json::parse(read(dir + "/tampered_certificate.json")));
  EXPECT_FALSE(verify_certificate(bad).pass());
  EXPECT_THROW(nlohmann::json::parse(read(dir + "/truncated_certificate.json")), nlohmann::json::exception);
}

TEST(Certificate, TreesDescribeFactors) {
  auto c = three_factor_certificate();
  ASSERT_EQ(c.trees.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    auto t = is_separable(c.factors[i]);
    ASSERT_TRUE(t);
    EXPECT_EQ(c.trees[i], t->str());
  }
}
