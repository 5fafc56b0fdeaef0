#include "ari/problem_io.hpp"

#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace ari {
namespace {

using nlohmann::json;

const std::string kData = ARI_TEST_DATA;

TEST(ParseProblemTest, WorkedExampleFile) {
  const ProblemFile f = load_problem(kData + "/worked.json");
  EXPECT_EQ(f.problem.n(), 3);
  EXPECT_EQ(f.problem.m(), 1);
  EXPECT_EQ(f.problem.a(2, 2), -4.0);
  ASSERT_TRUE(f.k0);
  EXPECT_EQ(max_norm(f.k0->mat()), 0.0);
}

TEST(ParseProblemTest, DefaultsQAndTolerances) {
  const ProblemFile f = parse_problem(
      json::parse(R"({"A": [[1]], "B": [[2, 3]]})"), "inline");
  EXPECT_EQ(f.problem.q.order(), 1);
  EXPECT_EQ(f.problem.q(0, 0), 0.0);
  EXPECT_FALSE(f.k0);
  EXPECT_EQ(f.tol.axis, Tolerances{}.axis);
  EXPECT_EQ(f.problem.m(), 2);
}

TEST(ParseProblemTest, ToleranceOverrides) {
  const ProblemFile f = parse_problem(
      json::parse(R"({"A": [[1]], "B": [[1]],
                      "tolerances": {"axisTol": 1e-6, "rankTol": 1e-9,
                                     "defTol": 1e-7, "baseTol": 1e-5}})"),
      "inline");
  EXPECT_EQ(f.tol.axis, 1e-6);
  EXPECT_EQ(f.tol.rank, 1e-9);
  EXPECT_EQ(f.tol.definiteness, 1e-7);
  EXPECT_EQ(f.tol.base, 1e-5);
}

TEST(ParseProblemTest, ErrorsNameTheLocation) {
  auto message = [](const std::string& text) -> std::string {
    try {
      parse_problem(json::parse(text), "f");
    } catch (const ParseError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message(R"({"B": [[1]]})").find("\"A\""), std::string::npos);
  EXPECT_NE(message(R"({"A": [[1, 2], [3]], "B": [[1], [1]]})").find("f.A[1]"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1, "x"], [0, 1]], "B": [[1], [1]]})")
                .find("f.A[0][1]"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1, 0], [0, 1]], "B": [[1]]})").find("f.B"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": 1})").find("\"C\""),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "tolerances": {"axisTol": -1}})")
                .find("axisTol"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1, 0], [0, 1]], "B": [[1], [1]], "Q": [[0, 1], [0, 0]]})")
                .find("f.Q"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1, 0]], "B": [[1]]})").find("square"),
            std::string::npos);
}

TEST(ParseProblemTest, MalformedFileReportsByte) {
  try {
    load_problem(kData + "/malformed.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
  EXPECT_THROW(load_problem(kData + "/does_not_exist.json"), ParseError);
}

TEST(LoadMatrixFileTest, ReadsKeyedMatrix) {
  const Mat p = load_matrix_file(kData + "/p_identity.json", "P");
  EXPECT_EQ(max_norm(p - Mat::Identity(2, 2)), 0.0);
  EXPECT_THROW(load_matrix_file(kData + "/p_identity.json", "K"), ParseError);
}

TEST(ToJsonTest, MatricesRoundTripExactly) {
  std::mt19937_64 rng(7);
  const Mat m = testing::random_normal(rng, 4, 3);
  const json j = json::parse(to_json(m).dump());
  EXPECT_EQ(max_norm(matrix_from_json(j, "m") - m), 0.0);
  const json z = to_json(Complex(1.5, -2.0));
  EXPECT_EQ(z[0].get<double>(), 1.5);
  EXPECT_EQ(z[1].get<double>(), -2.0);
}

TEST(ToJsonTest, TwelveSignificantDigits) {
  const json j = to_json(Mat::Constant(1, 1, 1.0 / 3.0));
  const std::string text = j.dump();
  // At least "0.333333333333".
  EXPECT_NE(text.find("0.333333333333"), std::string::npos);
}

TEST(InputDigestTest, StableAndSensitive) {
  const ProblemFile a = load_problem(kData + "/worked.json");
  const ProblemFile b = load_problem(kData + "/worked.json");
  EXPECT_EQ(input_digest(a), input_digest(b));
  EXPECT_EQ(input_digest(a).size(), 16u);
  const ProblemFile c = load_problem(kData + "/all_rhp.json");
  EXPECT_NE(input_digest(a), input_digest(c));
}

}  // namespace
}  // namespace ari
