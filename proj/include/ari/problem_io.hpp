#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ari/linalg.hpp"
#include "ari/riccati.hpp"

namespace ari {

// Malformed input file; the message names the file and the offending key or
// byte offset.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemFile {
  RiccatiProblem problem;
  std::optional<SymMat> k0;
  Tolerances tol;
};

// Row-major nested list -> matrix. `where` prefixes error messages.
Mat matrix_from_json(const nlohmann::json& j, const std::string& where);

ProblemFile parse_problem(const nlohmann::json& j, const std::string& where);
ProblemFile load_problem(const std::filesystem::path& path);

// Reads the matrix stored under `key` ("P" or "K") in a JSON object file.
Mat load_matrix_file(const std::filesystem::path& path, const std::string& key);

nlohmann::json parse_json_file(const std::filesystem::path& path);

nlohmann::json to_json(const Mat& m);
nlohmann::json to_json(Complex z);  // [re, im]
nlohmann::json to_json(const std::vector<Complex>& zs);
nlohmann::json to_json(const Tolerances& tol);

// Hex digest of the numeric content, for report headers.
std::string input_digest(const ProblemFile& f);

}  // namespace ari
