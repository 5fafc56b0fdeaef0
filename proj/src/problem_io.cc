#include "ari/problem_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ari {

using nlohmann::json;

Mat matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(where + ": expected a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    const std::string at = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty()) {
      throw ParseError(at + ": expected a non-empty row array");
    }
    if (r == 0) cols = row.size();
    if (row.size() != cols) {
      throw ParseError(at + ": row has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(cols));
    }
  }
  Mat m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const json& v = j[r][c];
      if (!v.is_number()) {
        throw ParseError(where + "[" + std::to_string(r) + "][" +
                         std::to_string(c) + "]: expected a number");
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) = v.get<double>();
    }
  }
  return m;
}

namespace {

double read_tol(const json& t, const char* key, double fallback,
                const std::string& where) {
  if (!t.contains(key)) return fallback;
  const json& v = t[key];
  if (!v.is_number() || v.get<double>() <= 0.0) {
    throw ParseError(where + ".tolerances." + key +
                     ": expected a positive number");
  }
  return v.get<double>();
}

SymMat symmetric_from(const Mat& m, const std::string& where, double tol) {
  if (m.rows() != m.cols()) {
    throw ParseError(where + ": expected a square matrix");
  }
  try {
    return SymMat(m, tol);
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace

ProblemFile parse_problem(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "A" && key != "B" && key != "Q" && key != "K0" &&
        key != "tolerances") {
      throw ParseError(where + ": unknown key \"" + key + "\"");
    }
  }
  if (!j.contains("A")) throw ParseError(where + ": missing key \"A\"");
  if (!j.contains("B")) throw ParseError(where + ": missing key \"B\"");

  Tolerances tol;
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) {
      throw ParseError(where + ".tolerances: expected an object");
    }
    for (const auto& [key, _] : t.items()) {
      if (key != "axisTol" && key != "rankTol" && key != "defTol" &&
          key != "baseTol") {
        throw ParseError(where + ".tolerances: unknown key \"" + key + "\"");
      }
    }
    tol.axis = read_tol(t, "axisTol", tol.axis, where);
    tol.rank = read_tol(t, "rankTol", tol.rank, where);
    tol.definiteness = read_tol(t, "defTol", tol.definiteness, where);
    tol.base = read_tol(t, "baseTol", tol.base, where);
  }

  const Mat a = matrix_from_json(j["A"], where + ".A");
  const Mat b = matrix_from_json(j["B"], where + ".B");
  const Index n = a.rows();
  if (a.cols() != n) throw ParseError(where + ".A: expected a square matrix");
  if (b.rows() != n) {
    throw ParseError(where + ".B: expected " + std::to_string(n) + " rows");
  }
  SymMat q = SymMat::zero(n);
  if (j.contains("Q")) {
    q = symmetric_from(matrix_from_json(j["Q"], where + ".Q"), where + ".Q",
                       tol.symmetry);
    if (q.order() != n) {
      throw ParseError(where + ".Q: expected " + std::to_string(n) + "x" +
                       std::to_string(n));
    }
  }
  std::optional<SymMat> k0;
  if (j.contains("K0")) {
    k0 = symmetric_from(matrix_from_json(j["K0"], where + ".K0"),
                        where + ".K0", tol.symmetry);
    if (k0->order() != n) {
      throw ParseError(where + ".K0: expected " + std::to_string(n) + "x" +
                       std::to_string(n));
    }
  }
  return ProblemFile{RiccatiProblem(a, b, q), std::move(k0), tol};
}

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
}

ProblemFile load_problem(const std::filesystem::path& path) {
  return parse_problem(parse_json_file(path), path.string());
}

Mat load_matrix_file(const std::filesystem::path& path, const std::string& key) {
  const json j = parse_json_file(path);
  const std::string where = path.string();
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(where + ": missing key \"" + key + "\"");
  }
  return matrix_from_json(j[key], where + "." + key);
}

json to_json(const Mat& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const std::vector<Complex>& zs) {
  json out = json::array();
  for (Complex z : zs) out.push_back(to_json(z));
  return out;
}

json to_json(const Tolerances& tol) {
  return json{{"axisTol", tol.axis},
              {"rankTol", tol.rank},
              {"defTol", tol.definiteness},
              {"baseTol", tol.base},
              {"symTol", tol.symmetry},
              {"sepTol", tol.separation},
              {"subspaceTol", tol.subspace}};
}

std::string input_digest(const ProblemFile& f) {
  // 64-bit FNV-1a over the raw doubles.
  std::uint64_t hash = 1469598103934665603ULL;
  auto feed = [&hash](const Mat& m) {
    const std::int64_t dims[2] = {m.rows(), m.cols()};
    auto bytes = [&hash](const void* p, std::size_t n) {
      const auto* c = static_cast<const unsigned char*>(p);
      for (std::size_t i = 0; i < n; ++i) {
        hash ^= c[i];
        hash *= 1099511628211ULL;
      }
    };
    bytes(dims, sizeof dims);
    bytes(m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
  };
  feed(f.problem.a);
  feed(f.problem.b);
  feed(f.problem.q.mat());
  if (f.k0) feed(f.k0->mat());
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << hash;
  return os.str();
}

}  // namespace ari
