// Command-line front end for the Riccati inequality analyses.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ari/analysis.hpp"
#include "ari/linalg.hpp"
#include "ari/problem_io.hpp"
#include "ari/riccati.hpp"
#include "ari/system_analysis.hpp"

namespace {

using ari::Complex;
using ari::Index;
using ari::Mat;
using ari::SymMat;
using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kVerifyFail = 1,
  kParse = 2,
  kNumerical = 3,
  kNoBase = 4,
  kPrecondition = 5,
};

struct Options {
  bool json_out = false;
  std::optional<double> tol_axis, tol_rank, tol_def;
  std::string kind;
  std::string file;
  // solve
  std::string rank_set;
  bool family = false;
  // parametrize
  std::string blocks;
  std::string param;
  int sample = 0;
  std::uint64_t seed = 0;
  // verify
  std::string k_file;
  bool strict = false;
};

// Error raised for flag values that are well-formed but unusable.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  ari::ProblemFile file;
  ari::HomogeneousForm h;
  ari::SpectralSplit split;
};

ari::BaseKind pick_kind(const Options& opt, const ari::ProblemFile& f) {
  if (opt.kind.empty()) {
    return f.k0 ? ari::BaseKind::kGiven : ari::BaseKind::kAntistabilizing;
  }
  if (opt.kind == "stabilizing") return ari::BaseKind::kStabilizing;
  if (opt.kind == "antistabilizing") return ari::BaseKind::kAntistabilizing;
  if (!f.k0) {
    throw PreconditionError("--kind given needs a K0 entry in the problem file");
  }
  return ari::BaseKind::kGiven;
}

Context load(const Options& opt) {
  ari::ProblemFile f = ari::load_problem(opt.file);
  if (opt.tol_axis) f.tol.axis = *opt.tol_axis;
  if (opt.tol_rank) f.tol.rank = *opt.tol_rank;
  if (opt.tol_def) f.tol.definiteness = *opt.tol_def;
  const ari::BaseKind kind = pick_kind(opt, f);
  ari::HomogeneousForm h = ari::solve_base_are(f.problem, kind, f.k0, f.tol);
  ari::SpectralSplit split = ari::spectral_split(h.a0, h.b(), f.tol);
  return Context{std::move(f), std::move(h), std::move(split)};
}

// "1,3" -> {0, 2}, validated against the block count.
std::vector<std::size_t> parse_blocks(const std::string& text,
                                      std::size_t count) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw PreconditionError("block list \"" + text +
                              "\" must be comma-separated integers");
    }
    if (value < 1 || static_cast<std::size_t>(value) > count) {
      throw PreconditionError("block " + std::to_string(value) +
                              " out of range 1.." + std::to_string(count));
    }
    out.push_back(static_cast<std::size_t>(value - 1));
  }
  if (out.empty()) throw PreconditionError("block list is empty");
  return out;
}

json one_based(const std::vector<std::size_t>& ids) {
  json out = json::array();
  for (std::size_t id : ids) out.push_back(id + 1);
  return out;
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::string fmt(Complex z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") +
         fmt(std::abs(z.imag())) + "i";
}

void print_matrix(std::ostream& os, const std::string& name, const Mat& m) {
  os << name << " =\n";
  for (Index r = 0; r < m.rows(); ++r) {
    os << "  ";
    for (Index c = 0; c < m.cols(); ++c) {
      os << std::setw(14) << fmt(m(r, c), 8);
    }
    os << "\n";
  }
}

json header(const std::string& command, const Context& ctx) {
  return json{
      {"command", command},
      {"input",
       {{"digest", ari::input_digest(ctx.file)},
        {"n", ctx.h.n()},
        {"m", ctx.h.problem.m()}}},
      {"base",
       {{"kind", std::string(ari::to_string(ctx.h.kind))},
        {"K0", ari::to_json(ctx.h.k0.mat())},
        {"residual", ctx.h.base_residual}}},
      {"tolerances", ari::to_json(ctx.file.tol)},
  };
}

void print_header(std::ostream& os, const std::string& command,
                  const Context& ctx) {
  os << command << ": n = " << ctx.h.n() << ", m = " << ctx.h.problem.m()
     << ", base " << ari::to_string(ctx.h.kind)
     << " (ARE residual " << fmt(ctx.h.base_residual) << ")\n";
}

json solution_json(const Context& ctx, const ari::AriSolution& s) {
  return json{
      {"blocks", one_based(s.block_set)},
      {"rank", s.rank},
      {"X", ari::to_json(s.x.mat())},
      {"K", ari::to_json((ctx.h.k0 + s.x).mat())},
      {"residual_max_abs", ari::max_norm(s.residual.mat())},
      {"residual_class", std::string(ari::to_string(s.residual_verdict.cls))},
  };
}

void print_solution(std::ostream& os, const ari::AriSolution& s) {
  os << "blocks {";
  for (std::size_t i = 0; i < s.block_set.size(); ++i) {
    os << (i ? "," : "") << s.block_set[i] + 1;
  }
  os << "}  rank " << s.rank << "  |Ric(X)|max "
     << fmt(ari::max_norm(s.residual.mat())) << "\n";
  print_matrix(os, "X", s.x.mat());
}

json certificate_json(const ari::Certificate& c) {
  return json{{"pass", c.pass},
              {"strict", c.strict},
              {"residual_max_eig", c.residual_max_eig},
              {"residual_min_eig", c.residual_min_eig},
              {"tol_used", c.tol_used},
              {"route_discrepancy", c.route_discrepancy}};
}

std::string certificate_line(const ari::Certificate& c) {
  return std::string(c.pass ? "PASS" : "FAIL") +
         (c.strict ? " (strict)" : " (non-strict)") + "  max eig " +
         fmt(c.residual_max_eig) + ", min eig " + fmt(c.residual_min_eig) +
         ", tol " + fmt(c.tol_used);
}

int cmd_classify(const Options& opt, std::ostream& os) {
  const Context ctx = load(opt);
  const auto& tol = ctx.file.tol;
  const auto degenerate = ari::degenerate_classify(ctx.h, ctx.split, tol);
  const auto bounds = ari::boundedness(ctx.h, ctx.split, tol);
  const Index kalman = ari::kalman_rank(ctx.h.a0, ctx.h.b(), tol);

  json blocks = json::array();
  for (std::size_t k = 0; k < ctx.split.blocks.size(); ++k) {
    const auto& b = ctx.split.blocks[k];
    json entry{{"index", k + 1},
               {"size", b.size},
               {"eigenvalues", ari::to_json(b.eigenvalues())},
               {"half_plane", std::string(ari::to_string(b.half_plane))},
               {"controllable", b.controllable},
               {"pbh_margin", b.pbh_margin}};
    for (const auto& d : degenerate) {
      if (d.block == k) {
        entry["degenerate"] = std::string(ari::to_string(d.outcome));
      }
    }
    blocks.push_back(std::move(entry));
  }

  if (opt.json_out) {
    json out = header("classify", ctx);
    out["results"] = {{"blocks", blocks},
                      {"kalman_rank", kalman},
                      {"boundedness",
                       std::string(ari::to_string(bounds.verdict))}};
    os << out.dump(2) << "\n";
    return kOk;
  }
  print_header(os, "classify", ctx);
  os << "Kalman rank of (A0, B): " << kalman << " / " << ctx.h.n() << "\n";
  os << std::left << std::setw(7) << "block" << std::setw(28) << "eigenvalue"
     << std::setw(8) << "class" << std::setw(14) << "controllable"
     << "PBH margin\n";
  for (std::size_t k = 0; k < ctx.split.blocks.size(); ++k) {
    const auto& b = ctx.split.blocks[k];
    std::string ev = fmt(b.lambda);
    if (b.size == 2) ev = fmt(b.lambda.real()) + " +- " + fmt(b.lambda.imag()) + "i";
    os << std::setw(7) << k + 1 << std::setw(28) << ev << std::setw(8)
       << ari::to_string(b.half_plane) << std::setw(14)
       << (b.controllable ? "yes" : "no") << fmt(b.pbh_margin) << "\n";
  }
  for (const auto& d : degenerate) {
    os << "block " << d.block + 1 << " on the imaginary axis: "
       << ari::to_string(d.outcome) << "\n";
  }
  os << "solution set: " << ari::to_string(bounds.verdict) << "\n";
  return kOk;
}

int cmd_solve(const Options& opt, std::ostream& os) {
  const Context ctx = load(opt);
  const auto& tol = ctx.file.tol;
  std::vector<ari::FamilyMember> members;
  if (!opt.rank_set.empty()) {
    ari::FamilyMember m;
    m.block_set = parse_blocks(opt.rank_set, ctx.split.blocks.size());
    m.route_gap = std::nan("");
    for (std::size_t id : m.block_set) {
      if (ctx.split.blocks[id].half_plane == ari::HalfPlane::kAxis) {
        throw PreconditionError("block " + std::to_string(id + 1) +
                                " lies on the imaginary axis and supports no "
                                "nonzero solution");
      }
    }
    try {
      const auto eqn = ari::reduce(ctx.h, ctx.split, m.block_set, tol);
      m.solution = ari::full_rank_simplified_solution(ctx.h, eqn, tol);
      m.block_set = m.solution->block_set;
    } catch (const ari::Error& e) {
      if (e.kind() == ari::ErrorKind::kInvalidInput) throw;
      m.absent_reason = std::string(ari::to_string(e.kind())) + ": " + e.what();
    }
    members.push_back(std::move(m));
  } else {
    members = ari::schur_family(ctx.h, ctx.split, tol);
  }

  if (opt.json_out) {
    json list = json::array();
    for (const auto& m : members) {
      if (m.solution) {
        json s = solution_json(ctx, *m.solution);
        s["route_gap"] = m.route_gap;
        list.push_back(std::move(s));
      } else {
        list.push_back(json{{"blocks", one_based(m.block_set)},
                            {"absent", m.absent_reason}});
      }
    }
    json out = header("solve", ctx);
    out["results"] = {{"solutions", list}};
    os << out.dump(2) << "\n";
    return kOk;
  }
  print_header(os, "solve", ctx);
  for (const auto& m : members) {
    if (m.solution) {
      print_solution(os, *m.solution);
    } else {
      os << "blocks {";
      for (std::size_t i = 0; i < m.block_set.size(); ++i) {
        os << (i ? "," : "") << m.block_set[i] + 1;
      }
      os << "}  absent: " << m.absent_reason << "\n";
    }
  }
  return kOk;
}

int cmd_extremal(const Options& opt, std::ostream& os) {
  const Context ctx = load(opt);
  ari::ExtremalPair pair;
  try {
    pair = ari::extremal_solutions(ctx.h, ctx.split, ctx.file.tol);
  } catch (const ari::Error& e) {
    if (e.kind() == ari::ErrorKind::kUncontrollable) {
      throw PreconditionError(std::string(e.what()) +
                              "; run the bounds command for witness rays");
    }
    throw;
  }
  if (opt.json_out) {
    json out = header("extremal", ctx);
    out["results"] = {{"Lr", solution_json(ctx, pair.lr)},
                      {"Ll", solution_json(ctx, pair.ll)},
                      {"Kmax", ari::to_json(pair.kmax.mat())},
                      {"Kmin", ari::to_json(pair.kmin.mat())}};
    os << out.dump(2) << "\n";
    return kOk;
  }
  print_header(os, "extremal", ctx);
  os << "maximum (RHP support): ";
  print_solution(os, pair.lr);
  os << "minimum (LHP support): ";
  print_solution(os, pair.ll);
  print_matrix(os, "Kmax", pair.kmax.mat());
  print_matrix(os, "Kmin", pair.kmin.mat());
  return kOk;
}

int cmd_bounds(const Options& opt, std::ostream& os) {
  const Context ctx = load(opt);
  const auto& tol = ctx.file.tol;
  const auto report = ari::boundedness(ctx.h, ctx.split, tol);
  const std::vector<double> alphas{1.0, 10.0, 100.0, 1000.0};

  json rays = json::array();
  for (const auto& w : report.witnesses) {
    json sweep = json::array();
    for (const auto& s : ari::sweep_ray(ctx.h, w, alphas, tol)) {
      sweep.push_back(json{{"alpha", s.alpha},
                           {"max_eig", s.max_eig},
                           {"tol", s.tol_used},
                           {"feasible", s.feasible}});
    }
    rays.push_back(json{{"block", w.block + 1},
                        {"sign", std::string(ari::to_string(w.sign))},
                        {"X_w", ari::to_json(w.x_w.mat())},
                        {"sweep", sweep}});
  }
  if (opt.json_out) {
    json out = header("bounds", ctx);
    out["results"] = {{"verdict", std::string(ari::to_string(report.verdict))},
                      {"witnesses", rays}};
    os << out.dump(2) << "\n";
    return kOk;
  }
  print_header(os, "bounds", ctx);
  os << "verdict: " << ari::to_string(report.verdict) << "\n";
  for (const auto& r : rays) {
    os << "ray on block " << r["block"].get<int>() << ", sign "
       << r["sign"].get<std::string>() << "\n";
    print_matrix(os, "X_w", ari::matrix_from_json(r["X_w"], "X_w"));
    os << "  " << std::setw(12) << "alpha" << std::setw(16) << "max eig"
       << std::setw(16) << "tol" << "  feasible\n";
    for (const auto& s : r["sweep"]) {
      os << "  " << std::setw(12) << fmt(s["alpha"].get<double>())
         << std::setw(16) << fmt(s["max_eig"].get<double>()) << std::setw(16)
         << fmt(s["tol"].get<double>()) << "  "
         << (s["feasible"].get<bool>() ? "yes" : "no") << "\n";
    }
  }
  return kOk;
}

// Seeded positive definite k x k matrix: G G^T / k + 0.1 I.
SymMat sample_pd(std::mt19937_64& rng, Index k) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat g(k, k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < k; ++i) g(i, j) = normal(rng);
  }
  return SymMat::symmetrized(g * g.transpose() / static_cast<double>(k) +
                             0.1 * Mat::Identity(k, k));
}

int cmd_parametrize(const Options& opt, std::ostream& os) {
  const Context ctx = load(opt);
  const auto& tol = ctx.file.tol;
  if (opt.blocks.empty()) throw PreconditionError("--blocks is required");
  if (opt.param.empty() == (opt.sample <= 0)) {
    throw PreconditionError("give exactly one of --param or --sample");
  }
  const auto ids = parse_blocks(opt.blocks, ctx.split.blocks.size());
  for (std::size_t id : ids) {
    if (ctx.split.blocks[id].half_plane != ari::HalfPlane::kRHP) {
      throw ari::Error(ari::ErrorKind::kNotRHPSelection,
                       "block " + std::to_string(id + 1) +
                           " is not in the open right half-plane");
    }
  }
  const auto eqn = ari::reduce(ctx.h, ctx.split, ids, tol);

  std::vector<SymMat> params;
  if (!opt.param.empty()) {
    const Mat p = ari::load_matrix_file(opt.param, "P");
    if (p.rows() != eqn.k() || p.cols() != eqn.k()) {
      throw PreconditionError("P must be " + std::to_string(eqn.k()) + "x" +
                              std::to_string(eqn.k()) + " for these blocks");
    }
    try {
      params.push_back(SymMat(p, tol.symmetry));
    } catch (const ari::Error& e) {
      throw ari::ParseError(opt.param + ".P: " + e.what());
    }
  } else {
    std::mt19937_64 rng(opt.seed);
    for (int i = 0; i < opt.sample; ++i) params.push_back(sample_pd(rng, eqn.k()));
  }

  json list = json::array();
  std::ostringstream human;
  for (const SymMat& p : params) {
    ari::ParamPoint point;
    try {
      point = ari::make_param_point(p, eqn.block_set, tol);
    } catch (const ari::Error& e) {
      throw PreconditionError(e.what());
    }
    const auto sol = ari::parametrize(ctx.h, eqn, point, tol);
    const auto cert = ari::verify(ctx.h, ctx.h.k0 + sol.solution.x, false, tol);
    json s = solution_json(ctx, sol.solution);
    s["P"] = ari::to_json(p.mat());
    s["P_class"] = std::string(ari::to_string(point.verdict.cls));
    s["Lhat"] = ari::to_json(sol.solution.lcoord.mat());
    s["strict_parameter"] = sol.strict_parameter;
    s["reduced_certificate"] = certificate_json(sol.certificate);
    s["certificate"] = certificate_json(cert);
    list.push_back(std::move(s));

    print_matrix(human, "P", p.mat());
    print_matrix(human, "Lhat", sol.solution.lcoord.mat());
    human << "P is " << ari::to_string(point.verdict.cls) << "\n"
          << "ARI at K:            " << certificate_line(cert) << "\n"
          << "reduced, strict:     " << certificate_line(sol.certificate)
          << "\n";
  }
  if (opt.json_out) {
    json out = header("parametrize", ctx);
    out["results"] = {{"blocks", one_based(eqn.block_set)},
                      {"seed", opt.seed},
                      {"solutions", list}};
    os << out.dump(2) << "\n";
    return kOk;
  }
  print_header(os, "parametrize", ctx);
  os << human.str();
  return kOk;
}

int cmd_verify(const Options& opt, std::ostream& os) {
  const Context ctx = load(opt);
  const Mat kraw = ari::load_matrix_file(opt.k_file, "K");
  if (kraw.rows() != ctx.h.n() || kraw.cols() != ctx.h.n()) {
    throw ari::ParseError(opt.k_file + ".K: expected " +
                          std::to_string(ctx.h.n()) + "x" +
                          std::to_string(ctx.h.n()));
  }
  SymMat k;
  try {
    k = SymMat(kraw, ctx.file.tol.symmetry);
  } catch (const ari::Error& e) {
    throw ari::ParseError(opt.k_file + ".K: " + e.what());
  }
  const auto cert = ari::verify(ctx.h, k, opt.strict, ctx.file.tol);
  if (opt.json_out) {
    json out = header("verify", ctx);
    out["results"] = {{"certificate", certificate_json(cert)}};
    os << out.dump(2) << "\n";
  } else {
    print_header(os, "verify", ctx);
    os << certificate_line(cert) << "\n";
  }
  return cert.pass ? kOk : kVerifyFail;
}

int exit_code_for(ari::ErrorKind kind) {
  switch (kind) {
    case ari::ErrorKind::kNoBaseSolution:
    case ari::ErrorKind::kBaseResidualTooLarge:
      return kNoBase;
    case ari::ErrorKind::kInvalidInput:
    case ari::ErrorKind::kUncontrollable:
    case ari::ErrorKind::kNotRHPSelection:
      return kPrecondition;
    default:
      return kNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solution sets of the algebraic Riccati inequality "
               "-A'K - KA - Q + KBB'K <= 0"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&opt](CLI::App* sub) {
    sub->add_option("file", opt.file, "problem file (JSON)")->required();
    sub->add_flag("--json", opt.json_out, "machine-readable output");
    sub->add_option("--tol-axis", opt.tol_axis, "imaginary-axis tolerance");
    sub->add_option("--tol-rank", opt.tol_rank, "rank tolerance");
    sub->add_option("--tol-def", opt.tol_def, "definiteness tolerance");
    sub->add_option("--kind", opt.kind, "base ARE solution")
        ->check(CLI::IsMember({"stabilizing", "antistabilizing", "given"}));
  };

  auto* classify = app.add_subcommand("classify", "spectral split and controllability");
  common(classify);
  auto* solve = app.add_subcommand("solve", "ARE solutions on block subsets");
  common(solve);
  auto* rank_set = solve->add_option("--rank-set", opt.rank_set,
                                     "comma-separated 1-based block indices");
  solve->add_flag("--family", opt.family, "all subsets (default)")
      ->excludes(rank_set);
  auto* extremal = app.add_subcommand("extremal", "maximum and minimum solutions");
  common(extremal);
  auto* bounds = app.add_subcommand("bounds", "boundedness verdict and witness rays");
  common(bounds);
  auto* parametrize =
      app.add_subcommand("parametrize", "solutions from positive semidefinite P");
  common(parametrize);
  parametrize->add_option("--blocks", opt.blocks, "1-based RHP block indices");
  auto* param = parametrize->add_option("--param", opt.param, "file with key \"P\"");
  parametrize->add_option("--sample", opt.sample, "number of random P")
      ->excludes(param)
      ->check(CLI::PositiveNumber);
  parametrize->add_option("--seed", opt.seed, "random seed for --sample");
  auto* verify = app.add_subcommand("verify", "certificate for a candidate K");
  common(verify);
  verify->add_option("--K", opt.k_file, "file with key \"K\"")->required();
  verify->add_flag("--strict", opt.strict, "require a negative definite residual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*classify) return cmd_classify(opt, std::cout);
    if (*solve) return cmd_solve(opt, std::cout);
    if (*extremal) return cmd_extremal(opt, std::cout);
    if (*bounds) return cmd_bounds(opt, std::cout);
    if (*parametrize) return cmd_parametrize(opt, std::cout);
    if (*verify) return cmd_verify(opt, std::cout);
  } catch (const ari::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const ari::Error& e) {
    std::cerr << ari::to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
