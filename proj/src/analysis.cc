#include "ari/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ari {

std::string_view to_string(RankOneVerdict v) {
  return v == RankOneVerdict::kSemidefiniteRankAtMostOne
             ? "semidefinite-rank<=1"
             : "indefinite";
}

std::string_view to_string(BoundednessVerdict v) {
  switch (v) {
    case BoundednessVerdict::kBounded: return "bounded";
    case BoundednessVerdict::kBoundedBelowOnly: return "bounded-below-only";
    case BoundednessVerdict::kBoundedAboveOnly: return "bounded-above-only";
    case BoundednessVerdict::kUnboundedBoth: return "unbounded-both";
  }
  return "?";
}

std::string_view to_string(RaySign s) {
  switch (s) {
    case RaySign::kPlus: return "+";
    case RaySign::kMinus: return "-";
    case RaySign::kBoth: return "+-";
  }
  return "?";
}

RankOneVerdict rank_one_classify(const HomogeneousForm& h, const Vec& v,
                                 double alpha, const Tolerances& tol) {
  if (v.size() != h.n() || !v.allFinite()) {
    throw Error(ErrorKind::kInvalidInput, "v has the wrong size");
  }
  if (std::abs(v.norm() - 1.0) > 1e-8) {
    throw Error(ErrorKind::kInvalidInput,
                "v must have unit norm (|v| = " + std::to_string(v.norm()) + ")");
  }
  if (alpha == 0.0) return RankOneVerdict::kSemidefiniteRankAtMostOne;
  const Vec w = h.a0.transpose() * v;
  const double mu = v.dot(w);
  const double gap = (w - mu * v).norm();
  return gap <= tol.axis * std::max(1.0, max_norm(h.a0))
             ? RankOneVerdict::kSemidefiniteRankAtMostOne
             : RankOneVerdict::kIndefinite;
}

namespace {

AriSolution solve_on(const HomogeneousForm& h, const SpectralSplit& split,
                     const std::vector<std::size_t>& blocks,
                     const Tolerances& tol) {
  if (blocks.empty()) return zero_solution(h, tol);
  return full_rank_simplified_solution(h, reduce(h, split, blocks, tol), tol);
}

}  // namespace

ExtremalPair extremal_solutions(const HomogeneousForm& h,
                                const SpectralSplit& split,
                                const Tolerances& tol) {
  for (std::size_t k = 0; k < split.blocks.size(); ++k) {
    if (!split.blocks[k].controllable) {
      throw Error(ErrorKind::kUncontrollable,
                  "block " + std::to_string(k + 1) +
                      " is uncontrollable; the solution set is unbounded");
    }
  }
  AriSolution lr = solve_on(h, split, split.blocks_in(HalfPlane::kRHP), tol);
  AriSolution ll = solve_on(h, split, split.blocks_in(HalfPlane::kLHP), tol);
  SymMat kmax = h.k0 + lr.x;
  SymMat kmin = h.k0 + ll.x;
  return ExtremalPair{std::move(lr), std::move(ll), std::move(kmax),
                      std::move(kmin)};
}

BoundednessReport boundedness(const HomogeneousForm& h,
                              const SpectralSplit& split,
                              const Tolerances& tol) {
  bool rhp = false, lhp = false, axis = false;
  BoundednessReport report{BoundednessVerdict::kBounded, {}};

  for (const DegenerateCase& c : degenerate_classify(h, split, tol)) {
    if (c.outcome != DegenerateOutcome::kFreeFamily) continue;
    report.witnesses.push_back(WitnessRay{c.block, *c.generator, RaySign::kBoth});
  }

  for (std::size_t k = 0; k < split.blocks.size(); ++k) {
    const SpectralBlock& blk = split.blocks[k];
    if (blk.controllable) continue;
    switch (blk.half_plane) {
      case HalfPlane::kAxis: axis = true; continue;
      case HalfPlane::kRHP: rhp = true; break;
      case HalfPlane::kLHP: lhp = true; break;
    }
    const Mat l = uncontrollable_subspace(split, h.b(), k, tol);
    if (l.cols() == 0) continue;
    const Mat d = l.transpose() * h.a0.transpose() * l;
    const Index r = l.cols();
    // D G + G D^T = +I (RHP) or -I (LHP); then Ric(a L G L^T) = -+a L L^T.
    const bool right = blk.half_plane == HalfPlane::kRHP;
    const Mat f = right ? Mat(-d.transpose()) : Mat(d.transpose());
    const SymMat g = solve_lyapunov_stable(f, SymMat::identity(r), tol);
    Mat xw = l * g.mat() * l.transpose();
    xw /= xw.norm();
    report.witnesses.push_back(WitnessRay{
        k, SymMat::symmetrized(xw), right ? RaySign::kPlus : RaySign::kMinus});
  }
  std::sort(report.witnesses.begin(), report.witnesses.end(),
            [](const WitnessRay& x, const WitnessRay& y) {
              return x.block < y.block;
            });

  if (axis || (rhp && lhp)) {
    report.verdict = BoundednessVerdict::kUnboundedBoth;
  } else if (rhp) {
    report.verdict = BoundednessVerdict::kBoundedBelowOnly;
  } else if (lhp) {
    report.verdict = BoundednessVerdict::kBoundedAboveOnly;
  }
  return report;
}

std::vector<RaySample> sweep_ray(const HomogeneousForm& h,
                                 const WitnessRay& ray,
                                 const std::vector<double>& alphas,
                                 const Tolerances& tol) {
  std::vector<double> signs;
  if (ray.sign != RaySign::kMinus) signs.push_back(1.0);
  if (ray.sign != RaySign::kPlus) signs.push_back(-1.0);
  std::vector<RaySample> out;
  for (double s : signs) {
    for (double a : alphas) {
      const double alpha = s * std::abs(a);
      const SymMat x = ray.x_w * alpha;
      const SymMat r = ric_residual(h, x);
      const double t = tol.definiteness * residual_scale(h, x);
      const double top = sym_eig(r).values.maxCoeff();
      out.push_back(RaySample{alpha, top, t, top <= t});
    }
  }
  return out;
}

ParamPoint make_param_point(const SymMat& p, std::vector<std::size_t> block_set,
                            const Tolerances& tol) {
  require_finite(p.mat(), "P");
  DefinitenessVerdict v = definiteness(p, tol.definiteness);
  if (!v.is_psd()) {
    throw Error(ErrorKind::kInvalidInput,
                "parameter P is not positive semidefinite (min eigenvalue " +
                    std::to_string(v.min_eig) + ")");
  }
  return ParamPoint{p, std::move(block_set), v};
}

Certificate certify_residual(const SymMat& residual, double scale, bool strict,
                             const Tolerances& tol) {
  Certificate c;
  if (residual.order() == 0) {
    c.tol_used = tol.definiteness * std::max(1.0, scale);
    c.strict = strict;
    c.pass = !strict;
    c.route_discrepancy = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  const Vec ev = sym_eig(residual).values;
  c.residual_min_eig = ev(0);
  c.residual_max_eig = ev(ev.size() - 1);
  c.tol_used = tol.definiteness * std::max(1.0, scale);
  c.strict = strict;
  c.pass = strict ? c.residual_max_eig < -c.tol_used
                  : c.residual_max_eig <= c.tol_used;
  c.route_discrepancy = std::numeric_limits<double>::quiet_NaN();
  return c;
}

namespace {

void require_rhp_controllable(const SimplifiedEquation& eqn) {
  for (const auto& b : eqn.blocks) {
    if (b.half_plane != HalfPlane::kRHP) {
      throw Error(ErrorKind::kNotRHPSelection,
                  "parametrization needs blocks in the open right half-plane");
    }
    if (!b.controllable) {
      throw Error(ErrorKind::kUncontrollable,
                  "parametrization needs controllable blocks");
    }
  }
}

}  // namespace

ParamSolution parametrize(const HomogeneousForm& h,
                          const SimplifiedEquation& eqn,
                          const ParamPoint& point, const Tolerances& tol) {
  require_rhp_controllable(eqn);
  const Index k = eqn.k();
  if (point.p.order() != k) {
    throw Error(ErrorKind::kInvalidInput,
                "P must be " + std::to_string(k) + "x" + std::to_string(k));
  }
  const SymMat ystar = simplified_inverse_solution(eqn, tol);
  const SymMat delta = solve_lyapunov_stable(-eqn.dk, point.p, tol);
  const SymMat yhat = ystar + delta;
  if (numerical_rank(yhat.mat(), tol.rank) < k) {
    throw Error(ErrorKind::kSingularY, "Y* + Delta is singular");
  }
  const SymMat lhat =
      SymMat::symmetrized(Eigen::FullPivLU<Mat>(yhat.mat()).inverse());

  ParamSolution out;
  out.solution = make_solution(h, eqn.lk, lhat, eqn.block_set, tol);
  out.delta = delta;
  const Mat& l = lhat.mat();
  const Mat lin = eqn.dk * l;
  const Mat quad = l * eqn.mk.mat() * l;
  out.reduced_residual = SymMat::symmetrized(-lin - lin.transpose() + quad);
  const double scale = std::max({1.0, max_norm(lin), max_norm(quad)});
  out.certificate = certify_residual(out.reduced_residual, scale, true, tol);
  out.strict_parameter =
      point.verdict.cls == Definiteness::kPositiveDefinite;
  return out;
}

ParamPoint recover_parameter(const SimplifiedEquation& eqn, const SymMat& lhat,
                             const Tolerances& tol) {
  require_rhp_controllable(eqn);
  const Index k = eqn.k();
  if (lhat.order() != k) {
    throw Error(ErrorKind::kInvalidInput,
                "Lhat must be " + std::to_string(k) + "x" + std::to_string(k));
  }
  require_finite(lhat.mat(), "Lhat");
  if (numerical_rank(lhat.mat(), tol.rank) < k) {
    throw Error(ErrorKind::kSingularInput, "Lhat is singular");
  }
  const SymMat ystar = simplified_inverse_solution(eqn, tol);
  const SymMat yhat =
      SymMat::symmetrized(Eigen::FullPivLU<Mat>(lhat.mat()).inverse());
  const Mat delta = (yhat - ystar).mat();
  const Mat half = delta * eqn.dk;
  const SymMat p = SymMat::symmetrized(half + half.transpose());

  const double scale = std::max(
      {1.0, max_norm(yhat.mat()) * max_norm(eqn.dk),
       max_norm(ystar.mat()) * max_norm(eqn.dk)});
  DefinitenessVerdict v = definiteness_abs(p, tol.definiteness * scale);
  if (!v.is_psd()) {
    throw Error(ErrorKind::kNotASolution,
                "recovered P is indefinite (min eigenvalue " +
                    std::to_string(v.min_eig) +
                    "); Lhat does not satisfy the inequality");
  }
  return ParamPoint{p, eqn.block_set, v};
}

std::vector<Complex> eigenvalues(const Mat& a) {
  std::vector<Complex> out;
  if (a.size() == 0) return out;
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Mat>(a, false).eigenvalues();
  out.assign(ev.data(), ev.data() + ev.size());
  return out;
}

double match_spectra(std::vector<Complex> expected,
                     const std::vector<Complex>& actual) {
  if (expected.size() != actual.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (Complex z : actual) {
    auto best = expected.begin();
    for (auto it = expected.begin(); it != expected.end(); ++it) {
      if (std::abs(*it - z) < std::abs(*best - z)) best = it;
    }
    worst = std::max(worst, std::abs(*best - z));
    expected.erase(best);
  }
  return worst;
}

FlipReport feedback_flip(const HomogeneousForm& h, const AriSolution& sol,
                         const Tolerances& tol) {
  const SymMat r = ric_residual(h, sol.x);
  const double rmax = max_norm(r.mat());
  if (rmax > tol.base * residual_scale(h, sol.x)) {
    throw Error(ErrorKind::kNotAnEquationSolution,
                "X is not an equation solution (residual " +
                    std::to_string(rmax) + ")");
  }
  FlipReport out;
  out.a1 = h.a0 - h.m.mat() * sol.x.mat();

  std::vector<Complex> base = eigenvalues(h.a0);
  std::vector<Complex> support;
  if (sol.basis.cols() > 0) {
    support = eigenvalues(sol.basis.transpose() * h.a0.transpose() * sol.basis);
  }
  // Remove the support eigenvalues from eig(A0) and add their negatives.
  for (Complex z : support) {
    auto best = base.begin();
    for (auto it = base.begin(); it != base.end(); ++it) {
      if (std::abs(*it - z) < std::abs(*best - z)) best = it;
    }
    base.erase(best);
  }
  for (Complex z : support) base.push_back(-z);
  out.expected = base;
  out.actual = eigenvalues(out.a1);

  double scale = 1.0;
  for (Complex z : out.expected) scale = std::max(scale, std::abs(z));
  out.max_mismatch = match_spectra(out.expected, out.actual) / scale;
  out.match = out.max_mismatch <= 1e-6;
  return out;
}

Certificate verify(const HomogeneousForm& h, const SymMat& k, bool strict,
                   const Tolerances& tol) {
  const RiccatiProblem& p = h.problem;
  if (k.order() != p.n()) {
    throw Error(ErrorKind::kInvalidInput, "K has the wrong order");
  }
  require_finite(k.mat(), "K");
  const SymMat direct = are_residual(p, k);
  const SymMat x = k - h.k0;
  const SymMat homog = ric_residual(h, x);

  const Mat kb = k.mat() * p.b;
  const double scale =
      std::max({1.0, max_norm(p.a.transpose() * k.mat()), max_norm(p.q.mat()),
                max_norm(kb * kb.transpose())});
  Certificate c = certify_residual(direct, scale, strict, tol);
  c.route_discrepancy = max_norm((direct - homog).mat()) /
                        std::max(scale, residual_scale(h, x));
  return c;
}

}  // namespace ari
