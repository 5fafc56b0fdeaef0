#pragma once

#include <string_view>
#include <vector>

#include "ari/linalg.hpp"
#include "ari/riccati.hpp"
#include "ari/system_analysis.hpp"

namespace ari {

enum class RankOneVerdict { kSemidefiniteRankAtMostOne, kIndefinite };

std::string_view to_string(RankOneVerdict v);

// Classifies Ric(alpha v v^T) by whether v is an eigenvector of A0^T.
RankOneVerdict rank_one_classify(const HomogeneousForm& h, const Vec& v,
                                 double alpha, const Tolerances& tol = {});

struct ExtremalPair {
  AriSolution lr;  // maximum, supported on the RHP blocks
  AriSolution ll;  // minimum, supported on the LHP blocks
  SymMat kmax;     // K0 + lr.x
  SymMat kmin;     // K0 + ll.x
};

ExtremalPair extremal_solutions(const HomogeneousForm& h,
                                const SpectralSplit& split,
                                const Tolerances& tol = {});

enum class BoundednessVerdict {
  kBounded,
  kBoundedBelowOnly,
  kBoundedAboveOnly,
  kUnboundedBoth,
};

std::string_view to_string(BoundednessVerdict v);

enum class RaySign { kPlus, kMinus, kBoth };

std::string_view to_string(RaySign s);

// K0 + alpha * x_w stays feasible for every alpha of the tagged sign.
struct WitnessRay {
  std::size_t block;
  SymMat x_w;  // unit Frobenius norm
  RaySign sign;
};

struct BoundednessReport {
  BoundednessVerdict verdict;
  std::vector<WitnessRay> witnesses;
};

BoundednessReport boundedness(const HomogeneousForm& h,
                              const SpectralSplit& split,
                              const Tolerances& tol = {});

struct RaySample {
  double alpha;
  double max_eig;
  double tol_used;
  bool feasible;
};

// Residual of Ric(alpha x_w) for each magnitude in `alphas`, using every sign
// the ray claims.
std::vector<RaySample> sweep_ray(const HomogeneousForm& h,
                                 const WitnessRay& ray,
                                 const std::vector<double>& alphas,
                                 const Tolerances& tol = {});

struct ParamPoint {
  SymMat p;
  std::vector<std::size_t> block_set;
  DefinitenessVerdict verdict;
};

// Checks P >= 0 within tolerance; InvalidInput otherwise.
ParamPoint make_param_point(const SymMat& p,
                            std::vector<std::size_t> block_set,
                            const Tolerances& tol = {});

struct Certificate {
  double residual_max_eig = 0.0;
  double residual_min_eig = 0.0;
  bool pass = false;
  bool strict = false;
  double tol_used = 0.0;
  // Gap between the inhomogeneous residual at K and Ric(K - K0); NaN when
  // only one route applies.
  double route_discrepancy = 0.0;
};

struct ParamSolution {
  AriSolution solution;
  SymMat delta;             // Delta Dk + Dk^T Delta = P
  SymMat reduced_residual;  // -Dk L - L Dk^T + L Mk L = -L P L
  Certificate certificate;  // strict test on reduced_residual
  bool strict_parameter;    // P classified positive definite
};

ParamSolution parametrize(const HomogeneousForm& h,
                          const SimplifiedEquation& eqn,
                          const ParamPoint& point,
                          const Tolerances& tol = {});

ParamPoint recover_parameter(const SimplifiedEquation& eqn, const SymMat& lhat,
                             const Tolerances& tol = {});

struct FlipReport {
  Mat a1;
  std::vector<Complex> expected;  // eig(A0) with the support eigenvalues negated
  std::vector<Complex> actual;    // eig(A1)
  double max_mismatch;            // relative to max(1, max |eig(A0)|)
  bool match;
};

FlipReport feedback_flip(const HomogeneousForm& h, const AriSolution& sol,
                         const Tolerances& tol = {});

Certificate verify(const HomogeneousForm& h, const SymMat& k, bool strict,
                   const Tolerances& tol = {});

// Certificate for a residual that is already formed; `scale` is the
// magnitude of the terms that produced it.
Certificate certify_residual(const SymMat& residual, double scale, bool strict,
                             const Tolerances& tol = {});

// Greedy multiset match; returns the largest pairing distance.
double match_spectra(std::vector<Complex> expected,
                     const std::vector<Complex>& actual);

std::vector<Complex> eigenvalues(const Mat& a);

}  // namespace ari
