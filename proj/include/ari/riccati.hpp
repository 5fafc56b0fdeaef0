#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ari/linalg.hpp"
#include "ari/system_analysis.hpp"

namespace ari {

// The triple (A, B, Q) of  -A^T K - K A - Q + K B B^T K <= 0.
struct RiccatiProblem {
  Mat a;
  Mat b;
  SymMat q;

  RiccatiProblem(Mat a, Mat b, SymMat q);
  // Q = 0.
  RiccatiProblem(Mat a, Mat b);

  Index n() const { return a.rows(); }
  Index m() const { return b.cols(); }
};

enum class BaseKind { kStabilizing, kAntistabilizing, kGiven };

std::string_view to_string(BaseKind kind);

// The problem rewritten around a base ARE solution K0:
//   ARE(K0 + X) = Ric(X) = -A0^T X - X A0 + X M X,  A0 = A - M K0, M = B B^T.
struct HomogeneousForm {
  RiccatiProblem problem;
  BaseKind kind;
  SymMat k0;
  Mat a0;
  SymMat m;
  double base_residual;  // ||ARE(K0)||_max

  const Mat& b() const { return problem.b; }
  Index n() const { return problem.n(); }
};

// Reduced equation on an A0^T-invariant subspace: A0^T Lk = Lk Dk.
struct SimplifiedEquation {
  std::vector<std::size_t> block_set;  // indices into SpectralSplit::blocks
  std::vector<SpectralBlock> blocks;   // offsets relative to Dk
  Mat dk;
  SymMat mk;  // Lk^T B B^T Lk
  Mat lk;

  Index k() const { return dk.rows(); }
};

// X = Lk * lcoord * Lk^T together with its residual Ric(X).
struct AriSolution {
  SymMat x;
  SymMat lcoord;
  Mat basis;  // Lk
  std::vector<std::size_t> block_set;
  Index rank = 0;
  SymMat residual;
  DefinitenessVerdict residual_verdict;
};

// -A^T K - K A - Q + K B B^T K.
SymMat are_residual(const RiccatiProblem& p, const SymMat& k);

HomogeneousForm solve_base_are(const RiccatiProblem& p, BaseKind kind,
                               const std::optional<SymMat>& k0 = std::nullopt,
                               const Tolerances& tol = {});

SymMat ric_residual(const HomogeneousForm& h, const SymMat& x);

// Magnitude of the terms that make up Ric(X); residual tolerances are
// relative to this.
double residual_scale(const HomogeneousForm& h, const SymMat& x);

// Packs a coordinate matrix on the basis `lk` into a checked AriSolution.
AriSolution make_solution(const HomogeneousForm& h, const Mat& lk,
                          const SymMat& lcoord,
                          std::vector<std::size_t> block_set,
                          const Tolerances& tol = {});

AriSolution zero_solution(const HomogeneousForm& h, const Tolerances& tol = {});

SimplifiedEquation reduce(const HomogeneousForm& h, const SpectralSplit& split,
                          std::vector<std::size_t> block_set,
                          const Tolerances& tol = {});

// Full-rank solution of -Dk L - L Dk^T + L Mk L = 0 via the Sylvester
// equation Y Dk + Dk^T Y = Mk and L = Y^{-1}.
AriSolution full_rank_simplified_solution(const HomogeneousForm& h,
                                          const SimplifiedEquation& eqn,
                                          const Tolerances& tol = {});

// Y with Y Dk + Dk^T Y = Mk (the inverse of the full-rank coordinates).
SymMat simplified_inverse_solution(const SimplifiedEquation& eqn,
                                   const Tolerances& tol = {});

struct FamilyMember {
  std::vector<std::size_t> block_set;
  std::optional<AriSolution> solution;
  std::string absent_reason;
  // max-norm gap between the direct solve and the Schur complement of the
  // maximal solution, relative to max(1, ||X||_max); NaN when not computed.
  double route_gap;
};

// Every ARE solution supported on a subset of the non-AXIS blocks, ordered by
// subset size and then lexicographically.
std::vector<FamilyMember> schur_family(const HomogeneousForm& h,
                                       const SpectralSplit& split,
                                       const Tolerances& tol = {});

enum class DegenerateOutcome { kTrivialOnly, kFreeFamily };

std::string_view to_string(DegenerateOutcome o);

struct DegenerateCase {
  std::size_t block;
  DegenerateOutcome outcome;
  // Unit Frobenius-norm direction X_w with Ric(a X_w) = 0 for every real a.
  std::optional<SymMat> generator;
  double generator_residual = 0.0;
};

std::vector<DegenerateCase> degenerate_classify(const HomogeneousForm& h,
                                                const SpectralSplit& split,
                                                const Tolerances& tol = {});

// Orthonormal basis of the largest A0^T-invariant subspace inside ker B^T
// belonging to the eigenvalue (or conjugate pair) of split.blocks[block].
Mat uncontrollable_subspace(const SpectralSplit& split, const Mat& b,
                            std::size_t block, const Tolerances& tol = {});

}  // namespace ari
