#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ari/errors.hpp"

namespace ari {

using Index = Eigen::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Complex = std::complex<double>;

// Relative tolerances. Each one is scaled at the point of use by the quantity
// named next to it, so callers can tighten or loosen any test independently.
struct Tolerances {
  double axis = 1e-8;       // |Re(lambda)|, relative to ||A0||_max
  double rank = 1e-10;      // singular values, relative to the largest one
  double definiteness = 1e-8;  // eigenvalues, relative to the matrix scale
  double base = 1e-7;       // ARE residual of K0, relative to max(1,||A||,||Q||)
  double symmetry = 1e-10;  // |S - S^T|, relative to max(1, ||S||_max)
  double separation = 1e-10;   // Sylvester spectral gap, relative to ||F||+||G||
  double subspace = 1e-8;   // null-space cut-off for uncontrollable subspaces
};

double max_norm(const Mat& m);
bool all_finite(const Mat& m);
// Throws InvalidInput naming `what` if m is empty or holds NaN/Inf.
void require_finite(const Mat& m, std::string_view what);

// Symmetric matrix. The stored entries are always exactly (S + S^T) / 2.
class SymMat {
 public:
  SymMat() = default;
  // Validates symmetry against `symmetry_tol` (relative) and symmetrizes.
  explicit SymMat(const Mat& m, double symmetry_tol = Tolerances{}.symmetry);

  // Symmetrizes without a symmetry check (for computed quantities).
  static SymMat symmetrized(const Mat& m);
  static SymMat zero(Index order);
  static SymMat identity(Index order);

  const Mat& mat() const noexcept { return m_; }
  Index order() const noexcept { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }

  SymMat operator+(const SymMat& o) const { return symmetrized(m_ + o.m_); }
  SymMat operator-(const SymMat& o) const { return symmetrized(m_ - o.m_); }
  SymMat operator*(double s) const { return symmetrized(m_ * s); }

 private:
  Mat m_;
};

enum class Definiteness {
  kPositiveDefinite,
  kPositiveSemidefinite,
  kNegativeDefinite,
  kNegativeSemidefinite,
  kIndefinite,
  kZero,
};

std::string_view to_string(Definiteness d);

struct DefinitenessVerdict {
  Definiteness cls;
  double min_eig;
  double max_eig;
  double tol_used;

  bool is_psd() const;
  bool is_nsd() const;
};

struct SymEig {
  Vec values;  // ascending
  Mat vectors;
};

SymEig sym_eig(const SymMat& s);

// Relative test: eigenvalues are compared to tol * max(1, ||S||_max).
DefinitenessVerdict definiteness(const SymMat& s, double tol);
// Same classification with an absolute eigenvalue threshold.
DefinitenessVerdict definiteness_abs(const SymMat& s, double abs_tol);

// Solves F X + X G = C through the Kronecker system
// (I (x) F + G^T (x) I) vec(X) = vec(C).
Mat solve_sylvester(const Mat& f, const Mat& g, const Mat& c,
                    double separation_tol = Tolerances{}.separation);

// Unique P with F^T P + P F = -C for Hurwitz F.
SymMat solve_lyapunov_stable(const Mat& f, const SymMat& c,
                             const Tolerances& tol = {});

// S[keep,keep] - S[keep,drop] S[drop,drop]^{-1} S[drop,keep]. `keep` is a set
// of scalar indices; the complement is dropped.
SymMat schur_complement(const SymMat& s, std::span<const Index> keep,
                        double rank_tol = Tolerances{}.rank);

// Rank by singular values above rank_tol * sigma_max.
Index numerical_rank(const Mat& m, double rank_tol);

// Orthonormal basis of the numerical null space (columns).
Mat null_space(const Mat& m, double rank_tol);

// ---------------------------------------------------------------------------
// Ordered real Schur form.

struct SchurBlock {
  Index offset = 0;
  Index size = 1;
  // For a 2x2 block this is the member of the conjugate pair with Im > 0.
  Complex lambda;
  int cls = 0;

  std::vector<Complex> eigenvalues() const;
};

struct OrderedSchur {
  Mat u;  // orthogonal, A U = U T
  Mat t;  // quasi-upper-triangular, standardized 2x2 blocks
  std::vector<SchurBlock> blocks;
};

using EigenClassifier = std::function<int(Complex)>;

// Real Schur form of `a` with blocks grouped by ascending classify() value.
// Within a class blocks are ordered by ascending real part; real parts within
// tie_tol are ordered by ascending imaginary part and then by their position in
// the unordered Schur form.
OrderedSchur real_schur_ordered(const Mat& a, const EigenClassifier& classify,
                                double tie_tol);

// Reorders `schur` so that its blocks appear in `order` (a permutation of
// block indices). Unlisted blocks keep their relative order after the listed
// ones. Throws DegenerateSpectrumError when a swap is rejected.
void reorder_schur(OrderedSchur& schur, std::span<const std::size_t> order);

}  // namespace ari
