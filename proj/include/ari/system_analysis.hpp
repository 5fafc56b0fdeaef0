#pragma once

#include <string_view>
#include <vector>

#include "ari/linalg.hpp"

namespace ari {

enum class HalfPlane { kAxis = 0, kRHP = 1, kLHP = 2 };

std::string_view to_string(HalfPlane hp);

struct SpectralBlock {
  Index offset = 0;
  Index size = 1;
  Complex lambda;  // Im >= 0 representative for a conjugate pair
  HalfPlane half_plane = HalfPlane::kAxis;
  bool controllable = true;
  // Smallest PBH singular value over the block's eigenvalue(s), for reports.
  double pbh_margin = 0.0;

  std::vector<Complex> eigenvalues() const;
};

// Ordered real Schur form of A0^T: A0^T U = U T, blocks grouped
// AXIS, RHP, LHP, each block tagged by the PBH test.
struct SpectralSplit {
  Mat u;
  Mat t;
  std::vector<SpectralBlock> blocks;
  SymMat m;  // U^T B B^T U
  double axis_tol = 0.0;  // absolute |Re| cut-off used for the grouping

  Index order() const { return t.rows(); }
  std::vector<std::size_t> blocks_in(HalfPlane hp) const;
  bool all_controllable() const;
};

// rank [B, AB, ..., A^{n-1} B]; A is rescaled to unit max-norm first so the
// Krylov columns stay comparable in size.
Index kalman_rank(const Mat& a, const Mat& b, const Tolerances& tol = {});

// Smallest singular value of [lambda I - A, B] relative to the largest one.
double pbh_margin(const Mat& a, const Mat& b, Complex lambda);

SpectralSplit pbh_classify(const Mat& a0, const Mat& b, SpectralSplit split,
                           const Tolerances& tol = {});

SpectralSplit spectral_split(const Mat& a0, const Mat& b,
                             const Tolerances& tol = {});

}  // namespace ari
