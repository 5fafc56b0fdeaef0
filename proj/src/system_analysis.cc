#include "ari/system_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ari {

std::string_view to_string(HalfPlane hp) {
  switch (hp) {
    case HalfPlane::kAxis: return "AXIS";
    case HalfPlane::kRHP: return "RHP";
    case HalfPlane::kLHP: return "LHP";
  }
  return "?";
}

std::vector<Complex> SpectralBlock::eigenvalues() const {
  if (size == 1) return {lambda};
  return {lambda, std::conj(lambda)};
}

std::vector<std::size_t> SpectralSplit::blocks_in(HalfPlane hp) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k].half_plane == hp) out.push_back(k);
  }
  return out;
}

bool SpectralSplit::all_controllable() const {
  return std::all_of(blocks.begin(), blocks.end(),
                     [](const SpectralBlock& b) { return b.controllable; });
}

namespace {

void check_pair(const Mat& a, const Mat& b) {
  require_finite(a, "A");
  require_finite(b, "B");
  if (a.rows() != a.cols() || b.rows() != a.rows()) {
    throw Error(ErrorKind::kInvalidInput,
                "A must be n x n and B must be n x m (A is " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    ", B is " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()) + ")");
  }
}

}  // namespace

Index kalman_rank(const Mat& a, const Mat& b, const Tolerances& tol) {
  check_pair(a, b);
  const Index n = a.rows();
  const Index m = b.cols();
  const double scale = max_norm(a);
  const Mat as = scale > 0.0 ? Mat(a / scale) : a;
  Mat kalman(n, n * m);
  kalman.leftCols(m) = b;
  for (Index i = 1; i < n; ++i) {
    kalman.middleCols(i * m, m) = as * kalman.middleCols((i - 1) * m, m);
  }
  return numerical_rank(kalman, tol.rank);
}

double pbh_margin(const Mat& a, const Mat& b, Complex lambda) {
  const Index n = a.rows();
  Eigen::MatrixXcd pbh(n, n + b.cols());
  pbh.leftCols(n) = -a.cast<Complex>();
  pbh.leftCols(n).diagonal().array() += lambda;
  pbh.rightCols(b.cols()) = b.cast<Complex>();
  const Vec sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(pbh).singularValues();
  if (sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

SpectralSplit pbh_classify(const Mat& a0, const Mat& b, SpectralSplit split,
                           const Tolerances& tol) {
  check_pair(a0, b);
  for (auto& blk : split.blocks) {
    // Conjugate eigenvalues share the singular values of the PBH matrix for
    // real (A0, B), so one evaluation covers a 2x2 block.
    blk.pbh_margin = pbh_margin(a0, b, blk.lambda);
    blk.controllable = blk.pbh_margin > tol.rank;
  }
  return split;
}

SpectralSplit spectral_split(const Mat& a0, const Mat& b,
                             const Tolerances& tol) {
  check_pair(a0, b);
  const double axis_tol = tol.axis * max_norm(a0);
  auto classify = [axis_tol](Complex z) {
    if (std::abs(z.real()) <= axis_tol) return static_cast<int>(HalfPlane::kAxis);
    return static_cast<int>(z.real() > 0.0 ? HalfPlane::kRHP : HalfPlane::kLHP);
  };
  OrderedSchur schur =
      real_schur_ordered(a0.transpose(), classify, std::max(axis_tol, 0.0));

  SpectralSplit split;
  split.u = std::move(schur.u);
  split.t = std::move(schur.t);
  split.axis_tol = axis_tol;
  for (const auto& sb : schur.blocks) {
    SpectralBlock blk;
    blk.offset = sb.offset;
    blk.size = sb.size;
    blk.lambda = sb.lambda;
    blk.half_plane = static_cast<HalfPlane>(sb.cls);
    split.blocks.push_back(blk);
  }
  const Mat ub = split.u.transpose() * b;
  split.m = SymMat::symmetrized(ub * ub.transpose());
  return pbh_classify(a0, b, std::move(split), tol);
}

}  // namespace ari
