#include "ari/riccati.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace ari {

RiccatiProblem::RiccatiProblem(Mat a_in, Mat b_in, SymMat q_in)
    : a(std::move(a_in)), b(std::move(b_in)), q(std::move(q_in)) {
  require_finite(a, "A");
  require_finite(b, "B");
  if (a.rows() != a.cols() || b.rows() != a.rows() || q.order() != a.rows()) {
    throw Error(ErrorKind::kInvalidInput,
                "A, B, Q must be n x n, n x m, n x n (A is " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    ", B is " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()) + ", Q is " +
                    std::to_string(q.order()) + ")");
  }
}

RiccatiProblem::RiccatiProblem(Mat a_in, Mat b_in)
    : RiccatiProblem(a_in, b_in, SymMat::zero(a_in.rows())) {}

std::string_view to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::kStabilizing: return "stabilizing";
    case BaseKind::kAntistabilizing: return "antistabilizing";
    case BaseKind::kGiven: return "given";
  }
  return "?";
}

std::string_view to_string(DegenerateOutcome o) {
  return o == DegenerateOutcome::kTrivialOnly ? "TrivialOnly" : "FreeFamily";
}

SymMat are_residual(const RiccatiProblem& p, const SymMat& k) {
  if (k.order() != p.n()) {
    throw Error(ErrorKind::kInvalidInput, "K has the wrong order");
  }
  const Mat& kk = k.mat();
  const Mat kb = kk * p.b;
  return SymMat::symmetrized(-p.a.transpose() * kk - kk * p.a - p.q.mat() +
                             kb * kb.transpose());
}

namespace {

double base_scale(const RiccatiProblem& p) {
  return std::max({1.0, max_norm(p.a), max_norm(p.q.mat())});
}

SymMat hamiltonian_base(const RiccatiProblem& p, BaseKind kind,
                        const Tolerances& tol) {
  const Index n = p.n();
  const Mat m = p.b * p.b.transpose();
  Mat h(2 * n, 2 * n);
  h << p.a, -m, -p.q.mat(), -p.a.transpose();

  const double axis_tol = tol.axis * max_norm(h);
  const bool want_left = kind == BaseKind::kStabilizing;
  auto classify = [axis_tol, want_left](Complex z) {
    if (std::abs(z.real()) <= axis_tol) return 2;
    const bool left = z.real() < 0.0;
    return left == want_left ? 0 : 1;
  };
  const OrderedSchur s = real_schur_ordered(h, classify, axis_tol);
  Index wanted = 0;
  for (const auto& blk : s.blocks) {
    if (blk.cls == 0) wanted += blk.size;
  }
  if (wanted != n) {
    throw Error(ErrorKind::kNoBaseSolution,
                "Hamiltonian has " + std::to_string(wanted) +
                    " eigenvalues in the requested open half-plane, need " +
                    std::to_string(n));
  }
  const Mat u1 = s.u.topLeftCorner(n, n);
  const Mat u2 = s.u.bottomLeftCorner(n, n);
  if (numerical_rank(u1, tol.rank) < n) {
    throw Error(ErrorKind::kNoBaseSolution,
                "invariant subspace has a singular top block");
  }
  // K = U2 U1^{-1}  <=>  U1^T K = U2^T for symmetric K.
  const Mat k = Eigen::FullPivLU<Mat>(u1.transpose()).solve(u2.transpose());
  return SymMat::symmetrized(k);
}

}  // namespace

HomogeneousForm solve_base_are(const RiccatiProblem& p, BaseKind kind,
                               const std::optional<SymMat>& k0,
                               const Tolerances& tol) {
  SymMat base;
  if (kind == BaseKind::kGiven) {
    if (!k0) {
      throw Error(ErrorKind::kInvalidInput, "base kind 'given' needs K0");
    }
    if (k0->order() != p.n()) {
      throw Error(ErrorKind::kInvalidInput, "K0 has the wrong order");
    }
    base = *k0;
  } else {
    base = hamiltonian_base(p, kind, tol);
  }

  const double residual = max_norm(are_residual(p, base).mat());
  const double limit = tol.base * base_scale(p);
  if (residual > limit) {
    const ErrorKind err = kind == BaseKind::kGiven
                              ? ErrorKind::kBaseResidualTooLarge
                              : ErrorKind::kNoBaseSolution;
    throw Error(err, "ARE residual of K0 is " + std::to_string(residual) +
                         " (limit " + std::to_string(limit) + ")");
  }
  Mat m = p.b * p.b.transpose();
  Mat a0 = p.a - m * base.mat();
  return HomogeneousForm{p, kind, base, std::move(a0), SymMat::symmetrized(m),
                         residual};
}

SymMat ric_residual(const HomogeneousForm& h, const SymMat& x) {
  if (x.order() != h.n()) {
    throw Error(ErrorKind::kInvalidInput, "X has the wrong order");
  }
  const Mat& xx = x.mat();
  const Mat xb = xx * h.b();
  return SymMat::symmetrized(-h.a0.transpose() * xx - xx * h.a0 +
                             xb * xb.transpose());
}

double residual_scale(const HomogeneousForm& h, const SymMat& x) {
  const Mat xb = x.mat() * h.b();
  return std::max({1.0, max_norm(h.a0.transpose() * x.mat()),
                   max_norm(xb * xb.transpose())});
}

AriSolution make_solution(const HomogeneousForm& h, const Mat& lk,
                          const SymMat& lcoord,
                          std::vector<std::size_t> block_set,
                          const Tolerances& tol) {
  AriSolution s;
  s.x = lk.cols() == 0 ? SymMat::zero(h.n())
                       : SymMat::symmetrized(lk * lcoord.mat() * lk.transpose());
  s.lcoord = lcoord;
  s.basis = lk;
  s.block_set = std::move(block_set);
  s.rank = lcoord.order() == 0 ? 0 : numerical_rank(lcoord.mat(), tol.rank);
  s.residual = ric_residual(h, s.x);
  s.residual_verdict = definiteness_abs(
      s.residual, tol.definiteness * residual_scale(h, s.x));
  return s;
}

AriSolution zero_solution(const HomogeneousForm& h, const Tolerances& tol) {
  return make_solution(h, Mat::Zero(h.n(), 0), SymMat::zero(0), {}, tol);
}

namespace {

OrderedSchur as_schur(const Mat& u, const Mat& t,
                      const std::vector<SpectralBlock>& blocks) {
  OrderedSchur s{u, t, {}};
  for (const auto& b : blocks) {
    s.blocks.push_back(SchurBlock{b.offset, b.size, b.lambda,
                                  static_cast<int>(b.half_plane)});
  }
  return s;
}

bool eigenvalues_close(const SpectralBlock& x, const SpectralBlock& y,
                       double tol) {
  for (Complex a : x.eigenvalues()) {
    for (Complex b : y.eigenvalues()) {
      if (std::abs(a - b) <= tol) return true;
    }
  }
  return false;
}

double min_eigen_gap(const SpectralBlock& x, const SpectralBlock& y) {
  double gap = std::numeric_limits<double>::infinity();
  for (Complex a : x.eigenvalues()) {
    for (Complex b : y.eigenvalues()) gap = std::min(gap, std::abs(a - b));
  }
  return gap;
}

}  // namespace

SimplifiedEquation reduce(const HomogeneousForm& h, const SpectralSplit& split,
                          std::vector<std::size_t> block_set,
                          const Tolerances& tol) {
  if (split.order() != h.n()) {
    throw Error(ErrorKind::kInvalidInput, "split does not match the system");
  }
  if (block_set.empty()) {
    throw Error(ErrorKind::kInvalidInput, "block set is empty");
  }
  std::sort(block_set.begin(), block_set.end());
  if (std::adjacent_find(block_set.begin(), block_set.end()) !=
          block_set.end() ||
      block_set.back() >= split.blocks.size()) {
    throw Error(ErrorKind::kInvalidInput,
                "block set has an invalid or repeated index");
  }

  std::vector<bool> chosen(split.blocks.size(), false);
  for (std::size_t id : block_set) chosen[id] = true;
  const double cluster_tol =
      std::max(split.axis_tol, 1e-12 * std::max(1.0, max_norm(split.t)));
  for (std::size_t s : block_set) {
    for (std::size_t u = 0; u < split.blocks.size(); ++u) {
      if (chosen[u]) continue;
      if (eigenvalues_close(split.blocks[s], split.blocks[u], cluster_tol)) {
        const double gap = min_eigen_gap(split.blocks[s], split.blocks[u]);
        throw DegenerateSpectrumError(
            "selected block " + std::to_string(s + 1) +
                " shares its eigenvalue with unselected block " +
                std::to_string(u + 1),
            gap);
      }
    }
  }

  OrderedSchur s = as_schur(split.u, split.t, split.blocks);
  reorder_schur(s, block_set);

  SimplifiedEquation eqn;
  Index k = 0;
  for (std::size_t pos = 0; pos < block_set.size(); ++pos) {
    SpectralBlock blk = split.blocks[block_set[pos]];
    blk.offset = k;
    k += blk.size;
    eqn.blocks.push_back(blk);
  }
  eqn.block_set = block_set;
  eqn.lk = s.u.leftCols(k);
  eqn.dk = s.t.topLeftCorner(k, k);
  const Mat lb = eqn.lk.transpose() * h.b();
  eqn.mk = SymMat::symmetrized(lb * lb.transpose());

  const double invariance =
      max_norm(h.a0.transpose() * eqn.lk - eqn.lk * eqn.dk);
  if (invariance > tol.axis * std::max(1.0, max_norm(h.a0))) {
    throw Error(ErrorKind::kNonInvariantSelection,
                "selected span is not A0^T-invariant (residual " +
                    std::to_string(invariance) + ")");
  }
  return eqn;
}

SymMat simplified_inverse_solution(const SimplifiedEquation& eqn,
                                   const Tolerances& tol) {
  for (const auto& b : eqn.blocks) {
    if (b.half_plane == HalfPlane::kAxis) {
      throw Error(ErrorKind::kInvalidInput,
                  "AXIS blocks admit only the trivial solution");
    }
  }
  const SymMat y = SymMat::symmetrized(solve_sylvester(
      eqn.dk.transpose(), eqn.dk, eqn.mk.mat(), tol.separation));
  if (numerical_rank(y.mat(), tol.rank) < eqn.k()) {
    throw Error(ErrorKind::kSingularY,
                "Y solving Y Dk + Dk^T Y = Mk is singular");
  }
  return y;
}

AriSolution full_rank_simplified_solution(const HomogeneousForm& h,
                                          const SimplifiedEquation& eqn,
                                          const Tolerances& tol) {
  const SymMat y = simplified_inverse_solution(eqn, tol);
  const SymMat lcoord =
      SymMat::symmetrized(Eigen::FullPivLU<Mat>(y.mat()).inverse());
  AriSolution sol = make_solution(h, eqn.lk, lcoord, eqn.block_set, tol);
  const double r = max_norm(sol.residual.mat());
  if (r > 1e-7 * residual_scale(h, sol.x)) {
    throw Error(ErrorKind::kSingularY,
                "Y is too ill-conditioned: residual " + std::to_string(r));
  }
  return sol;
}

std::vector<FamilyMember> schur_family(const HomogeneousForm& h,
                                       const SpectralSplit& split,
                                       const Tolerances& tol) {
  std::vector<std::size_t> free_blocks;
  for (std::size_t k = 0; k < split.blocks.size(); ++k) {
    if (split.blocks[k].half_plane != HalfPlane::kAxis) free_blocks.push_back(k);
  }
  const std::size_t p = free_blocks.size();
  if (p > 16) {
    throw Error(ErrorKind::kInvalidInput,
                "family enumeration limited to 16 non-AXIS blocks, got " +
                    std::to_string(p));
  }

  // The maximal solution over all non-AXIS blocks, in its own coordinates.
  std::optional<SimplifiedEquation> full_eqn;
  std::optional<AriSolution> full;
  if (p > 0) {
    try {
      full_eqn = reduce(h, split, free_blocks, tol);
      full = full_rank_simplified_solution(h, *full_eqn, tol);
    } catch (const Error&) {
      full.reset();
    }
  }

  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 0; mask < (1u << p); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t x, std::uint32_t y) {
                     return std::popcount(x) < std::popcount(y);
                   });

  std::vector<FamilyMember> family;
  for (std::uint32_t mask : masks) {
    FamilyMember member;
    member.route_gap = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> positions;
    for (std::size_t j = 0; j < p; ++j) {
      if (mask & (1u << j)) {
        member.block_set.push_back(free_blocks[j]);
        positions.push_back(j);
      }
    }
    if (member.block_set.empty()) {
      member.solution = zero_solution(h, tol);
      member.route_gap = 0.0;
      family.push_back(std::move(member));
      continue;
    }

    try {
      const SimplifiedEquation eqn = reduce(h, split, member.block_set, tol);
      member.solution = full_rank_simplified_solution(h, eqn, tol);
    } catch (const Error& e) {
      member.absent_reason = e.what();
      family.push_back(std::move(member));
      continue;
    }

    if (full) {
      try {
        // Rotate the maximal solution so the subset's invariant subspace
        // leads, then take the Schur complement onto it.
        OrderedSchur w = as_schur(Mat::Identity(full_eqn->k(), full_eqn->k()),
                                  full_eqn->dk, full_eqn->blocks);
        reorder_schur(w, positions);
        const Index k = member.solution->lcoord.order();
        const SymMat rotated = SymMat::symmetrized(
            w.u.transpose() * full->lcoord.mat() * w.u);
        std::vector<Index> keep(static_cast<std::size_t>(k));
        for (Index i = 0; i < k; ++i) keep[static_cast<std::size_t>(i)] = i;
        const SymMat sc = schur_complement(rotated, keep, tol.rank);
        const Mat basis = full_eqn->lk * w.u.leftCols(k);
        const Mat x2 = basis * sc.mat() * basis.transpose();
        const Mat& x1 = member.solution->x.mat();
        member.route_gap =
            max_norm(x1 - x2) / std::max(1.0, max_norm(x1));
      } catch (const Error&) {
        member.route_gap = std::numeric_limits<double>::quiet_NaN();
      }
    }
    family.push_back(std::move(member));
  }
  return family;
}

Mat uncontrollable_subspace(const SpectralSplit& split, const Mat& b,
                            std::size_t block, const Tolerances& tol) {
  const SpectralBlock& blk = split.blocks.at(block);
  OrderedSchur s = as_schur(split.u, split.t, split.blocks);
  const std::size_t order[] = {block};
  reorder_schur(s, order);
  const Mat u1 = s.u.leftCols(blk.size);
  const Mat d = s.t.topLeftCorner(blk.size, blk.size);

  // Unobservable subspace of (D, B^T U1), measured against ||B||.
  const double b_scale = max_norm(b);
  if (b_scale == 0.0) return u1;
  const Mat c = b.transpose() * u1 / b_scale;
  Mat obs(2 * c.rows(), blk.size);
  obs << c, c * d / std::max(1.0, max_norm(d));
  Eigen::JacobiSVD<Mat> svd(obs, Eigen::ComputeFullV);
  const Index r = (svd.singularValues().array() > tol.subspace).count();
  return u1 * svd.matrixV().rightCols(blk.size - r);
}

namespace {

// Nonzero symmetric G with D G + G D^T = 0, scaled to unit Frobenius norm
// with positive trace.
Mat symmetric_lyapunov_kernel(const Mat& d) {
  const Index k = d.rows();
  const Index unknowns = k * (k + 1) / 2;
  Mat op = Mat::Zero(k * k, unknowns);
  Index col = 0;
  for (Index i = 0; i < k; ++i) {
    for (Index j = i; j < k; ++j, ++col) {
      Mat e = Mat::Zero(k, k);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      const Mat img = d * e + e * d.transpose();
      op.col(col) = Eigen::Map<const Vec>(img.data(), k * k);
    }
  }
  Eigen::JacobiSVD<Mat> svd(op, Eigen::ComputeFullV);
  const Vec v = svd.matrixV().col(unknowns - 1);
  Mat g = Mat::Zero(k, k);
  col = 0;
  for (Index i = 0; i < k; ++i) {
    for (Index j = i; j < k; ++j, ++col) {
      g(i, j) = v(col);
      g(j, i) = v(col);
    }
  }
  if (g.trace() < 0.0) g = -g;
  return g / g.norm();
}

}  // namespace

std::vector<DegenerateCase> degenerate_classify(const HomogeneousForm& h,
                                                const SpectralSplit& split,
                                                const Tolerances& tol) {
  std::vector<DegenerateCase> out;
  for (std::size_t k = 0; k < split.blocks.size(); ++k) {
    const SpectralBlock& blk = split.blocks[k];
    if (blk.half_plane != HalfPlane::kAxis) continue;
    DegenerateCase c{k, DegenerateOutcome::kTrivialOnly, std::nullopt, 0.0};
    if (!blk.controllable) {
      const Mat l = uncontrollable_subspace(split, h.b(), k, tol);
      if (l.cols() > 0) {
        Mat coord;
        if (blk.size == 1) {
          coord = Mat::Identity(l.cols(), l.cols());
        } else {
          coord = symmetric_lyapunov_kernel(l.transpose() * h.a0.transpose() * l);
        }
        Mat xw = l * coord * l.transpose();
        xw /= xw.norm();
        c.outcome = DegenerateOutcome::kFreeFamily;
        c.generator = SymMat::symmetrized(xw);
        c.generator_residual = max_norm(ric_residual(h, *c.generator).mat());
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace ari
