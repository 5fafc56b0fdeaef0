#include "ari/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ari {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "InvalidInput";
    case ErrorKind::kDegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::kSingularSylvester: return "SingularSylvester";
    case ErrorKind::kNotHurwitz: return "NotHurwitz";
    case ErrorKind::kSingularBlock: return "SingularBlock";
    case ErrorKind::kNoBaseSolution: return "NoBaseSolution";
    case ErrorKind::kBaseResidualTooLarge: return "BaseResidualTooLarge";
    case ErrorKind::kNonInvariantSelection: return "NonInvariantSelection";
    case ErrorKind::kSingularY: return "SingularY";
    case ErrorKind::kUncontrollable: return "Uncontrollable";
    case ErrorKind::kNotRHPSelection: return "NotRHPSelection";
    case ErrorKind::kSingularInput: return "SingularInput";
    case ErrorKind::kNotASolution: return "NotASolution";
    case ErrorKind::kNotAnEquationSolution: return "NotAnEquationSolution";
  }
  return "Unknown";
}

double max_norm(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const Mat& m) { return m.allFinite(); }

void require_finite(const Mat& m, std::string_view what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw Error(ErrorKind::kInvalidInput, std::string(what) + " is empty");
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::kInvalidInput,
                std::string(what) + " has non-finite entries");
  }
}

SymMat::SymMat(const Mat& m, double symmetry_tol) {
  require_finite(m, "symmetric matrix");
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::kInvalidInput,
                "symmetric matrix must be square, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double asym = max_norm(m - m.transpose());
  if (asym > symmetry_tol * std::max(1.0, max_norm(m))) {
    throw Error(ErrorKind::kInvalidInput,
                "matrix is not symmetric (max asymmetry " +
                    std::to_string(asym) + ")");
  }
  m_ = (m + m.transpose()) / 2.0;
}

SymMat SymMat::symmetrized(const Mat& m) {
  SymMat s;
  s.m_ = (m + m.transpose()) / 2.0;
  return s;
}

SymMat SymMat::zero(Index order) {
  return symmetrized(Mat::Zero(order, order));
}

SymMat SymMat::identity(Index order) {
  return symmetrized(Mat::Identity(order, order));
}

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::kPositiveDefinite: return "positive-definite";
    case Definiteness::kPositiveSemidefinite: return "positive-semidefinite";
    case Definiteness::kNegativeDefinite: return "negative-definite";
    case Definiteness::kNegativeSemidefinite: return "negative-semidefinite";
    case Definiteness::kIndefinite: return "indefinite";
    case Definiteness::kZero: return "zero";
  }
  return "unknown";
}

bool DefinitenessVerdict::is_psd() const {
  return cls == Definiteness::kPositiveDefinite ||
         cls == Definiteness::kPositiveSemidefinite ||
         cls == Definiteness::kZero;
}

bool DefinitenessVerdict::is_nsd() const {
  return cls == Definiteness::kNegativeDefinite ||
         cls == Definiteness::kNegativeSemidefinite ||
         cls == Definiteness::kZero;
}

SymEig sym_eig(const SymMat& s) {
  require_finite(s.mat(), "symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Mat> es(s.mat());
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidInput, "symmetric eigensolver failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

DefinitenessVerdict definiteness_abs(const SymMat& s, double abs_tol) {
  const Vec w = sym_eig(s).values;
  const double lo = w(0);
  const double hi = w(w.size() - 1);
  const double t = abs_tol;
  Definiteness cls;
  if (std::max(std::abs(lo), std::abs(hi)) <= t) {
    cls = Definiteness::kZero;
  } else if (lo > t) {
    cls = Definiteness::kPositiveDefinite;
  } else if (lo >= -t) {
    cls = Definiteness::kPositiveSemidefinite;
  } else if (hi < -t) {
    cls = Definiteness::kNegativeDefinite;
  } else if (hi <= t) {
    cls = Definiteness::kNegativeSemidefinite;
  } else {
    cls = Definiteness::kIndefinite;
  }
  return {cls, lo, hi, t};
}

DefinitenessVerdict definiteness(const SymMat& s, double tol) {
  return definiteness_abs(s, tol * std::max(1.0, max_norm(s.mat())));
}

namespace {

Eigen::VectorXcd eigenvalues_of(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidInput, "general eigensolver failed");
  }
  return es.eigenvalues();
}

}  // namespace

Mat solve_sylvester(const Mat& f, const Mat& g, const Mat& c,
                    double separation_tol) {
  require_finite(f, "F");
  require_finite(g, "G");
  require_finite(c, "C");
  const Index p = f.rows();
  const Index q = g.rows();
  if (f.cols() != p || g.cols() != q || c.rows() != p || c.cols() != q) {
    throw Error(ErrorKind::kInvalidInput, "Sylvester dimensions do not conform");
  }

  const Eigen::VectorXcd ef = eigenvalues_of(f);
  const Eigen::VectorXcd eg = eigenvalues_of(g);
  double gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < q; ++j) gap = std::min(gap, std::abs(ef(i) + eg(j)));
  }
  const double scale = max_norm(f) + max_norm(g);
  if (gap <= separation_tol * scale || scale == 0.0) {
    throw Error(ErrorKind::kSingularSylvester,
                "spectra of F and -G overlap (gap " + std::to_string(gap) + ")");
  }

  const Index n = p * q;
  Mat k = Mat::Zero(n, n);
  for (Index j = 0; j < q; ++j) {
    k.block(j * p, j * p, p, p) += f;
    for (Index i = 0; i < q; ++i) {
      k.block(j * p, i * p, p, p).diagonal().array() += g(i, j);
    }
  }
  const Vec rhs = Eigen::Map<const Vec>(c.data(), n);
  const Vec x = Eigen::FullPivLU<Mat>(k).solve(rhs);
  return Eigen::Map<const Mat>(x.data(), p, q);
}

SymMat solve_lyapunov_stable(const Mat& f, const SymMat& c,
                             const Tolerances& tol) {
  require_finite(f, "F");
  if (f.rows() != f.cols() || f.rows() != c.order()) {
    throw Error(ErrorKind::kInvalidInput, "Lyapunov dimensions do not conform");
  }
  const Eigen::VectorXcd ev = eigenvalues_of(f);
  const double abscissa = ev.real().maxCoeff();
  if (abscissa >= -tol.axis * max_norm(f)) {
    throw Error(ErrorKind::kNotHurwitz,
                "spectral abscissa " + std::to_string(abscissa) +
                    " is not negative");
  }
  return SymMat::symmetrized(
      solve_sylvester(f.transpose(), f, -c.mat(), tol.separation));
}

SymMat schur_complement(const SymMat& s, std::span<const Index> keep,
                        double rank_tol) {
  const Index n = s.order();
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (Index i : keep) {
    if (i < 0 || i >= n || kept[static_cast<std::size_t>(i)]) {
      throw Error(ErrorKind::kInvalidInput,
                  "keep set has an invalid or repeated index");
    }
    kept[static_cast<std::size_t>(i)] = true;
  }
  if (keep.empty()) {
    throw Error(ErrorKind::kInvalidInput, "keep set is empty");
  }
  std::vector<Index> k(keep.begin(), keep.end());
  std::vector<Index> d;
  for (Index i = 0; i < n; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) d.push_back(i);
  }
  const Mat skk = s.mat()(k, k);
  if (d.empty()) return SymMat::symmetrized(skk);

  const Mat sdd = s.mat()(d, d);
  if (numerical_rank(sdd, rank_tol) < static_cast<Index>(d.size())) {
    throw Error(ErrorKind::kSingularBlock, "dropped principal block is singular");
  }
  const Mat skd = s.mat()(k, d);
  return SymMat::symmetrized(skk -
                             skd * Eigen::FullPivLU<Mat>(sdd).solve(skd.transpose()));
}

Index numerical_rank(const Mat& m, double rank_tol) {
  if (m.size() == 0) return 0;
  const Vec sv = Eigen::JacobiSVD<Mat>(m).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  return (sv.array() > rank_tol * sv(0)).count();
}

Mat null_space(const Mat& m, double rank_tol) {
  const Index n = m.cols();
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Mat::Identity(n, n);
  const Index r = (sv.array() > rank_tol * sv(0)).count();
  return svd.matrixV().rightCols(n - r);
}

std::vector<Complex> SchurBlock::eigenvalues() const {
  if (size == 1) return {lambda};
  return {lambda, std::conj(lambda)};
}

}  // namespace ari
