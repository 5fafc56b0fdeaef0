#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ari/system_analysis.hpp"

namespace ari::testing {

std::vector<Complex> char_poly_roots(const Mat& a) {
  const Index n = a.rows();
  // c[k] is the coefficient of z^k; monic.
  std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Mat mk = Mat::Zero(n, n);
  for (Index k = 1; k <= n; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(n - k + 1)] * Mat::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(a * mk).trace() / static_cast<double>(k);
  }
  auto p = [&c](Complex z) {
    Complex v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
    return v;
  };
  auto dp = [&c](Complex z) {
    Complex v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
      v = v * z + static_cast<double>(k) * c[k];
    }
    return v;
  };

  double radius = 1.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    radius = std::max(radius, 1.0 + std::abs(c[k]));
  }
  std::vector<Complex> z(static_cast<std::size_t>(n));
  const Complex seed(0.4, 0.9);
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = radius * std::pow(seed, static_cast<double>(i + 1)) / std::abs(seed);
  }
  for (int iter = 0; iter < 2000; ++iter) {
    double move = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      Complex denom = 1.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != i) denom *= z[i] - z[j];
      }
      const Complex step = p(z[i]) / denom;
      z[i] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-15 * radius) break;
  }
  for (Complex& r : z) {
    for (int iter = 0; iter < 5; ++iter) {
      const Complex d = dp(r);
      if (std::abs(d) == 0.0) break;
      r -= p(r) / d;
    }
  }
  return z;
}

Vec jacobi_eigenvalues(const Mat& s_in) {
  Mat s = (s_in + s_in.transpose()) / 2.0;
  const Index n = s.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) off += s(i, j) * s(i, j);
    }
    if (off < 1e-30 * std::max(1.0, s.squaredNorm())) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (s(p, q) == 0.0) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (Index k = 0; k < n; ++k) {
          const double skp = s(k, p), skq = s(k, q);
          s(k, p) = cs * skp - sn * skq;
          s(k, q) = sn * skp + cs * skq;
        }
        for (Index k = 0; k < n; ++k) {
          const double spk = s(p, k), sqk = s(q, k);
          s(p, k) = cs * spk - sn * sqk;
          s(q, k) = sn * spk + cs * sqk;
        }
      }
    }
  }
  Vec d = s.diagonal();
  std::sort(d.data(), d.data() + d.size());
  return d;
}

Mat gauss_solve(Mat a, Mat b) {
  const Index n = a.rows();
  for (Index col = 0; col < n; ++col) {
    Index piv = col;
    for (Index r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    }
    if (a(piv, col) == 0.0) throw std::runtime_error("singular system");
    a.row(col).swap(a.row(piv));
    b.row(col).swap(b.row(piv));
    for (Index r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      a.row(r) -= f * a.row(col);
      b.row(r) -= f * b.row(col);
    }
  }
  Mat x = Mat::Zero(n, b.cols());
  for (Index r = n - 1; r >= 0; --r) {
    Eigen::RowVectorXd acc = b.row(r);
    for (Index k = r + 1; k < n; ++k) acc -= a(r, k) * x.row(k);
    x.row(r) = acc / a(r, r);
  }
  return x;
}

namespace {

Mat expm(const Mat& f) {
  const double norm = f.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale /= 2.0;
    ++squarings;
  }
  const Mat g = f * scale;
  Mat term = Mat::Identity(f.rows(), f.cols());
  Mat sum = term;
  for (int k = 1; k < 20; ++k) {
    term = term * g / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace

Mat lyapunov_quadrature(const Mat& f, const Mat& c) {
  double decay = std::numeric_limits<double>::infinity();
  for (Complex z : char_poly_roots(f)) decay = std::min(decay, -z.real());
  if (!(decay > 0.0)) throw std::runtime_error("F is not Hurwitz");
  const double horizon = 40.0 / decay;
  const int steps = 8000;
  const double h = horizon / steps;
  const Mat step = expm(f * h);
  Mat e = Mat::Identity(f.rows(), f.cols());
  Mat acc = Mat::Zero(c.rows(), c.cols());
  for (int k = 0; k <= steps; ++k) {
    const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * e.transpose() * c * e;
    e = e * step;
  }
  return acc * h / 3.0;
}

double spectrum_distance(std::vector<Complex> expected,
                         const std::vector<Complex>& actual) {
  if (expected.size() != actual.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (Complex z : actual) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < expected.size(); ++i) {
      if (std::abs(expected[i] - z) < std::abs(expected[best] - z)) best = i;
    }
    worst = std::max(worst, std::abs(expected[best] - z));
    expected.erase(expected.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

Mat random_normal(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

Mat random_orthogonal(std::mt19937_64& rng, Index n) {
  Eigen::HouseholderQR<Mat> qr(random_normal(rng, n, n));
  return qr.householderQ() * Mat::Identity(n, n);
}

Mat random_similarity(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> sv(0.5, 2.0);
  Vec s(n);
  for (Index i = 0; i < n; ++i) s(i) = sv(rng);
  return random_orthogonal(rng, n) * s.asDiagonal() * random_orthogonal(rng, n);
}

SymMat random_symmetric(std::mt19937_64& rng, Index n) {
  const Mat g = random_normal(rng, n, n);
  return SymMat::symmetrized(g + g.transpose());
}

Mat real_block(Complex lambda) {
  if (lambda.imag() == 0.0) return Mat::Constant(1, 1, lambda.real());
  Mat b(2, 2);
  b << lambda.real(), lambda.imag(), -lambda.imag(), lambda.real();
  return b;
}

Mat block_diag(const std::vector<Mat>& blocks) {
  Index n = 0;
  for (const Mat& b : blocks) n += b.rows();
  Mat out = Mat::Zero(n, n);
  Index at = 0;
  for (const Mat& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

Mat from_spectrum(const std::vector<Complex>& lambdas) {
  std::vector<Mat> blocks;
  for (Complex z : lambdas) blocks.push_back(real_block(z));
  return block_diag(blocks);
}

Complex random_eigenvalue(std::mt19937_64& rng, Plane plane, double p_complex) {
  std::uniform_real_distribution<double> mag(0.5, 3.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const bool pair = coin(rng) < p_complex;
  double re = 0.0;
  if (plane == Plane::kRHP) re = mag(rng);
  if (plane == Plane::kLHP) re = -mag(rng);
  // Axis blocks are either a pair +-i mu or the zero eigenvalue.
  return Complex(re, pair ? mag(rng) : 0.0);
}

namespace {

std::vector<Complex> expand(const std::vector<Complex>& reps) {
  std::vector<Complex> out;
  for (Complex z : reps) {
    out.push_back(z);
    if (z.imag() != 0.0) out.push_back(std::conj(z));
  }
  return out;
}

bool well_separated(const std::vector<Complex>& reps) {
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      for (Complex x : expand({reps[i]})) {
        for (Complex y : expand({reps[j]})) {
          if (std::abs(x - y) < 0.3 || std::abs(x + y) < 0.3) return false;
        }
      }
    }
  }
  return true;
}

std::vector<Complex> draw_spectrum(std::mt19937_64& rng,
                                   const std::vector<Plane>& planes,
                                   double p_complex,
                                   const std::vector<Complex>& avoid) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Complex> reps;
    for (Plane p : planes) reps.push_back(random_eigenvalue(rng, p, p_complex));
    std::vector<Complex> all = reps;
    all.insert(all.end(), avoid.begin(), avoid.end());
    if (well_separated(all)) return reps;
  }
  throw std::runtime_error("could not draw a separated spectrum");
}

bool pair_controllable(const Mat& a, const Mat& b) {
  if (kalman_rank(a, b) < a.rows()) return false;
  const SpectralSplit split = spectral_split(a, b);
  return std::all_of(split.blocks.begin(), split.blocks.end(),
                     [](const SpectralBlock& blk) {
                       return blk.pbh_margin > 1e-4;
                     });
}

}  // namespace

TestSystem random_controllable(std::mt19937_64& rng,
                               const std::vector<Plane>& planes, Index m,
                               double p_complex) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::vector<Complex> reps = draw_spectrum(rng, planes, p_complex, {});
    const Mat d = from_spectrum(reps);
    const Index n = d.rows();
    const Mat s = random_similarity(rng, n);
    TestSystem sys;
    sys.a0 = s * d * s.inverse();
    sys.b = random_normal(rng, n, m);
    sys.controllable = expand(reps);
    if (pair_controllable(sys.a0, sys.b)) return sys;
  }
  throw std::runtime_error("could not draw a controllable system");
}

TestSystem planted_uncontrollable(std::mt19937_64& rng,
                                  const std::vector<Plane>& controllable,
                                  const std::vector<Plane>& uncontrollable,
                                  Index m, double p_complex) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::vector<Complex> ureps =
        draw_spectrum(rng, uncontrollable, p_complex, {});
    const std::vector<Complex> creps =
        draw_spectrum(rng, controllable, p_complex, ureps);
    const Mat ac = from_spectrum(creps);
    const Mat au = from_spectrum(ureps);
    const Index nc = ac.rows(), nu = au.rows(), n = nc + nu;
    Mat blk = Mat::Zero(n, n);
    blk.topLeftCorner(nc, nc) = ac;
    blk.topRightCorner(nc, nu) = 0.5 * random_normal(rng, nc, nu);
    blk.bottomRightCorner(nu, nu) = au;
    Mat bb = Mat::Zero(n, m);
    const Mat bc = random_normal(rng, nc, m);
    bb.topRows(nc) = bc;
    if (nc > 0 && !pair_controllable(ac, bc)) continue;
    const Mat s = random_similarity(rng, n);
    TestSystem sys;
    sys.a0 = s * blk * s.inverse();
    sys.b = s * bb;
    sys.controllable = expand(creps);
    sys.uncontrollable = expand(ureps);
    return sys;
  }
  throw std::runtime_error("could not draw a planted system");
}

HomogeneousForm homogeneous(const Mat& a0, const Mat& b) {
  return solve_base_are(RiccatiProblem(a0, b), BaseKind::kGiven,
                        SymMat::zero(a0.rows()));
}

HomogeneousForm worked_example() {
  Mat a = Mat::Zero(3, 3);
  a.diagonal() << 1.0, 2.0, -4.0;
  return homogeneous(a, Mat::Ones(3, 1));
}

Mat embed(const Mat& coords, const std::vector<Index>& at, Index n) {
  Mat out = Mat::Zero(n, n);
  for (std::size_t i = 0; i < at.size(); ++i) {
    for (std::size_t j = 0; j < at.size(); ++j) {
      out(at[i], at[j]) = coords(static_cast<Index>(i), static_cast<Index>(j));
    }
  }
  return out;
}

}  // namespace ari::testing
