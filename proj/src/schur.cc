#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include "ari/linalg.hpp"

namespace ari {
namespace {

std::vector<SchurBlock> extract_blocks(const Mat& t) {
  std::vector<SchurBlock> blocks;
  const Index n = t.rows();
  Index i = 0;
  while (i < n) {
    SchurBlock b;
    b.offset = i;
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      b.size = 2;
      const double a = t(i, i), bb = t(i, i + 1), c = t(i + 1, i),
                   d = t(i + 1, i + 1);
      const double half = (a - d) / 2.0;
      const double disc = half * half + bb * c;
      // dgees/dtrexc keep 2x2 blocks only for complex pairs, so disc < 0.
      b.lambda = Complex((a + d) / 2.0, std::sqrt(std::max(0.0, -disc)));
      i += 2;
    } else {
      b.size = 1;
      b.lambda = Complex(t(i, i), 0.0);
      i += 1;
    }
    blocks.push_back(b);
  }
  return blocks;
}

// Largest-magnitude entry of every Schur vector is made positive.
void normalize_signs(OrderedSchur& s) {
  const Index n = s.u.rows();
  for (Index j = 0; j < n; ++j) {
    const double peak = s.u.col(j).cwiseAbs().maxCoeff();
    Index at = 0;
    while (std::abs(s.u(at, j)) < peak * (1.0 - 1e-12)) ++at;
    if (s.u(at, j) < 0.0) {
      s.u.col(j) *= -1.0;
      s.t.row(j) *= -1.0;
      s.t.col(j) *= -1.0;
    }
  }
}

Index offset_of(const std::vector<SchurBlock>& seq, std::size_t pos) {
  Index off = 0;
  for (std::size_t k = 0; k < pos; ++k) off += seq[k].size;
  return off;
}

bool precedes(const SchurBlock& x, std::size_t xpos, const SchurBlock& y,
              std::size_t ypos, double tie_tol) {
  if (x.cls != y.cls) return x.cls < y.cls;
  if (std::abs(x.lambda.real() - y.lambda.real()) > tie_tol) {
    return x.lambda.real() < y.lambda.real();
  }
  if (std::abs(x.lambda.imag() - y.lambda.imag()) > tie_tol) {
    return x.lambda.imag() < y.lambda.imag();
  }
  return xpos < ypos;
}

}  // namespace

void reorder_schur(OrderedSchur& schur, std::span<const std::size_t> order) {
  const std::size_t nb = schur.blocks.size();
  std::vector<bool> listed(nb, false);
  std::vector<std::size_t> target;
  for (std::size_t id : order) {
    if (id >= nb || listed[id]) {
      throw Error(ErrorKind::kInvalidInput,
                  "block order has an invalid or repeated index");
    }
    listed[id] = true;
    target.push_back(id);
  }
  for (std::size_t id = 0; id < nb; ++id) {
    if (!listed[id]) target.push_back(id);
  }

  const lapack_int n = static_cast<lapack_int>(schur.t.rows());
  std::vector<std::size_t> ids(nb);
  for (std::size_t k = 0; k < nb; ++k) ids[k] = k;
  std::vector<SchurBlock> seq = schur.blocks;

  for (std::size_t pos = 0; pos < nb; ++pos) {
    const auto it = std::find(ids.begin() + static_cast<std::ptrdiff_t>(pos),
                              ids.end(), target[pos]);
    const std::size_t j = static_cast<std::size_t>(it - ids.begin());
    if (j == pos) continue;

    lapack_int ifst = static_cast<lapack_int>(offset_of(seq, j)) + 1;
    lapack_int ilst = static_cast<lapack_int>(offset_of(seq, pos)) + 1;
    const lapack_int info =
        LAPACKE_dtrexc(LAPACK_COL_MAJOR, 'V', n, schur.t.data(), n,
                       schur.u.data(), n, &ifst, &ilst);

    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = pos; k < j; ++k) {
      gap = std::min(gap, std::abs(seq[j].lambda - seq[k].lambda));
    }
    if (info != 0) {
      throw DegenerateSpectrumError(
          "Schur block swap rejected (eigenvalue cluster gap " +
              std::to_string(gap) + ")",
          gap);
    }

    std::rotate(ids.begin() + static_cast<std::ptrdiff_t>(pos),
                ids.begin() + static_cast<std::ptrdiff_t>(j),
                ids.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    std::rotate(seq.begin() + static_cast<std::ptrdiff_t>(pos),
                seq.begin() + static_cast<std::ptrdiff_t>(j),
                seq.begin() + static_cast<std::ptrdiff_t>(j) + 1);

    const std::vector<SchurBlock> now = extract_blocks(schur.t);
    bool same = now.size() == seq.size();
    for (std::size_t k = 0; same && k < seq.size(); ++k) {
      same = now[k].size == seq[k].size;
    }
    if (!same) {
      throw DegenerateSpectrumError(
          "Schur block swap changed the block structure (cluster gap " +
              std::to_string(gap) + ")",
          gap);
    }
  }

  normalize_signs(schur);
  std::vector<SchurBlock> fresh = extract_blocks(schur.t);
  for (std::size_t k = 0; k < nb; ++k) fresh[k].cls = seq[k].cls;
  schur.blocks = std::move(fresh);
}

OrderedSchur real_schur_ordered(const Mat& a, const EigenClassifier& classify,
                                double tie_tol) {
  require_finite(a, "matrix");
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kInvalidInput, "Schur form needs a square matrix");
  }
  const lapack_int n = static_cast<lapack_int>(a.rows());
  OrderedSchur s;
  s.t = a;
  s.u.resize(n, n);
  std::vector<double> wr(static_cast<std::size_t>(n));
  std::vector<double> wi(static_cast<std::size_t>(n));
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, s.t.data(), n,
                    &sdim, wr.data(), wi.data(), s.u.data(), n);
  if (info != 0) {
    throw Error(ErrorKind::kInvalidInput,
                "real Schur iteration failed (dgees info " +
                    std::to_string(info) + ")");
  }
  s.blocks = extract_blocks(s.t);
  for (auto& b : s.blocks) b.cls = classify(b.lambda);

  // Selection sort: the tolerance-aware comparison is not transitive, so a
  // linear scan for the first block is used instead of std::sort.
  const std::size_t nb = s.blocks.size();
  std::vector<std::size_t> remaining(nb);
  for (std::size_t k = 0; k < nb; ++k) remaining[k] = k;
  std::vector<std::size_t> order;
  while (!remaining.empty()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < remaining.size(); ++k) {
      if (precedes(s.blocks[remaining[k]], remaining[k],
                   s.blocks[remaining[best]], remaining[best], tie_tol)) {
        best = k;
      }
    }
    order.push_back(remaining[best]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  reorder_schur(s, order);
  return s;
}

}  // namespace ari
