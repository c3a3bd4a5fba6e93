#include "capx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "capx/error.hpp"
#include "capx/kernels.hpp"

namespace capx {

std::vector<double> Matrix::apply(std::span<const double> c) const {
  const auto& k = kernels::active();
  std::vector<double> y(rows_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) k.axpy(c[j], col(j), y);
  return y;
}

std::vector<double> weighted_least_squares(const Matrix& design, std::span<const double> rhs,
                                           std::span<const double> weights) {
  const std::size_t m = design.rows();
  const std::size_t n = design.cols();
  if (n == 0) throw UsageError("weighted_least_squares: design has no columns");
  if (m < n) throw UsageError("weighted_least_squares: fewer rows than columns");
  if (rhs.size() != m || weights.size() != m)
    throw UsageError("weighted_least_squares: rhs/weights length does not match design rows");

  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw UsageError("weighted_least_squares: weights must be finite and nonnegative");
    wsum += w;
  }
  if (wsum == 0.0) throw UsageError("weighted_least_squares: all weights are zero");

  const auto& kern = kernels::active();

  std::vector<double> sw(m);
  for (std::size_t i = 0; i < m; ++i) sw[i] = std::sqrt(weights[i]);

  Matrix a(m, n);
  std::vector<double> scale(n);
  std::vector<std::size_t> zero_cols;
  for (std::size_t j = 0; j < n; ++j) {
    auto dst = a.col(j);
    auto src = design.col(j);
    for (std::size_t i = 0; i < m; ++i) dst[i] = sw[i] * src[i];
    const double nrm = std::sqrt(kern.dot(dst, dst));
    if (!std::isfinite(nrm)) throw UsageError("weighted_least_squares: non-finite design entry");
    scale[j] = nrm;
    if (nrm == 0.0) {
      zero_cols.push_back(j);
      continue;
    }
    for (auto& v : dst) v /= nrm;
  }
  if (!zero_cols.empty()) {
    std::ostringstream os;
    os << "weighted_least_squares: rank deficient (zero weighted column";
    for (auto j : zero_cols) os << ' ' << j;
    os << ")";
    throw DegeneracyError(os.str(), n - zero_cols.size(), zero_cols);
  }

  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = sw[i] * rhs[i];

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> rdiag(n);
  std::vector<double> v(m);
  const double tol = static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon();
  double r00 = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    // pivot: largest remaining trailing column norm
    std::size_t piv = k;
    double best = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      auto c = a.col(j).subspan(k);
      const double nn = kern.dot(c, c);
      if (nn > best) {
        best = nn;
        piv = j;
      }
    }
    if (piv != k) {
      std::swap_ranges(a.col(k).begin(), a.col(k).end(), a.col(piv).begin());
      std::swap(perm[k], perm[piv]);
    }
    const double alpha_norm = std::sqrt(best);
    if (k == 0) r00 = alpha_norm;
    if (alpha_norm <= tol * r00) {
      std::vector<std::size_t> offending;
      for (std::size_t j = k; j < n; ++j) offending.push_back(perm[j]);
      std::sort(offending.begin(), offending.end());
      std::ostringstream os;
      os << "weighted_least_squares: numerically rank deficient, rank estimate " << k
         << " of " << n << ", dependent columns:";
      for (auto j : offending) os << ' ' << j;
      throw DegeneracyError(os.str(), k, std::move(offending));
    }

    auto ck = a.col(k).subspan(k);
    const double alpha = ck[0] >= 0.0 ? -alpha_norm : alpha_norm;
    auto vk = std::span<double>(v).subspan(k, m - k);
    std::copy(ck.begin(), ck.end(), vk.begin());
    vk[0] -= alpha;
    const double vnorm2 = kern.dot(vk, vk);
    rdiag[k] = alpha;
    std::fill(ck.begin(), ck.end(), 0.0);
    ck[0] = alpha;
    if (vnorm2 > 0.0) {
      const double tau = 2.0 / vnorm2;
      for (std::size_t j = k + 1; j < n; ++j) {
        auto cj = a.col(j).subspan(k);
        kern.axpy(-tau * kern.dot(vk, cj), vk, cj);
      }
      auto yk = std::span<double>(y).subspan(k);
      kern.axpy(-tau * kern.dot(vk, yk), vk, yk);
    }
  }

  // back substitution on the upper triangle
  std::vector<double> z(n);
  for (std::size_t kk = n; kk-- > 0;) {
    double s = y[kk];
    for (std::size_t j = kk + 1; j < n; ++j) s -= a(kk, j) * z[j];
    z[kk] = s / rdiag[kk];
  }
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) c[perm[k]] = z[k] / scale[perm[k]];
  return c;
}

}  // namespace capx
