#include "sldskit/mat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sldskit/kernels.hpp"

namespace sldskit {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Mat::Mat(int rows, int cols, std::initializer_list<double> init) : Mat(rows, cols) {
  require(static_cast<std::size_t>(rows) * cols == init.size(), "initializer size mismatch");
  std::copy(init.begin(), init.end(), a_.begin());
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diagonal(const Vec& d) {
  Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

Mat Mat::scaled_identity(int n, double s) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols() == b.rows(), "matmul dimension mismatch");
  Mat c(a.rows(), b.cols());
  kernels::active().matmul(c.data(), a.data(), b.data(), a.rows(), a.cols(), b.cols());
  return c;
}

Vec operator*(const Mat& a, const Vec& x) {
  require(a.cols() == static_cast<int>(x.size()), "matvec dimension mismatch");
  Vec y(a.rows());
  kernels::active().matvec(y.data(), a.data(), x.data(), a.rows(), a.cols());
  return y;
}

Mat operator+(const Mat& a, const Mat& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix add dimension mismatch");
  Mat c = a;
  const double* pb = b.data();
  double* pc = c.data();
  for (std::size_t i = 0, n = static_cast<std::size_t>(a.rows()) * a.cols(); i < n; ++i) pc[i] += pb[i];
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sub dimension mismatch");
  Mat c = a;
  const double* pb = b.data();
  double* pc = c.data();
  for (std::size_t i = 0, n = static_cast<std::size_t>(a.rows()) * a.cols(); i < n; ++i) pc[i] -= pb[i];
  return c;
}

Mat operator*(double s, const Mat& a) {
  Mat c = a;
  double* pc = c.data();
  for (std::size_t i = 0, n = static_cast<std::size_t>(a.rows()) * a.cols(); i < n; ++i) pc[i] *= s;
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Mat multiply_nt(const Mat& a, const Mat& b) {
  require(a.cols() == b.cols(), "multiply_nt dimension mismatch");
  Mat c(a.rows(), b.rows());
  kernels::active().matmul_nt(c.data(), a.data(), b.data(), a.rows(), a.cols(), b.rows());
  return c;
}

Mat sandwich(const Mat& a, const Mat& p) {
  return symmetrized(multiply_nt(a * p, a));
}

Mat symmetrized(const Mat& m) {
  require(m.rows() == m.cols(), "symmetrized needs a square matrix");
  Mat s = m;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  return s;
}

double trace(const Mat& m) {
  double t = 0.0;
  for (int i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
  return t;
}

double max_abs(const Mat& m) {
  double v = 0.0;
  const double* p = m.data();
  for (std::size_t i = 0, n = static_cast<std::size_t>(m.rows()) * m.cols(); i < n; ++i)
    v = std::max(v, std::abs(p[i]));
  return v;
}

double asymmetry(const Mat& m) {
  double v = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < i; ++j) v = std::max(v, std::abs(m(i, j) - m(j, i)));
  return v;
}

Vec operator+(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector add size mismatch");
  Vec c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

Vec operator-(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector sub size mismatch");
  Vec c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

Vec operator*(double s, const Vec& a) {
  Vec c = a;
  for (double& v : c) v *= s;
  return c;
}

double dot(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "dot size mismatch");
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double norm_sq(const Vec& a) { return kernels::active().sum_sq(a.data(), a.size()); }

Cholesky::Cholesky(const Mat& m, CholeskyMode mode) : l_(m.rows(), m.cols()) {
  require(m.rows() == m.cols(), "cholesky needs a square matrix");
  const int n = m.rows();
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
  const double tol = 1e-12 * std::max(max_diag, 1.0);

  double max_pivot = 0.0, min_pivot = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (d > tol) {
      const double ljj = std::sqrt(d);
      l_(j, j) = ljj;
      max_pivot = std::max(max_pivot, d);
      min_pivot = std::min(min_pivot, d);
      for (int i = j + 1; i < n; ++i) {
        double s = m(i, j);
        for (int k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
        l_(i, j) = s / ljj;
      }
    } else {
      // Pivot at (or numerically below) zero. A PSD matrix must then have a
      // (residual) zero column; anything else is indefinite.
      if (d < -tol && mode == CholeskyMode::AllowSingular) {
        std::ostringstream os;
        os << "matrix is not positive semi-definite (pivot " << d << " at index " << j << ")";
        throw NumericalError(os.str());
      }
      if (mode == CholeskyMode::Strict) {
        std::ostringstream os;
        os << "matrix is not positive definite (pivot " << d << " at index " << j
           << ", pivot ratio " << (max_pivot > 0.0 ? d / max_pivot : d) << ")";
        throw NumericalError(os.str());
      }
      l_(j, j) = 0.0;
      for (int i = j + 1; i < n; ++i) {
        double s = m(i, j);
        for (int k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
        if (std::abs(s) > 1e-8 * std::max(max_diag, 1.0)) {
          std::ostringstream os;
          os << "matrix is not positive semi-definite (zero pivot at index " << j
             << " with nonzero column residual " << s << ")";
          throw NumericalError(os.str());
        }
        l_(i, j) = 0.0;
      }
    }
  }
}

double Cholesky::log_det() const {
  double s = 0.0;
  for (int i = 0; i < l_.rows(); ++i) s += std::log(l_(i, i));
  return 2.0 * s;
}

Vec Cholesky::forward_solve(const Vec& b) const {
  const int n = l_.rows();
  require(static_cast<int>(b.size()) == n, "forward_solve size mismatch");
  Vec w(b);
  for (int i = 0; i < n; ++i) {
    double s = w[i];
    for (int k = 0; k < i; ++k) s -= l_(i, k) * w[k];
    if (l_(i, i) == 0.0) {
      if (std::abs(s) > 0.0) throw NumericalError("singular factor in forward_solve");
      w[i] = 0.0;
    } else {
      w[i] = s / l_(i, i);
    }
  }
  return w;
}

Vec Cholesky::solve(const Vec& b) const {
  const int n = l_.rows();
  Vec w = forward_solve(b);
  for (int i = n - 1; i >= 0; --i) {
    double s = w[i];
    for (int k = i + 1; k < n; ++k) s -= l_(k, i) * w[k];
    w[i] = (l_(i, i) == 0.0) ? 0.0 : s / l_(i, i);
  }
  return w;
}

Mat Cholesky::solve(const Mat& b) const {
  const int n = l_.rows();
  require(b.rows() == n, "solve dimension mismatch");
  Mat x = b;
  for (int c = 0; c < b.cols(); ++c) {
    Vec col(n);
    for (int i = 0; i < n; ++i) col[i] = b(i, c);
    col = solve(col);
    for (int i = 0; i < n; ++i) x(i, c) = col[i];
  }
  return x;
}

Vec Cholesky::lower_times(const Vec& z) const {
  const int n = l_.rows();
  require(static_cast<int>(z.size()) == n, "lower_times size mismatch");
  Vec y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k <= i; ++k) s += l_(i, k) * z[k];
    y[i] = s;
  }
  return y;
}

Vec symmetric_eigenvalues(const Mat& m) {
  require(m.rows() == m.cols(), "symmetric_eigenvalues needs a square matrix");
  Mat a = symmetrized(m);
  const int n = a.rows();
  const double scale = std::max(max_abs(a), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= 1e-14 * scale) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vec ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace sldskit
