#ifndef SLDSKIT_MAT_HPP
#define SLDSKIT_MAT_HPP

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace sldskit {

using Vec = std::vector<double>;

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of doubles. Deliberately small: just what the
// filtering and error-propagation recursions need, with the O(n^2)/O(n^3)
// products routed through the dispatched kernels.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}
  Mat(int rows, int cols, std::initializer_list<double> init);

  static Mat identity(int n);
  static Mat diagonal(const Vec& d);
  static Mat scaled_identity(int n, double s);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  bool operator==(const Mat& o) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& x);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);

Mat transpose(const Mat& a);
// a * b^T without forming the transpose
Mat multiply_nt(const Mat& a, const Mat& b);
// a * p * a^T, re-symmetrized
Mat sandwich(const Mat& a, const Mat& p);
// (m + m^T) / 2
Mat symmetrized(const Mat& m);
double trace(const Mat& m);
double max_abs(const Mat& m);
// largest |m(i,j) - m(j,i)|
double asymmetry(const Mat& m);

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);
double dot(const Vec& a, const Vec& b);
double norm_sq(const Vec& a);

// Cholesky factorization m = L L^T of a symmetric matrix.
//
// Strict mode requires positive definiteness and throws NumericalError with
// a pivot-ratio diagnostic otherwise. AllowSingular accepts positive
// semi-definite input (zero pivots produce zero columns), which is what
// sampling from degenerate covariances needs.
enum class CholeskyMode { Strict, AllowSingular };

class Cholesky {
 public:
  Cholesky(const Mat& m, CholeskyMode mode = CholeskyMode::Strict);

  const Mat& lower() const { return l_; }
  double log_det() const;  // only meaningful for strictly positive pivots

  // solve m x = b
  Vec solve(const Vec& b) const;
  Mat solve(const Mat& b) const;
  // solve L w = b (half solve; w^T w = b^T m^-1 b)
  Vec forward_solve(const Vec& b) const;
  // L * z
  Vec lower_times(const Vec& z) const;

 private:
  Mat l_;
};

// Eigenvalues of a symmetric matrix via cyclic Jacobi sweeps, ascending.
Vec symmetric_eigenvalues(const Mat& m);

void require(bool cond, const std::string& msg);

}  // namespace sldskit

#endif  // SLDSKIT_MAT_HPP
