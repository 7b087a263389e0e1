#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <string>

#include "semirate/bernstein.hpp"

namespace semirate {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Dense generator with cached eigendecomposition. Only diagonalizable
// matrices with spectrum in the closed right half-plane are admitted;
// eigenvalues below 1e-13 in modulus are snapped to zero and recorded in
// the injectivity flag.
class Generator {
 public:
  static Generator from_matrix(Matrix A, double kappa_cap = 1e6);
  static Generator diagonal(const Vector& eigenvalues);

  int dim() const { return static_cast<int>(A_.rows()); }
  const Matrix& matrix() const { return A_; }
  const Vector& eigenvalues() const { return lambda_; }
  double condition_number() const { return cond_V_; }
  bool injective() const { return injective_; }
  bool normal() const { return normal_; }
  bool diagonal_form() const { return diagonal_; }

  // V f(Lambda) V^{-1}
  Matrix apply(const std::function<Complex(Complex)>& f) const;
  Vector apply_vec(const std::function<Complex(Complex)>& f, const Vector& x) const;

 private:
  Matrix A_, V_, Vinv_;
  Vector lambda_;
  double cond_V_ = 1.0;
  bool injective_ = true, normal_ = true, diagonal_ = false;
};

struct SemigroupBounds {
  double M0 = 1.0;      // sup_t ||e^{-tA}||
  double M1 = 0.0;      // sup_t ||tA e^{-tA}||, +inf if unbounded
  double M = 2.0;       // max(2 M0, M1)
  bool analytic = false;
  int grid = 0;
  std::string tail_method;
};

Matrix semigroup(const Generator& A, double t);
Matrix frac_power(const Generator& A, double alpha);  // principal branch, |alpha| <= 2
Matrix phi_of_matrix(const BernsteinFunction& phi, const Generator& A);
Matrix subordinated_semigroup(const BernsteinFunction& phi, const Generator& A,
                              double t);
// Delta_{t,n}(A) = e^{-nt phi(A/n)} - e^{-tA}
Matrix delta_op(const BernsteinFunction& phi, const Generator& A, double t, int n);
// E_{t,n}(A) = e^{-n phi(tA/n)} - e^{-tA}
Matrix e_op(const BernsteinFunction& phi, const Generator& A, double t, int n);

SemigroupBounds certify_bounds(const Generator& A, double t_max = 200.0,
                               int grid = 512);

// X + X doubling: block [[A, A], [0, A]]; not diagonalizable, so its
// semigroup comes from the block identity applied to A's spectral data.
class DoubledGenerator {
 public:
  explicit DoubledGenerator(const Generator& base);
  const Generator& base() const { return base_; }
  Matrix block() const;                 // 2n x 2n matrix
  Matrix semigroup_block(double t) const;
  // subordinated block: [[S, -tA phi'(A) S], [0, S]], S = e^{-t phi(A)}
  Matrix subordinated_block(const BernsteinFunction& phi, double t) const;

 private:
  Generator base_;
};

double spectral_norm(const Matrix& M);
// operator norm of the row block [P Q] on the max-normed direct sum:
// sup_{||y||_2 = 1} (||P^H y|| + ||Q^H y||)
double max_block_norm(const Matrix& P, const Matrix& Q);

// scaling-and-squaring Pade approximant of e^{M}; independent of the
// spectral route, used for cross-checks
Matrix expm_pade(const Matrix& M);

// built-in families
Generator diag_imag(int k, double s_max);          // i s, s log-spaced
Generator diag_pos(int k, double s_max);           // positive reals, log-spaced
Generator analytic_sector(int k, double angle_deg);
Generator random_normal(int k, std::uint64_t seed);

Generator generator_from_json_text(const std::string& text);
std::string generator_to_json_text(const Generator& A);
// "diag-imag(64,10)" etc., or a path to a JSON matrix file
Generator parse_matrix_spec(const std::string& spec);

Vector random_unit_vector(int dim, std::uint64_t seed);

}  // namespace semirate
