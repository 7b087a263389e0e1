#include "semirate/opcalc.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "semirate/errors.hpp"
#include "semirate/quadrature.hpp"

namespace semirate {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroSnap = 1e-13;

Complex principal_pow(Complex z, double alpha) {
  if (z == Complex(0.0, 0.0)) {
    if (alpha > 0.0) return {0.0, 0.0};
    throw ZeroEigenvalueError("zero eigenvalue under a nonpositive power");
  }
  return std::pow(z, alpha);
}
}  // namespace

Generator Generator::from_matrix(Matrix A, double kappa_cap) {
  Generator g;
  g.A_ = std::move(A);
  const int n = g.dim();
  if (n == 0 || g.A_.rows() != g.A_.cols())
    throw ConfigError("Generator: square nonempty matrix required");

  g.diagonal_ = g.A_.isDiagonal(0.0);
  if (g.diagonal_) {
    g.lambda_ = g.A_.diagonal();
    g.V_ = Matrix::Identity(n, n);
    g.Vinv_ = g.V_;
    g.cond_V_ = 1.0;
    g.normal_ = true;
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(g.A_);
    if (es.info() != Eigen::Success)
      throw DefectiveMatrixError("eigendecomposition failed");
    g.lambda_ = es.eigenvalues();
    g.V_ = es.eigenvectors();
    Eigen::JacobiSVD<Matrix> svd(g.V_);
    double smin = svd.singularValues()(n - 1);
    double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > kappa_cap)
      throw DefectiveMatrixError("eigenvector matrix condition number over cap");
    g.cond_V_ = smax / smin;
    g.Vinv_ = g.V_.inverse();
    double scale = g.A_.norm();
    g.normal_ = (g.A_ * g.A_.adjoint() - g.A_.adjoint() * g.A_).norm() <=
                1e-12 * scale * scale + 1e-300;
  }

  for (int i = 0; i < n; ++i) {
    Complex& l = g.lambda_(i);
    if (std::abs(l) < kZeroSnap) {
      l = Complex(0.0, 0.0);
      g.injective_ = false;
    }
    if (l.real() < -1e-12)
      throw UnboundedSemigroupError("spectrum leaves the closed right half-plane");
  }
  return g;
}

Generator Generator::diagonal(const Vector& eigenvalues) {
  Matrix A = eigenvalues.asDiagonal();
  return from_matrix(std::move(A));
}

Matrix Generator::apply(const std::function<Complex(Complex)>& f) const {
  const int n = dim();
  Vector fv(n);
  for (int i = 0; i < n; ++i) fv(i) = f(lambda_(i));
  if (diagonal_) return fv.asDiagonal();
  return V_ * fv.asDiagonal() * Vinv_;
}

Vector Generator::apply_vec(const std::function<Complex(Complex)>& f,
                            const Vector& x) const {
  const int n = dim();
  Vector fv(n);
  for (int i = 0; i < n; ++i) fv(i) = f(lambda_(i));
  if (diagonal_) return fv.asDiagonal() * x;
  return V_ * (fv.asDiagonal() * (Vinv_ * x));
}

Matrix semigroup(const Generator& A, double t) {
  if (t < 0.0) throw ConfigError("semigroup: t >= 0 required");
  return A.apply([t](Complex l) { return std::exp(-t * l); });
}

Matrix frac_power(const Generator& A, double alpha) {
  if (std::abs(alpha) > 2.0 + 1e-12)
    throw ConfigError("frac_power: |alpha| <= 2 required");
  if (alpha <= 0.0 && !A.injective())
    throw ZeroEigenvalueError("frac_power: inverse powers need injectivity");
  return A.apply([alpha](Complex l) { return principal_pow(l, alpha); });
}

Matrix phi_of_matrix(const BernsteinFunction& phi, const Generator& A) {
  return A.apply([&phi](Complex l) { return phi.eval(l); });
}

Matrix subordinated_semigroup(const BernsteinFunction& phi, const Generator& A,
                              double t) {
  if (t < 0.0) throw ConfigError("subordinated_semigroup: t >= 0 required");
  return A.apply([&phi, t](Complex l) { return std::exp(-t * phi.eval(l)); });
}

Matrix delta_op(const BernsteinFunction& phi, const Generator& A, double t, int n) {
  if (n < 1 || !(t > 0.0)) throw ConfigError("delta_op: t > 0, n >= 1 required");
  return A.apply([&phi, t, n](Complex l) {
    return std::exp(-static_cast<double>(n) * t * phi.eval(l / static_cast<double>(n))) -
           std::exp(-t * l);
  });
}

Matrix e_op(const BernsteinFunction& phi, const Generator& A, double t, int n) {
  if (n < 1 || !(t > 0.0)) throw ConfigError("e_op: t > 0, n >= 1 required");
  return A.apply([&phi, t, n](Complex l) {
    return std::exp(-static_cast<double>(n) * phi.eval(t * l / static_cast<double>(n))) -
           std::exp(-t * l);
  });
}

double spectral_norm(const Matrix& M) {
  if (M.rows() == 1 && M.cols() == 1) return std::abs(M(0, 0));
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

double max_block_norm(const Matrix& P, const Matrix& Q) {
  // fixed-point ascent for f(y) = ||P^H y|| + ||Q^H y|| on the unit sphere,
  // with restarts; any iterate is a certified lower bound of the norm
  const int n = static_cast<int>(P.rows());
  Matrix Ph = P.adjoint(), Qh = Q.adjoint();
  double best = 0.0;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int restart = 0; restart < 6; ++restart) {
    Vector y(n);
    if (restart == 0) {
      Eigen::JacobiSVD<Matrix> svd(Ph, Eigen::ComputeThinV);
      y = svd.matrixV().col(0);
    } else if (restart == 1) {
      Eigen::JacobiSVD<Matrix> svd(Qh, Eigen::ComputeThinV);
      y = svd.matrixV().col(0);
    } else {
      for (int i = 0; i < n; ++i) y(i) = Complex(g(rng), g(rng));
      y.normalize();
    }
    double prev = 0.0;
    for (int it = 0; it < 200; ++it) {
      Vector py = Ph * y, qy = Qh * y;
      double np = py.norm(), nq = qy.norm();
      double f = np + nq;
      best = std::max(best, f);
      Vector grad = Vector::Zero(n);
      if (np > 1e-300) grad += P * (py / np);
      if (nq > 1e-300) grad += Q * (qy / nq);
      double gn = grad.norm();
      if (gn < 1e-300) break;
      y = grad / gn;
      if (std::abs(f - prev) < 1e-13 * std::max(1.0, f)) break;
      prev = f;
    }
  }
  return best;
}

Matrix expm_pade(const Matrix& M) {
  // Pade(13) with scaling and squaring
  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};
  const int n = static_cast<int>(M.rows());
  double nrm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  Matrix A = M;
  if (nrm > 5.4) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / 5.4))));
    A /= std::pow(2.0, squarings);
  }
  Matrix I = Matrix::Identity(n, n);
  Matrix A2 = A * A, A4 = A2 * A2, A6 = A2 * A4;
  Matrix U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 +
                  b[5] * A4 + b[3] * A2 + b[1] * I);
  Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 +
             b[2] * A2 + b[0] * I;
  Matrix R = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < squarings; ++i) R = R * R;
  return R;
}

SemigroupBounds certify_bounds(const Generator& A, double t_max, int grid) {
  SemigroupBounds out;
  out.grid = grid;
  const auto& ev = A.eigenvalues();
  double min_re = kInf;
  bool boundary_nonzero = false;  // Re l = 0 with l != 0
  for (int i = 0; i < A.dim(); ++i) {
    Complex l = ev(i);
    if (l != Complex(0, 0)) min_re = std::min(min_re, l.real());
    if (std::abs(l.real()) <= 1e-14 && std::abs(l) > 0.0) boundary_nonzero = true;
  }

  if (A.normal()) {
    out.M0 = 1.0;  // spectral theorem, attained at t = 0
    out.tail_method = "normal-exact";
    if (boundary_nonzero) {
      out.M1 = kInf;
      out.analytic = false;
    } else {
      double m1 = 0.0;
      for (int i = 0; i < A.dim(); ++i) {
        Complex l = ev(i);
        if (l == Complex(0, 0)) continue;
        m1 = std::max(m1, std::abs(l) / (std::exp(1.0) * l.real()));
      }
      out.M1 = m1;
      out.analytic = true;
    }
    out.M = std::max(2.0 * out.M0, out.analytic ? out.M1 : 0.0);
    return out;
  }

  // general diagonalizable path: log-spaced grid sup with golden refinement
  auto norm_at = [&](double t) { return spectral_norm(semigroup(A, t)); };
  auto m1_at = [&](double t) {
    return spectral_norm(A.apply([t](Complex l) { return t * l * std::exp(-t * l); }));
  };
  auto grid_sup = [&](const std::function<double(double)>& f) {
    double lo = 1e-4, best = f(0.0) * 0.0;  // f(0) = 0 for m1; handled below
    std::vector<double> ts;
    for (int i = 0; i <= grid; ++i)
      ts.push_back(lo * std::pow(t_max / lo, double(i) / grid));
    double sup = 0.0, arg = ts[0];
    for (double t : ts) {
      double v = f(t);
      if (v > sup) { sup = v; arg = t; }
    }
    double a = arg / 2.0, b = std::min(arg * 2.0, t_max);
    double tstar = quad::golden_min([&](double t) { return -f(t); }, a, b, 1e-8);
    sup = std::max(sup, f(tstar));
    (void)best;
    return sup;
  };

  out.M0 = std::max(1.0, grid_sup(norm_at));
  out.tail_method = "grid+golden";
  if (boundary_nonzero) {
    out.M1 = kInf;
    out.analytic = false;
  } else {
    out.M1 = grid_sup(m1_at);
    out.analytic = true;
    // spectral-abscissa tail check: kappa(V) e^{-w t_max} must be dominated
    if (min_re > 0.0) {
      double tail0 = A.condition_number() * std::exp(-min_re * t_max);
      if (tail0 > out.M0)
        throw UnboundedSemigroupError("certify_bounds: t_max too small for tail");
      out.tail_method = "grid+golden+abscissa";
    }
  }
  out.M = std::max(2.0 * out.M0, out.analytic ? out.M1 : 0.0);
  return out;
}

DoubledGenerator::DoubledGenerator(const Generator& base) : base_(base) {
  // construction check: the block identity against an independent expm
  for (double t : {0.5, 1.0, 2.0}) {
    Matrix direct = expm_pade(-t * block());
    Matrix viaid = semigroup_block(t);
    double scale = spectral_norm(semigroup(base_, t));
    if (spectral_norm(direct - viaid) > 1e-9 * std::max(scale, 1.0) * 10.0)
      throw NumericalError("doubled generator: block identity check failed");
  }
}

Matrix DoubledGenerator::block() const {
  const int n = base_.dim();
  Matrix B = Matrix::Zero(2 * n, 2 * n);
  B.topLeftCorner(n, n) = base_.matrix();
  B.topRightCorner(n, n) = base_.matrix();
  B.bottomRightCorner(n, n) = base_.matrix();
  return B;
}

Matrix DoubledGenerator::semigroup_block(double t) const {
  const int n = base_.dim();
  Matrix S = semigroup(base_, t);
  Matrix tAS = base_.apply([t](Complex l) { return t * l * std::exp(-t * l); });
  Matrix B = Matrix::Zero(2 * n, 2 * n);
  B.topLeftCorner(n, n) = S;
  B.topRightCorner(n, n) = -tAS;
  B.bottomRightCorner(n, n) = S;
  return B;
}

Matrix DoubledGenerator::subordinated_block(const BernsteinFunction& phi,
                                            double t) const {
  const int n = base_.dim();
  Matrix S = subordinated_semigroup(phi, base_, t);
  Matrix UR = base_.apply([&phi, t](Complex l) {
    return -t * l * phi.derivative(l) * std::exp(-t * phi.eval(l));
  });
  Matrix B = Matrix::Zero(2 * n, 2 * n);
  B.topLeftCorner(n, n) = S;
  B.topRightCorner(n, n) = UR;
  B.bottomRightCorner(n, n) = S;
  return B;
}

Generator diag_imag(int k, double s_max) {
  if (k < 1 || !(s_max > 0.0)) throw ConfigError("diag-imag: k >= 1, s_max > 0");
  Vector ev(k);
  double s_min = s_max * 1e-3;
  for (int i = 0; i < k; ++i) {
    double s = s_min * std::pow(s_max / s_min, k == 1 ? 0.0 : double(i) / (k - 1));
    ev(i) = Complex(0.0, s);
  }
  return Generator::diagonal(ev);
}

Generator diag_pos(int k, double s_max) {
  if (k < 1 || !(s_max > 0.0)) throw ConfigError("diag-pos: k >= 1, s_max > 0");
  Vector ev(k);
  double s_min = s_max * 1e-3;
  for (int i = 0; i < k; ++i) {
    double s = s_min * std::pow(s_max / s_min, k == 1 ? 0.0 : double(i) / (k - 1));
    ev(i) = Complex(s, 0.0);
  }
  return Generator::diagonal(ev);
}

Generator analytic_sector(int k, double angle_deg) {
  if (k < 1 || !(angle_deg > 0.0) || angle_deg >= 90.0)
    throw ConfigError("analytic-sector: k >= 1, angle in (0, 90) required");
  Vector ev(k);
  double a = angle_deg * M_PI / 180.0;
  for (int i = 0; i < k; ++i) {
    double r = 0.01 * std::pow(1000.0, k == 1 ? 0.0 : double(i) / (k - 1));
    double th = (k == 1 ? 0.0 : (2.0 * double(i) / (k - 1) - 1.0)) * a;
    ev(i) = std::polar(r, th);
  }
  return Generator::diagonal(ev);
}

Generator random_normal(int k, std::uint64_t seed) {
  if (k < 1) throw ConfigError("random-normal: k >= 1 required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // unitary from QR of a Ginibre sample
  Matrix G(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) G(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Vector ev(k);
  for (int i = 0; i < k; ++i) {
    double r = 0.1 * std::pow(100.0, u(rng));
    double th = (2.0 * u(rng) - 1.0) * (M_PI / 2.0 - 0.05);
    ev(i) = std::polar(r, th);
  }
  Matrix A = Q * ev.asDiagonal() * Q.adjoint();
  return Generator::from_matrix(std::move(A));
}

Generator generator_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("matrix JSON parse error: ") + e.what());
  }
  int n = j.at("n").get<int>();
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != n * n)
    throw ConfigError("matrix JSON: entries must hold n*n [re,im] pairs");
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const auto& e = entries.at(i * n + k);
      A(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return Generator::from_matrix(std::move(A));
}

std::string generator_to_json_text(const Generator& A) {
  nlohmann::json j;
  j["n"] = A.dim();
  auto entries = nlohmann::json::array();
  for (int i = 0; i < A.dim(); ++i)
    for (int k = 0; k < A.dim(); ++k)
      entries.push_back({A.matrix()(i, k).real(), A.matrix()(i, k).imag()});
  j["entries"] = entries;
  return j.dump();
}

Generator parse_matrix_spec(const std::string& spec) {
  auto open = spec.find('(');
  if (open != std::string::npos && spec.back() == ')') {
    std::string name = spec.substr(0, open);
    std::string args = spec.substr(open + 1, spec.size() - open - 2);
    std::vector<std::string> parts;
    size_t pos = 0;
    while (pos <= args.size()) {
      auto comma = args.find(',', pos);
      if (comma == std::string::npos) comma = args.size();
      parts.push_back(args.substr(pos, comma - pos));
      pos = comma + 1;
    }
    auto need = [&](size_t k) {
      if (parts.size() != k)
        throw ConfigError("matrix family " + name + ": wrong argument count");
    };
    try {
      if (name == "diag-imag") { need(2); return diag_imag(std::stoi(parts[0]), std::stod(parts[1])); }
      if (name == "diag-pos") { need(2); return diag_pos(std::stoi(parts[0]), std::stod(parts[1])); }
      if (name == "analytic-sector") { need(2); return analytic_sector(std::stoi(parts[0]), std::stod(parts[1])); }
      if (name == "random-normal") { need(2); return random_normal(std::stoi(parts[0]), std::stoull(parts[1])); }
    } catch (const std::invalid_argument&) {
      throw ConfigError("matrix family " + name + ": bad numeric argument");
    }
    throw ConfigError("unknown matrix family: " + name);
  }
  if (!std::filesystem::exists(spec))
    throw ConfigError("matrix spec is neither a family nor a file: " + spec);
  std::ifstream in(spec);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return generator_from_json_text(text);
}

Vector random_unit_vector(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector y(dim);
  for (int i = 0; i < dim; ++i) y(i) = Complex(g(rng), g(rng));
  y.normalize();
  return y;
}

}  // namespace semirate
