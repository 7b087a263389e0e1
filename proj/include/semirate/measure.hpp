#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace semirate {

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

// Signed measure on [0, inf): finite atoms plus a piecewise-smooth density
// with declared support and breakpoints (kinks / one-sided singularities).
// The density tail beyond `support_hi` is zero unless a power-law extension
// is declared (density ~ c s^{-tail_exponent} past the support).
class HalfLineMeasure {
 public:
  HalfLineMeasure() = default;

  static HalfLineMeasure from_atoms(std::vector<Atom> atoms);
  static HalfLineMeasure from_density(std::function<double(double)> density,
                                      double lo, double hi,
                                      std::vector<double> breakpoints = {},
                                      bool singular_at_lo = false);
  // piecewise-linear density through (grid, values), zero outside
  static HalfLineMeasure from_samples(const std::vector<double>& grid,
                                      const std::vector<double>& values);

  HalfLineMeasure& add_atom(double location, double weight);
  HalfLineMeasure& set_power_tail(double exponent);  // density ~ v_hi (s/hi)^{-p}

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool has_density() const { return static_cast<bool>(density_); }
  double density_at(double s) const;
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  bool singular_at_lo() const { return singular_at_lo_; }
  std::optional<double> power_tail() const { return tail_exponent_; }

  // signed mass, total variation, moments \int s^k d|mu| resp. dmu
  double mass() const;
  double total_variation(double* err = nullptr) const;
  double moment(int k, bool finite_check = false) const;  // signed; inf if divergent
  double moment_below(double r, int k) const;             // \int_{[0,r]} s^k dmu
  bool moment_finite(int k) const;

  // Laplace transform \int e^{-zs} dmu(s), Re z >= 0
  std::complex<double> laplace(std::complex<double> z) const;

  // measure convolution (atoms exactly, densities by quadrature)
  HalfLineMeasure convolve(const HalfLineMeasure& other) const;

  HalfLineMeasure scaled(double factor) const;  // weights * factor

 private:
  std::vector<Atom> atoms_;
  std::function<double(double)> density_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> breakpoints_;
  bool singular_at_lo_ = false;
  std::optional<double> tail_exponent_;

  double density_integral(const std::function<double(double)>& weight_fn,
                          bool absolute, double* err) const;
};

}  // namespace semirate
