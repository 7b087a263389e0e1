#include "semirate/acceptance.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "semirate/a1plus.hpp"
#include "semirate/bernstein.hpp"
#include "semirate/errors.hpp"
#include "semirate/opcalc.hpp"
#include "semirate/rates.hpp"
#include "semirate/report.hpp"
#include "semirate/specfun.hpp"

namespace semirate::acceptance {

namespace {

std::vector<BernsteinFunction> builtins() {
  return {BernsteinFunction::yosida(), BernsteinFunction::dunford_segal(),
          BernsteinFunction::euler()};
}

std::string fmt(double v) { return format_double(v); }

void fail(CriterionResult& r, const std::string& why) {
  r.pass = false;
  if (!r.detail.empty()) r.detail += "; ";
  r.detail += why;
}

struct SweepPoint {
  int n;
  double error;
};

// vector-level error sweep over n at fixed (phi, t, alpha, x)
std::vector<RateRecord> error_sweep(const BernsteinFunction& phi,
                                    const Generator& A, bool e_form, double t,
                                    double alpha, const Vector& y,
                                    const std::vector<int>& ns) {
  Vector x = A.apply_vec([alpha](Complex l) { return std::pow(l, -alpha); }, y);
  std::vector<RateRecord> out;
  for (int n : ns) {
    RateRecord r;
    r.scheme = e_form ? "e" : "delta";
    r.phi = phi.name();
    r.alpha = alpha;
    r.t = t;
    r.n = n;
    r.slope_axis = "n";
    Matrix op = e_form ? e_op(phi, A, t, n) : delta_op(phi, A, t, n);
    r.error = (op * x).norm();
    r.bound = 0.0;
    r.margin = 0.0;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

CriterionResult criterion_constants(std::uint64_t) {
  CriterionResult r{1, "constants-exact", true, "", {}};
  double c1 = specfun::c_beta(1.0);
  double c2 = specfun::c_beta(2.0);
  double c2_ref = 2.0 * (1.0 + std::exp(-2.0));
  if (std::abs(c1 - 2.0) > 1e-8) fail(r, "c_1 != 2: " + fmt(c1));
  if (std::abs(c2 - c2_ref) > 1e-8) fail(r, "c_2 mismatch: " + fmt(c2));

  std::string csv = "kind,beta,tau,value,reference,err\n";
  for (double beta : {0.5, 1.0, 2.0, 3.0}) {
    for (double tau : {0.5, 1.0, 2.0}) {
      double err = 0.0;
      double v = make_v(beta, tau).norm(&err);
      double ref = std::pow(tau, -beta);
      csv += "v-norm," + fmt(beta) + "," + fmt(tau) + "," + fmt(v) + "," +
             fmt(ref) + "," + fmt(err) + "\n";
      if (std::abs(v - ref) > 1e-10)
        fail(r, "||v|| off at beta=" + fmt(beta) + " tau=" + fmt(tau) +
                    ": " + fmt(v - ref));
    }
  }

  specfun::CbetaTable table;
  std::vector<double> betas;
  for (double b = 0.25; b <= 10.0 + 1e-12; b += 0.25) betas.push_back(b);
  table.build(betas);
  for (const auto& [b, e] : table.entries()) {
    if (!(e.value >= 1.0 - 1e-9 - e.err && e.value <= e.upper_bound + 1e-9 + e.err))
      fail(r, "c_beta outside [1, 2^{beta+1}] at beta=" + fmt(b));
  }
  std::ostringstream os;
  table.write_csv(os);
  r.artifacts.push_back({"c_beta_table.csv", os.str()});
  r.artifacts.push_back({"v_norms.csv", csv});
  if (r.pass)
    r.detail = "c_1 = " + fmt(c1) + ", c_2 = " + fmt(c2) +
               ", 12 v-norms exact, 40 c_beta boxes hold";
  return r;
}

CriterionResult criterion_kernel_exactness() {
  CriterionResult r{2, "kernel-exactness", true, "", {}};
  std::string csv = "phi,t,integral,reference,abs_err,tol\n";
  for (const auto& phi : builtins()) {
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      double got = delta_kernel(phi, t).integral();
      double ref = 0.5 * t * phi.second_derivative_abs();
      double tol = 1e-6 * t;
      csv += phi.name() + "," + fmt(t) + "," + fmt(got) + "," + fmt(ref) + "," +
             fmt(std::abs(got - ref)) + "," + fmt(tol) + "\n";
      if (std::abs(got - ref) > tol)
        fail(r, phi.name() + " t=" + fmt(t) + ": |" + fmt(got) + " - " +
                    fmt(ref) + "| > " + fmt(tol));
    }
  }
  r.artifacts.push_back({"kernel_integrals.csv", csv});
  if (r.pass) r.detail = "12 kernel integrals match t|phi''|/2 to 1e-6 t";
  return r;
}

CriterionResult criterion_interpolation() {
  CriterionResult r{3, "interpolation-principle", true, "", {}};
  std::string csv = "phi,t,alpha,direct,tight_bound,relaxed_bound\n";
  int points = 0;
  for (const auto& phi : builtins()) {
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
        double err = 0.0;
        double direct = frac_delta_norm(phi, t, alpha, &err);
        double tight = delta_fractional_bound_tight(phi, t, alpha);
        double relaxed = delta_fractional_bound(phi, t, alpha);
        csv += phi.name() + "," + fmt(t) + "," + fmt(alpha) + "," + fmt(direct) +
               "," + fmt(tight) + "," + fmt(relaxed) + "\n";
        double slack_t = 1e-9 * tight + err;
        double slack_r = 1e-9 * relaxed + err;
        if (direct > tight + slack_t)
          fail(r, phi.name() + " t=" + fmt(t) + " a=" + fmt(alpha) +
                      ": direct " + fmt(direct) + " > tight " + fmt(tight));
        if (direct > relaxed + slack_r)
          fail(r, phi.name() + " t=" + fmt(t) + " a=" + fmt(alpha) +
                      ": direct " + fmt(direct) + " > relaxed " + fmt(relaxed));
        ++points;
      }
    }
  }
  r.artifacts.push_back({"interpolation.csv", csv});
  if (r.pass)
    r.detail = std::to_string(points) + " direct norms below both bounds";
  return r;
}

CriterionResult criterion_upper_rates(std::uint64_t seed) {
  CriterionResult r{4, "upper-rate-bounds", true, "", {}};
  GridOptions opts = GridOptions::defaults();
  opts.seed = seed;
  std::vector<std::pair<std::string, Generator>> families;
  families.emplace_back("diag-imag(64,10)", diag_imag(64, 10.0));
  families.emplace_back("diag-pos(64,10)", diag_pos(64, 10.0));
  families.emplace_back("random-normal(32," + std::to_string(seed) + ")",
                        random_normal(32, seed));
  CheckReport all;
  for (auto& [fname, A] : families) {
    for (const auto& phi : builtins()) {
      auto rep = check_general_upper(phi, A, opts);
      if (!rep.pass) fail(r, fname + "/" + phi.name() + " violation");
      all.merge(rep);
    }
    auto crep = check_classical(A, opts);
    if (!crep.pass) fail(r, fname + " classical violation");
    all.merge(crep);
  }
  double worst = 0.0;
  for (const auto& rec : all.records)
    worst = std::min(worst, rec.margin / std::max(rec.bound, 1e-300));
  r.artifacts.push_back({"upper_rates.csv", records_csv(all.records)});
  if (r.pass)
    r.detail = std::to_string(all.records.size()) +
               " records, worst relative margin " + fmt(worst);
  return r;
}

CriterionResult criterion_empirical_order(std::uint64_t seed) {
  CriterionResult r{5, "empirical-order", true, "", {}};
  Generator A = diag_imag(64, 10.0);
  Vector y = random_unit_vector(A.dim(), seed);
  std::vector<int> ns;
  for (int n = 8; n <= 1024; n *= 2) ns.push_back(n);

  struct Case {
    BernsteinFunction phi;
    bool e_form;
    double t;
  };
  std::vector<Case> cases;
  cases.push_back({BernsteinFunction::euler(), true, 10.0});
  cases.push_back({BernsteinFunction::dunford_segal(), false, 50.0});
  cases.push_back({BernsteinFunction::yosida(), false, 50.0});

  std::vector<SlopeFit> fits;
  std::vector<RateRecord> recs;
  for (const auto& c : cases) {
    for (double alpha : {2.0, 1.0}) {
      auto sweep = error_sweep(c.phi, A, c.e_form, c.t, alpha, y, ns);
      auto fit = fit_order(sweep, "n", -0.5 * alpha);
      fit.label = c.phi.name() + (c.e_form ? "/e" : "/delta") +
                  " alpha=" + fmt(alpha) + " t=" + fmt(c.t);
      fits.push_back(fit);
      recs.insert(recs.end(), sweep.begin(), sweep.end());
      if (std::abs(fit.exponent - fit.predicted) > 0.1)
        fail(r, fit.label + ": slope " + fmt(fit.exponent) + " vs " +
                    fmt(fit.predicted));
      if (fit.r2 < 0.98) fail(r, fit.label + ": r2 " + fmt(fit.r2));
    }
  }
  r.artifacts.push_back({"order_fits.csv", fits_csv(fits)});
  r.artifacts.push_back({"order_sweeps.csv", records_csv(recs)});
  if (r.pass) {
    r.detail = "6 fits within 0.1 of -alpha/2 (r2 >= 0.98):";
    for (const auto& f : fits) r.detail += " " + fmt(f.exponent);
  }
  return r;
}

CriterionResult criterion_analytic(std::uint64_t seed) {
  CriterionResult r{6, "analytic-improvement", true, "", {}};
  Generator A = diag_pos(64, 10.0);
  auto sb = certify_bounds(A);
  if (!(sb.analytic && sb.M1 <= std::exp(-1.0) + 1e-12))
    fail(r, "M1 not <= 1/e: " + fmt(sb.M1));

  GridOptions opts = GridOptions::defaults();
  opts.seed = seed;
  CheckReport all;
  std::vector<std::string> sups;
  for (const auto& phi : builtins()) {
    auto rep = check_analytic(phi, A, opts);
    if (!rep.pass) fail(r, phi.name() + ": analytic bound violation");
    double sup_t_norm = 0.0, cbound = 0.0;
    for (const auto& rec : rep.records)
      if (rec.scheme == "analytic-uniform") {
        sup_t_norm = std::max(sup_t_norm, rec.error);
        cbound = rec.bound;
      }
    sups.push_back(phi.name() + ": sup " + fmt(sup_t_norm) + " <= C " +
                   fmt(cbound));
    for (const auto& fit : rep.fits) {
      if (std::abs(fit.exponent + 1.0) > 0.1)
        fail(r, phi.name() + " " + fit.label + ": slope " + fmt(fit.exponent));
      if (fit.r2 < 0.98)
        fail(r, phi.name() + " " + fit.label + ": r2 " + fmt(fit.r2));
    }
    all.merge(rep);
  }
  r.artifacts.push_back({"analytic_records.csv", records_csv(all.records)});
  r.artifacts.push_back({"analytic_fits.csv", fits_csv(all.fits)});
  if (r.pass) {
    r.detail = "uniform C/t and 1/n sweeps hold";
    for (const auto& s : sups) r.detail += "; " + s;
  }
  return r;
}

CriterionResult criterion_lower_bounds(std::uint64_t) {
  CriterionResult r{7, "lower-bounds-sharpness", true, "", {}};
  auto phi = BernsteinFunction::dunford_segal();
  auto c = lower_bound_constants(phi, 2.0);
  double c_ref = 1.0 - std::exp(-2.0 / (M_PI * M_PI));
  double T_ref = 4.0 / (M_PI * M_PI);
  if (std::abs(c.c_osc - c_ref) > 1e-12) fail(r, "c constant mismatch");
  if (std::abs(c.T_osc - T_ref) > 1e-12) fail(r, "T constant mismatch");
  if (!(c.d == 1.0 || std::abs(c.d - 1.0) < 1e-12)) fail(r, "d != 1");

  GridOptions opts = GridOptions::defaults();
  opts.alphas = {0.0, 1.0, 2.0};
  opts.n_grid = {1, 4, 16};
  opts.t_grid.clear();
  for (double t : {c.T_osc, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0})
    opts.t_grid.push_back(t);

  auto imag_rep = check_lower_bounds(phi, SpectrumKind::ImagAxis, opts);
  if (!imag_rep.pass) fail(r, "imag-axis lower bound violated");

  GridOptions opts_pos = opts;
  opts_pos.t_grid.clear();
  for (double t : {std::max(c.T_real, T_ref), 0.5, 1.0, 2.0, 5.0, 10.0, 20.0,
                   50.0, 100.0})
    if (t >= c.T_real) opts_pos.t_grid.push_back(t);
  auto pos_rep = check_lower_bounds(phi, SpectrumKind::PosReals, opts_pos);
  if (!pos_rep.pass) fail(r, "pos-reals lower bound violated");

  CheckReport all;
  all.merge(imag_rep);
  all.merge(pos_rep);
  r.artifacts.push_back({"lower_bounds.csv", records_csv(all.records)});
  if (r.pass)
    r.detail = "c = " + fmt(c.c_osc) + ", T = " + fmt(c.T_osc) + ", " +
               std::to_string(all.records.size()) + " lower-bound records hold";
  return r;
}

CriterionResult criterion_breakdown() {
  CriterionResult r{8, "alpha-above-2-breakdown", true, "", {}};
  auto maxima = breakdown_maxima(BernsteinFunction::dunford_segal(), 2.5, 1.0, 6);
  std::string csv = "refinement,s_min,max_value,ratio\n";
  int consecutive = 0;
  double s_min = 0.01;
  for (size_t k = 0; k < maxima.size(); ++k) {
    double ratio = k == 0 ? 0.0 : maxima[k] / maxima[k - 1];
    csv += std::to_string(k) + "," + fmt(s_min) + "," + fmt(maxima[k]) + "," +
           fmt(ratio) + "\n";
    s_min *= 0.5;
    if (k > 0) consecutive = (ratio >= 1.3) ? consecutive + 1 : 0;
  }
  if (consecutive < 5)
    fail(r, "only " + std::to_string(consecutive) +
                " consecutive refinements with ratio >= 1.3");
  r.artifacts.push_back({"breakdown.csv", csv});
  if (r.pass)
    r.detail = "max grows by >= 1.3x over " + std::to_string(consecutive) +
               " consecutive refinements (limit ratio sqrt(2))";
  return r;
}

CriterionResult criterion_appendix() {
  CriterionResult r{9, "appendix-inequalities", true, "", {}};
  std::string csv = "m,abs_mean,two_sqrt_m,c_m,one_plus_two_sqrt_m,sq_mean_unit,five_half_m\n";
  for (int m = 1; m <= 30; ++m) {
    double mean = specfun::laguerre_abs_mean(m);
    double cm = 1.0 + mean;
    double sq = specfun::laguerre_sq_mean_unit(m);
    csv += std::to_string(m) + "," + fmt(mean) + "," + fmt(2.0 * std::sqrt(m)) +
           "," + fmt(cm) + "," + fmt(1.0 + 2.0 * std::sqrt(m)) + "," + fmt(sq) +
           "," + fmt(2.5 * m) + "\n";
    if (mean > 2.0 * std::sqrt(double(m)) + 1e-9)
      fail(r, "abs mean exceeds 2 sqrt(m) at m=" + std::to_string(m));
    if (cm > 1.0 + 2.0 * std::sqrt(double(m)) + 1e-9)
      fail(r, "c_m exceeds 1+2 sqrt(m) at m=" + std::to_string(m));
    if (sq > 2.5 * m + 1e-9)
      fail(r, "unit-interval square mean exceeds (5/2)m at m=" + std::to_string(m));
  }
  std::string wcsv = "m,s,residual\n";
  for (int m = 1; m <= 5; ++m) {
    for (double s : {0.25, 0.5, 1.0}) {
      double res = specfun::watson_identity_residual(m, s);
      wcsv += std::to_string(m) + "," + fmt(s) + "," + fmt(res) + "\n";
      if (res > 1e-7)
        fail(r, "Watson residual " + fmt(res) + " at m=" + std::to_string(m) +
                    " s=" + fmt(s));
    }
  }
  r.artifacts.push_back({"appendix_laguerre.csv", csv});
  r.artifacts.push_back({"appendix_watson.csv", wcsv});
  if (r.pass) r.detail = "m = 1..30 bounds and 15 Watson residuals hold";
  return r;
}

CriterionResult criterion_doubling(std::uint64_t) {
  CriterionResult r{10, "doubling-construction", true, "", {}};
  Generator A = diag_pos(16, 10.0);
  DoubledGenerator D(A);
  auto sb = certify_bounds(A);
  std::string csv = "check,phi,t,value,reference_or_bound,rel_err\n";

  for (double t : {0.5, 1.0, 2.0}) {
    Matrix direct = expm_pade(-t * D.block());
    Matrix viaid = D.semigroup_block(t);
    double rel = spectral_norm(direct - viaid) / spectral_norm(viaid);
    csv += "block-identity,-," + fmt(t) + "," + fmt(rel) + ",1e-9," + fmt(rel) + "\n";
    if (rel > 1e-9) fail(r, "block identity rel err " + fmt(rel));
  }

  for (const auto& phi : builtins()) {
    for (double t : {0.5, 1.0, 2.0}) {
      // phi of the doubled matrix assembled blockwise, exponentiated by Pade
      const int n = A.dim();
      Matrix phiA = phi_of_matrix(phi, A);
      Matrix upper = A.matrix() * A.apply([&](Complex l) { return phi.derivative(l); });
      Matrix PB = Matrix::Zero(2 * n, 2 * n);
      PB.topLeftCorner(n, n) = phiA;
      PB.topRightCorner(n, n) = upper;
      PB.bottomRightCorner(n, n) = phiA;
      Matrix direct = expm_pade(-t * PB);
      Matrix viaid = D.subordinated_block(phi, t);
      double rel = spectral_norm(direct - viaid) / spectral_norm(viaid);
      csv += "subordinated-block," + phi.name() + "," + fmt(t) + "," + fmt(rel) +
             ",1e-9," + fmt(rel) + "\n";
      if (rel > 1e-9)
        fail(r, "subordinated block " + phi.name() + " rel err " + fmt(rel));
    }
  }

  // bound transfer on the max-normed direct sum
  double sup0 = 0.0, sup1 = 0.0;
  for (double t : default_t_grid()) {
    Matrix S = semigroup(A, t);
    Matrix tAS = A.apply([t](Complex l) { return t * l * std::exp(-t * l); });
    Matrix t2A2S = A.apply([t](Complex l) { return t * t * l * l * std::exp(-t * l); });
    sup0 = std::max(sup0, max_block_norm(S, -tAS));
    sup1 = std::max(sup1, max_block_norm(tAS, tAS - t2A2S));
  }
  double b0 = sb.M0 + sb.M1;
  double b1 = 2.0 * sb.M1 + 4.0 * sb.M1 * sb.M1;
  csv += "transfer-M0,-,0," + fmt(sup0) + "," + fmt(b0) + ",-\n";
  csv += "transfer-M1,-,0," + fmt(sup1) + "," + fmt(b1) + ",-\n";
  if (sup0 > b0 * (1.0 + 1e-9)) fail(r, "M0 transfer violated: " + fmt(sup0));
  if (sup1 > b1 * (1.0 + 1e-9)) fail(r, "M1 transfer violated: " + fmt(sup1));

  r.artifacts.push_back({"doubling.csv", csv});
  if (r.pass)
    r.detail = "block identities to 1e-9; transfers " + fmt(sup0) +
               " <= " + fmt(b0) + ", " + fmt(sup1) + " <= " + fmt(b1);
  return r;
}

std::vector<CriterionResult> run_criteria(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_constants(seed));
  out.push_back(criterion_kernel_exactness());
  out.push_back(criterion_interpolation());
  out.push_back(criterion_upper_rates(seed));
  out.push_back(criterion_empirical_order(seed));
  out.push_back(criterion_analytic(seed));
  out.push_back(criterion_lower_bounds(seed));
  out.push_back(criterion_breakdown());
  out.push_back(criterion_appendix());
  out.push_back(criterion_doubling(seed));
  return out;
}

std::string summary_markdown(const std::vector<CriterionResult>& results) {
  std::string md = "# Verification summary\n\n";
  md += "| # | check | status | detail |\n|---|-------|--------|--------|\n";
  for (const auto& r : results) {
    md += "| " + std::to_string(r.id) + " | " + r.name + " | " +
          (r.pass ? "pass" : "FAIL") + " | " + r.detail + " |\n";
  }
  md += "\nArtifacts:\n";
  for (const auto& r : results)
    for (const auto& [name, _] : r.artifacts) md += "- `" + name + "`\n";
  return md;
}

bool reproduce(const std::string& out_dir, std::uint64_t seed,
               bool check_determinism, std::string* log) {
  namespace fs = std::filesystem;
  auto run_into = [&](const std::string& dir) {
    auto results = run_criteria(seed);
    for (const auto& r : results)
      for (const auto& [name, content] : r.artifacts)
        atomic_write(dir + "/" + name, content);
    return results;
  };

  auto results = run_into(out_dir);
  bool pass = true;
  for (const auto& r : results) pass = pass && r.pass;

  if (check_determinism) {
    CriterionResult det{11, "determinism", true, "", {}};
    std::string dir2 = out_dir + "/rerun";
    auto second = run_into(dir2);
    for (const auto& r : second) {
      for (const auto& [name, content] : r.artifacts) {
        std::ifstream first_file(out_dir + "/" + name, std::ios::binary);
        std::stringstream buf;
        buf << first_file.rdbuf();
        if (buf.str() != content) {
          det.pass = false;
          det.detail += name + " differs; ";
        }
      }
    }
    if (det.pass) det.detail = "second pass byte-identical";
    results.push_back(det);
    pass = pass && det.pass;
  }

  atomic_write(out_dir + "/summary.md", summary_markdown(results));
  if (log) {
    for (const auto& r : results)
      *log += (r.pass ? "PASS " : "FAIL ") + std::to_string(r.id) + " " +
              r.name + " - " + r.detail + "\n";
  }
  return pass;
}

}  // namespace semirate::acceptance
