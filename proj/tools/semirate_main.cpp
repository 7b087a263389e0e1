#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "semirate/a1plus.hpp"
#include "semirate/acceptance.hpp"
#include "semirate/bernstein.hpp"
#include "semirate/errors.hpp"
#include "semirate/opcalc.hpp"
#include "semirate/rates.hpp"
#include "semirate/report.hpp"
#include "semirate/specfun.hpp"

namespace {

using namespace semirate;

BernsteinFunction phi_from_flags(const std::string& name,
                                 const std::string& phi_file) {
  if (!phi_file.empty()) {
    std::ifstream in(phi_file);
    if (!in) throw ConfigError("cannot open phi file: " + phi_file);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return BernsteinFunction::from_json_text(text);
  }
  return BernsteinFunction::by_name(name);
}

void emit(const CheckReport& report, const std::string& out,
          const std::string& format) {
  if (format == "json") {
    if (out.empty())
      std::cout << report_json(report) << "\n";
    else
      atomic_write(out, report_json(report));
    return;
  }
  if (out.empty()) {
    std::cout << records_csv(report.records);
    return;
  }
  atomic_write(out, records_csv(report.records));
  if (!report.fits.empty()) {
    std::filesystem::path p(out);
    p.replace_extension();
    atomic_write(p.string() + "_fits.csv", fits_csv(report.fits));
  }
}

int handle_violation(const BoundViolationError& e, const std::string& out) {
  std::filesystem::path dir =
      out.empty() ? std::filesystem::path(".") : std::filesystem::path(out).parent_path();
  if (dir.empty()) dir = ".";
  std::string wpath = (dir / "witness.json").string();
  atomic_write(wpath, e.witness);
  std::cerr << "VIOLATION: " << e.what() << "\nwitness: " << wpath << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bernstein-function semigroup approximation toolkit"};
  app.require_subcommand(1);

  // ---- constants ----
  auto* cmd_constants = app.add_subcommand(
      "constants", "interpolation constants c_beta as CSV");
  std::string constants_beta = "0.25:10:0.25";
  std::string constants_out;
  cmd_constants->add_option("--beta", constants_beta, "beta grid");
  cmd_constants->add_option("--out", constants_out, "output CSV path");

  // ---- norms ----
  auto* cmd_norms = app.add_subcommand(
      "norms", "algebra norms, kernels and interpolation checks");
  std::string norms_t = "0.5,1,2,5", norms_alpha = "0.5,1,1.5,2",
              norms_beta = "0.5:3:0.5", norms_out;
  cmd_norms->add_option("--t-grid", norms_t, "t grid");
  cmd_norms->add_option("--alpha", norms_alpha, "alpha grid");
  cmd_norms->add_option("--beta", norms_beta, "beta grid for u/v norms");
  cmd_norms->add_option("--out", norms_out, "output directory");

  // ---- rates ----
  auto* cmd_rates = app.add_subcommand("rates", "approximation-rate sweeps");
  std::string rates_scheme = "all", rates_phi_file, rates_matrix = "diag-pos(64,10)";
  std::string rates_alpha = "0.5,1,1.5,2", rates_t = "log:0.1:100:16",
              rates_n = "1,2,4,8,16,32,64,128,256,512,1024";
  std::string rates_out, rates_format = "csv";
  bool rates_fail_fast = false;
  std::uint64_t rates_seed = 42;
  cmd_rates->add_option("--scheme", rates_scheme,
                        "yosida|dunford-segal|euler|custom|all");
  cmd_rates->add_option("--phi-file", rates_phi_file, "custom phi JSON");
  cmd_rates->add_option("--matrix", rates_matrix, "family spec or JSON file");
  cmd_rates->add_option("--alpha", rates_alpha, "alpha grid");
  cmd_rates->add_option("--t-grid", rates_t, "t grid");
  cmd_rates->add_option("--n-grid", rates_n, "n grid");
  cmd_rates->add_option("--out", rates_out, "output path");
  cmd_rates->add_option("--format", rates_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_rates->add_flag("--fail-fast", rates_fail_fast, "abort at first violation");
  cmd_rates->add_option("--seed", rates_seed, "witness vector seed");

  // ---- analytic ----
  auto* cmd_analytic = app.add_subcommand(
      "analytic", "improved rates for analytic semigroups");
  std::string analytic_matrix = "diag-pos(64,10)", analytic_out,
              analytic_format = "csv";
  std::uint64_t analytic_seed = 42;
  cmd_analytic->add_option("--matrix", analytic_matrix, "family spec or file");
  cmd_analytic->add_option("--out", analytic_out, "output path");
  cmd_analytic->add_option("--format", analytic_format, "csv|json");
  cmd_analytic->add_option("--seed", analytic_seed, "witness vector seed");

  // ---- lower-bounds ----
  auto* cmd_lower = app.add_subcommand("lower-bounds",
                                       "sharpness of the rate estimates");
  std::string lower_phi = "dunford-segal", lower_spectrum = "both",
              lower_alpha = "0,1,2", lower_t = "log:0.5:100:9", lower_n = "1,4,16",
              lower_out, lower_phi_file;
  cmd_lower->add_option("--phi", lower_phi, "built-in phi name");
  cmd_lower->add_option("--phi-file", lower_phi_file, "custom phi JSON");
  cmd_lower->add_option("--spectrum", lower_spectrum, "imag-axis|pos-reals|both")
      ->check(CLI::IsMember({"imag-axis", "pos-reals", "both"}));
  cmd_lower->add_option("--alpha", lower_alpha, "alpha grid");
  cmd_lower->add_option("--t-grid", lower_t, "t grid");
  cmd_lower->add_option("--n-grid", lower_n, "n grid");
  cmd_lower->add_option("--out", lower_out, "output path");

  // ---- appendix ----
  auto* cmd_appendix = app.add_subcommand(
      "appendix", "Laguerre mean bounds and the Watson identity residuals");
  int appendix_mmax = 30;
  std::string appendix_out;
  cmd_appendix->add_option("--m-max", appendix_mmax, "largest polynomial index");
  cmd_appendix->add_option("--out", appendix_out, "output directory");

  // ---- reproduce ----
  auto* cmd_reproduce = app.add_subcommand(
      "reproduce", "run the full verification suite and write a summary");
  std::string repro_out = "reproduce_out";
  std::uint64_t repro_seed = 42;
  bool repro_no_determinism = false;
  cmd_reproduce->add_option("--out", repro_out, "output directory");
  cmd_reproduce->add_option("--seed", repro_seed, "seed");
  cmd_reproduce->add_flag("--skip-determinism", repro_no_determinism,
                          "skip the double-run byte comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string active_out;
  try {
    if (cmd_constants->parsed()) {
      active_out = constants_out;
      specfun::CbetaTable table;
      table.build(parse_double_grid(constants_beta));
      std::ostringstream os;
      table.write_csv(os);
      if (constants_out.empty())
        std::cout << os.str();
      else
        atomic_write(constants_out, os.str());
      for (const auto& [b, e] : table.entries())
        if (!e.bound_ok)
          throw BoundViolationError("c_beta bound violated at beta=" +
                                        format_double(b),
                                    "{\"beta\": " + format_double(b) + "}");
      return 0;
    }

    if (cmd_norms->parsed()) {
      active_out = norms_out.empty() ? "" : norms_out + "/x";
      auto ts = parse_double_grid(norms_t);
      auto alphas = parse_double_grid(norms_alpha);
      auto betas = parse_double_grid(norms_beta);
      std::string uv = "kind,beta,tau,value,reference\n";
      for (double beta : betas) {
        for (double tau : {0.5, 1.0, 2.0}) {
          uv += "v," + format_double(beta) + "," + format_double(tau) + "," +
                format_double(make_v(beta, tau).norm()) + "," +
                format_double(std::pow(tau, -beta)) + "\n";
          uv += "u," + format_double(beta) + "," + format_double(tau) + "," +
                format_double(make_u(beta, tau).norm()) + "," +
                format_double(specfun::c_beta(beta)) + "\n";
        }
      }
      std::string kern = "phi,t,kernel_integral,reference\n";
      std::string interp = "phi,t,alpha,direct,tight_bound,relaxed_bound\n";
      bool ok = true;
      for (const auto& phi : {BernsteinFunction::yosida(),
                              BernsteinFunction::dunford_segal(),
                              BernsteinFunction::euler()}) {
        for (double t : ts) {
          double ref = 0.5 * t * phi.second_derivative_abs();
          kern += phi.name() + "," + format_double(t) + "," +
                  format_double(delta_kernel(phi, t).integral()) + "," +
                  format_double(ref) + "\n";
          for (double a : alphas) {
            double direct = frac_delta_norm(phi, t, a);
            double tight = delta_fractional_bound_tight(phi, t, a);
            double relaxed = delta_fractional_bound(phi, t, a);
            ok = ok && direct <= tight * (1.0 + 1e-9) + 1e-12 &&
                 direct <= relaxed * (1.0 + 1e-9) + 1e-12;
            interp += phi.name() + "," + format_double(t) + "," +
                      format_double(a) + "," + format_double(direct) + "," +
                      format_double(tight) + "," + format_double(relaxed) + "\n";
          }
        }
      }
      if (norms_out.empty()) {
        std::cout << uv << kern << interp;
      } else {
        atomic_write(norms_out + "/uv_norms.csv", uv);
        atomic_write(norms_out + "/kernel_integrals.csv", kern);
        atomic_write(norms_out + "/interpolation.csv", interp);
      }
      if (!ok)
        throw BoundViolationError("interpolation bound violated", "{}");
      return 0;
    }

    if (cmd_rates->parsed()) {
      active_out = rates_out;
      GridOptions opts = GridOptions::defaults();
      opts.alphas = parse_double_grid(rates_alpha);
      opts.t_grid = parse_double_grid(rates_t);
      opts.n_grid = parse_int_grid(rates_n);
      opts.fail_fast = rates_fail_fast;
      opts.seed = rates_seed;
      Generator A = parse_matrix_spec(rates_matrix);
      CheckReport report;
      if (rates_scheme == "all") {
        for (const auto& phi : {BernsteinFunction::yosida(),
                                BernsteinFunction::dunford_segal(),
                                BernsteinFunction::euler()})
          report.merge(check_general_upper(phi, A, opts));
        report.merge(check_classical(A, opts));
      } else if (rates_scheme == "custom") {
        auto phi = phi_from_flags("", rates_phi_file);
        report.merge(check_general_upper(phi, A, opts));
      } else {
        auto phi = BernsteinFunction::by_name(rates_scheme);
        report.merge(check_general_upper(phi, A, opts));
        auto classical = check_classical(A, opts);
        CheckReport filtered;
        filtered.pass = classical.pass;
        for (auto& rec : classical.records)
          if (rec.scheme.rfind(rates_scheme, 0) == 0)
            filtered.records.push_back(rec);
        report.merge(filtered);
      }
      emit(report, rates_out, rates_format);
      return report.pass ? 0 : 1;
    }

    if (cmd_analytic->parsed()) {
      active_out = analytic_out;
      GridOptions opts = GridOptions::defaults();
      opts.seed = analytic_seed;
      Generator A = parse_matrix_spec(analytic_matrix);
      CheckReport report;
      for (const auto& phi : {BernsteinFunction::yosida(),
                              BernsteinFunction::dunford_segal(),
                              BernsteinFunction::euler()}) {
        report.merge(check_analytic(phi, A, opts));
        report.merge(check_interpolated_decay(phi, A, opts));
      }
      report.merge(check_building_blocks(BernsteinFunction::euler(),
                                         BernsteinFunction::dunford_segal(), A,
                                         opts));
      report.merge(check_building_blocks(BernsteinFunction::dunford_segal(),
                                         BernsteinFunction::yosida(), A, opts));
      report.merge(check_operator_interpolation(A, A.matrix(), opts, "A"));
      emit(report, analytic_out, analytic_format);
      for (const auto& n : report.notes) std::cerr << "note: " << n << "\n";
      return report.pass ? 0 : 1;
    }

    if (cmd_lower->parsed()) {
      active_out = lower_out;
      GridOptions opts = GridOptions::defaults();
      opts.alphas = parse_double_grid(lower_alpha);
      opts.t_grid = parse_double_grid(lower_t);
      opts.n_grid = parse_int_grid(lower_n);
      auto phi = lower_phi_file.empty() ? BernsteinFunction::by_name(lower_phi)
                                        : phi_from_flags("", lower_phi_file);
      CheckReport report;
      if (lower_spectrum != "pos-reals")
        report.merge(check_lower_bounds(phi, SpectrumKind::ImagAxis, opts));
      if (lower_spectrum != "imag-axis")
        report.merge(check_lower_bounds(phi, SpectrumKind::PosReals, opts));
      emit(report, lower_out, "csv");
      return report.pass ? 0 : 1;
    }

    if (cmd_appendix->parsed()) {
      active_out = appendix_out.empty() ? "" : appendix_out + "/x";
      std::string csv = "m,abs_mean,two_sqrt_m,c_m,sq_mean_unit\n";
      bool ok = true;
      for (int m = 1; m <= appendix_mmax; ++m) {
        double mean = specfun::laguerre_abs_mean(m);
        double sq = specfun::laguerre_sq_mean_unit(m);
        ok = ok && mean <= 2.0 * std::sqrt(double(m)) + 1e-9 &&
             sq <= 2.5 * m + 1e-9;
        csv += std::to_string(m) + "," + format_double(mean) + "," +
               format_double(2.0 * std::sqrt(double(m))) + "," +
               format_double(1.0 + mean) + "," + format_double(sq) + "\n";
      }
      std::string wat = "m,s,residual\n";
      for (int m = 1; m <= std::min(appendix_mmax, 8); ++m)
        for (double s : {0.25, 0.5, 1.0}) {
          double res = specfun::watson_identity_residual(m, s);
          ok = ok && res <= 1e-7;
          wat += std::to_string(m) + "," + format_double(s) + "," +
                 format_double(res) + "\n";
        }
      if (appendix_out.empty()) {
        std::cout << csv << wat;
      } else {
        atomic_write(appendix_out + "/laguerre.csv", csv);
        atomic_write(appendix_out + "/watson.csv", wat);
      }
      if (!ok) throw BoundViolationError("appendix inequality violated", "{}");
      return 0;
    }

    if (cmd_reproduce->parsed()) {
      active_out = repro_out + "/x";
      std::string log;
      bool pass = acceptance::reproduce(repro_out, repro_seed,
                                        !repro_no_determinism, &log);
      std::cout << log;
      std::cout << (pass ? "ALL CHECKS PASSED" : "CHECKS FAILED") << "\n";
      std::cout << "summary: " << repro_out << "/summary.md\n";
      return pass ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BoundViolationError& e) {
    return handle_violation(e, active_out);
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
