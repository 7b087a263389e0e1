#include "semirate/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "semirate/errors.hpp"

namespace semirate {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string records_csv(const std::vector<RateRecord>& records) {
  std::string out = "scheme,phi,alpha,t,n,error,bound,margin,slope_axis\n";
  for (const auto& r : records) {
    out += r.scheme + "," + r.phi + "," + format_double(r.alpha) + "," +
           format_double(r.t) + "," + std::to_string(r.n) + "," +
           format_double(r.error) + "," + format_double(r.bound) + "," +
           format_double(r.margin) + "," + r.slope_axis + "\n";
  }
  return out;
}

std::string fits_csv(const std::vector<SlopeFit>& fits) {
  std::string out = "label,axis,points,exponent,r2,predicted\n";
  for (const auto& f : fits) {
    out += f.label + "," + f.axis + "," + std::to_string(f.points) + "," +
           format_double(f.exponent) + "," + format_double(f.r2) + "," +
           format_double(f.predicted) + "\n";
  }
  return out;
}

std::string report_json(const CheckReport& report) {
  nlohmann::json j;
  j["pass"] = report.pass;
  j["notes"] = report.notes;
  auto recs = nlohmann::json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"scheme", r.scheme},
                    {"phi", r.phi},
                    {"alpha", r.alpha},
                    {"t", r.t},
                    {"n", r.n},
                    {"error", r.error},
                    {"bound", r.bound},
                    {"margin", r.margin},
                    {"lower", r.lower},
                    {"slope_axis", r.slope_axis}});
  }
  j["records"] = recs;
  auto fits = nlohmann::json::array();
  for (const auto& f : report.fits) {
    fits.push_back({{"label", f.label},
                    {"axis", f.axis},
                    {"points", f.points},
                    {"exponent", f.exponent},
                    {"r2", f.r2},
                    {"predicted", f.predicted}});
  }
  j["fits"] = fits;
  return j.dump(2);
}

std::vector<double> parse_double_grid(const std::string& text) {
  if (text.empty()) throw ConfigError("empty grid");
  std::vector<double> out;
  try {
    if (text.rfind("log:", 0) == 0) {
      auto rest = text.substr(4);
      auto c1 = rest.find(':'), c2 = rest.rfind(':');
      if (c1 == std::string::npos || c2 == c1)
        throw ConfigError("log grid needs log:lo:hi:count");
      double lo = std::stod(rest.substr(0, c1));
      double hi = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
      int k = std::stoi(rest.substr(c2 + 1));
      if (!(lo > 0.0 && hi > lo && k >= 2)) throw ConfigError("bad log grid");
      for (int i = 0; i < k; ++i)
        out.push_back(lo * std::pow(hi / lo, double(i) / (k - 1)));
      return out;
    }
    if (std::count(text.begin(), text.end(), ':') == 2) {
      auto c1 = text.find(':'), c2 = text.rfind(':');
      double lo = std::stod(text.substr(0, c1));
      double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
      double step = std::stod(text.substr(c2 + 1));
      if (!(step > 0.0) || hi < lo) throw ConfigError("bad range grid");
      for (double v = lo; v <= hi + 1e-12 * step; v += step) out.push_back(v);
      return out;
    }
    size_t pos = 0;
    while (pos <= text.size()) {
      auto comma = text.find(',', pos);
      if (comma == std::string::npos) comma = text.size();
      out.push_back(std::stod(text.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("cannot parse grid: " + text);
  } catch (const std::out_of_range&) {
    throw ConfigError("grid value out of range: " + text);
  }
  if (out.empty()) throw ConfigError("empty grid: " + text);
  return out;
}

std::vector<int> parse_int_grid(const std::string& text) {
  auto d = parse_double_grid(text);
  std::vector<int> out;
  for (double v : d) {
    int n = static_cast<int>(std::llround(v));
    if (n < 1 || std::abs(v - n) > 1e-9)
      throw ConfigError("integer grid expected: " + text);
    out.push_back(n);
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot open " + tmp.string() + " for writing");
    out << content;
  }
  fs::rename(tmp, target);
}

}  // namespace semirate
