#pragma once

#include <string>
#include <vector>

#include "semirate/rates.hpp"

namespace semirate {

// rates CSV: scheme,phi,alpha,t,n,error,bound,margin,slope_axis
std::string records_csv(const std::vector<RateRecord>& records);
std::string fits_csv(const std::vector<SlopeFit>& fits);
std::string report_json(const CheckReport& report);

// write via temp file + rename so partial output is never observed
void atomic_write(const std::string& path, const std::string& content);

std::string format_double(double v);  // fixed "%.12g", locale-free

// grid grammars: "a,b,c" | "a:b:step" (inclusive) | "log:a:b:k"
std::vector<double> parse_double_grid(const std::string& text);
std::vector<int> parse_int_grid(const std::string& text);

}  // namespace semirate
