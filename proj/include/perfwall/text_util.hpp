#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perfwall {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Whole-string numeric parse; accepts "inf". Returns nullopt on trailing junk.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Performance value in Gflop/s. A bare number is Gflop/s; the suffixes
// Gflops, Tflops, Pflops, Eflops (or .../s) scale accordingly.
std::optional<double> parse_performance_gflops(std::string_view s);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

// Full-precision scientific notation used for every numeric output column.
std::string sci(double v);

}  // namespace perfwall
