#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "monodrift/curve.hpp"
#include "monodrift/sde.hpp"

namespace monodrift {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

// Path CSV: a header line "T=<T>,n_steps=<n>,n_paths=<N>,seed=<seed>"
// followed by one comma-separated row of n_steps+1 values per path.
void write_paths_csv(std::ostream& out, const PathBundle& paths);
PathBundle read_paths_csv(std::istream& in);
void write_paths_csv(const std::filesystem::path& file, const PathBundle& paths);
PathBundle read_paths_csv(const std::filesystem::path& file);

// Curve CSV: header "x,value" then one "abscissa,value" row per grid point.
void write_curve_csv(std::ostream& out, const CurveOnGrid& curve);
CurveOnGrid read_curve_csv(std::istream& in);
void write_curve_csv(const std::filesystem::path& file, const CurveOnGrid& curve);
CurveOnGrid read_curve_csv(const std::filesystem::path& file);

}  // namespace monodrift
