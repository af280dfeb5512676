#include "monodrift/paths_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace monodrift {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) parts.push_back(cur);
    return parts;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw FormatError("not a number: '" + t + "'");
    }
    if (used != t.size()) throw FormatError("not a number: '" + t + "'");
    return v;
}

template <class Int>
Int parse_int(const std::string& text) {
    const std::string t = trim(text);
    Int v{};
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw FormatError("not an integer: '" + t + "'");
    }
    return v;
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open '" + file.string() + "' for reading");
    return in;
}

}  // namespace

std::string format_double(double v) {
    // shortest text that parses back to the same double
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void write_paths_csv(std::ostream& out, const PathBundle& paths) {
    out << "T=" << format_double(paths.horizon()) << ",n_steps=" << paths.n_steps()
        << ",n_paths=" << paths.n_paths() << ",seed=" << paths.seed() << '\n';
    for (std::size_t i = 0; i < paths.n_paths(); ++i) {
        const auto row = paths.path(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out << ',';
            out << format_double(row[k]);
        }
        out << '\n';
    }
}

PathBundle read_paths_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty path file");
    double horizon = 0.0;
    std::size_t n_steps = 0, n_paths = 0;
    std::uint64_t seed = 0;
    bool have_t = false, have_n = false, have_count = false;
    for (const auto& field : split(line, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw FormatError("bad path header field '" + field + "'");
        const std::string key = trim(field.substr(0, eq));
        const std::string val = field.substr(eq + 1);
        if (key == "T") {
            horizon = parse_double(val);
            have_t = true;
        } else if (key == "n_steps") {
            n_steps = parse_int<std::size_t>(val);
            have_n = true;
        } else if (key == "n_paths") {
            n_paths = parse_int<std::size_t>(val);
            have_count = true;
        } else if (key == "seed") {
            seed = parse_int<std::uint64_t>(val);
        } else {
            throw FormatError("unknown path header key '" + key + "'");
        }
    }
    if (!have_t || !have_n) throw FormatError("path header must carry T and n_steps");

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != n_steps + 1) {
            throw FormatError("path row " + std::to_string(rows) + " has " +
                              std::to_string(cells.size()) + " values, expected " +
                              std::to_string(n_steps + 1));
        }
        for (const auto& c : cells) values.push_back(parse_double(c));
        ++rows;
    }
    if (have_count && rows != n_paths) {
        throw FormatError("header announces " + std::to_string(n_paths) + " paths, found " +
                          std::to_string(rows));
    }
    return PathBundle(rows, n_steps, horizon, seed, std::move(values));
}

void write_paths_csv(const std::filesystem::path& file, const PathBundle& paths) {
    auto out = open_out(file);
    write_paths_csv(out, paths);
    if (!out) throw std::runtime_error("write failed for '" + file.string() + "'");
}

PathBundle read_paths_csv(const std::filesystem::path& file) {
    auto in = open_in(file);
    return read_paths_csv(in);
}

void write_curve_csv(std::ostream& out, const CurveOnGrid& curve) {
    out << "x,value\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out << format_double(curve.abscissa(i)) << ',' << format_double(curve[i]) << '\n';
    }
}

CurveOnGrid read_curve_csv(std::istream& in) {
    std::string line;
    std::vector<double> xs, vs;
    bool first = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (first) {
            first = false;
            if (cells.size() == 2 && trim(cells[0]) == "x") continue;
        }
        if (cells.size() < 2) throw FormatError("curve row needs two columns: '" + line + "'");
        xs.push_back(parse_double(cells[0]));
        vs.push_back(parse_double(cells[1]));
    }
    if (xs.size() < 2) throw FormatError("curve needs at least two rows");
    const double lo = xs.front(), hi = xs.back();
    const double step = (hi - lo) / static_cast<double>(xs.size() - 1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double expected = lo + step * static_cast<double>(i);
        if (std::abs(xs[i] - expected) > 1e-9 * (1.0 + std::abs(hi - lo))) {
            throw FormatError("curve abscissae are not uniformly spaced at row " +
                              std::to_string(i));
        }
    }
    return CurveOnGrid(lo, hi, std::move(vs));
}

void write_curve_csv(const std::filesystem::path& file, const CurveOnGrid& curve) {
    auto out = open_out(file);
    write_curve_csv(out, curve);
    if (!out) throw std::runtime_error("write failed for '" + file.string() + "'");
}

CurveOnGrid read_curve_csv(const std::filesystem::path& file) {
    auto in = open_in(file);
    return read_curve_csv(in);
}

}  // namespace monodrift
