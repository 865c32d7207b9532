#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mnar/matrix.hpp"
#include "mnar/piecewise.hpp"

namespace mnar {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Source rating range, e.g. -10..10 (Jester-style) or 0.5..4
/// (FilmTrust-style).
struct RatingScale {
    double lo;
    double hi;

    RatingScale(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo < hi)) throw std::invalid_argument("RatingScale: lo must be < hi");
    }

    /// Affine map [lo,hi] -> [-1,1]; exactly invertible.
    double to_unit(double x) const { return 2.0 * (x - lo) / (hi - lo) - 1.0; }
    double from_unit(double y) const { return lo + (y + 1.0) * (hi - lo) / 2.0; }
};

namespace detail {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\r')) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing garbage");
        return v;
    } catch (const std::exception&) {
        throw ParseError("unparseable numeral '" + s + "' at " + where);
    }
}

inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace detail

/// Reads a rectangular CSV of values in [-1,1]; cells equal to
/// missing_token are hidden. No rescaling is applied.
inline ObservedMatrix read_dense_csv(const std::string& path,
                                     const std::string& missing_token = "NA") {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        rows.push_back(detail::split_csv_line(line));
    }
    if (rows.empty()) throw ParseError(path + ": empty file");
    const std::size_t ncols = rows[0].size();
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != ncols)
            throw ParseError(path + ": ragged row " + std::to_string(r + 1));
    Matrix values = Matrix::Zero(Eigen::Index(rows.size()), Eigen::Index(ncols));
    Mask mask(Eigen::Index(rows.size()), Eigen::Index(ncols));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < ncols; ++c) {
            const std::string& cell = rows[r][c];
            if (cell == missing_token) {
                mask(Eigen::Index(r), Eigen::Index(c)) = false;
                continue;
            }
            const double v = detail::parse_double(
                cell, path + ":" + std::to_string(r + 1) + "," + std::to_string(c + 1));
            if (!(v >= -1.0 && v <= 1.0))
                throw ParseError(path + ": value " + cell + " outside [-1,1] at row " +
                                 std::to_string(r + 1));
            values(Eigen::Index(r), Eigen::Index(c)) = v;
            mask(Eigen::Index(r), Eigen::Index(c)) = true;
        }
    return ObservedMatrix(std::move(values), std::move(mask));
}

/// Writes an ObservedMatrix as dense CSV (hidden cells as missing_token),
/// 17 significant digits so round trips are lossless.
inline void write_dense_csv(const ObservedMatrix& obs, const std::string& path,
                            const std::string& missing_token = "NA") {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (Eigen::Index i = 0; i < obs.rows(); ++i) {
        for (Eigen::Index j = 0; j < obs.cols(); ++j) {
            if (j) out << ',';
            if (obs.mask(i, j))
                out << detail::format_double(obs.values(i, j));
            else
                out << missing_token;
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed on " + path);
}

/// Fully observed dense matrix (no missing tokens admitted).
inline Matrix read_matrix_csv(const std::string& path) {
    ObservedMatrix obs = read_dense_csv(path, "\x01never-missing\x01");
    return obs.values;
}

inline void write_matrix_csv(const Matrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << detail::format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed on " + path);
}

/// Sparse "row,col,rating" triplets. Indices are zero-based unless
/// one_based is set (for raw dataset compatibility). Ratings are rescaled
/// affinely from [scale.lo, scale.hi] into [-1,1]. Duplicate cells: last
/// wins; the count is reported through duplicate_count when non-null.
inline ObservedMatrix read_triplets_csv(const std::string& path, int n_rows,
                                        int n_cols, const RatingScale& scale,
                                        bool one_based = false,
                                        int* duplicate_count = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Matrix values = Matrix::Zero(n_rows, n_cols);
    Mask mask = Mask::Constant(n_rows, n_cols, false);
    int dups = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != 3)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected row,col,rating");
        const std::string where = path + ":" + std::to_string(lineno);
        long r = long(detail::parse_double(cells[0], where));
        long c = long(detail::parse_double(cells[1], where));
        const double rating = detail::parse_double(cells[2], where);
        if (one_based) { --r; --c; }
        if (r < 0 || r >= n_rows || c < 0 || c >= n_cols)
            throw ParseError(where + ": index out of range");
        if (!(rating >= scale.lo && rating <= scale.hi))
            throw ParseError(where + ": rating outside scale");
        if (mask(r, c)) ++dups;
        mask(r, c) = true;
        values(r, c) = scale.to_unit(rating);
    }
    if (duplicate_count) *duplicate_count = dups;
    return ObservedMatrix(std::move(values), std::move(mask));
}

/// Writes one "left,right,value" row per interval, plus a header.
inline void write_fhat_csv(const PiecewiseConstantFn& f_hat,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "left,right,value\n";
    for (std::size_t l = 0; l < f_hat.values.size(); ++l)
        out << detail::format_double(f_hat.breakpoints[l]) << ','
            << detail::format_double(f_hat.breakpoints[l + 1]) << ','
            << detail::format_double(f_hat.values[l]) << '\n';
    if (!out) throw IoError("write failed on " + path);
}

inline PiecewiseConstantFn read_fhat_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    std::vector<double> breakpoints, values;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != 3)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected left,right,value");
        const std::string where = path + ":" + std::to_string(lineno);
        const double left = detail::parse_double(cells[0], where);
        const double right = detail::parse_double(cells[1], where);
        if (breakpoints.empty())
            breakpoints.push_back(left);
        else if (breakpoints.back() != left)
            throw ParseError(where + ": intervals not contiguous");
        breakpoints.push_back(right);
        values.push_back(detail::parse_double(cells[2], where));
    }
    return PiecewiseConstantFn(std::move(breakpoints), std::move(values));
}

}  // namespace mnar
