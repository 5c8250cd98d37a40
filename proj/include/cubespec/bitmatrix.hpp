#pragma once
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cubespec/errors.hpp"

namespace cubespec {

// 0/1 matrix with at most 64 rows, stored column-major: bit i of col(j) is
// entry (i, j).  Row count up to 64 keeps every column in one machine word,
// which is what the elimination and enumeration kernels want.
class BinaryMatrix {
  public:
    BinaryMatrix(int rows, int cols) : rows_(rows), cols_(cols), col_(static_cast<size_t>(cols)) {
        if (rows < 1 || rows > 64 || cols < 0)
            throw DimensionTooLarge("BinaryMatrix supports 1..64 rows, got " + std::to_string(rows) +
                                    "x" + std::to_string(cols));
    }

    static BinaryMatrix from_columns(int rows, std::span<const std::uint64_t> cols) {
        BinaryMatrix m(rows, static_cast<int>(cols.size()));
        std::uint64_t mask = row_mask(rows);
        for (size_t j = 0; j < cols.size(); ++j) {
            if (cols[j] & ~mask)
                throw InputError("column has bits outside the row range");
            m.col_[j] = cols[j];
        }
        return m;
    }

    static BinaryMatrix identity(int d) {
        BinaryMatrix m(d, d);
        for (int j = 0; j < d; ++j)
            m.col_[static_cast<size_t>(j)] = std::uint64_t{1} << j;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    int entry(int i, int j) const { return static_cast<int>((col_[static_cast<size_t>(j)] >> i) & 1u); }
    void set(int i, int j, int v) {
        std::uint64_t bit = std::uint64_t{1} << i;
        if (v)
            col_[static_cast<size_t>(j)] |= bit;
        else
            col_[static_cast<size_t>(j)] &= ~bit;
    }

    std::uint64_t column(int j) const { return col_[static_cast<size_t>(j)]; }
    std::span<const std::uint64_t> columns() const { return {col_.data(), col_.size()}; }

    // Row r as a bitmask over column indices.
    std::uint64_t row(int r) const {
        std::uint64_t out = 0;
        for (int j = 0; j < cols_; ++j)
            out |= ((col_[static_cast<size_t>(j)] >> r) & 1u) << j;
        return out;
    }

    BinaryMatrix without_column(int j) const {
        BinaryMatrix m(rows_, cols_ - 1);
        int t = 0;
        for (int c = 0; c < cols_; ++c)
            if (c != j)
                m.col_[static_cast<size_t>(t++)] = col_[static_cast<size_t>(c)];
        return m;
    }

    BinaryMatrix transposed() const {
        BinaryMatrix m(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            m.col_[static_cast<size_t>(r)] = row(r);
        return m;
    }

    bool operator==(const BinaryMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && col_ == o.col_;
    }

    static std::uint64_t row_mask(int rows) {
        return rows >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows) - 1;
    }

  private:
    int rows_;
    int cols_;
    std::vector<std::uint64_t> col_;
};

// Parses a matrix given as one line per row, each line a run of '0'/'1'
// characters (optionally separated by spaces).  Blank leading lines are
// skipped; a blank line after the first row ends the matrix.
inline BinaryMatrix parse_matrix(std::istream& in) {
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::string digits;
        for (char ch : line) {
            if (ch == '0' || ch == '1')
                digits.push_back(ch);
            else if (ch != ' ' && ch != '\t' && ch != '\r')
                throw InputError("unexpected character '" + std::string(1, ch) + "' in matrix input");
        }
        if (digits.empty()) {
            if (rows.empty())
                continue;
            break;
        }
        rows.push_back(digits);
    }
    if (rows.empty())
        throw InputError("empty matrix input");
    size_t width = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != width)
            throw InputError("ragged matrix input: rows have different lengths");
    if (rows.size() > 64)
        throw DimensionTooLarge("matrix input has more than 64 rows");

    BinaryMatrix m(static_cast<int>(rows.size()), static_cast<int>(width));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < width; ++j)
            if (rows[i][j] == '1')
                m.set(static_cast<int>(i), static_cast<int>(j), 1);
    return m;
}

inline void print_matrix(std::ostream& out, const BinaryMatrix& m) {
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j)
            out << char('0' + m.entry(i, j));
        out << '\n';
    }
}

} // namespace cubespec
