#pragma once

// Exact Gauss-Jordan elimination over Q.
//
// Two kernels produce bit-identical reduced row echelon forms:
//   row_reduce_serial    textbook reference, kept for testing
//   row_reduce_parallel  eliminates each pivot column from all other rows
//                        with an OpenMP parallel loop
// RREF is unique for a fixed column order, so the kernels are interchangeable.

#include "chowkit/exact_arith.hpp"

#include <cstddef>
#include <vector>

namespace chowkit {

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return data_.size(); }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r][c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r][c]; }

    std::vector<Rational>& row(std::size_t r) { return data_[r]; }
    const std::vector<Rational>& row(std::size_t r) const { return data_[r]; }
    void append_row(std::vector<Rational> row);

    bool operator==(const RationalMatrix&) const = default;

private:
    std::size_t cols_ = 0;
    std::vector<std::vector<Rational>> data_;
};

struct Echelon {
    RationalMatrix reduced;                  ///< nonzero rows only, one per pivot
    std::vector<std::size_t> pivot_columns;  ///< strictly increasing
    std::size_t rank() const { return pivot_columns.size(); }
};

Echelon row_reduce_serial(RationalMatrix m);
Echelon row_reduce_parallel(RationalMatrix m);

enum class Kernel { serial, parallel };

Echelon row_reduce(RationalMatrix m, Kernel kernel);

/// Exact determinant of a square matrix.
Rational determinant(RationalMatrix m);

}  // namespace chowkit
