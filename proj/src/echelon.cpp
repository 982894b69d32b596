#include "chowkit/echelon.hpp"

#include <stdexcept>
#include <utility>

namespace chowkit {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : cols_(cols), data_(rows, std::vector<Rational>(cols)) {}

void RationalMatrix::append_row(std::vector<Rational> row) {
    if (data_.empty() && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw std::invalid_argument("append_row: width mismatch");
    data_.push_back(std::move(row));
}

namespace {

// Finds a pivot in column c at or below `from`, swaps it into place and scales
// it to 1. Returns false when the column has no pivot.
bool prepare_pivot(RationalMatrix& m, std::size_t from, std::size_t c) {
    std::size_t p = from;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) return false;
    if (p != from) std::swap(m.row(p), m.row(from));
    auto& prow = m.row(from);
    const Rational inv = 1 / prow[c];
    for (std::size_t j = c; j < m.cols(); ++j)
        if (prow[j] != 0) prow[j] *= inv;
    return true;
}

void eliminate_row(std::vector<Rational>& row, const std::vector<Rational>& prow, std::size_t c) {
    if (row[c] == 0) return;
    const Rational f = row[c];
    for (std::size_t j = c; j < row.size(); ++j)
        if (prow[j] != 0) row[j] -= f * prow[j];
}

Echelon finish(RationalMatrix& m, std::size_t rank, std::vector<std::size_t> pivots) {
    Echelon e;
    e.pivot_columns = std::move(pivots);
    e.reduced = RationalMatrix(0, m.cols());
    for (std::size_t r = 0; r < rank; ++r) e.reduced.append_row(std::move(m.row(r)));
    return e;
}

}  // namespace

Echelon row_reduce_serial(RationalMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        if (!prepare_pivot(m, r, c)) continue;
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r) eliminate_row(m.row(i), m.row(r), c);
        pivots.push_back(c);
        ++r;
    }
    return finish(m, r, std::move(pivots));
}

Echelon row_reduce_parallel(RationalMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    const auto nrows = static_cast<std::ptrdiff_t>(m.rows());
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        if (!prepare_pivot(m, r, c)) continue;
        const auto& prow = m.row(r);
        const auto pr = static_cast<std::ptrdiff_t>(r);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < nrows; ++i)
            if (i != pr) eliminate_row(m.row(static_cast<std::size_t>(i)), prow, c);
        pivots.push_back(c);
        ++r;
    }
    return finish(m, r, std::move(pivots));
}

Echelon row_reduce(RationalMatrix m, Kernel kernel) {
    return kernel == Kernel::serial ? row_reduce_serial(std::move(m)) : row_reduce_parallel(std::move(m));
}

Rational determinant(RationalMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix is not square");
    Rational det(1);
    const std::size_t n = m.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            std::swap(m.row(p), m.row(c));
            det = -det;
        }
        det *= m(c, c);
        const Rational inv = 1 / m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            const Rational f = m(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

}  // namespace chowkit
