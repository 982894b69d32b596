#include "chowkit/echelon.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <numeric>

using namespace chowkit;

namespace {

RationalMatrix random_matrix(std::size_t rows, std::size_t cols, int zero_percent) {
    RationalMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (testing::uniform_int(1, 100) > zero_percent) m(r, c) = testing::random_rational();
    return m;
}

// Leibniz expansion over all permutations.
Rational leibniz_determinant(const RationalMatrix& m) {
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    Rational det(0);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) ++inversions;
        Rational term(inversions % 2 ? -1 : 1);
        for (std::size_t i = 0; i < perm.size(); ++i) term *= m(i, perm[i]);
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

void check_is_rref(const Echelon& e) {
    REQUIRE(e.reduced.rows() == e.rank());
    for (std::size_t r = 0; r < e.rank(); ++r) {
        const std::size_t pc = e.pivot_columns[r];
        if (r > 0) CHECK(e.pivot_columns[r - 1] < pc);
        CHECK(e.reduced(r, pc) == 1);
        for (std::size_t c = 0; c < pc; ++c) CHECK(e.reduced(r, c) == 0);
        for (std::size_t o = 0; o < e.rank(); ++o)
            if (o != r) CHECK(e.reduced(o, pc) == 0);
    }
}

}  // namespace

TEST_CASE("serial and parallel kernels agree") {
    for (int trial = 0; trial < 40; ++trial) {
        const auto rows = static_cast<std::size_t>(testing::uniform_int(1, 12));
        const auto cols = static_cast<std::size_t>(testing::uniform_int(1, 12));
        const auto m = random_matrix(rows, cols, testing::uniform_int(0, 80));
        const Echelon s = row_reduce_serial(m), p = row_reduce_parallel(m);
        CHECK(s.reduced == p.reduced);
        CHECK(s.pivot_columns == p.pivot_columns);
        check_is_rref(s);
        CHECK(row_reduce(m, Kernel::serial).pivot_columns == s.pivot_columns);
    }
}

TEST_CASE("rank of a rank-deficient matrix") {
    RationalMatrix m(3, 3);
    for (std::size_t c = 0; c < 3; ++c) {
        m(0, c) = Rational(long(c + 1));
        m(1, c) = Rational(long(2 * c + 2));
        m(2, c) = Rational(long(c * c));
    }
    CHECK(row_reduce_serial(m).rank() == 2);
    CHECK(determinant(m) == 0);
    CHECK(row_reduce_serial(RationalMatrix(2, 4)).rank() == 0);
}

TEST_CASE("determinant against the Leibniz expansion") {
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = static_cast<std::size_t>(testing::uniform_int(1, 6));
        const auto m = random_matrix(n, n, testing::uniform_int(0, 60));
        CHECK(determinant(m) == leibniz_determinant(m));
    }
    CHECK(determinant(RationalMatrix(0, 0)) == 1);
    CHECK_THROWS_AS(determinant(RationalMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("append_row checks width") {
    RationalMatrix m(0, 3);
    m.append_row({Rational(1), Rational(2), Rational(3)});
    CHECK(m.rows() == 1);
    CHECK_THROWS_AS(m.append_row({Rational(1)}), std::invalid_argument);
}
