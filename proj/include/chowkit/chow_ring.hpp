#pragma once

// The genus-g rings
//   R  = Q[T1, P, T2] / I_g,   I_g generated by the coefficients in n of (T1 + nP + n^2 T2)^g
//   R~ = R[xi] / (xi^2 - xi P)
// with normal forms, graded dimensions, the socle pushforward, the shift and
// involution operators, and the subring generated by Theta, D and Delta.
//
// All polynomials use VarSet::canonical() = (xi, T1, P, T2). Elements of R are
// simply the xi-free ones.

#include "chowkit/echelon.hpp"
#include "chowkit/polynomial.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace chowkit {

struct Relation {
    int d_grade;  ///< l in -g..g; the coefficient of n^(g-l)
    Polynomial poly;
};

/// Reduced row echelon data for the degree-k piece of I_g.
/// The smallest monomial of a rule under GrLexGreater.
Monomial pivot_monomial(const Polynomial& rule);

struct DegreeEchelon {
    int degree = 0;
    /// Each rule is monic in its pivot monomial (its smallest monomial under
    /// GrLexGreater) and has no other pivot in its support. Sorted by pivot,
    /// smallest first.
    std::vector<Polynomial> rules;
    /// Non-pivot monomials of degree k in descending order: the canonical basis
    /// of R^k. In degrees >= g these are the multiples of (T1 T2)^(k-g+1).
    std::vector<Monomial> basis;
    /// Number of degree-k monomials per d-grade and the rank of I_g in that grade.
    std::map<int, std::pair<int, int>> grade_counts;
};

enum class EchelonStrategy {
    blocked_parallel,  ///< one block per d-grade, blocks and eliminations run under OpenMP
    full_serial,       ///< one matrix over all degree-k monomials, serial kernel
};

struct RingOptions {
    EchelonStrategy strategy = EchelonStrategy::blocked_parallel;
    /// Directory for persisted echelon caches; empty disables persistence.
    std::filesystem::path cache_dir;
};

/// Reads CHOWKIT_CACHE_DIR into the options.
RingOptions ring_options_from_env();

class RingContext {
public:
    explicit RingContext(int genus, RingOptions options = {});

    int genus() const { return genus_; }
    const std::vector<Relation>& relations() const { return relations_; }
    const RingOptions& options() const { return options_; }

    /// Echelon data of the degree-k piece; computed once and shared.
    std::shared_ptr<const DegreeEchelon> echelon(int k) const;

private:
    struct Slot {
        std::once_flag once;
        std::shared_ptr<const DegreeEchelon> data;
    };

    std::shared_ptr<const DegreeEchelon> build(int k) const;

    int genus_;
    RingOptions options_;
    std::vector<Relation> relations_;
    mutable std::mutex mu_;
    mutable std::map<int, std::shared_ptr<Slot>> cache_;
};

/// Expands (T1 + nP + n^2 T2)^g in an auxiliary variable and keeps the 2g+1
/// coefficients. Throws std::invalid_argument for g <= 0.
RingContext make_context(int g, RingOptions options = {});

/// Standalone echelon computation for degree k with an explicit strategy,
/// bypassing the context cache.
DegreeEchelon compute_echelon(const RingContext& ctx, int k, EchelonStrategy strategy);

Polynomial normal_form(const RingContext& ctx, const Polynomial& p);
bool is_zero(const RingContext& ctx, const Polynomial& p);

/// Splits p = f0 + xi*f1 after applying xi^2 = xi*P.
std::pair<Polynomial, Polynomial> split_xi(const Polynomial& p);

int dim_graded(const RingContext& ctx, int k);
int dim_graded(const RingContext& ctx, int k, int l);
std::vector<Monomial> canonical_basis(const RingContext& ctx, int k);

/// h_*(T1^{g-1-a} P^{2a} T2^{g-1-a}) = (-1)^a (g-1)! (2a)! (g-1-a)! / a!.
Rational socle_monomial_pushforward(int g, int a);

/// Pushforward of a degree 2g-2 element of R to the base. Normalized by
/// h_*(T1^{g-1} T2^{g-1}) = ((g-1)!)^2 and extended linearly through the
/// one-dimensional socle.
Rational socle_pushforward(const RingContext& ctx, const Polynomial& p);

struct PairingMatrix {
    int k = 0;
    std::vector<Monomial> row_basis;  ///< basis of R^{g-1-k}
    std::vector<Monomial> col_basis;  ///< basis of R^{g-1+k}
    RationalMatrix gram;
};

PairingMatrix pairing_matrix(const RingContext& ctx, int k);

// Operators on Q[xi, T1, P, T2].

/// (s*)^n: T1 -> T1 + nP + n^2 T2, P -> P + 2n T2, T2 -> T2. Rejects xi.
Polynomial shift(const Polynomial& p, long n);
/// (s*)^{1/2}: T1 -> T1 + P/2 + T2/4, P -> P + T2, T2 -> T2. Rejects xi.
Polynomial half_shift(const Polynomial& p);
/// xi -> xi - P, P -> -P.
Polynomial involution_j(const Polynomial& p);
/// Restriction to the zero section: xi -> P.
Polynomial restrict_zero(const Polynomial& p);
/// Restriction to the infinity section: xi -> 0.
Polynomial restrict_infty(const Polynomial& p);

Polynomial shift_invariance_residual(const RingContext& ctx, const Polynomial& p);
Polynomial j_invariance_residual(const RingContext& ctx, const Polynomial& p);
bool is_shift_invariant(const RingContext& ctx, const Polynomial& p);
bool is_j_invariant(const RingContext& ctx, const Polynomial& p);

struct InvariantGenerators {
    Polynomial theta;  ///< xi + T1 - P/2
    Polynomial d;      ///< -2 T2
    Polynomial delta;  ///< -4 xi T2 - P^2 + 2 P T2
    Polynomial q;      ///< Delta - 2 Theta D
};

const InvariantGenerators& invariant_generators();

/// Maps a polynomial in (Theta, D, Delta) to (xi, T1, P, T2).
Polynomial to_boundary(const Polynomial& in_invariants);

enum class InvariantBasis {
    alpha,  ///< (Theta - D/8)^a D^b (Delta - 2 Theta D)^c
    eta,    ///< Theta^a D^b Delta^c
};

using Exponents3 = std::array<int, 3>;

/// All (a, b, c) >= 0 with a + b + 2c = k, ordered by c then b ascending.
std::vector<Exponents3> weighted_exponents(int k);

/// The basis element for (a, b, c), as a polynomial in (Theta, D, Delta).
Polynomial invariant_monomial(InvariantBasis basis, const Exponents3& abc);

class NotInSpan : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InvariantExpression {
    std::map<Exponents3, Rational> coefficients;  ///< one particular solution
    int kernel_dimension = 0;
};

/// Solves p = sum c_{abc} * basis(a, b, c) in R~ over a + b + 2c = k.
/// Throws NotInSpan when the system is inconsistent.
InvariantExpression express_in_invariants(const RingContext& ctx, const Polynomial& p, InvariantBasis basis, int k);

}  // namespace chowkit
