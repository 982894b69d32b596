#pragma once

// Coefficients of the zero-section class in the invariant classes, and exact
// verification of the identities it satisfies on the boundary ring.

#include "chowkit/chow_ring.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace chowkit {

/// alpha_{a,b,c} =
///   (-1)^{b+c+1} (2^{-b-c} - 2^{1-3b-3c}) (2a+2b+2c-1)!! B_{2b+2c}
///   / ((2a+2c-1)!! (2b+2c-1)!! a! b! c!)
Rational alpha(int a, int b, int c);

/// alpha_{a,0,c} = (-1)^c (2^{1-2c} - 1) B_{2c} / (a! (2c)!)
Rational alpha_b0_closed_form(int a, int c);

/// eta_{a,b,c} = (-1)^{b+c} (2c+2b-1)!! / (2^{3b+3c} a! c!)
///   * sum_{x=0}^{b} (2 - 2^{2c+2x}) B_{2c+2x} / ((2c+2b-2x-1)!! (2c+2x-1)!! (b-x)! x!)
Rational eta(int a, int b, int c);

struct CoefficientEntry {
    Exponents3 abc;
    Rational alpha;
    Rational eta;
};

struct CoefficientTable {
    int genus = 0;
    std::vector<CoefficientEntry> entries;  ///< in weighted_exponents(genus) order
    const CoefficientEntry& at(const Exponents3& abc) const;
};

/// Cached per genus.
const CoefficientTable& coefficient_table(int g);

/// xi * T1^{g-1} / (g-1)!
Polynomial boundary_zero_section(int g);

/// Sum over the table of coefficient * basis monomial, in (Theta, D, Delta).
Polynomial free_main_rhs(int g, InvariantBasis basis);

/// free_main_rhs with Theta, D, Delta replaced by their boundary expressions; unreduced.
Polynomial assemble_main_rhs(const RingContext& ctx, InvariantBasis basis);

struct VerificationReport {
    std::string identity;
    int genus = 0;
    bool holds = false;
    Polynomial residual{VarSet::canonical()};
    std::optional<int> kernel_dimension;
    std::chrono::duration<double> elapsed{};
};

/// Which section class stands in for the zero section; the two differ by
/// T1^{g-1} P / (g-1)!, which vanishes in R.
enum class SectionRepresentative { xi, xi_plus_p };

VerificationReport verify_main(int g, InvariantBasis basis = InvariantBasis::alpha,
                               SectionRepresentative rep = SectionRepresentative::xi);
VerificationReport verify_main(const RingContext& ctx, InvariantBasis basis = InvariantBasis::alpha,
                               SectionRepresentative rep = SectionRepresentative::xi);

/// The alpha and eta expansions agree in the free ring Q[Theta, D, Delta].
VerificationReport verify_eta_alpha(int g);

/// sum alpha_{abc} T1^a (-2 T2)^b (4 T1 T2 - P^2)^c vanishes in R.
VerificationReport verify_triangular(int g);
VerificationReport verify_triangular(const RingContext& ctx);

/// Shift- and j-invariance of Theta, D, Delta, Q and the boundary zero
/// section, one report per (class, predicate).
std::vector<VerificationReport> verify_invariance(const RingContext& ctx);

/// The alpha-basis system solved for the boundary zero section contains the
/// closed-form table; the report carries the kernel dimension.
VerificationReport verify_solver_membership(const RingContext& ctx);

/// sum_{c=l}^{h} (-1)^c 2^{2c} (2g-2c)! / ((g-c)! (c-l)! (g-h-c)! (h-c)!)
/// Requires 0 <= l <= h and h <= g - h.
Rational maple_inner_sum(int g, int h, int l);

/// maple_inner_sum(g, h, l) divided by (-1)^l 2^{2l} l! / ((g-l-h)! (h-l)! (2l)!)
Rational maple_ratio(int g, int h, int l);

/// The common value of maple_ratio over l = 0..h, or nullopt if it varies.
std::optional<Rational> maple_constant(int g, int h);

}  // namespace chowkit
