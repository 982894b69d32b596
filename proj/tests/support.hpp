#pragma once

#include "chowkit/polynomial.hpp"

#include <random>
#include <vector>

namespace chowkit::testing {

inline std::mt19937& rng() {
    static std::mt19937 gen(20240611u);
    return gen;
}

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline Rational random_rational(int num_bound = 9, int den_bound = 5) {
    int num = uniform_int(-num_bound, num_bound);
    if (num == 0) num = 1;
    return make_rational(num, uniform_int(1, den_bound));
}

/// Random polynomial with at most `max_terms` terms of total degree <= max_degree
/// in the variables [first, first + count) of `vars`.
inline Polynomial random_polynomial(const VarSetPtr& vars, int max_terms = 6, int max_degree = 5,
                                    std::size_t first = 0, std::size_t count = 0) {
    if (count == 0) count = vars->size() - first;
    Polynomial p(vars);
    const int nterms = uniform_int(0, max_terms);
    for (int t = 0; t < nterms; ++t) {
        Monomial m;
        int budget = uniform_int(0, max_degree);
        for (std::size_t v = first; v < first + count && budget > 0; ++v) {
            const int e = uniform_int(0, budget);
            m.set(v, e);
            budget -= e;
        }
        p.add_term(m, random_rational());
    }
    return p;
}

/// Random homogeneous polynomial of degree k in T1, P, T2 of the canonical set.
inline Polynomial random_homogeneous_ring(int k, int max_terms = 6) {
    const auto vars = VarSet::canonical();
    const auto monos = monomials_of_degree(k, 3, 1);
    Polynomial p(vars);
    for (int t = 0; t < max_terms; ++t)
        p.add_term(monos[static_cast<std::size_t>(uniform_int(0, int(monos.size()) - 1))], random_rational());
    return p;
}

inline Polynomial var(const char* name) { return Polynomial::variable(VarSet::canonical(), name); }

inline Monomial mono(int xi, int t1, int p, int t2) {
    Monomial m;
    m.set(0, xi);
    m.set(1, t1);
    m.set(2, p);
    m.set(3, t2);
    return m;
}

inline Polynomial ring(std::string_view text) { return parse(text, VarSet::canonical()); }

}  // namespace chowkit::testing
