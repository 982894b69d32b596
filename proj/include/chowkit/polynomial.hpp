#pragma once

// Sparse multivariate polynomials with exact rational coefficients over a
// small fixed variable set.

#include "chowkit/exact_arith.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chowkit {

inline constexpr std::size_t kMaxVars = 8;

class VarSetMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Ordered list of variable names. Position in the list is the variable's
/// precedence in the monomial order (earlier = larger).
class VarSet {
public:
    explicit VarSet(std::vector<std::string> names);

    /// (xi, T1, P, T2): generators of the boundary ring.
    static std::shared_ptr<const VarSet> canonical();
    /// (Theta, D, Delta): the free algebra of invariant classes.
    static std::shared_ptr<const VarSet> invariants();

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::size_t require(std::string_view name) const;

    bool operator==(const VarSet& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

bool same_vars(const VarSetPtr& a, const VarSetPtr& b);

/// Exponent vector. Only the first `size` slots are meaningful; the rest stay 0.
class Monomial {
public:
    using Exponent = std::uint16_t;

    Monomial() = default;
    explicit Monomial(std::span<const int> exps);

    Exponent operator[](std::size_t i) const { return exps_[i]; }
    void set(std::size_t i, int e);
    int degree() const;
    bool is_one() const { return degree() == 0; }

    Monomial operator*(const Monomial& other) const;
    bool divides(const Monomial& other) const;

    bool operator==(const Monomial&) const = default;
    const std::array<Exponent, kMaxVars>& exponents() const { return exps_; }

private:
    std::array<Exponent, kMaxVars> exps_{};
};

/// Graded lexicographic order, largest first: higher total degree wins, ties
/// broken lexicographically with variable 0 most significant.
struct GrLexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

/// All monomials of total degree `degree` in the first `nvars` variables, in
/// descending graded-lex order. `offset` shifts the variable slots used.
std::vector<Monomial> monomials_of_degree(int degree, std::size_t nvars, std::size_t offset = 0);

class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GrLexGreater>;

    explicit Polynomial(VarSetPtr vars);
    Polynomial(VarSetPtr vars, const Rational& constant);

    static Polynomial variable(VarSetPtr vars, std::string_view name);
    static Polynomial monomial(VarSetPtr vars, const Monomial& m, const Rational& c = Rational(1));

    const VarSetPtr& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    Rational coefficient(const Monomial& m) const;
    /// Largest monomial under GrLexGreater; requires a nonzero polynomial.
    const Monomial& leading_monomial() const { return terms_.begin()->first; }
    int total_degree() const;
    int degree_in(std::size_t var) const;
    bool is_homogeneous() const;

    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Rational& c);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    Polynomial operator-() const;

    bool operator==(const Polynomial& other) const;

private:
    void check_vars(const Polynomial& other) const;

    VarSetPtr vars_;
    TermMap terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial scale(const Polynomial& p, const Rational& c);
Polynomial pow(const Polynomial& p, int n);

/// Simultaneous substitution x_i -> images[i]; all images must share one
/// target VarSet, which may differ from p's.
Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images);

/// Simultaneous substitution within p's own VarSet; unmapped variables are
/// left unchanged.
Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& mapping);

/// Terms of total degree k.
Polynomial graded_piece(const Polynomial& p, int k);

/// Terms with d-grade l, where d(T1^a P^b T2^c) = a - c. Requires T1 and T2 in
/// the VarSet and rejects polynomials containing xi.
Polynomial d_graded_piece(const Polynomial& p, int l);

/// d-grade of a monomial in a VarSet containing T1 and T2.
int d_grade(const VarSet& vars, const Monomial& m);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Parses the expression grammar
///   expr   := term (('+' | '-') term)* ;
///   term   := factor ('*' factor)* ;
///   factor := base ('^' nat)? ;
///   base   := rational | var | '(' expr ')' | '-' base ;
///   rational := int ('/' nat)? ;
/// Whitespace between tokens is ignored.
Polynomial parse(std::string_view text, VarSetPtr vars);

enum class FormatMode { text, latex, json };

std::string format(const Polynomial& p, FormatMode mode = FormatMode::text);

nlohmann::ordered_json to_json(const Polynomial& p);
/// Accepts the schema produced by to_json; the VarSet is rebuilt from "vars"
/// unless `vars` is given, in which case the names must match.
Polynomial polynomial_from_json(const nlohmann::json& j, VarSetPtr vars = nullptr);

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

}  // namespace chowkit
