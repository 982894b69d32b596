#pragma once

// The double ramification class on the moduli of curves of geometric genus at
// least g-1, expanded as a formal polynomial in the divisor symbols K_i,
// delta_irr, delta_h^P and the codimension-two symbols xi_i. No relations
// among the symbols are imposed.

#include "chowkit/exact_arith.hpp"

#include "json.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chowkit::dr {

class WeightError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Integers d_1..d_n summing to zero.
class WeightVector {
public:
    explicit WeightVector(std::vector<long> weights);

    std::size_t size() const { return d_.size(); }
    long operator[](std::size_t i) const { return d_[i]; }  ///< zero-based
    const std::vector<long>& values() const { return d_; }
    /// d_P for a subset given as a bitmask over zero-based indices.
    long subset_sum(std::uint32_t mask) const;

private:
    std::vector<long> d_;
};

enum class SymbolKind : std::uint8_t { K, delta_irr, delta, xi };

/// A divisor (or codimension-two) symbol. Marked points are 1-based in the
/// public surface; `subset` is a bitmask with bit i-1 set for point i.
struct DivisorSymbol {
    SymbolKind kind = SymbolKind::K;
    int index = 0;             ///< K_i and xi_i
    int h = 0;                 ///< delta_h^P
    std::uint32_t subset = 0;  ///< delta_h^P

    static DivisorSymbol K(int i);
    static DivisorSymbol delta_irr();
    static DivisorSymbol xi(int i);
    /// delta_h^P in canonical form for genus g and n marked points: the
    /// representative of {(h, P), (g-h, P^c)} with smaller h; when h = g-h the
    /// subset containing point 1 is chosen.
    static DivisorSymbol delta(int g, int n, int h, std::uint32_t subset);

    int codim() const { return kind == SymbolKind::xi ? 2 : 1; }
    std::vector<int> points() const;

    auto operator<=>(const DivisorSymbol&) const = default;
};

/// Product of symbols with positive powers, sorted by symbol.
using SymbolMonomial = std::vector<std::pair<DivisorSymbol, int>>;

class FormalClass {
public:
    using TermMap = std::map<SymbolMonomial, Rational>;

    FormalClass(int g, int n);
    static FormalClass constant(int g, int n, const Rational& c);
    static FormalClass symbol(int g, int n, const DivisorSymbol& s, const Rational& c = Rational(1));

    int genus() const { return g_; }
    int marked_points() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Weights recorded for serialization; optional metadata.
    const std::optional<std::vector<long>>& weights() const { return weights_; }
    void set_weights(std::vector<long> w) { weights_ = std::move(w); }

    void add_term(SymbolMonomial m, const Rational& c);
    Rational coefficient(const SymbolMonomial& m) const;

    /// Codimension of the homogeneous class, nullopt for zero or mixed classes.
    std::optional<int> codim() const;
    bool is_homogeneous() const;

    FormalClass& operator+=(const FormalClass& other);
    FormalClass& operator*=(const Rational& c);
    friend FormalClass operator+(FormalClass a, const FormalClass& b) { return a += b; }
    friend FormalClass operator-(FormalClass a, const FormalClass& b) { return a += b * Rational(-1); }
    friend FormalClass operator*(FormalClass a, const Rational& c) { return a *= c; }
    friend FormalClass operator*(const FormalClass& a, const FormalClass& b);

    /// Compares terms and ambient (g, n); weights metadata is ignored.
    bool operator==(const FormalClass& other) const;

private:
    void check_ambient(const FormalClass& other) const;

    int g_;
    int n_;
    TermMap terms_;
    std::optional<std::vector<long>> weights_;
};

int monomial_codim(const SymbolMonomial& m);
FormalClass pow(const FormalClass& p, int e);

/// s*Theta = 1/2 sum d_i^2 K_i - 1/2 sum_P (d_P^2 - sum_{i in P} d_i^2) delta_0^P
///           - 1/2 sum_{h>0,P} d_P^2 delta_h^P, one term per canonical boundary divisor.
FormalClass pullback_theta(int g, const WeightVector& d);
/// s*D = delta_irr.
FormalClass pullback_D(int g, int n);
/// s*Delta = sum |d_i| xi_i.
FormalClass pullback_delta(int g, const WeightVector& d);

/// sum_{a+b+2c=g} eta_{abc} (s*Theta)^a delta_irr^b (s*Delta)^c.
FormalClass dr_class(int g, const WeightVector& d);

/// Sets delta_irr and every xi_i to zero.
FormalClass specialize_compact_type(const FormalClass& fc);

/// Relabels marked points: point i becomes point perm[i-1] (1-based values).
FormalClass permute_points(const FormalClass& fc, std::span<const int> perm);

enum class SerialMode { json, latex };

std::string serialize(const FormalClass& fc, SerialMode mode);
nlohmann::ordered_json to_json(const FormalClass& fc);
FormalClass deserialize(const nlohmann::json& j);
FormalClass deserialize(const std::string& text);

}  // namespace chowkit::dr
