#include "chowkit/dr_class.hpp"

#include "chowkit/zero_section.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>

namespace chowkit::dr {

namespace {

std::uint32_t full_mask(int n) { return n >= 32 ? 0xffffffffu : ((1u << n) - 1u); }

SymbolMonomial merge(const SymbolMonomial& a, const SymbolMonomial& b) {
    SymbolMonomial out;
    out.reserve(a.size() + b.size());
    auto i = a.begin(), j = b.begin();
    while (i != a.end() || j != b.end()) {
        if (j == b.end() || (i != a.end() && i->first < j->first)) out.push_back(*i++);
        else if (i == a.end() || j->first < i->first) out.push_back(*j++);
        else {
            out.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    return out;
}

std::string latex_rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

std::string latex_symbol(const DivisorSymbol& s) {
    switch (s.kind) {
        case SymbolKind::K: return "K_{" + std::to_string(s.index) + "}";
        case SymbolKind::delta_irr: return "\\delta_{irr}";
        case SymbolKind::xi: return "\\xi_{" + std::to_string(s.index) + "}";
        case SymbolKind::delta: {
            std::string set;
            for (int p : s.points()) set += (set.empty() ? "" : ",") + std::to_string(p);
            return "\\delta_{" + std::to_string(s.h) + "}^{\\{" + set + "\\}}";
        }
    }
    return {};
}

nlohmann::ordered_json symbol_json(const DivisorSymbol& s, int power) {
    nlohmann::ordered_json j;
    switch (s.kind) {
        case SymbolKind::K:
            j["kind"] = "K";
            j["i"] = s.index;
            break;
        case SymbolKind::delta_irr: j["kind"] = "delta_irr"; break;
        case SymbolKind::delta:
            j["kind"] = "delta";
            j["h"] = s.h;
            j["P"] = s.points();
            break;
        case SymbolKind::xi:
            j["kind"] = "xi";
            j["i"] = s.index;
            break;
    }
    j["power"] = power;
    return j;
}

DivisorSymbol symbol_from_json(const nlohmann::json& j, int g, int n) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "K") return DivisorSymbol::K(j.at("i").get<int>());
    if (kind == "delta_irr") return DivisorSymbol::delta_irr();
    if (kind == "xi") return DivisorSymbol::xi(j.at("i").get<int>());
    if (kind == "delta") {
        std::uint32_t mask = 0;
        for (int p : j.at("P").get<std::vector<int>>()) {
            if (p < 1 || p > n) throw std::invalid_argument("delta symbol: marked point out of range");
            mask |= 1u << (p - 1);
        }
        return DivisorSymbol::delta(g, n, j.at("h").get<int>(), mask);
    }
    throw std::invalid_argument("unknown symbol kind '" + kind + "'");
}

}  // namespace

// --------------------------------------------------------- WeightVector

WeightVector::WeightVector(std::vector<long> weights) : d_(std::move(weights)) {
    if (d_.empty()) throw WeightError("weight vector must be non-empty");
    if (d_.size() > 31) throw WeightError("at most 31 marked points are supported");
    if (std::accumulate(d_.begin(), d_.end(), 0L) != 0) throw WeightError("weights must sum to zero");
}

long WeightVector::subset_sum(std::uint32_t mask) const {
    long s = 0;
    for (std::size_t i = 0; i < d_.size(); ++i)
        if (mask & (1u << i)) s += d_[i];
    return s;
}

// -------------------------------------------------------- DivisorSymbol

DivisorSymbol DivisorSymbol::K(int i) {
    if (i < 1) throw std::invalid_argument("K_i: index must be >= 1");
    return {SymbolKind::K, i, 0, 0};
}

DivisorSymbol DivisorSymbol::delta_irr() { return {SymbolKind::delta_irr, 0, 0, 0}; }

DivisorSymbol DivisorSymbol::xi(int i) {
    if (i < 1) throw std::invalid_argument("xi_i: index must be >= 1");
    return {SymbolKind::xi, i, 0, 0};
}

DivisorSymbol DivisorSymbol::delta(int g, int n, int h, std::uint32_t subset) {
    const std::uint32_t all = full_mask(n);
    if (h < 0 || h > g) throw std::invalid_argument("delta_h^P: need 0 <= h <= g");
    if (subset & ~all) throw std::invalid_argument("delta_h^P: subset exceeds the marked points");
    int ch = h;
    std::uint32_t cs = subset;
    if (g - h < h || (g - h == h && !(subset & 1u))) {
        ch = g - h;
        cs = all & ~subset;
    }
    if (ch == 0 && std::popcount(cs) < 2) throw std::invalid_argument("delta_0^P requires |P| >= 2");
    return {SymbolKind::delta, 0, ch, cs};
}

std::vector<int> DivisorSymbol::points() const {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (subset & (1u << i)) out.push_back(i + 1);
    return out;
}

int monomial_codim(const SymbolMonomial& m) {
    int c = 0;
    for (const auto& [s, e] : m) c += s.codim() * e;
    return c;
}

// ---------------------------------------------------------- FormalClass

FormalClass::FormalClass(int g, int n) : g_(g), n_(n) {
    if (g < 0 || n < 0) throw std::invalid_argument("FormalClass: negative ambient data");
}

FormalClass FormalClass::constant(int g, int n, const Rational& c) {
    FormalClass f(g, n);
    f.add_term({}, c);
    return f;
}

FormalClass FormalClass::symbol(int g, int n, const DivisorSymbol& s, const Rational& c) {
    FormalClass f(g, n);
    f.add_term({{s, 1}}, c);
    return f;
}

void FormalClass::add_term(SymbolMonomial m, const Rational& c) {
    if (c == 0) return;
    if (terms_.empty() || terms_.rbegin()->first < m) {
        terms_.emplace_hint(terms_.end(), std::move(m), c);
        return;
    }
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational FormalClass::coefficient(const SymbolMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

bool FormalClass::is_homogeneous() const {
    if (terms_.empty()) return true;
    const int c = monomial_codim(terms_.begin()->first);
    return std::all_of(terms_.begin(), terms_.end(), [c](const auto& t) { return monomial_codim(t.first) == c; });
}

std::optional<int> FormalClass::codim() const {
    if (terms_.empty() || !is_homogeneous()) return std::nullopt;
    return monomial_codim(terms_.begin()->first);
}

void FormalClass::check_ambient(const FormalClass& other) const {
    if (g_ != other.g_ || n_ != other.n_) throw std::invalid_argument("formal classes over different (g, n)");
}

FormalClass& FormalClass::operator+=(const FormalClass& other) {
    check_ambient(other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

FormalClass& FormalClass::operator*=(const Rational& c) {
    if (c == 0) terms_.clear();
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

FormalClass operator*(const FormalClass& a, const FormalClass& b) {
    a.check_ambient(b);
    FormalClass r(a.g_, a.n_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(merge(ma, mb), ca * cb);
    return r;
}

bool FormalClass::operator==(const FormalClass& other) const {
    return g_ == other.g_ && n_ == other.n_ && terms_ == other.terms_;
}

namespace {

// Adds every product of `left` more factors with indices >= last, in
// non-decreasing order. `run` is the multiplicity of terms[last] so far; the
// coefficient picks up 1/run for each repeat, giving e!/prod(mult!) overall.
void expand_multisets(const std::vector<std::pair<SymbolMonomial, Rational>>& terms, std::size_t last, int run,
                      int left, const SymbolMonomial& mono, const Rational& coeff, FormalClass& out) {
    if (left == 0) {
        out.add_term(mono, coeff);
        return;
    }
    for (std::size_t i = last; i < terms.size(); ++i) {
        const int next_run = (i == last) ? run + 1 : 1;
        expand_multisets(terms, i, next_run, left - 1, merge(mono, terms[i].first),
                         coeff * terms[i].second / next_run, out);
    }
}

}  // namespace

FormalClass pow(const FormalClass& p, int e) {
    if (e < 0) throw std::invalid_argument("pow: negative exponent");
    FormalClass r(p.genus(), p.marked_points());
    const std::vector<std::pair<SymbolMonomial, Rational>> terms(p.terms().begin(), p.terms().end());
    expand_multisets(terms, 0, 0, e, {}, Rational(factorial(e)), r);
    return r;
}

// ------------------------------------------------------------ pullbacks

FormalClass pullback_theta(int g, const WeightVector& d) {
    if (g < 1) throw std::invalid_argument("pullback_theta: genus must be >= 1");
    const int n = static_cast<int>(d.size());
    const Rational half = make_rational(1, 2);
    FormalClass out(g, n);
    for (int i = 0; i < n; ++i) {
        const long di = d[static_cast<std::size_t>(i)];
        out.add_term({{DivisorSymbol::K(i + 1), 1}}, half * Rational(di * di));
    }
    const std::uint32_t all = full_mask(n);
    for (std::uint32_t mask = 0; mask <= all; ++mask) {
        const long dp = d.subset_sum(mask);
        if (std::popcount(mask) >= 2) {
            long sq = 0;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) sq += d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i)];
            out.add_term({{DivisorSymbol::delta(g, n, 0, mask), 1}}, -half * Rational(dp * dp - sq));
        }
        for (int h = 1; 2 * h <= g; ++h) {
            if (2 * h == g && !(mask & 1u)) continue;
            if (dp == 0) continue;
            out.add_term({{DivisorSymbol::delta(g, n, h, mask), 1}}, -half * Rational(dp * dp));
        }
        if (mask == all) break;
    }
    out.set_weights(d.values());
    return out;
}

FormalClass pullback_D(int g, int n) { return FormalClass::symbol(g, n, DivisorSymbol::delta_irr()); }

FormalClass pullback_delta(int g, const WeightVector& d) {
    const int n = static_cast<int>(d.size());
    FormalClass out(g, n);
    for (int i = 0; i < n; ++i)
        out.add_term({{DivisorSymbol::xi(i + 1), 1}}, Rational(std::labs(d[static_cast<std::size_t>(i)])));
    out.set_weights(d.values());
    return out;
}

FormalClass dr_class(int g, const WeightVector& d) {
    const int n = static_cast<int>(d.size());
    const FormalClass theta = pullback_theta(g, d);
    const FormalClass irr = pullback_D(g, n);
    const FormalClass delta = pullback_delta(g, d);

    std::vector<FormalClass> theta_pow;
    for (int a = 0; a <= g; ++a) theta_pow.push_back(pow(theta, a));

    FormalClass out(g, n);
    for (const auto& e : coefficient_table(g).entries) {
        const auto [a, b, c] = e.abc;
        FormalClass term = theta_pow[static_cast<std::size_t>(a)];
        if (b > 0 || c > 0) term = term * (pow(irr, b) * pow(delta, c));
        term *= e.eta;
        if (out.is_zero()) out = std::move(term);
        else out += term;
    }
    out.set_weights(d.values());
    return out;
}

FormalClass specialize_compact_type(const FormalClass& fc) {
    FormalClass out(fc.genus(), fc.marked_points());
    for (const auto& [m, c] : fc.terms()) {
        const bool killed = std::any_of(m.begin(), m.end(), [](const auto& t) {
            return t.first.kind == SymbolKind::delta_irr || t.first.kind == SymbolKind::xi;
        });
        if (!killed) out.add_term(m, c);
    }
    if (fc.weights()) out.set_weights(*fc.weights());
    return out;
}

FormalClass permute_points(const FormalClass& fc, std::span<const int> perm) {
    const int n = fc.marked_points();
    if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permute_points: wrong permutation size");
    auto relabel = [&](const DivisorSymbol& s) {
        switch (s.kind) {
            case SymbolKind::K: return DivisorSymbol::K(perm[static_cast<std::size_t>(s.index - 1)]);
            case SymbolKind::xi: return DivisorSymbol::xi(perm[static_cast<std::size_t>(s.index - 1)]);
            case SymbolKind::delta: {
                std::uint32_t mask = 0;
                for (int p : s.points()) mask |= 1u << (perm[static_cast<std::size_t>(p - 1)] - 1);
                return DivisorSymbol::delta(fc.genus(), n, s.h, mask);
            }
            case SymbolKind::delta_irr: break;
        }
        return s;
    };
    FormalClass out(fc.genus(), n);
    for (const auto& [m, c] : fc.terms()) {
        SymbolMonomial mono;
        for (const auto& [s, e] : m) mono = merge(mono, SymbolMonomial{{relabel(s), e}});
        out.add_term(std::move(mono), c);
    }
    if (fc.weights()) {
        std::vector<long> w(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            w[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)] - 1)] = (*fc.weights())[static_cast<std::size_t>(i)];
        out.set_weights(std::move(w));
    }
    return out;
}

// -------------------------------------------------------- serialization

nlohmann::ordered_json to_json(const FormalClass& fc) {
    nlohmann::ordered_json j;
    j["g"] = fc.genus();
    j["n"] = fc.marked_points();
    j["weights"] = fc.weights() ? nlohmann::ordered_json(*fc.weights()) : nlohmann::ordered_json(nullptr);
    const auto codim = fc.codim();
    j["codim"] = codim ? nlohmann::ordered_json(*codim) : nlohmann::ordered_json(nullptr);
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [m, c] : fc.terms()) {
        nlohmann::ordered_json t;
        t["coeff"] = to_string(c);
        auto symbols = nlohmann::ordered_json::array();
        for (const auto& [s, e] : m) symbols.push_back(symbol_json(s, e));
        t["symbols"] = std::move(symbols);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

std::string serialize(const FormalClass& fc, SerialMode mode) {
    if (mode == SerialMode::json) return to_json(fc).dump();
    if (fc.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : fc.terms()) {
        const bool negative = c < 0;
        const Rational mag = abs(c);
        std::string mono;
        for (const auto& [s, e] : m) {
            if (!mono.empty()) mono += " ";
            std::string sym = latex_symbol(s);
            if (e > 1) sym = (s.kind == SymbolKind::delta ? "(" + sym + ")" : sym) + "^{" + std::to_string(e) + "}";
            mono += sym;
        }
        std::string body;
        if (mono.empty()) body = latex_rational(mag);
        else if (mag == 1) body = mono;
        else body = latex_rational(mag) + " " + mono;
        if (first) out += negative ? "-" + body : body;
        else out += (negative ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

FormalClass deserialize(const nlohmann::json& j) {
    const int g = j.value("g", 0);
    const int n = j.value("n", 0);
    FormalClass fc(g, n);
    for (const auto& t : j.at("terms")) {
        SymbolMonomial mono;
        for (const auto& s : t.at("symbols")) {
            const int power = s.value("power", 1);
            if (power < 1) throw std::invalid_argument("symbol power must be >= 1");
            mono = merge(mono, SymbolMonomial{{symbol_from_json(s, g, n), power}});
        }
        fc.add_term(std::move(mono), parse_rational(t.at("coeff").get<std::string>()));
    }
    if (j.contains("weights") && !j.at("weights").is_null()) fc.set_weights(j.at("weights").get<std::vector<long>>());
    return fc;
}

FormalClass deserialize(const std::string& text) { return deserialize(nlohmann::json::parse(text)); }

}  // namespace chowkit::dr
