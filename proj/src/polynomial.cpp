#include "chowkit/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace chowkit {

// ---------------------------------------------------------------- VarSet

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > kMaxVars) throw std::invalid_argument("VarSet: too many variables");
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j]) throw std::invalid_argument("VarSet: duplicate name " + names_[i]);
}

VarSetPtr VarSet::canonical() {
    static const VarSetPtr vars = std::make_shared<const VarSet>(std::vector<std::string>{"xi", "T1", "P", "T2"});
    return vars;
}

VarSetPtr VarSet::invariants() {
    static const VarSetPtr vars = std::make_shared<const VarSet>(std::vector<std::string>{"Theta", "D", "Delta"});
    return vars;
}

std::optional<std::size_t> VarSet::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

std::size_t VarSet::require(std::string_view name) const {
    auto idx = index_of(name);
    if (!idx) throw VarSetMismatch("variable '" + std::string(name) + "' not in VarSet");
    return *idx;
}

bool same_vars(const VarSetPtr& a, const VarSetPtr& b) { return a == b || (a && b && *a == *b); }

// -------------------------------------------------------------- Monomial

Monomial::Monomial(std::span<const int> exps) {
    if (exps.size() > kMaxVars) throw std::invalid_argument("Monomial: too many exponents");
    for (std::size_t i = 0; i < exps.size(); ++i) set(i, exps[i]);
}

void Monomial::set(std::size_t i, int e) {
    if (e < 0 || e > std::numeric_limits<Exponent>::max())
        throw std::out_of_range("Monomial: exponent out of range");
    exps_.at(i) = static_cast<Exponent>(e);
}

int Monomial::degree() const {
    int d = 0;
    for (auto e : exps_) d += e;
    return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.set(i, int(exps_[i]) + int(other.exps_[i]));
    return r;
}

bool Monomial::divides(const Monomial& other) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (exps_[i] > other.exps_[i]) return false;
    return true;
}

bool GrLexGreater::operator()(const Monomial& a, const Monomial& b) const {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.exponents() > b.exponents();
}

std::vector<Monomial> monomials_of_degree(int degree, std::size_t nvars, std::size_t offset) {
    std::vector<Monomial> out;
    if (degree < 0 || nvars == 0) return out;
    Monomial m;
    // Lexicographically descending enumeration: fill earlier slots greedily.
    auto rec = [&](auto&& self, std::size_t slot, int remaining) -> void {
        if (slot + 1 == nvars) {
            m.set(offset + slot, remaining);
            out.push_back(m);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            m.set(offset + slot, e);
            self(self, slot + 1, remaining - e);
        }
        m.set(offset + slot, 0);
    };
    rec(rec, 0, degree);
    return out;
}

// ------------------------------------------------------------ Polynomial

Polynomial::Polynomial(VarSetPtr vars) : vars_(std::move(vars)) {
    if (!vars_) throw std::invalid_argument("Polynomial: null VarSet");
}

Polynomial::Polynomial(VarSetPtr vars, const Rational& constant) : Polynomial(std::move(vars)) {
    add_term(Monomial{}, constant);
}

Polynomial Polynomial::variable(VarSetPtr vars, std::string_view name) {
    Polynomial p(vars);
    Monomial m;
    m.set(vars->require(name), 1);
    p.add_term(m, Rational(1));
    return p;
}

Polynomial Polynomial::monomial(VarSetPtr vars, const Monomial& m, const Rational& c) {
    Polynomial p(std::move(vars));
    p.add_term(m, c);
    return p;
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

int Polynomial::degree_in(std::size_t var) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& [m, c] : terms_) d = std::max<int>(d, m[var]);
    return d;
}

bool Polynomial::is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = total_degree();
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return t.first.degree() == d; });
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    for (std::size_t i = vars_->size(); i < kMaxVars; ++i)
        if (m[i] != 0) throw VarSetMismatch("monomial uses a slot outside the VarSet");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void Polynomial::check_vars(const Polynomial& other) const {
    if (!same_vars(vars_, other.vars_)) throw VarSetMismatch("polynomials over different VarSets");
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    check_vars(other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    check_vars(other);
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coeff] : terms_) coeff *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_vars(b);
    Polynomial r(a.vars_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

bool Polynomial::operator==(const Polynomial& other) const {
    return same_vars(vars_, other.vars_) && terms_ == other.terms_;
}

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }
Polynomial scale(const Polynomial& p, const Rational& c) { return p * c; }

Polynomial pow(const Polynomial& p, int n) {
    if (n < 0) throw std::invalid_argument("pow: negative exponent");
    Polynomial result(p.vars(), Rational(1));
    Polynomial base = p;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images) {
    const auto& vars = *p.vars();
    if (images.size() != vars.size()) throw VarSetMismatch("substitute: one image per variable required");
    const VarSetPtr target = images.empty() ? p.vars() : images.front().vars();
    for (const auto& img : images)
        if (!same_vars(img.vars(), target)) throw VarSetMismatch("substitute: images over different VarSets");

    std::vector<std::vector<Polynomial>> powers(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) powers[i].emplace_back(target, Rational(1));
    auto power_of = [&](std::size_t i, int e) -> const Polynomial& {
        auto& table = powers[i];
        while (static_cast<int>(table.size()) <= e) table.push_back(table.back() * images[i]);
        return table[e];
    };

    Polynomial result(target);
    for (const auto& [m, c] : p.terms()) {
        Polynomial term(target, c);
        for (std::size_t i = 0; i < vars.size() && !term.is_zero(); ++i)
            if (m[i] > 0) term = term * power_of(i, m[i]);
        result += term;
    }
    return result;
}

Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& mapping) {
    const auto& vars = p.vars();
    std::vector<Polynomial> images;
    images.reserve(vars->size());
    for (std::size_t i = 0; i < vars->size(); ++i) images.push_back(Polynomial::variable(vars, vars->name(i)));
    for (const auto& [name, img] : mapping) {
        if (!same_vars(img.vars(), vars)) throw VarSetMismatch("substitute: image for '" + name + "' has another VarSet");
        images[vars->require(name)] = img;
    }
    return substitute(p, images);
}

Polynomial graded_piece(const Polynomial& p, int k) {
    Polynomial r(p.vars());
    for (const auto& [m, c] : p.terms())
        if (m.degree() == k) r.add_term(m, c);
    return r;
}

int d_grade(const VarSet& vars, const Monomial& m) {
    return int(m[vars.require("T1")]) - int(m[vars.require("T2")]);
}

Polynomial d_graded_piece(const Polynomial& p, int l) {
    const auto& vars = *p.vars();
    if (auto xi = vars.index_of("xi"); xi && p.degree_in(*xi) > 0)
        throw std::invalid_argument("d_graded_piece: d-grading is undefined on terms containing xi");
    Polynomial r(p.vars());
    for (const auto& [m, c] : p.terms())
        if (d_grade(vars, m) == l) r.add_term(m, c);
    return r;
}

// ---------------------------------------------------------------- parser

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

class Parser {
public:
    Parser(std::string_view text, VarSetPtr vars) : text_(text), vars_(std::move(vars)) {}

    Polynomial run() {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        Polynomial acc = term();
        for (;;) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (accept('*')) acc = acc * factor();
        return acc;
    }

    Polynomial factor() {
        Polynomial b = base();
        if (accept('^')) {
            skip_ws();
            const std::size_t at = pos_;
            const std::string digits = read_digits();
            if (digits.empty()) fail("expected a non-negative integer exponent");
            if (digits.size() > 4) {
                pos_ = at;
                fail("exponent too large");
            }
            b = pow(b, std::stoi(digits));
        }
        return b;
    }

    Polynomial base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            return -base();
        }
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = read_digits();
            std::string den = "1";
            if (accept('/')) {
                skip_ws();
                den = read_digits();
                if (den.empty()) fail("expected a denominator");
                if (Integer(den) == 0) fail("zero denominator");
            }
            return Polynomial(vars_, parse_rational(num + "/" + den));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t at = pos_;
            std::string name;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) name += text_[pos_++];
            if (!vars_->index_of(name)) {
                pos_ = at;
                fail("unknown variable " + name);
            }
            return Polynomial::variable(vars_, name);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string read_digits() {
        std::string out;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) out += text_[pos_++];
        return out;
    }

    std::string_view text_;
    VarSetPtr vars_;
    std::size_t pos_ = 0;
};

std::string latex_name(const std::string& name) {
    if (name == "xi" || name == "Theta" || name == "Delta") return "\\" + name;
    return name;
}

std::string latex_rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

std::string monomial_text(const VarSet& vars, const Monomial& m, FormatMode mode) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += mode == FormatMode::text ? "*" : " ";
        out += mode == FormatMode::text ? vars.name(i) : latex_name(vars.name(i));
        if (m[i] > 1) {
            out += mode == FormatMode::text ? "^" + std::to_string(m[i]) : "^{" + std::to_string(m[i]) + "}";
        }
    }
    return out;
}

}  // namespace

Polynomial parse(std::string_view text, VarSetPtr vars) { return Parser(text, std::move(vars)).run(); }

nlohmann::ordered_json to_json(const Polynomial& p) {
    nlohmann::ordered_json j;
    j["vars"] = p.vars()->names();
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [m, c] : p.terms()) {
        nlohmann::ordered_json t;
        t["coeff"] = to_string(c);
        std::vector<int> exps(p.vars()->size());
        for (std::size_t i = 0; i < exps.size(); ++i) exps[i] = m[i];
        t["exps"] = exps;
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

Polynomial polynomial_from_json(const nlohmann::json& j, VarSetPtr vars) {
    auto names = j.at("vars").get<std::vector<std::string>>();
    if (!vars) vars = std::make_shared<const VarSet>(names);
    else if (vars->names() != names) throw VarSetMismatch("JSON polynomial has a different VarSet");
    Polynomial p(vars);
    for (const auto& t : j.at("terms")) {
        auto exps = t.at("exps").get<std::vector<int>>();
        if (exps.size() != vars->size()) throw VarSetMismatch("JSON term has wrong exponent count");
        p.add_term(Monomial(exps), parse_rational(t.at("coeff").get<std::string>()));
    }
    return p;
}

std::string format(const Polynomial& p, FormatMode mode) {
    if (mode == FormatMode::json) return to_json(p).dump();
    if (p.is_zero()) return "0";
    const auto& vars = *p.vars();
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        const bool negative = c < 0;
        const Rational mag = abs(c);
        const std::string mono = monomial_text(vars, m, mode);
        std::string body;
        if (mono.empty()) {
            body = mode == FormatMode::text ? to_string(mag) : latex_rational(mag);
        } else if (mag == 1) {
            // "-T1^2" would parse as (-T1)^2, so a leading unit coefficient is
            // spelled out when the first factor carries an exponent.
            const bool guard = mode == FormatMode::text && first && negative && mono.find('^') != std::string::npos &&
                               mono.find('^') < mono.find('*');
            body = guard ? "1*" + mono : mono;
        } else {
            body = mode == FormatMode::text ? to_string(mag) + "*" + mono : latex_rational(mag) + " " + mono;
        }
        if (first) out += negative ? "-" + body : body;
        else out += (negative ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << format(p); }

}  // namespace chowkit
