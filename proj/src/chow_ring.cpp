#include "chowkit/chow_ring.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace chowkit {

namespace {

constexpr std::size_t kXi = 0;
constexpr std::size_t kT1 = 1;
constexpr std::size_t kP = 2;
constexpr std::size_t kT2 = 3;
constexpr int kCacheVersion = 2;

const VarSetPtr& ring_vars() {
    static const VarSetPtr vars = VarSet::canonical();
    return vars;
}

Polynomial var(const char* name) { return Polynomial::variable(ring_vars(), name); }

void require_ring_vars(const Polynomial& p) {
    if (!same_vars(p.vars(), ring_vars())) throw VarSetMismatch("expected a polynomial over (xi, T1, P, T2)");
}

void require_xi_free(const Polynomial& p, const char* what) {
    require_ring_vars(p);
    if (p.degree_in(kXi) > 0) throw std::invalid_argument(std::string(what) + ": polynomial contains xi");
}

int monomial_d_grade(const Monomial& m) { return int(m[kT1]) - int(m[kT2]); }

// Degree-k monomials in ascending order: the column order of the ideal matrices,
// so that RREF pivots land on the smallest monomials.
std::vector<Monomial> pivot_columns(int k) {
    auto cols = monomials_of_degree(k, 3, kT1);
    std::reverse(cols.begin(), cols.end());
    return cols;
}

Monomial ring_monomial(int t1, int p, int t2, int xi = 0) {
    Monomial m;
    m.set(kXi, xi);
    m.set(kT1, t1);
    m.set(kP, p);
    m.set(kT2, t2);
    return m;
}

// Fills basis and grade_counts from the rules.
void finalize(DegreeEchelon& e) {
    std::set<Monomial, GrLexGreater> pivots;
    for (const auto& r : e.rules) pivots.insert(pivot_monomial(r));
    e.basis.clear();
    e.grade_counts.clear();
    for (const auto& m : monomials_of_degree(e.degree, 3, kT1)) {
        auto& [count, rank] = e.grade_counts[monomial_d_grade(m)];
        ++count;
        if (pivots.count(m)) ++rank;
        else e.basis.push_back(m);
    }
}

Polynomial row_to_rule(const std::vector<Rational>& row, const std::vector<Monomial>& columns) {
    Polynomial rule(ring_vars());
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (row[j] != 0) rule.add_term(columns[j], row[j]);
    return rule;
}

// Rows m * relation restricted to the given columns (indexed by monomial).
RationalMatrix assemble(const RingContext& ctx, int k, const std::vector<Monomial>& columns, std::optional<int> grade) {
    std::map<Monomial, std::size_t, GrLexGreater> index;
    for (std::size_t j = 0; j < columns.size(); ++j) index.emplace(columns[j], j);
    RationalMatrix m(0, columns.size());
    for (const auto& mult : monomials_of_degree(k - ctx.genus(), 3, kT1)) {
        for (const auto& rel : ctx.relations()) {
            if (grade && monomial_d_grade(mult) + rel.d_grade != *grade) continue;
            std::vector<Rational> row(columns.size());
            for (const auto& [mono, c] : rel.poly.terms()) row[index.at(mono * mult)] = c;
            m.append_row(std::move(row));
        }
    }
    return m;
}

std::filesystem::path cache_file(const RingContext& ctx, int k) {
    return ctx.options().cache_dir /
           ("echelon-v" + std::to_string(kCacheVersion) + "-g" + std::to_string(ctx.genus()) + "-k" +
            std::to_string(k) + ".txt");
}

std::optional<DegreeEchelon> load_cached(const RingContext& ctx, int k) {
    std::ifstream in(cache_file(ctx, k));
    if (!in) return std::nullopt;
    try {
        std::string magic;
        int version = 0, g = 0, degree = 0;
        std::size_t nrules = 0;
        std::string kw_g, kw_k, kw_r;
        if (!(in >> magic >> version >> kw_g >> g >> kw_k >> degree >> kw_r >> nrules)) return std::nullopt;
        if (magic != "chowkit-echelon" || version != kCacheVersion || g != ctx.genus() || degree != k)
            return std::nullopt;
        std::string line;
        std::getline(in, line);
        DegreeEchelon e;
        e.degree = k;
        for (std::size_t r = 0; r < nrules; ++r) {
            if (!std::getline(in, line)) return std::nullopt;
            std::istringstream ls(line);
            Polynomial rule(ring_vars());
            int a, b, c;
            std::string coeff;
            while (ls >> a >> b >> c >> coeff) {
                if (a + b + c != k) return std::nullopt;
                rule.add_term(ring_monomial(a, b, c), parse_rational(coeff));
            }
            if (rule.is_zero() || rule.coefficient(pivot_monomial(rule)) != 1) return std::nullopt;
            e.rules.push_back(std::move(rule));
        }
        finalize(e);
        return e;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void store_cached(const RingContext& ctx, const DegreeEchelon& e) {
    std::error_code ec;
    std::filesystem::create_directories(ctx.options().cache_dir, ec);
    const auto target = cache_file(ctx, e.degree);
    auto tmp = target;
    tmp += ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&e));
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << "chowkit-echelon " << kCacheVersion << "\ngenus " << ctx.genus() << " degree " << e.degree << " rules "
            << e.rules.size() << "\n";
        for (const auto& rule : e.rules) {
            bool first = true;
            for (const auto& [m, c] : rule.terms()) {
                out << (first ? "" : " ") << m[kT1] << ' ' << m[kP] << ' ' << m[kT2] << ' ' << to_string(c);
                first = false;
            }
            out << '\n';
        }
        if (!out) return;
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

Polynomial reduce_xi_free(const RingContext& ctx, const Polynomial& f) {
    std::map<int, Polynomial> pieces;
    for (const auto& [m, c] : f.terms()) pieces.try_emplace(m.degree(), ring_vars()).first->second.add_term(m, c);
    Polynomial out(ring_vars());
    for (auto& [k, piece] : pieces) {
        const auto ech = ctx.echelon(k);
        for (const auto& rule : ech->rules) {
            const Rational c = piece.coefficient(pivot_monomial(rule));
            if (c != 0) piece -= rule * c;
        }
        out += piece;
    }
    return out;
}

}  // namespace

// ------------------------------------------------------------ context

Monomial pivot_monomial(const Polynomial& rule) {
    if (rule.is_zero()) throw std::invalid_argument("pivot_monomial: zero polynomial");
    return rule.terms().rbegin()->first;
}

RingOptions ring_options_from_env() {
    RingOptions opts;
    if (const char* dir = std::getenv("CHOWKIT_CACHE_DIR"); dir && *dir) opts.cache_dir = dir;
    return opts;
}

RingContext::RingContext(int genus, RingOptions options) : genus_(genus), options_(std::move(options)) {
    if (genus < 1) throw std::invalid_argument("genus must be >= 1");
    const auto aux = std::make_shared<const VarSet>(std::vector<std::string>{"n", "T1", "P", "T2"});
    const auto n = Polynomial::variable(aux, "n");
    const auto base = Polynomial::variable(aux, "T1") + n * Polynomial::variable(aux, "P") +
                      n * n * Polynomial::variable(aux, "T2");
    const Polynomial expanded = pow(base, genus);

    std::map<int, Polynomial> by_power;
    for (const auto& [m, c] : expanded.terms()) {
        Monomial target = ring_monomial(m[1], m[2], m[3]);
        by_power.try_emplace(m[0], ring_vars()).first->second.add_term(target, c);
    }
    for (int j = 2 * genus; j >= 0; --j) {
        auto it = by_power.find(j);
        relations_.push_back({genus - j, it == by_power.end() ? Polynomial(ring_vars()) : it->second});
    }
}

std::shared_ptr<const DegreeEchelon> RingContext::echelon(int k) const {
    std::shared_ptr<Slot> slot;
    {
        std::lock_guard lock(mu_);
        auto& entry = cache_[k];
        if (!entry) entry = std::make_shared<Slot>();
        slot = entry;
    }
    std::call_once(slot->once, [&] { slot->data = build(k); });
    return slot->data;
}

std::shared_ptr<const DegreeEchelon> RingContext::build(int k) const {
    const bool persist = !options_.cache_dir.empty() && k >= genus_;
    if (persist) {
        if (auto loaded = load_cached(*this, k)) return std::make_shared<const DegreeEchelon>(std::move(*loaded));
    }
    auto e = std::make_shared<DegreeEchelon>(compute_echelon(*this, k, options_.strategy));
    if (persist) store_cached(*this, *e);
    return e;
}

RingContext make_context(int g, RingOptions options) { return RingContext(g, std::move(options)); }

DegreeEchelon compute_echelon(const RingContext& ctx, int k, EchelonStrategy strategy) {
    DegreeEchelon e;
    e.degree = k;
    if (k < 0) return e;
    if (k >= ctx.genus()) {
        const auto columns = pivot_columns(k);
        if (strategy == EchelonStrategy::full_serial) {
            const Echelon ech = row_reduce_serial(assemble(ctx, k, columns, std::nullopt));
            for (std::size_t r = 0; r < ech.rank(); ++r) e.rules.push_back(row_to_rule(ech.reduced.row(r), columns));
        } else {
            std::map<int, std::vector<Monomial>> blocks;
            for (const auto& m : columns) blocks[monomial_d_grade(m)].push_back(m);
            std::vector<std::pair<int, std::vector<Monomial>>> work(blocks.begin(), blocks.end());
            std::vector<std::vector<Polynomial>> block_rules(work.size());
            const auto nblocks = static_cast<std::ptrdiff_t>(work.size());
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
                const auto& [grade, cols] = work[static_cast<std::size_t>(b)];
                const Echelon ech = row_reduce_parallel(assemble(ctx, k, cols, grade));
                for (std::size_t r = 0; r < ech.rank(); ++r)
                    block_rules[static_cast<std::size_t>(b)].push_back(row_to_rule(ech.reduced.row(r), cols));
            }
            for (auto& rules : block_rules)
                for (auto& r : rules) e.rules.push_back(std::move(r));
            std::sort(e.rules.begin(), e.rules.end(), [](const Polynomial& a, const Polynomial& b) {
                return GrLexGreater{}(pivot_monomial(b), pivot_monomial(a));
            });
        }
    }
    finalize(e);
    return e;
}

// -------------------------------------------------------- normal form

std::pair<Polynomial, Polynomial> split_xi(const Polynomial& p) {
    require_ring_vars(p);
    Polynomial f0(ring_vars()), f1(ring_vars());
    for (const auto& [m, c] : p.terms()) {
        const int e = m[kXi];
        Monomial rest = m;
        rest.set(kXi, 0);
        if (e == 0) {
            f0.add_term(rest, c);
        } else {
            // xi^e = xi * P^(e-1)
            rest.set(kP, rest[kP] + e - 1);
            f1.add_term(rest, c);
        }
    }
    return {std::move(f0), std::move(f1)};
}

Polynomial normal_form(const RingContext& ctx, const Polynomial& p) {
    auto [f0, f1] = split_xi(p);
    Polynomial out = reduce_xi_free(ctx, f0);
    const Polynomial r1 = reduce_xi_free(ctx, f1);
    if (!r1.is_zero()) out += var("xi") * r1;
    return out;
}

bool is_zero(const RingContext& ctx, const Polynomial& p) { return normal_form(ctx, p).is_zero(); }

int dim_graded(const RingContext& ctx, int k) {
    if (k < 0) return 0;
    return static_cast<int>(ctx.echelon(k)->basis.size());
}

int dim_graded(const RingContext& ctx, int k, int l) {
    if (k < 0) return 0;
    const auto ech = ctx.echelon(k);
    auto it = ech->grade_counts.find(l);
    return it == ech->grade_counts.end() ? 0 : it->second.first - it->second.second;
}

std::vector<Monomial> canonical_basis(const RingContext& ctx, int k) {
    if (k < 0) return {};
    return ctx.echelon(k)->basis;
}

// --------------------------------------------------------- pushforward

Rational socle_monomial_pushforward(int g, int a) {
    if (g < 1 || a < 0 || a > g - 1) throw DomainError("socle_monomial_pushforward: need 0 <= a <= g-1");
    Rational v(factorial(g - 1) * factorial(2 * a) * factorial(g - 1 - a), factorial(a));
    v.canonicalize();
    return sign_pow(a) * v;
}

Rational socle_pushforward(const RingContext& ctx, const Polynomial& p) {
    require_xi_free(p, "socle_pushforward");
    if (p.is_zero()) return Rational(0);
    const int g = ctx.genus();
    const int top = 2 * g - 2;
    if (!p.is_homogeneous() || p.total_degree() != top)
        throw std::invalid_argument("socle_pushforward: expected a homogeneous element of degree " + std::to_string(top));
    const auto ech = ctx.echelon(top);
    if (ech->basis.size() != 1) throw std::logic_error("socle is not one-dimensional");
    const Monomial& socle = ech->basis.front();
    const Rational c = normal_form(ctx, p).coefficient(socle);
    const Rational c0 = normal_form(ctx, Polynomial::monomial(ring_vars(), ring_monomial(g - 1, 0, g - 1))).coefficient(socle);
    if (c0 == 0) throw std::logic_error("T1^{g-1} T2^{g-1} vanishes in the socle");
    const Integer f = factorial(g - 1);
    return c / c0 * Rational(f * f);
}

PairingMatrix pairing_matrix(const RingContext& ctx, int k) {
    const int g = ctx.genus();
    if (k < 0 || k > g - 1) throw std::out_of_range("pairing_matrix: need 0 <= k <= g-1");
    PairingMatrix pm;
    pm.k = k;
    pm.row_basis = canonical_basis(ctx, g - 1 - k);
    pm.col_basis = canonical_basis(ctx, g - 1 + k);
    pm.gram = RationalMatrix(pm.row_basis.size(), pm.col_basis.size());
    for (std::size_t i = 0; i < pm.row_basis.size(); ++i)
        for (std::size_t j = 0; j < pm.col_basis.size(); ++j)
            pm.gram(i, j) = socle_pushforward(ctx, Polynomial::monomial(ring_vars(), pm.row_basis[i] * pm.col_basis[j]));
    return pm;
}

// ----------------------------------------------------------- operators

Polynomial shift(const Polynomial& p, long n) {
    require_xi_free(p, "shift");
    const Rational rn(n);
    const Polynomial images[] = {var("xi"), var("T1") + var("P") * rn + var("T2") * (rn * rn),
                                 var("P") + var("T2") * (2 * rn), var("T2")};
    return substitute(p, images);
}

Polynomial half_shift(const Polynomial& p) {
    require_xi_free(p, "half_shift");
    const Polynomial images[] = {var("xi"), var("T1") + var("P") * make_rational(1, 2) + var("T2") * make_rational(1, 4),
                                 var("P") + var("T2"), var("T2")};
    return substitute(p, images);
}

Polynomial involution_j(const Polynomial& p) {
    require_ring_vars(p);
    const Polynomial images[] = {var("xi") - var("P"), var("T1"), -var("P"), var("T2")};
    return substitute(p, images);
}

Polynomial restrict_zero(const Polynomial& p) {
    require_ring_vars(p);
    const Polynomial images[] = {var("P"), var("T1"), var("P"), var("T2")};
    return substitute(p, images);
}

Polynomial restrict_infty(const Polynomial& p) {
    require_ring_vars(p);
    const Polynomial images[] = {Polynomial(ring_vars()), var("T1"), var("P"), var("T2")};
    return substitute(p, images);
}

Polynomial shift_invariance_residual(const RingContext& ctx, const Polynomial& p) {
    return normal_form(ctx, shift(restrict_infty(p), 1) - restrict_zero(p));
}

Polynomial j_invariance_residual(const RingContext& ctx, const Polynomial& p) {
    return normal_form(ctx, involution_j(p) - p);
}

bool is_shift_invariant(const RingContext& ctx, const Polynomial& p) { return shift_invariance_residual(ctx, p).is_zero(); }

bool is_j_invariant(const RingContext& ctx, const Polynomial& p) { return j_invariance_residual(ctx, p).is_zero(); }

// ---------------------------------------------------------- invariants

const InvariantGenerators& invariant_generators() {
    static const InvariantGenerators gens = [] {
        const auto xi = var("xi"), t1 = var("T1"), p = var("P"), t2 = var("T2");
        Polynomial theta = xi + t1 - p * make_rational(1, 2);
        Polynomial d = t2 * Rational(-2);
        Polynomial delta = xi * t2 * Rational(-4) - p * p + p * t2 * Rational(2);
        Polynomial q = delta - theta * d * Rational(2);
        return InvariantGenerators{std::move(theta), std::move(d), std::move(delta), std::move(q)};
    }();
    return gens;
}

Polynomial to_boundary(const Polynomial& in_invariants) {
    if (!same_vars(in_invariants.vars(), VarSet::invariants()))
        throw VarSetMismatch("to_boundary: expected a polynomial over (Theta, D, Delta)");
    const auto& gens = invariant_generators();
    const Polynomial images[] = {gens.theta, gens.d, gens.delta};
    return substitute(in_invariants, images);
}

std::vector<Exponents3> weighted_exponents(int k) {
    std::vector<Exponents3> out;
    for (int c = 0; 2 * c <= k; ++c)
        for (int b = 0; b + 2 * c <= k; ++b) out.push_back({k - b - 2 * c, b, c});
    return out;
}

Polynomial invariant_monomial(InvariantBasis basis, const Exponents3& abc) {
    const auto& vars = VarSet::invariants();
    const auto theta = Polynomial::variable(vars, "Theta");
    const auto d = Polynomial::variable(vars, "D");
    const auto delta = Polynomial::variable(vars, "Delta");
    const auto [a, b, c] = abc;
    if (a < 0 || b < 0 || c < 0) throw DomainError("invariant_monomial: negative exponent");
    if (basis == InvariantBasis::eta) return pow(theta, a) * pow(d, b) * pow(delta, c);
    return pow(theta - d * make_rational(1, 8), a) * pow(d, b) * pow(delta - theta * d * Rational(2), c);
}

InvariantExpression express_in_invariants(const RingContext& ctx, const Polynomial& p, InvariantBasis basis, int k) {
    require_ring_vars(p);
    if (k < 0) throw std::invalid_argument("express_in_invariants: negative degree");
    if (!p.is_zero() && (!p.is_homogeneous() || p.total_degree() != k))
        throw std::invalid_argument("express_in_invariants: polynomial is not homogeneous of degree " + std::to_string(k));

    const auto keys = weighted_exponents(k);
    std::vector<Polynomial> columns;
    columns.reserve(keys.size() + 1);
    for (const auto& abc : keys) columns.push_back(normal_form(ctx, to_boundary(invariant_monomial(basis, abc))));
    columns.push_back(normal_form(ctx, p));

    std::map<Monomial, std::size_t, GrLexGreater> rows;
    for (const auto& col : columns)
        for (const auto& [m, c] : col.terms()) rows.emplace(m, 0);
    std::size_t r = 0;
    for (auto& [m, idx] : rows) idx = r++;

    RationalMatrix system(rows.size(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (const auto& [m, c] : columns[j].terms()) system(rows.at(m), j) = c;

    const Echelon ech = row_reduce_parallel(std::move(system));
    InvariantExpression result;
    for (std::size_t i = 0; i < ech.rank(); ++i) {
        const std::size_t col = ech.pivot_columns[i];
        if (col == keys.size()) throw NotInSpan("class is not in the span of the degree-" + std::to_string(k) + " invariant monomials");
        const Rational& v = ech.reduced(i, keys.size());
        if (v != 0) result.coefficients[keys[col]] = v;
    }
    result.kernel_dimension = static_cast<int>(keys.size() - ech.rank());
    return result;
}

}  // namespace chowkit
