#include "chowkit/cli.hpp"

#include "chowkit/chow_ring.hpp"
#include "chowkit/dr_class.hpp"
#include "chowkit/zero_section.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace chowkit::cli {

namespace {

using json = nlohmann::ordered_json;

struct GlobalFlags {
    bool json = false;
    bool quiet = false;
    bool timing = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string monomial_text(const Monomial& m) { return format(Polynomial::monomial(VarSet::canonical(), m)); }

json report_json(const VerificationReport& r, bool timing) {
    json j;
    j["identity"] = r.identity;
    j["genus"] = r.genus;
    j["holds"] = r.holds;
    j["residual"] = to_json(r.residual);
    j["kernel_dimension"] = r.kernel_dimension ? json(*r.kernel_dimension) : json(nullptr);
    if (timing) j["seconds"] = r.elapsed.count();
    return j;
}

std::vector<VerificationReport> run_checks(int g, const std::string& which) {
    const RingContext ctx = make_context(g, ring_options_from_env());
    std::vector<VerificationReport> out;
    const bool all = which == "all";
    if (all || which == "main") out.push_back(verify_main(ctx));
    if (all || which == "eta") out.push_back(verify_eta_alpha(g));
    if (all || which == "triangular") out.push_back(verify_triangular(ctx));
    if (all || which == "invariance") {
        auto inv = verify_invariance(ctx);
        out.insert(out.end(), std::make_move_iterator(inv.begin()), std::make_move_iterator(inv.end()));
    }
    if (which == "solver") out.push_back(verify_solver_membership(ctx));
    return out;
}

int cmd_verify(const GlobalFlags& flags, int genus, int max_genus, const std::string& which, std::ostream& out) {
    if (genus < 1 && max_genus < 1) throw UsageError("verify: --genus or --max-genus must be >= 1");
    std::vector<int> genera;
    if (max_genus >= 1)
        for (int g = 1; g <= max_genus; ++g) genera.push_back(g);
    else genera.push_back(genus);

    std::vector<std::vector<VerificationReport>> results(genera.size());
    const auto count = static_cast<std::ptrdiff_t>(genera.size());
#pragma omp parallel for schedule(dynamic) if (count > 1)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        results[static_cast<std::size_t>(i)] = run_checks(genera[static_cast<std::size_t>(i)], which);

    bool all_hold = true;
    json reports = json::array();
    for (const auto& per_genus : results) {
        for (const auto& r : per_genus) {
            all_hold = all_hold && r.holds;
            if (flags.json) {
                reports.push_back(report_json(r, flags.timing));
            } else if (!flags.quiet) {
                out << (r.holds ? "[holds] " : "[FAILS] ") << r.identity << " g=" << r.genus;
                if (r.kernel_dimension) out << " kernel_dim=" << *r.kernel_dimension;
                if (flags.timing) out << " (" << std::fixed << std::setprecision(3) << r.elapsed.count() << "s)";
                if (!r.holds) out << " residual: " << format(r.residual);
                out << '\n';
            }
        }
    }
    if (flags.json && !flags.quiet) {
        json j;
        j["all_hold"] = all_hold;
        j["reports"] = std::move(reports);
        out << j.dump(2) << '\n';
    }
    return all_hold ? kExitOk : kExitFailed;
}

int cmd_ring(const GlobalFlags& flags, int genus, const std::string& action, const std::string& expr, std::ostream& out) {
    if (genus < 1) throw UsageError("ring: --genus must be >= 1");
    const RingContext ctx = make_context(genus, ring_options_from_env());
    json j;
    j["genus"] = genus;
    std::ostringstream text;

    if (action == "dims") {
        json dims = json::array();
        for (int k = 0; k <= 2 * genus - 1; ++k) {
            const int d = dim_graded(ctx, k);
            dims.push_back(d);
            text << "R^" << k << ": " << d << '\n';
        }
        j["dims"] = std::move(dims);
    } else if (action == "relations") {
        json rels = json::array();
        for (const auto& rel : ctx.relations()) {
            json r;
            r["l"] = rel.d_grade;
            r["poly"] = to_json(rel.poly);
            rels.push_back(std::move(r));
            text << "l=" << rel.d_grade << ": " << format(rel.poly) << '\n';
        }
        j["relations"] = std::move(rels);
    } else if (action == "pairing") {
        json pairings = json::array();
        for (int k = 0; k <= genus - 1; ++k) {
            const PairingMatrix pm = pairing_matrix(ctx, k);
            const bool square = pm.gram.rows() == pm.gram.cols();
            const Rational det = square ? determinant(pm.gram) : Rational(0);
            json p;
            p["k"] = k;
            json rows = json::array(), cols = json::array(), matrix = json::array();
            for (const auto& m : pm.row_basis) rows.push_back(monomial_text(m));
            for (const auto& m : pm.col_basis) cols.push_back(monomial_text(m));
            text << "k=" << k << " R^" << genus - 1 - k << " x R^" << genus - 1 + k << " (" << pm.gram.rows() << "x"
                 << pm.gram.cols() << ")\n";
            for (std::size_t r = 0; r < pm.gram.rows(); ++r) {
                json row = json::array();
                text << "  " << monomial_text(pm.row_basis[r]) << ":";
                for (std::size_t c = 0; c < pm.gram.cols(); ++c) {
                    row.push_back(to_string(pm.gram(r, c)));
                    text << ' ' << to_string(pm.gram(r, c));
                }
                text << '\n';
                matrix.push_back(std::move(row));
            }
            text << "  det = " << (square ? to_string(det) : "n/a (not square)") << '\n';
            p["rows"] = std::move(rows);
            p["cols"] = std::move(cols);
            p["matrix"] = std::move(matrix);
            p["determinant"] = square ? json(to_string(det)) : json(nullptr);
            pairings.push_back(std::move(p));
        }
        j["pairings"] = std::move(pairings);
    } else if (action == "reduce") {
        if (expr.empty()) throw UsageError("ring reduce: missing expression");
        const Polynomial nf = normal_form(ctx, parse(expr, VarSet::canonical()));
        j["input"] = expr;
        j["normal_form"] = to_json(nf);
        text << format(nf) << '\n';
    }

    if (!flags.quiet) out << (flags.json ? j.dump(2) + "\n" : text.str());
    return kExitOk;
}

int cmd_coeffs(const GlobalFlags& flags, int genus, const std::string& table, std::ostream& out) {
    if (genus < 1) throw UsageError("coeffs: --genus must be >= 1");
    const auto& t = coefficient_table(genus);
    const bool show_alpha = table != "eta", show_eta = table != "alpha";
    if (flags.quiet) return kExitOk;
    if (flags.json) {
        json j;
        j["genus"] = genus;
        json entries = json::array();
        for (const auto& e : t.entries) {
            json row;
            row["a"] = e.abc[0];
            row["b"] = e.abc[1];
            row["c"] = e.abc[2];
            if (show_alpha) row["alpha"] = to_string(e.alpha);
            if (show_eta) row["eta"] = to_string(e.eta);
            entries.push_back(std::move(row));
        }
        j["entries"] = std::move(entries);
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    std::size_t wa = 5, we = 3;
    for (const auto& e : t.entries) {
        wa = std::max(wa, to_string(e.alpha).size());
        we = std::max(we, to_string(e.eta).size());
    }
    out << std::left << std::setw(10) << "(a,b,c)";
    if (show_alpha) out << "  " << std::setw(static_cast<int>(wa)) << "alpha";
    if (show_eta) out << "  " << std::setw(static_cast<int>(we)) << "eta";
    out << '\n';
    for (const auto& e : t.entries) {
        std::ostringstream key;
        key << '(' << e.abc[0] << ',' << e.abc[1] << ',' << e.abc[2] << ')';
        out << std::setw(10) << key.str();
        if (show_alpha) out << "  " << std::setw(static_cast<int>(wa)) << to_string(e.alpha);
        if (show_eta) out << "  " << std::setw(static_cast<int>(we)) << to_string(e.eta);
        out << '\n';
    }
    return kExitOk;
}

int cmd_dr(const GlobalFlags& flags, int genus, const std::vector<long>& weights, const std::string& fmt,
           bool compact_type, std::ostream& out) {
    if (genus < 1) throw UsageError("dr: --genus must be >= 1");
    if (weights.empty()) throw UsageError("dr: --weights is required");
    dr::WeightVector d(weights);
    dr::FormalClass fc = dr::dr_class(genus, d);
    if (compact_type) fc = dr::specialize_compact_type(fc);
    const bool as_json = flags.json || fmt == "json";
    if (!flags.quiet) {
        if (as_json) out << dr::to_json(fc).dump(2) << '\n';
        else out << dr::serialize(fc, dr::SerialMode::latex) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact computations in the boundary Chow ring of the universal semiabelian family", "chowkit"};
    app.require_subcommand(1);
    GlobalFlags flags;
    app.add_flag("--json", flags.json, "Emit machine-readable JSON");
    app.add_flag("--quiet", flags.quiet, "Suppress output; rely on the exit status");
    app.add_flag("--timing", flags.timing, "Include wall-clock timings in verification reports");

    int genus = 0, max_genus = 0;
    std::string which = "all", action, expr, table = "both", fmt = "latex";
    std::vector<long> weights;
    bool compact = false;

    auto* verify = app.add_subcommand("verify", "Check the zero-section identities at a genus or a sweep of genera");
    verify->add_option("--genus,-g", genus, "Genus g >= 1");
    verify->add_option("--max-genus", max_genus, "Verify every genus 1..N");
    verify->add_option("--which", which, "Which identities to check")
        ->check(CLI::IsMember({"main", "eta", "triangular", "invariance", "solver", "all"}));

    auto* ring = app.add_subcommand("ring", "Inspect the genus-g ring R and its relations");
    ring->add_option("--genus,-g", genus, "Genus g >= 1")->required();
    ring->add_option("action", action, "dims | pairing | relations | reduce")
        ->required()
        ->check(CLI::IsMember({"dims", "pairing", "relations", "reduce"}));
    ring->add_option("expr", expr, "Expression in xi, T1, P, T2 (for reduce)");

    auto* coeffs = app.add_subcommand("coeffs", "Print the alpha and eta coefficient tables");
    coeffs->add_option("--genus,-g", genus, "Genus g >= 1")->required();
    coeffs->add_option("--table", table, "alpha | eta | both")->check(CLI::IsMember({"alpha", "eta", "both"}));

    auto* drc = app.add_subcommand("dr", "Expand the double ramification class in divisor symbols");
    drc->add_option("--genus,-g", genus, "Genus g >= 1")->required();
    drc->add_option("--weights,-w", weights, "Comma-separated integer weights summing to zero")
        ->delimiter(',')
        ->required()
        ->allow_extra_args(false);
    drc->add_option("--format", fmt, "json | latex")->check(CLI::IsMember({"json", "latex"}));
    drc->add_flag("--compact-type", compact, "Restrict to curves of compact type");

    for (auto* sub : {verify, ring, coeffs, drc}) {
        sub->add_flag("--json", flags.json, "Emit machine-readable JSON");
        sub->add_flag("--quiet", flags.quiet, "Suppress output");
        sub->add_flag("--timing", flags.timing, "Include timings");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(flags, genus, max_genus, which, out);
        if (ring->parsed()) return cmd_ring(flags, genus, action, expr, out);
        if (coeffs->parsed()) return cmd_coeffs(flags, genus, table, out);
        if (drc->parsed()) return cmd_dr(flags, genus, weights, fmt, compact, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const dr::WeightError& e) {
        err << "error: " << e.what() << " (the weights d_1..d_n must satisfy sum d_i = 0)\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace chowkit::cli
