// qmrank — command-line front end.
//
// Subcommands
//   eval     evaluate the rank generating function and its companion
//            quantities at a rational point of the quantum set
//   qset     list the quantum set up to a denominator bound
//   series   coefficients of the two-variable rank series at fixed w
//   verify   run the numerical identity suite and print a report
//   cocycle  tabulate the obstruction-term kernels on a real grid
//
// Exit codes
//   0  success (verify: every check passed or was skipped)
//   1  usage / parse error
//   2  domain error (non-quantum point, pole on the grid, bad oracle shape)
//   3  precision-inconclusive (verify: at least one inconclusive check)
//   4  verify: at least one check failed
//
// All output is byte-reproducible for fixed flags and seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <qmrank/core.hpp>
#include <qmrank/cyclotomic.hpp>
#include <qmrank/eichler.hpp>
#include <qmrank/errors.hpp>
#include <qmrank/numeric.hpp>
#include <qmrank/qseries.hpp>
#include <qmrank/rooteval.hpp>
#include <qmrank/verify.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;
using namespace qmrank;

// ---------------------------------------------------------------------------
// formatting helpers

double clean(double x) { return x == 0.0 ? 0.0 : x; } // normalize -0

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", clean(x));
    return buf;
}

ordered_json complex_json(const cx64& z) {
    return ordered_json{{"re", clean(z.real())}, {"im", clean(z.imag())}};
}

void emit(const std::string& s) { std::fputs(s.c_str(), stdout); }

void emit_json(const ordered_json& j) { emit(j.dump(2) + "\n"); }

[[noreturn]] void fail_domain(const std::string& what, ordered_json detail = {}) {
    ordered_json j{{"schema", 1}, {"error", "domain"}, {"reason", what}};
    if (!detail.empty()) j["detail"] = std::move(detail);
    emit_json(j);
    std::exit(2);
}

// ---------------------------------------------------------------------------
// input parsing

// Accept relaxed object keys ({n:2, ...}) by quoting bare identifiers.
std::string quote_bare_keys(const std::string& s) {
    static const std::regex key(R"(([\{,]\s*)([A-Za-z_][A-Za-z0-9_]*)(\s*:))");
    return std::regex_replace(s, key, "$1\"$2\"$3");
}

// The argument is either inline JSON or a path to a JSON file.
ordered_json parse_json_arg(const std::string& arg) {
    std::string text = arg;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || (text[first] != '{' && text[first] != '[')) {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open JSON file: " + arg);
        std::ostringstream os;
        os << in.rdbuf();
        text = os.str();
    }
    return ordered_json::parse(quote_bare_keys(text));
}

ZetaVector vector_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("N") || !j.contains("fractions"))
        throw std::invalid_argument("vector JSON needs keys n, N, fractions");
    std::vector<std::pair<std::int64_t, std::int64_t>> fr;
    for (const auto& f : j.at("fractions")) {
        if (!f.is_array() || f.size() != 2)
            throw std::invalid_argument("each fraction must be a pair [alpha, beta]");
        fr.emplace_back(f[0].get<std::int64_t>(), f[1].get<std::int64_t>());
    }
    return make_zeta_vector(j.at("n").get<int>(), j.at("N").get<int>(), fr);
}

ordered_json vector_to_json(const ZetaVector& v) {
    ordered_json fr = ordered_json::array();
    for (const auto& f : v.fractions) fr.push_back({f.alpha, f.beta});
    return ordered_json{{"n", v.n}, {"N", v.N}, {"fractions", fr}};
}

cx64 parse_complex_entry(const ordered_json& e, const char* what) {
    if (e.is_number()) return cx64(e.get<double>(), 0.0);
    if (e.is_array() && e.size() == 2)
        return cx64(e[0].get<double>(), e[1].get<double>());
    if (e.is_object() && e.contains("re"))
        return cx64(e.at("re").get<double>(), e.value("im", 0.0));
    throw std::invalid_argument(std::string(what) + ": entries must be number, [re,im] or {re,im}");
}

// Oracle file: {"pi0": [[re,im],...], "dpi0": [...], "pidag": [...], "provenance": "..."}.
PiOracle oracle_from_file(const std::string& path) {
    const ordered_json j = parse_json_arg(path);
    PiOracle pi;
    auto load = [&](const char* key, std::vector<cx64>& out) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("oracle JSON missing key ") + key);
        for (const auto& e : j.at(key)) out.push_back(parse_complex_entry(e, key));
    };
    load("pi0", pi.pi0);
    load("dpi0", pi.dpi0);
    pi.pidag.clear();
    if (j.contains("pidag"))
        for (const auto& e : j.at("pidag")) pi.pidag.push_back(parse_complex_entry(e, "pidag"));
    pi.provenance = j.value("provenance", std::string("supplied"));
    return pi;
}

// Mirrors the membership test, reporting which clause rejected the point.
std::string nonquantum_reason(const ZetaVector& v, const RationalPoint& x) {
    for (const auto& f : v.fractions) {
        std::ostringstream os;
        if (x.k % f.beta == 0) {
            os << "beta divides k (beta=" << f.beta << ", k=" << x.k << ")";
            return os.str();
        }
        const std::int64_t t = ((f.alpha * x.k % f.beta) + f.beta) % f.beta;
        const std::int64_t m = std::min(t, f.beta - t);
        if (6 * m <= f.beta) {
            os << "k*alpha/beta lies within one sixth of an integer "
               << "(alpha=" << f.alpha << ", beta=" << f.beta << ", k=" << x.k << ")";
            return os.str();
        }
    }
    return "point is quantum"; // not reached when called on a rejected point
}

double parse_real(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": cannot parse '" + s + "' as a real number");
    }
}

cx64 parse_complex_flag(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return cx64(parse_real(s, "--w"), 0.0);
    return cx64(parse_real(s.substr(0, comma), "--w"),
                parse_real(s.substr(comma + 1), "--w"));
}

struct Grid {
    double start = 0.0, stop = 0.0;
    long count = 0;
};

Grid parse_grid(const std::string& s) {
    const auto c1 = s.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("--grid expects start:stop:count");
    Grid g;
    g.start = parse_real(s.substr(0, c1), "--grid");
    g.stop = parse_real(s.substr(c1 + 1, c2 - c1 - 1), "--grid");
    g.count = std::stol(s.substr(c2 + 1));
    if (g.count < 1) throw std::invalid_argument("--grid count must be >= 1");
    return g;
}

// ---------------------------------------------------------------------------
// shared option state

struct Globals {
    int digits = 16;
    double tol = 1e-12;
    std::string format; // "", json, csv, text — subcommands pick their default
    PrecisionContext ctx() const {
        PrecisionContext c;
        c.working_digits = digits;
        c.target_abs_err = tol;
        return c;
    }
    std::string fmt(const char* dflt) const { return format.empty() ? dflt : format; }
};

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const Globals& g, const std::string& vec_arg, const std::string& pt_arg,
             const std::string& oracle_path, bool want_exact) {
    const ZetaVector v = vector_from_json(parse_json_arg(vec_arg));
    const RationalPoint pt = RationalPoint::parse(pt_arg);

    if (!is_quantum_point(v, pt)) {
        ordered_json j{{"schema", 1},
                       {"error", "non-quantum point"},
                       {"point", pt.str()},
                       {"reason", nonquantum_reason(v, pt)}};
        emit_json(j);
        return 2;
    }

    PiOracle pi = oracle_path.empty() ? PiOracle::default_ones(v) : oracle_from_file(oracle_path);
    pi.validate(v); // throws domain_error on shape mismatch -> exit 2

    struct Values {
        cx64 rn, bn, bplus, sa, sh;
    } val{};
    auto compute = [&](auto tag) {
        using C = decltype(tag);
        const PrecisionContext ctx = g.ctx();
        auto dn = [](const auto& z) {
            return cx64(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        };
        val.rn = dn(rn_at_root<C>(v, pt, ctx));
        val.bn = dn(b_n_at_root<C>(v, pt, pi, ctx));
        val.bplus = dn(B_plus_at_root<C>(v, pt, pi, ctx));
        val.sa = dn(script_A_at_root<C>(v, pt, pi, ctx));
        val.sh = dn(script_H_at_root<C>(v, pt, pi, ctx));
    };
    if (g.ctx().use_double())
        compute(cx64{});
    else
        compute(cx50{});

    const bool exact_ok = exact_path_available(v, pt);
    const bool unit_pi = pi.provenance == "default-ones" || pi.provenance == "unit";

    ordered_json j{{"schema", 1},
                   {"command", "eval"},
                   {"vector", vector_to_json(v)},
                   {"point", pt.str()},
                   {"quantum", true},
                   {"digits", g.digits},
                   {"pi_provenance", oracle_path.empty() ? "default-ones" : "supplied"},
                   {"exact_available", exact_ok}};
    j["values"] = ordered_json{{"rn", complex_json(val.rn)},
                               {"bn", complex_json(val.bn)},
                               {"bplus", complex_json(val.bplus)},
                               {"scriptA", complex_json(val.sa)},
                               {"scriptH", complex_json(val.sh)}};
    if (want_exact && exact_ok) {
        ordered_json ex{{"rn", rn_at_root_exact(v, pt).str()}};
        if (unit_pi) {
            ex["bn"] = b_n_at_root_exact_unitpi(v, pt).str();
            ex["bplus"] = B_plus_at_root_exact_unitpi(v, pt).str();
            ex["scriptA"] = script_A_at_root_exact_unitpi(v, pt).str();
            ex["scriptH"] = script_H_at_root_exact_unitpi(v, pt).str();
        } else {
            ex["note"] = "pi-dependent exact values are available only under the all-ones oracle";
        }
        j["exact"] = std::move(ex);
    }

    const std::string f = g.fmt("json");
    if (f == "json") {
        emit_json(j);
    } else if (f == "csv") {
        std::ostringstream os;
        os << "quantity,re,im\n";
        const std::pair<const char*, cx64> rows[] = {
            {"rn", val.rn}, {"bn", val.bn}, {"bplus", val.bplus},
            {"scriptA", val.sa}, {"scriptH", val.sh}};
        for (const auto& [name, z] : rows)
            os << name << ',' << num17(z.real()) << ',' << num17(z.imag()) << '\n';
        emit(os.str());
    } else { // text
        std::ostringstream os;
        os << "point        " << pt.str() << "  (quantum)\n"
           << "pi oracle    " << (oracle_path.empty() ? "default-ones" : "supplied") << "\n"
           << "exact path   " << (exact_ok ? "available" : "unavailable") << "\n";
        const std::pair<const char*, cx64> rows[] = {
            {"R_n     ", val.rn}, {"b_n     ", val.bn}, {"B_plus  ", val.bplus},
            {"script_A", val.sa}, {"script_H", val.sh}};
        for (const auto& [name, z] : rows)
            os << name << " = " << num17(z.real()) << " + " << num17(z.imag()) << " i\n";
        if (j.contains("exact"))
            for (const auto& [k, s] : j["exact"].items())
                os << "exact " << k << " = " << s.get<std::string>() << "\n";
        emit(os.str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// qset

int cmd_qset(const Globals& g, const std::string& vec_arg, std::int64_t kmax) {
    const ZetaVector v = vector_from_json(parse_json_arg(vec_arg));
    const std::vector<RationalPoint> pts = quantum_points_upto(v, kmax);
    static const char* note =
        "membership is invariant under integer shifts; canonical representatives 0 <= h < k";

    const std::string f = g.fmt("json");
    if (f == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& p : pts) arr.push_back(p.str());
        emit_json(ordered_json{{"schema", 1},
                               {"command", "qset"},
                               {"vector", vector_to_json(v)},
                               {"kmax", kmax},
                               {"note", note},
                               {"points", arr}});
    } else if (f == "csv") {
        std::ostringstream os;
        os << "h,k\n";
        for (const auto& p : pts) os << p.h << ',' << p.k << '\n';
        emit(os.str());
    } else {
        std::ostringstream os;
        os << "# " << note << "\n";
        for (const auto& p : pts) os << p.str() << '\n';
        emit(os.str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// series

int cmd_series(const Globals& g, const std::string& w_str, int order) {
    const cx64 w = parse_complex_flag(w_str);
    std::vector<cx64> coeff;
    if (g.ctx().use_double()) {
        const PowerSeriesT<cx64> s = r1_series<cx64>(w, order);
        coeff.assign(s.c.begin(), s.c.end());
    } else {
        const PowerSeriesT<cx50> s = r1_series<cx50>(cx50(w.real(), w.imag()), order);
        for (const auto& z : s.c)
            coeff.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }

    const std::string f = g.fmt("csv");
    if (f == "csv") {
        std::ostringstream os;
        os << "r,re,im\n";
        for (std::size_t r = 0; r < coeff.size(); ++r)
            os << r << ',' << num17(coeff[r].real()) << ',' << num17(coeff[r].imag()) << '\n';
        emit(os.str());
    } else if (f == "json") {
        ordered_json arr = ordered_json::array();
        for (std::size_t r = 0; r < coeff.size(); ++r)
            arr.push_back({{"r", r}, {"re", clean(coeff[r].real())}, {"im", clean(coeff[r].imag())}});
        emit_json(ordered_json{{"schema", 1},
                               {"command", "series"},
                               {"w", complex_json(w)},
                               {"order", order},
                               {"coefficients", arr}});
    } else {
        std::ostringstream os;
        for (std::size_t r = 0; r < coeff.size(); ++r)
            os << "q^" << r << ": " << num17(coeff[r].real()) << " + "
               << num17(coeff[r].imag()) << " i\n";
        emit(os.str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const Globals& g, bool suite, const std::string& filter,
               const std::vector<std::string>& check_ids, std::uint64_t seed,
               double tol_override, const std::string& oracle_arg) {
    VerifyOptions opt;
    opt.seed = seed;
    opt.tol_override = tol_override;
    opt.ctx = g.ctx();
    if (!oracle_arg.empty()) {
        if (oracle_arg == "unit") {
            opt.oracle_mode = OracleMode::unit;
        } else {
            opt.oracle_mode = OracleMode::supplied;
            opt.supplied = oracle_from_file(oracle_arg);
        }
    }

    std::vector<CheckResult> results;
    if (!check_ids.empty()) {
        for (const auto& id : check_ids) results.push_back(run_check(id, opt));
    } else {
        results = run_suite(opt, suite ? filter : "");
    }

    const std::string f = g.fmt("json");
    if (f == "json") {
        emit(report_json(results, opt));
    } else if (f == "csv") {
        std::ostringstream os;
        os << "id,status,n_points,max_residual,tolerance\n";
        for (const auto& r : results)
            os << r.id << ',' << to_string(r.status) << ',' << r.n_points << ','
               << num17(r.max_residual) << ',' << num17(r.tolerance) << '\n';
        emit(os.str());
    } else {
        emit(report_table(results));
    }

    bool any_fail = false, any_inconclusive = false;
    for (const auto& r : results) {
        any_fail |= r.status == CheckStatus::fail;
        any_inconclusive |= r.status == CheckStatus::inconclusive;
    }
    if (any_fail) return 4;
    if (any_inconclusive) return 3;
    return 0;
}

// ---------------------------------------------------------------------------
// cocycle

int cmd_cocycle(const Globals& g, const std::string& which, const std::string& grid_str,
                std::int64_t alpha, std::int64_t beta, std::int64_t ell) {
    if (beta < 2 || alpha < 1 || alpha >= beta || std::gcd(alpha, beta) != 1)
        throw std::invalid_argument("--alpha/--beta must form a reduced fraction in (0,1)");
    const RootOfUnity ab(alpha, beta);
    if (ell == 0) ell = beta % 3 == 0 ? 2 * beta * beta : 6 * beta * beta;
    const Grid grid = parse_grid(grid_str);
    const PrecisionContext ctx = g.ctx();

    std::vector<std::pair<double, cx64>> rows;
    rows.reserve(static_cast<std::size_t>(grid.count));
    for (long i = 0; i < grid.count; ++i) {
        const double x = grid.count == 1
                             ? grid.start
                             : grid.start + (grid.stop - grid.start) * static_cast<double>(i) /
                                                static_cast<double>(grid.count - 1);
        cx64 val;
        auto run = [&](auto tag) {
            using C = decltype(tag);
            const C xc = make_cx<C>(x);
            C z;
            if (which == "H1")
                z = cocycle_H1_term<C>(ab, static_cast<long>(ell), xc, ctx);
            else if (which == "H2")
                z = cocycle_H2_term<C>(ab, static_cast<long>(ell), xc, ctx);
            else if (which == "E1")
                z = E1_err<C>(ab, static_cast<long>(ell), xc);
            else
                z = E2_err<C>(ab, static_cast<long>(ell), xc);
            val = cx64(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        };
        if (ctx.use_double())
            run(cx64{});
        else
            run(cx50{});
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
            fail_domain("non-finite value on grid",
                        ordered_json{{"which", which}, {"x", x}});
        rows.emplace_back(x, val);
    }

    const std::string f = g.fmt("csv");
    if (f == "csv" || f == "text") {
        std::ostringstream os;
        os << "x,re,im\n";
        for (const auto& [x, z] : rows)
            os << num17(x) << ',' << num17(z.real()) << ',' << num17(z.imag()) << '\n';
        emit(os.str());
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& [x, z] : rows)
            arr.push_back({{"x", clean(x)}, {"re", clean(z.real())}, {"im", clean(z.imag())}});
        emit_json(ordered_json{{"schema", 1},
                               {"command", "cocycle"},
                               {"which", which},
                               {"alpha", alpha},
                               {"beta", beta},
                               {"ell", ell},
                               {"rows", arr}});
    }
    return 0;
}

} // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"qmrank: rank generating function on the quantum set — evaluation and verification"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    if (const char* env = std::getenv("QMRANK_DIGITS")) {
        try {
            g.digits = std::stoi(env);
        } catch (const std::exception&) {
            std::fprintf(stderr, "qmrank: ignoring invalid QMRANK_DIGITS='%s'\n", env);
        }
    }
    app.add_option("--digits", g.digits, "working precision in decimal digits (<=16: double)")
        ->capture_default_str();
    app.add_option("--tol", g.tol, "target absolute error for series truncation")
        ->capture_default_str();
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate R_n, b_n, B_plus, script_A, script_H at a point");
    std::string ev_vec, ev_pt, ev_oracle;
    bool ev_exact = false;
    eval->add_option("vector", ev_vec, "root-of-unity vector as JSON (inline or file)")->required();
    eval->add_option("point", ev_pt, "rational point h/k")->required();
    eval->add_option("--pi-oracle", ev_oracle, "JSON file with pi0/dpi0/pidag values");
    eval->add_flag("--exact", ev_exact, "also print exact cyclotomic values when available");

    // qset
    auto* qset = app.add_subcommand("qset", "list the quantum set up to a denominator bound");
    std::string qs_vec;
    std::int64_t qs_kmax = 0;
    qset->add_option("vector", qs_vec, "root-of-unity vector as JSON (inline or file)")->required();
    qset->add_option("kmax", qs_kmax, "largest denominator to list")
        ->required()
        ->check(CLI::NonNegativeNumber);

    // series
    auto* series = app.add_subcommand("series", "rank series coefficients at fixed w");
    std::string se_w = "1";
    int se_order = 8;
    series->add_option("--w", se_w, "w value, 're' or 're,im'")->capture_default_str();
    series->add_option("--order", se_order, "highest power of q")
        ->capture_default_str()
        ->check(CLI::Range(0, 4000));

    // verify
    auto* verify = app.add_subcommand("verify", "run the identity-check suite");
    bool vf_suite = false;
    std::string vf_filter, vf_oracle;
    std::vector<std::string> vf_checks;
    std::uint64_t vf_seed = 20260819ull;
    double vf_tol_override = 0.0;
    verify->add_flag("--suite", vf_suite, "run the full catalog (default when no --check given)");
    verify->add_option("--filter", vf_filter,
                       "restrict --suite: 'pi-free', 'pi-conditional', or an id prefix");
    verify->add_option("--check", vf_checks, "run a single check by id (repeatable)");
    verify->add_option("--seed", vf_seed, "sampling seed")->capture_default_str();
    verify->add_option("--tol-override", vf_tol_override,
                       "replace every per-check tolerance (0 keeps defaults)");
    verify->add_option("--pi-oracle", vf_oracle, "oracle JSON file, or 'unit' for the all-ones oracle");

    // cocycle
    auto* cocycle = app.add_subcommand("cocycle", "tabulate an obstruction-term kernel on a grid");
    std::string cc_which = "H1", cc_grid = "0.02:0.18:17";
    std::int64_t cc_alpha = 1, cc_beta = 3, cc_ell = 0;
    cocycle->add_option("--which", cc_which, "kernel to tabulate")
        ->check(CLI::IsMember({"H1", "H2", "E1", "E2"}))
        ->capture_default_str();
    cocycle->add_option("--grid", cc_grid, "real grid start:stop:count")->capture_default_str();
    cocycle->add_option("--alpha", cc_alpha, "fraction numerator")->capture_default_str();
    cocycle->add_option("--beta", cc_beta, "fraction denominator")->capture_default_str();
    cocycle->add_option("--ell", cc_ell, "level (0: derived from beta)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1; // help/version exit 0, every parse failure exits 1
    }

    try {
        if (*eval) return cmd_eval(g, ev_vec, ev_pt, ev_oracle, ev_exact);
        if (*qset) return cmd_qset(g, qs_vec, qs_kmax);
        if (*series) return cmd_series(g, se_w, se_order);
        if (*verify)
            return cmd_verify(g, vf_suite, vf_filter, vf_checks, vf_seed, vf_tol_override, vf_oracle);
        if (*cocycle) return cmd_cocycle(g, cc_which, cc_grid, cc_alpha, cc_beta, cc_ell);
    } catch (const precision_error& e) {
        emit_json(ordered_json{{"schema", 1}, {"error", "precision"}, {"reason", e.what()}});
        return 3;
    } catch (const domain_error& e) {
        emit_json(ordered_json{{"schema", 1}, {"error", "domain"}, {"reason", e.what()}});
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qmrank: %s\n", e.what());
        return 1;
    }
    return 1;
}
