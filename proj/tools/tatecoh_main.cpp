// Command line front end.  Exit codes: 0 ok, 2 bad input, 3 computation
// failed, 4 cache trouble.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tatecoh/cache.hpp"
#include "tatecoh/delta_ring.hpp"
#include "tatecoh/descent.hpp"
#include "tatecoh/elementary.hpp"
#include "tatecoh/errors.hpp"
#include "tatecoh/lseries.hpp"
#include "tatecoh/module_json.hpp"
#include "tatecoh/padic.hpp"
#include "tatecoh/report.hpp"

using namespace tatecoh;
using nlohmann::ordered_json;

namespace {

struct Opts {
    long p = 5;
    std::string precision = "8,16";
    std::string generator;
    std::string cache_dir;
    std::string format = "text";
    long m_from = 1;
    long m_to = 8;
    std::string branch_map_file;
    std::string fixtures_file;
};

std::pair<int, int> parse_precision(const std::string& s) {
    int N = 0, M = 16;
    const auto comma = s.find(',');
    try {
        N = std::stoi(s.substr(0, comma));
        if (comma != std::string::npos) M = std::stoi(s.substr(comma + 1));
    } catch (const std::exception&) {
        throw ValidationError("--precision", "expected N or N,M");
    }
    if (N < 1 || M < 1) throw ValidationError("--precision", "need positive N, M");
    return {N, M};
}

mpz_class parse_mpz_arg(const std::string& s, const char* flag) {
    mpz_class z;
    if (s.empty() || mpz_set_str(z.get_mpz_t(), s.c_str(), 10) != 0)
        throw ValidationError(flag, "not a base-10 integer: '" + s + "'");
    return z;
}

mpz_class resolve_u(const Opts& o) {
    if (o.generator.empty()) return mpz_class(1 + o.p);
    mpz_class u = parse_mpz_arg(o.generator, "--generator");
    if (u % o.p != 1) throw ValidationError("--generator", "must be 1 mod p");
    if (u % (mpz_class(o.p) * o.p) == 1)
        throw ValidationError("--generator", "is 1 mod p^2, not a topological generator");
    return u;
}

std::string slurp(const std::string& path, const char* flag) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(flag, "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::map<long, long> load_branch_map(const std::string& path) {
    std::map<long, long> out;
    if (path.empty()) return out;
    nlohmann::json v = nlohmann::json::parse(slurp(path, "--branch-map"), nullptr, false);
    if (v.is_discarded() || !v.is_object())
        throw ValidationError("--branch-map", "expected a JSON object");
    for (auto it = v.begin(); it != v.end(); ++it) {
        long m = 0;
        try {
            m = std::stol(it.key());
        } catch (const std::exception&) {
            throw ValidationError("--branch-map", "key '" + it.key() + "' is not an integer");
        }
        if (!it->is_number_integer())
            throw ValidationError("--branch-map", "value for m=" + it.key() +
                                                      " is not an integer");
        out[m] = it->get<long>();
    }
    return out;
}

SeriesProvider make_provider(const Opts& o, int N, int M, const mpz_class& u,
                             std::unique_ptr<SeriesCache>& keeper) {
    if (!o.cache_dir.empty()) {
        keeper = std::make_unique<SeriesCache>(o.cache_dir);
        return keeper->provider(N, M, u);
    }
    return [N, M, u](long p, long j) { return iwasawa_series(p, j, N, M, u); };
}

int cmd_teichmuller(const Opts& o, const std::vector<std::string>& values) {
    auto [N, M] = parse_precision(o.precision);
    (void)M;
    ordered_json rows = ordered_json::array();
    for (const std::string& s : values) {
        const mpz_class a = parse_mpz_arg(s, "--a");
        PadicInt x(o.p, N, a);
        ordered_json row;
        row["a"] = s;
        row["valuation"] = x.valuation();
        if (x.is_unit()) {
            UnitDecomposition d = unit_decompose(x);
            row["omega"] = d.teich.str();
            row["principal"] = d.principal.str();
        }
        rows.push_back(std::move(row));
        if (o.format == "text") {
            const ordered_json& r = rows.back();
            std::cout << "a=" << s << "  v=" << r["valuation"].get<int>();
            if (r.contains("omega"))
                std::cout << "  omega=" << r["omega"].get<std::string>()
                          << "  principal=" << r["principal"].get<std::string>();
            std::cout << "\n";
        }
    }
    if (o.format == "json")
        std::cout << ordered_json{{"p", o.p}, {"N", N}, {"values", rows}}.dump(2)
                  << "\n";
    return 0;
}

int cmd_idempotents(const Opts& o) {
    auto [N, M] = parse_precision(o.precision);
    (void)M;
    std::vector<DeltaRingElement> es;
    for (long j = 0; j <= o.p - 2; ++j) es.push_back(idempotent(j, o.p, N));

    DeltaRingElement sum = DeltaRingElement::zero(o.p, N);
    for (const auto& e : es) sum = sum + e;
    bool complete = (sum == DeltaRingElement::identity(o.p, N));
    bool orthogonal = true;
    for (size_t a = 0; a < es.size() && orthogonal; ++a)
        for (size_t b = 0; b < es.size(); ++b) {
            const DeltaRingElement prod = es[a] * es[b];
            const DeltaRingElement want = (a == b) ? es[a] : DeltaRingElement::zero(o.p, N);
            if (prod != want) { orthogonal = false; break; }
        }

    if (o.format == "json") {
        ordered_json arr = ordered_json::array();
        for (long j = 0; j <= o.p - 2; ++j) {
            ordered_json row;
            row["j"] = j;
            ordered_json cs = ordered_json::array();
            for (long d = 1; d <= o.p - 1; ++d) cs.push_back(es[j].coeff(d).get_str());
            row["coeffs"] = std::move(cs);
            arr.push_back(std::move(row));
        }
        std::cout << ordered_json{{"p", o.p},
                                  {"N", N},
                                  {"idempotents", arr},
                                  {"complete", complete},
                                  {"orthogonal", orthogonal}}
                         .dump(2)
                  << "\n";
    } else {
        for (long j = 0; j <= o.p - 2; ++j) {
            std::cout << "e_" << j << ":";
            for (long d = 1; d <= o.p - 1; ++d) std::cout << " " << es[j].coeff(d).get_str();
            std::cout << "\n";
        }
        std::cout << "complete=" << (complete ? "yes" : "no")
                  << " orthogonal=" << (orthogonal ? "yes" : "no") << "\n";
    }
    return (complete && orthogonal) ? 0 : 3;
}

int cmd_series(const Opts& o, long j) {
    auto [N, M] = parse_precision(o.precision);
    const mpz_class u = resolve_u(o);
    std::unique_ptr<SeriesCache> cache;
    SeriesProvider provider = make_provider(o, N, M, u, cache);
    BranchSeries g = provider(o.p, j);
    if (o.format == "json") {
        ordered_json coeffs = ordered_json::array();
        for (int k = 0; k < M; ++k) coeffs.push_back(g.series[k].get_str());
        std::cout << ordered_json{{"p", g.p},
                                  {"j", g.j},
                                  {"N", N},
                                  {"M", M},
                                  {"u", g.u.get_str()},
                                  {"convention", g.convention_id},
                                  {"level", g.level_used},
                                  {"coeffs", coeffs}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << serialize_series(g.series, g.u, g.convention_id);
        std::cout << "# level " << g.level_used << "\n";
    }
    return 0;
}

int cmd_invariants(const Opts& o) {
    auto [N, M] = parse_precision(o.precision);
    const mpz_class u = resolve_u(o);
    std::unique_ptr<SeriesCache> cache;
    SeriesProvider provider = make_provider(o, N, M, u, cache);
    ordered_json arr = ordered_json::array();
    for (long j = 2; j <= o.p - 3; j += 2) {
        BranchSeries g = provider(o.p, j);
        BranchInvariants inv = branch_invariants(g);
        if (o.format == "text") {
            std::cout << "j=" << j << "  mu=" << inv.mu << (inv.mu_certified ? "" : "?")
                      << "  lambda=" << inv.lambda
                      << (inv.lambda_certified ? "" : "?")
                      << "  convention=" << g.convention_id
                      << "  level=" << g.level_used << "\n";
        } else {
            arr.push_back(ordered_json{{"j", j},
                                       {"mu", inv.mu},
                                       {"lambda", inv.lambda},
                                       {"mu_certified", inv.mu_certified},
                                       {"lambda_certified", inv.lambda_certified},
                                       {"convention", g.convention_id},
                                       {"level", g.level_used}});
        }
    }
    if (o.format == "json")
        std::cout << ordered_json{{"p", o.p}, {"N", N}, {"M", M}, {"u", u.get_str()},
                                  {"branches", arr}}
                         .dump(2)
                  << "\n";
    return 0;
}

int cmd_tmap(const Opts& o) {
    auto [N, M] = parse_precision(o.precision);
    const mpz_class u = resolve_u(o);
    std::unique_ptr<SeriesCache> cache;
    SeriesProvider provider = make_provider(o, N, M, u, cache);
    const std::map<long, long> bmap = load_branch_map(o.branch_map_file);

    ordered_json arr = ordered_json::array();
    for (long m = o.m_from; m <= o.m_to; ++m) {
        ordered_json row;
        row["m"] = m;
        long r = ((m % (o.p - 1)) + (o.p - 1)) % (o.p - 1);
        if (r == 0) {
            row["outside_hypotheses"] = true;
        } else {
            try {
                TInvariant t = t_invariant(o.p, m, bmap, N, M, u, provider);
                row["r_m"] = rank_formula(o.p, m);
                row["t_m"] = t.t;
                row["certified"] = t.certified;
                row["certificate"] = t.certificate;
                if (t.branch_j >= 0) row["branch_j"] = t.branch_j;
            } catch (const Error& e) {
                row["error"] = e.what();
            }
        }
        if (o.format == "text") {
            std::cout << "m=" << m;
            if (row.contains("outside_hypotheses"))
                std::cout << "  outside hypotheses (m = 0 mod p-1)";
            else if (row.contains("error"))
                std::cout << "  error: " << row["error"].get<std::string>();
            else {
                std::cout << "  r_m=" << row["r_m"].get<int>()
                          << "  t_m=" << row["t_m"].get<int>()
                          << (row["certified"].get<bool>() ? "  certified" : "  uncertified")
                          << "  (" << row["certificate"].get<std::string>() << ")";
                if (row.contains("branch_j"))
                    std::cout << "  j=" << row["branch_j"].get<long>();
            }
            std::cout << "\n";
        }
        arr.push_back(std::move(row));
    }
    if (o.format == "json")
        std::cout << ordered_json{{"p", o.p}, {"u", u.get_str()}, {"N", N}, {"M", M},
                                  {"entries", arr}}
                         .dump(2)
                  << "\n";
    return 0;
}

int cmd_cohomology(const Opts& o, bool allow_branch_zero) {
    if (o.fixtures_file.empty())
        throw ValidationError("--fixtures", "required for the cohomology command");
    const auto fixtures = descent_fixtures_from_jsonl(slurp(o.fixtures_file, "--fixtures"));
    int mismatches = 0;
    ordered_json arr = ordered_json::array();
    for (size_t i = 0; i < fixtures.size(); ++i) {
        const DescentFixture& f = fixtures[i];
        const int a1 = f.module.orders.empty() ? 0 : f.module.orders.front();
        const TwistCharacter th = tate_twist(f.module.p, f.m, a1 + 2, f.u);
        HData H;
        H.h0 = f.module;
        H.h1 = f.module;
        GradedPieces got = twist_cohomology(H, th, f.q, allow_branch_zero);
        ordered_json row;
        row["index"] = i;
        row["m"] = f.m;
        row["q"] = f.q;
        row["coker"] = got.coker_part.orders;
        row["ker"] = got.ker_part.orders;
        bool ok = true;
        if (f.expected_coker && *f.expected_coker != got.coker_part.orders) ok = false;
        if (f.expected_ker && *f.expected_ker != got.ker_part.orders) ok = false;
        if (f.expected_coker || f.expected_ker) row["match"] = ok;
        if (!ok) ++mismatches;
        if (o.format == "text") {
            std::cout << "[" << i << "] m=" << f.m << " q=" << f.q << "  coker=(";
            for (size_t k = 0; k < got.coker_part.orders.size(); ++k)
                std::cout << (k ? "," : "") << got.coker_part.orders[k];
            std::cout << ")  ker=(";
            for (size_t k = 0; k < got.ker_part.orders.size(); ++k)
                std::cout << (k ? "," : "") << got.ker_part.orders[k];
            std::cout << ")";
            if (row.contains("match")) std::cout << (ok ? "  match" : "  MISMATCH");
            std::cout << "\n";
        }
        arr.push_back(std::move(row));
    }
    if (o.format == "json")
        std::cout << ordered_json{{"fixtures", arr}, {"mismatches", mismatches}}.dump(2)
                  << "\n";
    return mismatches == 0 ? 0 : 3;
}

int cmd_report(const Opts& o, const std::vector<long>& primes,
               const std::string& config_file) {
    RunConfig c;
    if (!config_file.empty()) {
        c = parse_config(slurp(config_file, "--config"));
    } else {
        c.primes = primes.empty() ? std::vector<long>{o.p} : primes;
        auto [N, M] = parse_precision(o.precision);
        c.N = N;
        c.M = M;
        c.m_from = o.m_from;
        c.m_to = o.m_to;
        if (!o.generator.empty()) c.u_override = resolve_u(o);
        c.branch_map = load_branch_map(o.branch_map_file);
        c.cache_dir = o.cache_dir;
        c.format = o.format;
    }
    CohomologyReport r = run_report(c);
    std::cout << (c.format == "json" ? report_to_json(r) : report_to_text(r));
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    check("teichmuller 2 mod 5^3", teichmuller(2, 5, 3).value() == 57);
    {
        UnitDecomposition d = unit_decompose(PadicInt(5, 3, 2));
        check("unit decomposition 2 = 57 * 11", d.teich.value() == 57 &&
                                                    d.principal.value() == 11);
    }
    {
        PowerSeries f(5, 3, 8);
        f.set(0, 25);
        f.set(1, 5);
        MuLambda ml = mu_lambda(f);
        check("mu/lambda of 25 + 5T", ml.mu == 1 && ml.lambda == 1);
    }
    {
        PowerSeries g(5, 3, 8);
        g.set(2, 1);
        PadicInt c(5, 3, 20);
        DivisionResult d = divide_by_distinguished(g, linear_distinguished(5, 3, 8, c), 1);
        check("T^2 / (T - 20)", d.quotient[0] == 20 && d.quotient[1] == 1 &&
                                    d.remainder[0] == 25);
    }
    {
        FinitePModule m;
        m.p = 3;
        m.orders = {2};
        IntMat g(1, 1);
        g.at(0, 0) = 4;
        m.gamma_action = g;
        FinitePModule d = pontryagin_dual(m);
        check("dual of gamma=4 on Z/9", d.gamma_action->at(0, 0) == 7);
    }
    check("lp anchor (5, j=2, n=2)", lp_value(5, 2, 2, 3).value() == 42);
    check("lp anchor (5, j=2, n=6)", lp_value(5, 2, 6, 3).value() == 62);
    {
        BranchSeries g = iwasawa_series(5, 2, 4, 8, mpz_class(6));
        BranchInvariants inv = branch_invariants(g);
        check("branch (5, 2) is a certified unit",
              inv.mu == 0 && inv.lambda == 0 && inv.mu_certified && inv.lambda_certified);
        check("surviving convention", g.convention_id == "epsm1etap1");
    }
    {
        TInvariant t = t_invariant(5, 2, {}, 4, 8, mpz_class(6));
        check("t_2 = 0 at p=5", t.t == 0 && t.certified);
    }
    std::cout << (failures == 0 ? "selftest ok" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cohomology of Tate twists over the cyclotomic tower"};
    app.require_subcommand(1);

    Opts o;
    std::vector<std::string> teich_values;
    std::vector<long> report_primes;
    std::string config_file;
    long series_j = 2;
    bool allow_branch_zero = false;

    auto add_common = [&](CLI::App* s, bool with_p = true) {
        if (with_p) s->add_option("-p,--p", o.p, "odd prime");
        s->add_option("--precision", o.precision, "working precision N,M");
        s->add_option("--format", o.format, "json or text")
            ->check(CLI::IsMember({"json", "text"}));
    };

    CLI::App* teich = app.add_subcommand("teichmuller", "omega and 1-unit parts");
    add_common(teich);
    teich->add_option("--a", teich_values, "values to decompose")->required();

    CLI::App* idem = app.add_subcommand("idempotents", "branch idempotents of (Z/p^N)[Delta]");
    add_common(idem);

    CLI::App* ser = app.add_subcommand("series", "branch series on one even branch");
    add_common(ser);
    ser->add_option("--j", series_j, "even branch exponent")->required();
    ser->add_option("--generator", o.generator, "1-unit generator u (default 1+p)");
    ser->add_option("--cache-dir", o.cache_dir, "series cache directory");

    CLI::App* inv = app.add_subcommand("invariants", "mu/lambda across even branches");
    add_common(inv);
    inv->add_option("--generator", o.generator, "1-unit generator u");
    inv->add_option("--cache-dir", o.cache_dir, "series cache directory");

    CLI::App* tm = app.add_subcommand("tmap", "torsion contribution t_m over a range");
    add_common(tm);
    tm->add_option("--m-from", o.m_from, "first twist");
    tm->add_option("--m-to", o.m_to, "last twist");
    tm->add_option("--generator", o.generator, "1-unit generator u");
    tm->add_option("--cache-dir", o.cache_dir, "series cache directory");
    tm->add_option("--branch-map", o.branch_map_file, "JSON file mapping m to branch j");

    CLI::App* coh = app.add_subcommand("cohomology", "graded pieces for fixture records");
    add_common(coh, false);
    coh->add_option("--fixtures", o.fixtures_file, "JSONL fixture file")->required();
    coh->add_flag("--allow-branch-zero", allow_branch_zero,
                  "evaluate m = 0 mod p-1 anyway (results flagged)");

    CLI::App* rep = app.add_subcommand("report", "full corank report");
    add_common(rep, false);
    rep->add_option("-p,--p", report_primes, "primes to cover");
    rep->add_option("--m-from", o.m_from, "first twist");
    rep->add_option("--m-to", o.m_to, "last twist");
    rep->add_option("--generator", o.generator, "1-unit generator u (single prime only)");
    rep->add_option("--cache-dir", o.cache_dir, "series cache directory");
    rep->add_option("--branch-map", o.branch_map_file, "JSON file mapping m to branch j");
    rep->add_option("--config", config_file, "JSON run config (overrides other flags)");

    app.add_subcommand("selftest", "quick end-to-end sanity checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (teich->parsed()) return cmd_teichmuller(o, teich_values);
        if (idem->parsed()) return cmd_idempotents(o);
        if (ser->parsed()) {
            if (!o.p) throw ValidationError("--p", "required");
            return cmd_series(o, series_j);
        }
        if (inv->parsed()) return cmd_invariants(o);
        if (tm->parsed()) return cmd_tmap(o);
        if (coh->parsed()) return cmd_cohomology(o, allow_branch_zero);
        if (rep->parsed()) return cmd_report(o, report_primes, config_file);
        return cmd_selftest();
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CorruptCache& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return 4;
    } catch (const VersionMismatch& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
