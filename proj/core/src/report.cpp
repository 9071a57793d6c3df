#include "tatecoh/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <memory>
#include <sstream>

#include "tatecoh/cache.hpp"
#include "tatecoh/elementary.hpp"
#include "tatecoh/errors.hpp"
#include "tatecoh/padic.hpp"

namespace tatecoh {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

long require_prime(long p, const std::string& path) {
    if (p < 3) throw ValidationError(path, "need an odd prime, got " + std::to_string(p));
    mpz_class z(p);
    if (mpz_probab_prime_p(z.get_mpz_t(), 30) == 0)
        throw ValidationError(path, std::to_string(p) + " is not prime");
    return p;
}

mpz_class one_unit_generator(long p, const mpz_class& u, const std::string& path) {
    if (u % p != 1) throw ValidationError(path, "generator must be 1 mod p");
    mpz_class p2 = mpz_class(p) * p;
    if (u % p2 == 1)
        throw ValidationError(path, "generator is 1 mod p^2, not topological");
    return u;
}

long mod_positive(long m, long d) {
    long r = m % d;
    return r < 0 ? r + d : r;
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json v = json::parse(json_text, nullptr, false);
    if (v.is_discarded()) throw ValidationError("config", "malformed JSON");
    if (!v.is_object()) throw ValidationError("config", "expected a JSON object");

    static const char* allowed[] = {"p",     "primes",    "m_from",    "m_to",
                                    "N",     "M",         "u",         "branch_map",
                                    "cache_dir", "format"};
    for (auto it = v.begin(); it != v.end(); ++it) {
        if (std::find_if(std::begin(allowed), std::end(allowed), [&](const char* k) {
                return it.key() == k;
            }) == std::end(allowed))
            throw ValidationError("config." + it.key(), "unknown key");
    }

    auto get_long = [&](const char* key, long fallback) {
        auto it = v.find(key);
        if (it == v.end()) return fallback;
        if (!it->is_number_integer() && !it->is_number_unsigned())
            throw ValidationError(std::string("config.") + key, "expected an integer");
        return it->get<long>();
    };

    RunConfig c;
    if (v.contains("p") && v.contains("primes"))
        throw ValidationError("config.p", "give either p or primes, not both");
    if (v.contains("p")) {
        c.primes.push_back(require_prime(get_long("p", 0), "config.p"));
    } else if (v.contains("primes")) {
        const json& ps = v["primes"];
        if (!ps.is_array() || ps.empty())
            throw ValidationError("config.primes", "expected a nonempty array");
        for (size_t i = 0; i < ps.size(); ++i) {
            const std::string path = "config.primes[" + std::to_string(i) + "]";
            if (!ps[i].is_number_integer() && !ps[i].is_number_unsigned())
                throw ValidationError(path, "expected an integer");
            c.primes.push_back(require_prime(ps[i].get<long>(), path));
        }
    } else {
        throw ValidationError("config.p", "missing (or use primes)");
    }

    c.m_from = get_long("m_from", c.m_from);
    c.m_to = get_long("m_to", c.m_to);
    if (c.m_to < c.m_from)
        throw ValidationError("config.m_to", "range is empty");
    c.N = static_cast<int>(get_long("N", c.N));
    c.M = static_cast<int>(get_long("M", c.M));
    if (c.N < 2) throw ValidationError("config.N", "need N >= 2");
    if (c.M < 2) throw ValidationError("config.M", "need M >= 2");

    if (auto it = v.find("u"); it != v.end()) {
        mpz_class u;
        if (it->is_number_integer() || it->is_number_unsigned())
            u = it->get<long>();
        else if (it->is_string() &&
                 mpz_set_str(u.get_mpz_t(), it->get<std::string>().c_str(), 10) == 0)
            ;
        else
            throw ValidationError("config.u", "expected an integer or decimal string");
        if (c.primes.size() != 1)
            throw ValidationError("config.u", "explicit generator needs a single prime");
        c.u_override = one_unit_generator(c.primes[0], u, "config.u");
    }

    if (auto it = v.find("branch_map"); it != v.end()) {
        if (!it->is_object())
            throw ValidationError("config.branch_map", "expected an object");
        for (auto e = it->begin(); e != it->end(); ++e) {
            long m;
            try {
                size_t used = 0;
                m = std::stol(e.key(), &used);
                if (used != e.key().size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ValidationError("config.branch_map", "key '" + e.key() +
                                                               "' is not an integer");
            }
            if (!e->is_number_integer() && !e->is_number_unsigned())
                throw ValidationError("config.branch_map." + e.key(),
                                      "expected an integer branch exponent");
            c.branch_map[m] = e->get<long>();
        }
    }

    if (auto it = v.find("cache_dir"); it != v.end()) {
        if (!it->is_string()) throw ValidationError("config.cache_dir", "expected a string");
        c.cache_dir = it->get<std::string>();
    }
    if (auto it = v.find("format"); it != v.end()) {
        if (!it->is_string() || (*it != "json" && *it != "text"))
            throw ValidationError("config.format", "expected \"json\" or \"text\"");
        c.format = it->get<std::string>();
    }
    return c;
}

std::string config_to_json(const RunConfig& c) {
    ordered_json v;
    v["primes"] = c.primes;
    v["m_from"] = c.m_from;
    v["m_to"] = c.m_to;
    v["N"] = c.N;
    v["M"] = c.M;
    if (c.u_override)
        v["u"] = c.u_override->get_str();
    else
        v["u"] = nullptr;
    ordered_json bm = ordered_json::object();
    for (const auto& [m, j] : c.branch_map) bm[std::to_string(m)] = j;
    v["branch_map"] = std::move(bm);
    v["cache_dir"] = c.cache_dir;
    v["format"] = c.format;
    return v.dump();
}

CohomologyReport run_report(const RunConfig& config) {
    if (config.primes.empty()) throw ValidationError("config.primes", "empty");
    if (config.u_override && config.primes.size() != 1)
        throw ValidationError("config.u", "explicit generator needs a single prime");

    CohomologyReport out;
    out.config = config;

    std::unique_ptr<SeriesCache> cache;
    if (!config.cache_dir.empty())
        cache = std::make_unique<SeriesCache>(config.cache_dir);

    for (long p : config.primes) {
        require_prime(p, "config.primes");
        PrimeReport pr;
        pr.p = p;
        pr.u = config.u_override ? *config.u_override : mpz_class(1 + p);
        pr.delta_generator = smallest_primitive_root(p);

        SeriesProvider provider;
        if (cache) {
            provider = cache->provider(config.N, config.M, pr.u);
        } else {
            const int N = config.N, M = config.M;
            const mpz_class u = pr.u;
            provider = [N, M, u](long pp, long jj) {
                return iwasawa_series(pp, jj, N, M, u);
            };
        }

        for (long j = 2; j <= p - 3; j += 2) {
            BranchSummary bs;
            bs.j = j;
            try {
                BranchSeries g = provider(p, j);
                BranchInvariants inv = branch_invariants(g);
                bs.mu = inv.mu;
                bs.lambda = inv.lambda;
                bs.mu_certified = inv.mu_certified;
                bs.lambda_certified = inv.lambda_certified;
                bs.convention_id = g.convention_id;
                bs.level_used = g.level_used;
            } catch (const Error& e) {
                bs.error = e.what();
            }
            pr.branches.push_back(std::move(bs));
        }

        for (long m = config.m_from; m <= config.m_to; ++m) {
            ReportEntry e;
            e.m = m;
            if (mod_positive(m, p - 1) == 0) {
                e.outside_hypotheses = true;
                pr.entries.push_back(std::move(e));
                continue;
            }
            try {
                e.r_m = rank_formula(p, m);
                TInvariant t = t_invariant(p, m, config.branch_map, config.N,
                                           config.M, pr.u, provider);
                e.t_m = t.t;
                e.t_certified = t.certified;
                e.t_certificate = t.certificate;
                e.branch_j = t.branch_j;
                e.corank_h1 = e.r_m + e.t_m;
                e.corank_h2 = e.t_m;
            } catch (const Error& err) {
                e.error = err.what();
            }
            pr.entries.push_back(std::move(e));
        }

        pr.rank_period_sum = 0;
        for (long m = 1; m <= p - 2; ++m) pr.rank_period_sum += rank_formula(p, m);
        pr.rank_period_ok = (pr.rank_period_sum == (p - 1) / 2);

        out.primes.push_back(std::move(pr));
    }
    return out;
}

std::string report_to_json(const CohomologyReport& r) {
    ordered_json v;
    v["schema_version"] = r.schema_version;
    v["config"] = ordered_json::parse(config_to_json(r.config));
    ordered_json primes = ordered_json::array();
    for (const PrimeReport& pr : r.primes) {
        ordered_json pv;
        pv["p"] = pr.p;
        ordered_json conv;
        conv["u"] = pr.u.get_str();
        conv["delta_generator"] = pr.delta_generator;
        conv["N"] = r.config.N;
        conv["M"] = r.config.M;
        ordered_json bm = ordered_json::object();
        for (const auto& [m, j] : r.config.branch_map) bm[std::to_string(m)] = j;
        conv["branch_map"] = std::move(bm);
        pv["conventions"] = std::move(conv);

        ordered_json branches = ordered_json::array();
        for (const BranchSummary& bs : pr.branches) {
            ordered_json bv;
            bv["j"] = bs.j;
            if (bs.error.empty()) {
                bv["mu"] = bs.mu;
                bv["lambda"] = bs.lambda;
                bv["mu_certified"] = bs.mu_certified;
                bv["lambda_certified"] = bs.lambda_certified;
                bv["convention"] = bs.convention_id;
                bv["level"] = bs.level_used;
            } else {
                bv["error"] = bs.error;
            }
            branches.push_back(std::move(bv));
        }
        pv["branches"] = std::move(branches);

        ordered_json entries = ordered_json::array();
        for (const ReportEntry& e : pr.entries) {
            ordered_json ev;
            ev["m"] = e.m;
            if (e.outside_hypotheses) {
                ev["outside_hypotheses"] = true;
                entries.push_back(std::move(ev));
                continue;
            }
            if (!e.error.empty()) {
                ev["error"] = e.error;
                entries.push_back(std::move(ev));
                continue;
            }
            ev["r_m"] = e.r_m;
            ev["t_m"] = e.t_m;
            ev["t_certified"] = e.t_certified;
            ev["t_certificate"] = e.t_certificate;
            if (e.branch_j >= 0) ev["branch_j"] = e.branch_j;
            ev["corank_h1"] = e.corank_h1;
            ev["corank_h2"] = e.corank_h2;
            entries.push_back(std::move(ev));
        }
        pv["entries"] = std::move(entries);
        pv["rank_period_sum"] = pr.rank_period_sum;
        pv["rank_period_ok"] = pr.rank_period_ok;
        primes.push_back(std::move(pv));
    }
    v["primes"] = std::move(primes);
    return v.dump(2) + "\n";
}

std::string report_to_text(const CohomologyReport& r) {
    std::ostringstream out;
    for (const PrimeReport& pr : r.primes) {
        out << "p=" << pr.p << "  u=" << pr.u.get_str()
            << "  delta0=" << pr.delta_generator << "  N=" << r.config.N
            << "  M=" << r.config.M << "\n";
        for (const BranchSummary& bs : pr.branches) {
            out << "  branch j=" << bs.j << ": ";
            if (bs.error.empty()) {
                out << "mu=" << bs.mu << " lambda=" << bs.lambda << " ("
                    << (bs.mu_certified ? "mu ok" : "mu open") << ", "
                    << (bs.lambda_certified ? "lambda ok" : "lambda open")
                    << ") convention=" << bs.convention_id
                    << " level=" << bs.level_used;
            } else {
                out << "error: " << bs.error;
            }
            out << "\n";
        }
        out << "  m     r_m  t_m  corank_h1  corank_h2  note\n";
        for (const ReportEntry& e : pr.entries) {
            out << "  " << e.m;
            for (size_t k = std::to_string(e.m).size(); k < 6; ++k) out << ' ';
            if (e.outside_hypotheses) {
                out << "-    -    -          -          m = 0 mod p-1, outside hypotheses\n";
                continue;
            }
            if (!e.error.empty()) {
                out << "-    -    -          -          error: " << e.error << "\n";
                continue;
            }
            out << e.r_m << "    " << e.t_m << "    " << e.corank_h1
                << "          " << e.corank_h2 << "          "
                << (e.t_certified ? "certified" : "uncertified");
            if (!e.t_certificate.empty()) out << " (" << e.t_certificate << ")";
            if (e.branch_j >= 0) out << " j=" << e.branch_j;
            out << "\n";
        }
        out << "  rank period sum = " << pr.rank_period_sum << " (expected "
            << (pr.p - 1) / 2 << (pr.rank_period_ok ? ", ok" : ", MISMATCH")
            << ")\n\n";
    }
    return out.str();
}

} // namespace tatecoh
