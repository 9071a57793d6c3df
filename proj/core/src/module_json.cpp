#include "tatecoh/module_json.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

#include "tatecoh/errors.hpp"

namespace tatecoh {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw ValidationError(path + "." + it.key(), "unknown key");
    }
}

const json& need(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(path + "." + key, "missing");
    return *it;
}

long to_long(const json& v, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ValidationError(path, "expected an integer");
    return v.get<long>();
}

mpz_class to_mpz(const json& v, const std::string& path) {
    if (v.is_number_integer() || v.is_number_unsigned())
        return mpz_class(v.get<long>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        mpz_class z;
        if (s.empty() || mpz_set_str(z.get_mpz_t(), s.c_str(), 10) != 0)
            throw ValidationError(path, "not a base-10 integer: '" + s + "'");
        return z;
    }
    throw ValidationError(path, "expected an integer or a decimal string");
}

std::vector<int> int_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw ValidationError(path, "expected an array");
    std::vector<int> out;
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(static_cast<int>(to_long(v[i], path + "[" + std::to_string(i) + "]")));
    return out;
}

IntMat matrix_from(const json& v, size_t n, const std::string& path) {
    if (!v.is_array() || v.size() != n)
        throw ValidationError(path, "expected " + std::to_string(n) + " rows");
    IntMat A(n, n);
    for (size_t i = 0; i < n; ++i) {
        const json& row = v[i];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != n)
            throw ValidationError(rp, "expected " + std::to_string(n) + " entries");
        for (size_t j = 0; j < n; ++j)
            A.at(i, j) = to_mpz(row[j], rp + "[" + std::to_string(j) + "]");
    }
    return A;
}

ordered_json matrix_to(const IntMat& A) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < A.rows; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < A.cols; ++j) row.push_back(A.at(i, j).get_str());
        rows.push_back(std::move(row));
    }
    return rows;
}

json parse_text(const std::string& text, const std::string& what) {
    json v = json::parse(text, nullptr, false);
    if (v.is_discarded()) throw ValidationError(what, "malformed JSON");
    if (!v.is_object()) throw ValidationError(what, "expected a JSON object");
    return v;
}

FinitePModule module_from(const json& v, const std::string& path) {
    check_keys(v, {"p", "orders", "delta", "gamma"}, path);
    FinitePModule M;
    M.p = to_long(need(v, "p", path), path + ".p");
    M.orders = int_list(need(v, "orders", path), path + ".orders");
    const size_t n = M.orders.size();
    if (auto it = v.find("delta"); it != v.end())
        M.delta_action = matrix_from(*it, n, path + ".delta");
    if (auto it = v.find("gamma"); it != v.end())
        M.gamma_action = matrix_from(*it, n, path + ".gamma");
    validate_module(M);
    return M;
}

} // namespace

FinitePModule module_from_json(const std::string& text) {
    return module_from(parse_text(text, "module"), "module");
}

std::string module_to_json(const FinitePModule& M) {
    ordered_json v;
    v["p"] = M.p;
    v["orders"] = M.orders;
    if (M.delta_action) v["delta"] = matrix_to(*M.delta_action);
    if (M.gamma_action) v["gamma"] = matrix_to(*M.gamma_action);
    return v.dump();
}

ElementaryModule elementary_from_json(const std::string& text) {
    const json v = parse_text(text, "elementary");
    const std::string path = "elementary";
    check_keys(v, {"p", "N", "M", "rank", "p_powers", "polys"}, path);
    ElementaryModule E;
    E.p = to_long(need(v, "p", path), path + ".p");
    const int N = static_cast<int>(to_long(need(v, "N", path), path + ".N"));
    const int M = static_cast<int>(to_long(need(v, "M", path), path + ".M"));
    E.rank = static_cast<int>(to_long(need(v, "rank", path), path + ".rank"));
    E.p_power_parts = int_list(need(v, "p_powers", path), path + ".p_powers");
    const json& polys = need(v, "polys", path);
    if (!polys.is_array()) throw ValidationError(path + ".polys", "expected an array");
    for (size_t i = 0; i < polys.size(); ++i) {
        const std::string pp = path + ".polys[" + std::to_string(i) + "]";
        const json& pv = polys[i];
        if (!pv.is_object()) throw ValidationError(pp, "expected an object");
        check_keys(pv, {"coeffs", "mult"}, pp);
        const json& cv = need(pv, "coeffs", pp);
        if (!cv.is_array() || cv.empty())
            throw ValidationError(pp + ".coeffs", "expected a nonempty array");
        if (cv.size() > static_cast<size_t>(M))
            throw ValidationError(pp + ".coeffs", "degree exceeds series truncation");
        PolyFactor f;
        f.degree = static_cast<int>(cv.size()) - 1;
        f.multiplicity = static_cast<int>(to_long(need(pv, "mult", pp), pp + ".mult"));
        f.poly = PowerSeries(E.p, N, M);
        for (size_t k = 0; k < cv.size(); ++k)
            f.poly.set(static_cast<int>(k),
                       to_mpz(cv[k], pp + ".coeffs[" + std::to_string(k) + "]"));
        E.poly_parts.push_back(std::move(f));
    }
    validate_elementary(E);
    return E;
}

std::string elementary_to_json(const ElementaryModule& E) {
    ordered_json v;
    v["p"] = E.p;
    int N = 1, M = 1;
    if (!E.poly_parts.empty()) {
        N = E.poly_parts.front().poly.precision();
        M = E.poly_parts.front().poly.truncation();
    }
    v["N"] = N;
    v["M"] = M;
    v["rank"] = E.rank;
    v["p_powers"] = E.p_power_parts;
    ordered_json polys = ordered_json::array();
    for (const PolyFactor& f : E.poly_parts) {
        ordered_json pv;
        ordered_json coeffs = ordered_json::array();
        for (int k = 0; k <= f.degree; ++k) coeffs.push_back(f.poly[k].get_str());
        pv["coeffs"] = std::move(coeffs);
        pv["mult"] = f.multiplicity;
        polys.push_back(std::move(pv));
    }
    v["polys"] = std::move(polys);
    return v.dump();
}

std::vector<DescentFixture> descent_fixtures_from_jsonl(const std::string& text) {
    std::vector<DescentFixture> out;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string path = "fixture[" + std::to_string(lineno) + "]";
        json v = json::parse(line, nullptr, false);
        if (v.is_discarded()) throw ValidationError(path, "malformed JSON");
        if (!v.is_object()) throw ValidationError(path, "expected a JSON object");
        check_keys(v, {"module", "m", "q", "u", "expected"}, path);
        DescentFixture f;
        f.module = module_from(need(v, "module", path), path + ".module");
        f.m = to_long(need(v, "m", path), path + ".m");
        f.q = static_cast<int>(to_long(need(v, "q", path), path + ".q"));
        if (auto it = v.find("u"); it != v.end())
            f.u = to_mpz(*it, path + ".u");
        else
            f.u = mpz_class(1 + f.module.p);
        if (auto it = v.find("expected"); it != v.end()) {
            const json& ev = *it;
            const std::string ep = path + ".expected";
            if (!ev.is_object()) throw ValidationError(ep, "expected an object");
            check_keys(ev, {"coker", "ker"}, ep);
            if (auto e2 = ev.find("coker"); e2 != ev.end())
                f.expected_coker = int_list(*e2, ep + ".coker");
            if (auto e2 = ev.find("ker"); e2 != ev.end())
                f.expected_ker = int_list(*e2, ep + ".ker");
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::string descent_fixture_to_json(const DescentFixture& f) {
    ordered_json v;
    v["module"] = ordered_json::parse(module_to_json(f.module));
    v["m"] = f.m;
    v["q"] = f.q;
    v["u"] = f.u.get_str();
    if (f.expected_coker || f.expected_ker) {
        ordered_json ev;
        if (f.expected_coker) ev["coker"] = *f.expected_coker;
        if (f.expected_ker) ev["ker"] = *f.expected_ker;
        v["expected"] = std::move(ev);
    }
    return v.dump();
}

} // namespace tatecoh
