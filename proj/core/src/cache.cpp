#include "tatecoh/cache.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tatecoh/errors.hpp"

namespace tatecoh {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

ordered_json payload_of(const BranchSeries& g) {
    ordered_json v;
    v["format_version"] = kFormatVersion;
    v["kind"] = "tatecoh-branch-series";
    v["p"] = g.p;
    v["j"] = g.j;
    v["N"] = g.series.precision();
    v["M"] = g.series.truncation();
    v["u"] = g.u.get_str();
    v["convention"] = g.convention_id;
    v["level"] = g.level_used;
    ordered_json coeffs = ordered_json::array();
    for (int k = 0; k < g.series.truncation(); ++k)
        coeffs.push_back(g.series[k].get_str());
    v["coeffs"] = std::move(coeffs);
    return v;
}

[[noreturn]] void corrupt(const std::string& path, const std::string& why) {
    throw CorruptCache("cache file " + path + ": " + why);
}

mpz_class parse_mpz(const json& v, const std::string& path, const char* field) {
    if (!v.is_string()) corrupt(path, std::string(field) + " is not a string");
    mpz_class z;
    const std::string s = v.get<std::string>();
    if (s.empty() || mpz_set_str(z.get_mpz_t(), s.c_str(), 10) != 0)
        corrupt(path, std::string(field) + " is not a decimal integer");
    return z;
}

} // namespace

SeriesCache::SeriesCache(std::string directory) : dir_(std::move(directory)) {
    if (dir_.empty()) throw ValidationError("cache_dir", "empty path");
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec && !fs::is_directory(dir_))
        throw ValidationError("cache_dir", "cannot create '" + dir_ + "': " + ec.message());
}

std::string SeriesCache::path_for(long p, long j, int N, int M,
                                  const mpz_class& u) const {
    std::ostringstream name;
    name << "series-p" << p << "-j" << j << "-N" << N << "-M" << M
         << "-u" << u.get_str() << ".json";
    return (fs::path(dir_) / name.str()).string();
}

std::optional<BranchSeries> SeriesCache::load(long p, long j, int N, int M,
                                              const mpz_class& u) const {
    const std::string path = path_for(p, j, N, M, u);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();

    json v = json::parse(buf.str(), nullptr, false);
    if (v.is_discarded() || !v.is_object()) corrupt(path, "malformed JSON");

    if (!v.contains("format_version") || !v["format_version"].is_number_integer())
        corrupt(path, "missing format_version");
    const int ver = v["format_version"].get<int>();
    if (ver != kFormatVersion)
        throw VersionMismatch("cache file " + path + ": format_version " +
                              std::to_string(ver) + ", this build reads " +
                              std::to_string(kFormatVersion) +
                              "; delete the entry or regenerate the cache");

    for (const char* field : {"kind", "p", "j", "N", "M", "u", "convention",
                              "level", "coeffs", "checksum"})
        if (!v.contains(field)) corrupt(path, std::string("missing ") + field);

    // checksum covers the canonical payload with the checksum field removed
    json body = v;
    body.erase("checksum");
    ordered_json canon;
    for (const char* field : {"format_version", "kind", "p", "j", "N", "M", "u",
                              "convention", "level", "coeffs"})
        canon[field] = body[field];
    if (!v["checksum"].is_string() ||
        v["checksum"].get<std::string>() != fnv1a_hex(canon.dump()))
        corrupt(path, "checksum mismatch");

    if (v["kind"] != "tatecoh-branch-series") corrupt(path, "wrong kind");
    if (v["p"] != p || v["j"] != j || v["N"] != N || v["M"] != M ||
        parse_mpz(v["u"], path, "u") != u)
        corrupt(path, "key fields disagree with file name");

    const json& coeffs = v["coeffs"];
    if (!coeffs.is_array() || coeffs.size() != static_cast<size_t>(M))
        corrupt(path, "coefficient count");

    BranchSeries g;
    g.p = p;
    g.j = j;
    g.u = u;
    g.convention_id = v["convention"].get<std::string>();
    g.level_used = v["level"].get<int>();
    g.series = PowerSeries(p, N, M);
    for (int k = 0; k < M; ++k)
        g.series.set(k, parse_mpz(coeffs[k], path, "coeffs"));
    return g;
}

void SeriesCache::store(const BranchSeries& g) {
    ordered_json v = payload_of(g);
    v["checksum"] = fnv1a_hex(v.dump());
    const std::string path =
        path_for(g.p, g.j, g.series.precision(), g.series.truncation(), g.u);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CorruptCache("cache file " + tmp + ": cannot open for write");
        out << v.dump(2) << "\n";
        if (!out.good()) throw CorruptCache("cache file " + tmp + ": short write");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw CorruptCache("cache file " + path + ": rename failed: " + ec.message());
}

BranchSeries SeriesCache::get_or_compute(long p, long j, int N, int M,
                                         const mpz_class& u) {
    if (auto hit = load(p, j, N, M, u)) return *hit;
    BranchSeries g = iwasawa_series(p, j, N, M, u);
    store(g);
    return g;
}

SeriesProvider SeriesCache::provider(int N, int M, const mpz_class& u) {
    return [this, N, M, u](long p, long j) { return get_or_compute(p, j, N, M, u); };
}

} // namespace tatecoh
