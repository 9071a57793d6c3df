#pragma once

// Directory-backed store for computed branch series.  One JSON file per
// (p, j, N, M, u) key, checksummed, written atomically via a temp file so a
// crashed run never leaves a truncated entry behind.

#include <optional>
#include <string>

#include "tatecoh/lseries.hpp"

namespace tatecoh {

class SeriesCache {
public:
    explicit SeriesCache(std::string directory);

    const std::string& directory() const { return dir_; }
    std::string path_for(long p, long j, int N, int M, const mpz_class& u) const;

    // nullopt on miss; CorruptCache / VersionMismatch on a bad file
    std::optional<BranchSeries> load(long p, long j, int N, int M,
                                     const mpz_class& u) const;
    void store(const BranchSeries& g);

    BranchSeries get_or_compute(long p, long j, int N, int M, const mpz_class& u);

    // provider suitable for t_invariant, fixed (N, M, u)
    SeriesProvider provider(int N, int M, const mpz_class& u);

private:
    std::string dir_;
};

} // namespace tatecoh
