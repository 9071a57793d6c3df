#pragma once

// JSON forms of the finite-module and elementary-module inputs, and the
// JSONL descent fixture records.  Parsing is strict: unknown keys and shape
// mismatches raise ValidationError with the offending field path.

#include <optional>
#include <string>
#include <vector>

#include "tatecoh/descent.hpp"
#include "tatecoh/elementary.hpp"
#include "tatecoh/finite_module.hpp"

namespace tatecoh {

FinitePModule module_from_json(const std::string& text);
std::string module_to_json(const FinitePModule& M);

ElementaryModule elementary_from_json(const std::string& text);
std::string elementary_to_json(const ElementaryModule& E);

struct DescentFixture {
    FinitePModule module;
    long m = 0;
    int q = 1;
    mpz_class u;  // generator used for the twist
    std::optional<std::vector<int>> expected_coker;
    std::optional<std::vector<int>> expected_ker;
};

// one JSONL record per line; blank lines skipped
std::vector<DescentFixture> descent_fixtures_from_jsonl(const std::string& text);
std::string descent_fixture_to_json(const DescentFixture& f);

} // namespace tatecoh
