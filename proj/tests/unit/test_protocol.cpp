#include "tfqkd/protocol.hpp"

#include "tfqkd/key_length.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace tfqkd;

namespace {

ProtocolParams table_params() {
    ProtocolParams p;
    p.n_rounds = 10000000000ull;
    p.p_x = 0.7;
    p.alpha = std::sqrt(0.02);
    p.intensities.mu = {0.5, 0.1, 1e-4};
    p.intensities.p = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    p.s_cut = 4;
    return p;
}

} // namespace

TEST_CASE("validate: table-style configuration passes") {
    const SecurityParams sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    CHECK(validate(table_params(), sec).empty());
}

TEST_CASE("validate: boundary alpha^2 = mu0 is a distinguished tail error") {
    ProtocolParams p = table_params();
    p.alpha = std::sqrt(p.intensities.mu[0]);
    const SecurityParams sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    const auto errors = validate(p, sec);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0] == kTailDivergenceError);
}

TEST_CASE("validate: aggregates every violation") {
    ProtocolParams p = table_params();
    p.intensities.p = {0.3, 0.3, 0.3}; // sums to 0.9
    p.p_x = 1.5;
    p.s_cut = 3;
    SecurityParams sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    sec.eps_pa = 0.0;
    const auto errors = validate(p, sec);
    CHECK(errors.size() >= 4);
    auto contains = [&](const char* text) {
        return std::any_of(errors.begin(), errors.end(), [&](const std::string& e) {
            return e.find(text) != std::string::npos;
        });
    };
    CHECK(contains("sum to 1"));
    CHECK(contains("p_x"));
    CHECK(contains("s_cut"));
    CHECK(contains("eps_pa"));
}

TEST_CASE("observed counts derive m_z and m_s") {
    ObservedCounts c;
    c.m_x = 100;
    c.m_matrix = {{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}};
    CHECK(c.m_z() == 45);
    CHECK(c.m_s() == 145);
    CHECK(c.row_sum(1) == 15);
    CHECK(c.col_sum(2) == 18);
}

TEST_CASE("decoy pair set: the nine even pairs below the cutoff") {
    const auto& pairs = decoy_pair_set();
    CHECK(pairs.size() == 9);
    for (const auto& t : pairs) {
        CHECK((t.n + t.m) % 2 == 0);
        CHECK(t.n + t.m <= 4);
    }
}
