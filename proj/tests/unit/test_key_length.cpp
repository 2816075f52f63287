#include "tfqkd/key_length.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace tfqkd;

TEST_CASE("epsilon budget: published accounting and the strict variant") {
    SecurityParams sec;
    sec.eps_cor = 1e-10;
    sec.eps_pa = 1e-11;
    sec.eps_chernoff = 2e-12;
    sec.eps_kato = 3e-12;

    const auto paper = epsilon_budget(sec, 4, BudgetMode::Paper);
    CHECK(paper.n_chernoff_uses == 9);
    CHECK(paper.n_kato_uses == 10);
    CHECK(paper.eps_param == doctest::Approx(9 * 2e-12 + 10 * 3e-12).epsilon(1e-14));
    CHECK(paper.eps_secret == doctest::Approx(2 * paper.eps_param + 1e-11).epsilon(1e-14));
    CHECK(paper.eps_sec == doctest::Approx(1e-10 + paper.eps_secret).epsilon(1e-14));

    const auto low = epsilon_budget(sec, 2, BudgetMode::Paper);
    CHECK(low.n_kato_uses == 5); // (1+1)^2 + 1

    const auto strict = epsilon_budget(sec, 4, BudgetMode::Strict);
    CHECK(strict.n_chernoff_uses == 13);
    CHECK(strict.n_kato_uses == 10);
}

TEST_CASE("derive_security: default split reproduces the simulation convention") {
    const auto sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    CHECK(sec.eps_pa == doctest::Approx(1e-10 / 3.0).epsilon(1e-14));
    CHECK(sec.eps_chernoff == sec.eps_kato);
    CHECK(sec.eps_kato == doctest::Approx(1e-10 / 3.0 / 19.0).epsilon(1e-12));
    // the budget reconstructs the target
    const auto b = epsilon_budget(sec, 4, BudgetMode::Paper);
    CHECK(b.eps_secret == doctest::Approx(1e-10).epsilon(1e-12));

    const auto strict = derive_security(1e-10, 1e-10, 4, BudgetMode::Strict);
    CHECK(strict.eps_kato == doctest::Approx(1e-10 / 3.0 / 23.0).epsilon(1e-12));
    CHECK(strict.eps_kato < sec.eps_kato);
}

TEST_CASE("lambda_ec: zero error, h(1/2) saturation, frozen value") {
    CHECK(lambda_ec(1000000, 0.0, 1.16) == 0.0);
    CHECK(lambda_ec(1000000, 0.5, 1.0) == doctest::Approx(1e6).epsilon(1e-12));
    CHECK(lambda_ec(1000000, 0.02, 1.16) ==
          doctest::Approx(oracles::kLambdaEc).epsilon(1e-12));
    CHECK(std::abs(lambda_ec(1000000, 0.02, 1.16) - 164071.0) <= 1.0);
    CHECK_THROWS_AS(lambda_ec(10, 0.02, 0.9), std::domain_error);
}

TEST_CASE("key_length: entropy cap, direct arithmetic, monotonicity") {
    SecurityParams sec;
    sec.eps_cor = 0.5;
    sec.eps_pa = 0.5;
    sec.eps_chernoff = sec.eps_kato = 1e-10;

    // e_ph >= 1/2 kills the key
    CHECK(key_length(1000000, 0.5, 0.0, sec) == 0);
    CHECK(key_length(1000000, 0.9, 0.0, sec) == 0);

    // log2(2/0.5) = 2, log2(1/(4*0.25)) = 0
    CHECK(key_length(1000000, 0.0, 0.0, sec) == 1000000 - 2);

    SecurityParams table;
    table.eps_cor = 1e-10;
    table.eps_pa = 1e-10 / 3.0;
    table.eps_chernoff = table.eps_kato = 1e-12;
    std::uint64_t prev = key_length(1000000, 0.01, 1000.0, table);
    for (double eph : {0.05, 0.1, 0.2, 0.3}) {
        const std::uint64_t l = key_length(1000000, eph, 1000.0, table);
        CHECK(l <= prev);
        prev = l;
    }
    CHECK(key_length(1000000, 0.05, 1000.0, table) >=
          key_length(1000000, 0.05, 50000.0, table));
    CHECK(key_length(2000000, 0.05, 1000.0, table) >=
          key_length(1000000, 0.05, 1000.0, table));
}
