#include "tfqkd/optimizer.hpp"

#include <doctest.h>

#include <cmath>

using namespace tfqkd;

namespace {

ChannelParams table_channel(double loss_db) {
    ChannelParams ch;
    ch.loss_db = loss_db;
    ch.p_d = 1e-8;
    ch.delta_ph = 0.091;
    ch.delta_pol = 0.0;
    ch.f_ec = 1.16;
    return ch;
}

SearchSpace space_for(std::uint64_t n_rounds) {
    SearchSpace s;
    s.n_rounds = n_rounds;
    return s;
}

} // namespace

TEST_CASE("transform: decode/encode round-trips and always validates") {
    const SearchSpace space = space_for(1000000000ull);
    const SecurityParams sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    for (double v : {-4.0, -1.0, 0.0, 0.5, 3.0}) {
        const std::array<double, 6> x = {v, -v, 0.3 * v, v, -0.5 * v, v};
        const ProtocolParams p = decode_point(x, space);
        CHECK(validate(p, sec).empty());
        const auto back = decode_point(encode_point(p, space), space);
        CHECK(back.p_x == doctest::Approx(p.p_x).epsilon(1e-9));
        CHECK(back.alpha == doctest::Approx(p.alpha).epsilon(1e-9));
        CHECK(back.intensities.mu[0] == doctest::Approx(p.intensities.mu[0]).epsilon(1e-9));
        CHECK(back.intensities.p[0] == doctest::Approx(p.intensities.p[0]).epsilon(1e-9));
    }
}

TEST_CASE("optimize: budget 1 returns the first seed point's evaluation") {
    const auto ch = table_channel(50.0);
    const auto sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    const SearchSpace space = space_for(10000000000ull);
    const auto r = optimize(ch, sec, space, 1, 42);
    CHECK(r.evaluations == 1);
    const auto direct = evaluate(r.params, sec, ch);
    CHECK(r.result.rate == direct.rate);
}

TEST_CASE("optimize: best rate is nondecreasing in the budget") {
    const auto ch = table_channel(50.0);
    const auto sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    const SearchSpace space = space_for(10000000000ull);
    double prev = -1.0;
    for (std::uint64_t budget : {1ull, 16ull, 64ull, 160ull}) {
        const auto r = optimize(ch, sec, space, budget, 7);
        CHECK(r.result.rate >= prev);
        prev = r.result.rate;
    }
}

TEST_CASE("optimize: deterministic and thread-count independent") {
    const auto ch = table_channel(50.0);
    const auto sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    const SearchSpace space = space_for(10000000000ull);
    const auto a = optimize(ch, sec, space, 120, 99, {}, 1);
    const auto b = optimize(ch, sec, space, 120, 99, {}, 1);
    const auto c = optimize(ch, sec, space, 120, 99, {}, 4);
    CHECK(a.result.rate == b.result.rate);
    CHECK(a.params.alpha == b.params.alpha);
    CHECK(a.result.rate == c.result.rate);
    CHECK(a.params.alpha == c.params.alpha);
    CHECK(a.params.p_x == c.params.p_x);
}

TEST_CASE("optimize: beats the hand-tuned reference point at 50 dB") {
    const auto ch = table_channel(50.0);
    const auto sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    const SearchSpace space = space_for(10000000000ull);

    ProtocolParams ref;
    ref.n_rounds = 10000000000ull;
    ref.p_x = 0.7;
    ref.alpha = std::sqrt(0.02);
    ref.intensities.mu = {0.5, 0.1, 1e-4};
    ref.intensities.p = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    const double ref_rate = evaluate(ref, sec, ch).rate;
    REQUIRE(ref_rate > 0.0);

    const auto best = optimize(ch, sec, space, 400, 3);
    CHECK(best.result.rate >= ref_rate);
    CHECK(validate(best.params, sec).empty());
}

TEST_CASE("optimize: all-infeasible landscape reports a zero-rate result") {
    // at enormous loss with a tiny block there is no key anywhere
    const auto ch = table_channel(120.0);
    const auto sec = derive_security(1e-10, 1e-10, 4, BudgetMode::Paper);
    const SearchSpace space = space_for(1000ull);
    const auto r = optimize(ch, sec, space, 40, 5);
    CHECK(r.result.rate == 0.0);
    CHECK(r.result.key_length == 0);
}
