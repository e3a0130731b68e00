#include <doctest.h>

#include "generators.hpp"
#include "ocmdp/oracle.hpp"

using namespace ocmdp;
using testsupport::parse;

TEST_CASE("decrement chain") {
    auto a = testsupport::decrement_chain();
    auto b = bracket_values(a, 8, 10, AffineSeed{std::make_pair(Rational(1), Rational(0))});
    for (long j = 0; j < 8; ++j) {
        CHECK(b.lower[j][0] == j);
        CHECK(b.upper[j][0] == ExtRational(Rational(j)));
    }
    auto ex = exact_small_solve(a, 8);
    for (long j = 0; j < 8; ++j) CHECK(ex[j][0] == ExtRational(Rational(j)));
    CHECK(ex[8][0].is_inf());
}

TEST_CASE("symmetric walk with a zero boundary") {
    auto a = testsupport::twin_walk(Rational(1, 2));
    const long K = 10;
    auto ex = exact_small_solve(a, K, std::vector<ExtRational>(2, ExtRational(0)));
    for (long i = 0; i <= K; ++i) CHECK(ex[i][1] == ExtRational(Rational(i * (K - i))));
    CHECK(lower_fixpoint(a, K) == ex);
}

TEST_CASE("brackets around a walk with drift -1/2") {
    // Skip-free downward walk with mean step -1/2: Val(q(i)) = 2i.
    auto a = testsupport::twin_walk(Rational(3, 4));
    const long K = 12;
    AffineSeed seed(2, std::make_pair(Rational(2), Rational(0)));
    auto b = bracket_values(a, K, 60, seed);
    auto lf = lower_fixpoint(a, K);
    for (long j = 0; j < K; ++j)
        for (int q = 0; q < 2; ++q) {
            CHECK(b.lower[j][q] <= Rational(2 * j));
            CHECK(b.upper[j][q] == ExtRational(Rational(2 * j)));
            CHECK(ExtRational(b.lower[j][q]) <= lf[j][q]);
        }
    auto ex = exact_small_solve(a, K, std::vector<ExtRational>(2, ExtRational(Rational(2 * K))));
    for (long j = 0; j <= K; ++j) CHECK(ex[j][0] == ExtRational(Rational(2 * j)));
}

TEST_CASE("lower iteration is monotone and converges to the fixpoint") {
    testsupport::Rng rng(51);
    for (int it = 0; it < 25; ++it) {
        auto a = testsupport::random_general(rng, 4);
        const long K = 5;
        AffineSeed none(a.num_states());
        auto b1 = bracket_values(a, K, 5, none);
        auto b2 = bracket_values(a, K, 10, none);
        auto lf = lower_fixpoint(a, K);
        for (long j = 0; j <= K; ++j)
            for (int q = 0; q < a.num_states(); ++q) {
                CHECK(b1.lower[j][q] <= b2.lower[j][q]);
                CHECK(ExtRational(b2.lower[j][q]) <= lf[j][q]);
                CHECK(b2.upper[j][q] >= lf[j][q]);
            }
    }
}

TEST_CASE("divergence certificates") {
    auto up = testsupport::twin_walk(Rational(1, 4));
    auto d = divergence_certificate(up, Config{0, 1}, 50, 1024);
    CHECK(d.reached);
    CHECK(d.lower >= ExtRational(Rational(50)));

    auto stuck = parse("state q choice\nrule q 0 q\n");
    auto s = divergence_certificate(stuck, Config{0, 1}, 1000000, 8);
    CHECK(s.reached);
    CHECK(s.lower.is_inf());

    auto down = testsupport::twin_walk(Rational(3, 4));
    CHECK_FALSE(divergence_certificate(down, Config{0, 3}, 100, 256).reached);
}
