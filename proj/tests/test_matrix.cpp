#include <catch2/catch_amalgamated.hpp>

#include "totpos/matrix.hpp"
#include "totpos/rational.hpp"

#include <random>

using namespace totpos;

namespace {

const PrecisionContext ctx(120);

Grid grid_from(const std::vector<std::vector<double>>& rows) {
    Grid g;
    for (const auto& row : rows) {
        std::vector<BigScalar> r;
        for (double v : row) r.push_back(make_scalar(v, ctx));
        g.push_back(std::move(r));
    }
    return g;
}

}  // namespace

TEST_CASE("DescendingTuple enforces strict order") {
    CHECK_THROWS_AS(DescendingTuple({make_scalar(1L, ctx), make_scalar(2L, ctx)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DescendingTuple({make_scalar(1L, ctx), make_scalar(1L, ctx)}),
                    std::invalid_argument);
    DescendingTuple t({make_scalar(3L, ctx), make_scalar(2L, ctx), make_scalar(1L, ctx)});
    CHECK(t.size() == 3);
    CHECK(t[1].to_double() == 2.0);
}

TEST_CASE("det basics") {
    CHECK(det(grid_from({{1}})).to_double() == 1.0);
    CHECK(det(grid_from({{2, 1}, {1, 1}})).to_double() == 1.0);
    CHECK_THROWS_AS(det(grid_from({{1, 2}})), std::invalid_argument);
}

TEST_CASE("Hilbert 3x3 segment matches the exact rational oracle") {
    RationalGrid hq(3, std::vector<Rational>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) hq[i][j] = Rational(1, i + j + 1);
    Rational exact = rational_det(hq);
    CHECK(exact == Rational(1, 2160));

    Grid h(3, std::vector<BigScalar>());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            h[i].push_back(make_scalar(1L, ctx) / make_scalar(i + j + 1, ctx));
    BigScalar d = det(h);
    BigScalar rel_err = abs(d - to_scalar(exact, ctx)) / to_scalar(exact, ctx);
    CHECK(rel_err < pow10(-115, ctx));
}

TEST_CASE("minor selection") {
    Grid id3 = grid_from({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(minor_det(id3, {0, 1}, {0, 1}).to_double() == 1.0);
    CHECK(minor_det(id3, {0, 1, 2}, {0, 1, 2}).to_double() == det(id3).to_double());

    Grid m = grid_from({{1, 2}, {3, 4}});
    CHECK(minor_det(m, {1}, {0}).to_double() == 3.0);

    CHECK_THROWS_AS(minor_det(m, {0, 1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(minor_det(m, {0, 2}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(minor_det(m, {1, 0}, {0, 1}), std::invalid_argument);
}

TEST_CASE("sign_classify thresholds") {
    BigScalar one = make_scalar(1L, ctx);
    CHECK(sign_classify(make_scalar(5L, ctx), one, ctx) == Sign::Positive);
    CHECK(sign_classify(make_scalar(0L, ctx), one, ctx) == Sign::Zero);
    CHECK(sign_classify(pow10(-120, ctx), one, ctx) == Sign::Zero);
    CHECK(sign_classify(make_scalar(-2L, ctx), one, ctx) == Sign::Negative);
    CHECK_THROWS_AS(sign_classify(one, make_scalar(0L, ctx), ctx), std::invalid_argument);
}

TEST_CASE("det is multilinear in rows") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.5, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        Grid m(3, std::vector<BigScalar>());
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i].push_back(make_scalar(dist(rng), ctx));
        double c = dist(rng);
        BigScalar c_s = make_scalar(c, ctx);
        Grid scaled = m;
        for (int j = 0; j < 3; ++j) scaled[1][j] *= c_s;
        BigScalar lhs = det(scaled);
        BigScalar rhs = c_s * det(m);
        BigScalar denom = max(abs(rhs), pow10(-60, ctx));
        CHECK(abs(lhs - rhs) / denom < pow10(-110, ctx));
    }
}

TEST_CASE("equal rows classify as Zero; row swap negates exactly") {
    Grid m = grid_from({{1.5, 2.5, 3.5}, {0.25, 4.0, 1.0}, {1.5, 2.5, 3.5}});
    BigScalar scale = minor_scale(m, {0, 1, 2}, {0, 1, 2}, ctx);
    CHECK(sign_classify(det(m), scale, ctx) == Sign::Zero);

    Grid a = grid_from({{1.5, 2.5}, {0.25, 4.0}});
    Grid b = grid_from({{0.25, 4.0}, {1.5, 2.5}});
    CHECK(det(a) == -det(b));
}

TEST_CASE("big-float det agrees with the exact rational oracle on random rationals") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-20, 20);
    std::uniform_int_distribution<int> den(1, 9);
    for (int trial = 0; trial < 10; ++trial) {
        RationalGrid rq(4, std::vector<Rational>(4));
        Grid rf(4, std::vector<BigScalar>());
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                rq[i][j] = Rational(num(rng), den(rng));
                rf[i].push_back(to_scalar(rq[i][j], ctx));
            }
        Rational exact = rational_det(rq);
        BigScalar approx = det(rf);
        if (exact == 0) {
            CHECK(abs(approx) < pow10(-100, ctx));
        } else {
            BigScalar rel = abs(approx - to_scalar(exact, ctx)) / abs(to_scalar(exact, ctx));
            CHECK(rel < pow10(-110, ctx));
        }
    }
}

TEST_CASE("index subsets and RR sign flips") {
    auto subs = index_subsets(4, 2);
    CHECK(subs.size() == 6);
    CHECK(subs.front() == std::vector<std::size_t>{0, 1});
    CHECK(subs.back() == std::vector<std::size_t>{2, 3});

    CHECK_FALSE(rr_sign_flips(1));  // (-1)^0
    CHECK(rr_sign_flips(2));        // (-1)^1
    CHECK(rr_sign_flips(3));        // (-1)^3
    CHECK_FALSE(rr_sign_flips(4));  // (-1)^6
}

TEST_CASE("classify_all_minors covers every size and flips RR signs") {
    Grid m = grid_from({{2, 1}, {1, 1}});
    SignReport plain = classify_all_minors(m, ctx, false);
    CHECK(plain.minors.size() == 5);  // four 1x1 + one 2x2
    for (const auto& rec : plain.minors) CHECK(rec.sign == Sign::Positive);

    SignReport rr = classify_all_minors(m, ctx, true);
    // 2x2 minor is positive raw, so it violates the RR convention
    CHECK(rr.minors.back().raw_sign == Sign::Positive);
    CHECK(rr.minors.back().sign == Sign::Negative);
}
