#include <catch2/catch_amalgamated.hpp>

#include "totpos/gamma.hpp"

#include <random>

using namespace totpos;

namespace {

const PrecisionContext ctx(120);

BigScalar s(double v) { return make_scalar(v, ctx); }
BigScalar s(long v) { return make_scalar(v, ctx); }

}  // namespace

TEST_CASE("upper_gamma closed forms") {
    BigScalar tol = pow10(-110, ctx);

    // Gamma(1, v) = e^{-v}
    for (double v : {0.3, 1.0, 5.0, 12.0}) {
        BigScalar lhs = upper_gamma(s(1L), s(v));
        CHECK(abs(lhs - exp(-s(v))) / exp(-s(v)) < tol);
    }

    // Gamma(u, 0) = Gamma(u); Gamma(3, 0) = 2
    CHECK(abs(upper_gamma(s(3L), s(0L)) - s(2L)) < tol);

    // integration-by-parts oracle: Gamma(2, 1) = 2 e^{-1}
    BigScalar e_inv = exp(s(-1L));
    CHECK(abs(upper_gamma(s(2L), s(1L)) - s(2L) * e_inv) / e_inv < tol);
    // Gamma(3, 1) = 5 e^{-1}
    CHECK(abs(upper_gamma(s(3L), s(1L)) - s(5L) * e_inv) / e_inv < tol);

    CHECK_THROWS_AS(upper_gamma(s(0L), s(1L)), std::domain_error);
    CHECK_THROWS_AS(upper_gamma(s(2L), s(-1.0)), std::domain_error);
}

TEST_CASE("series and continued-fraction regimes agree across the split") {
    // evaluate near v = u + 1 from both sides and compare with a tilted call
    BigScalar tol = pow10(-105, ctx);
    BigScalar u = s(2.5);
    BigScalar just_below = s(3.4999);
    BigScalar just_above = s(3.5001);
    // consistency through the additive recurrence
    // Gamma(u+1, v) = u Gamma(u, v) + v^u e^{-v}
    for (const BigScalar& v : {just_below, just_above, s(0.01), s(40.0)}) {
        BigScalar lhs = upper_gamma(u + s(1L), v);
        BigScalar rhs = u * upper_gamma(u, v) + exp(u * log(v) - v);
        CHECK(abs(lhs - rhs) / abs(lhs) < tol);
    }
}

TEST_CASE("lower_gamma complements upper_gamma") {
    BigScalar tol = pow10(-108, ctx);
    for (double u : {0.19, 1.3, 4.5}) {
        for (double v : {0.2, 2.0, 9.0}) {
            BigScalar total = tgamma(s(u));
            BigScalar sum = lower_gamma(s(u), s(v)) + upper_gamma(s(u), s(v));
            CHECK(abs(sum - total) / total < tol);
        }
    }
}

TEST_CASE("q basics and monotonicity") {
    BigScalar tol = pow10(-110, ctx);
    CHECK(abs(q(s(3.7), s(0L)) - s(1L)) < tol);
    CHECK(abs(q(s(1L), s(2L)) - exp(s(-2L))) < tol);
    // Q(2, 1) = 2/e
    CHECK(abs(q(s(2L), s(1L)) - s(2L) * exp(s(-1L))) < tol);

    // Q(u1, v) > Q(u2, v) whenever u1 > u2, v > 0
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> du(0.2, 8.0), dv(0.05, 10.0);
    for (int i = 0; i < 30; ++i) {
        double u2 = du(rng), gap = du(rng) * 0.3 + 0.01, v = dv(rng);
        CHECK(q(s(u2 + gap), s(v)) > q(s(u2), s(v)));
    }
}

TEST_CASE("q_inverse roundtrip and ordering") {
    BigScalar roundtrip_tol = pow10(-105, ctx);

    CHECK(q_inverse(s(2.3), s(1L)).is_zero());
    // Q^{-1}(1, p) = -ln p
    for (double p : {0.8, 0.3, 0.05}) {
        CHECK(abs(q_inverse(s(1L), s(p)) + log(s(p))) < pow10(-100, ctx));
    }
    // Q^{-1}(2, 2/e) = 1
    BigScalar v = q_inverse(s(2L), s(2L) * exp(s(-1L)));
    CHECK(abs(v - s(1L)) < pow10(-100, ctx));

    CHECK_THROWS_AS(q_inverse(s(2L), s(0L)), std::domain_error);
    CHECK_THROWS_AS(q_inverse(s(2L), s(1.5)), std::domain_error);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> du(0.2, 6.0), dp(0.01, 0.99);
    for (int i = 0; i < 100; ++i) {
        BigScalar u = s(du(rng)), p = s(dp(rng));
        CHECK(abs(q(u, q_inverse(u, p)) - p) < roundtrip_tol);
    }
    // monotone-inverse ordering
    std::uniform_real_distribution<double> dv(0.05, 0.95);
    for (int i = 0; i < 50; ++i) {
        double u2 = du(rng), gap = du(rng) * 0.3 + 0.02, p = dv(rng);
        CHECK(q_inverse(s(u2 + gap), s(p)) > q_inverse(s(u2), s(p)));
    }
}

TEST_CASE("ratio_R closed forms and monotonicity in u") {
    BigScalar tol = pow10(-105, ctx);
    // R_1(1, 0) = Gamma(2)/Gamma(1) = 1
    CHECK(abs(ratio_R(s(1L), s(1L), s(0L)) - s(1L)) < tol);
    // R_1(2, 1) = 5/2
    CHECK(abs(ratio_R(s(1L), s(2L), s(1L)) - s(2.5)) < tol);
    // strictly increasing in u at fixed (c, v)
    for (double v : {0.0, 0.5, 2.0}) {
        BigScalar prev = ratio_R(s(1.5), s(0.5), s(v));
        for (double u = 1.0; u < 4.0; u += 0.7) {
            BigScalar cur = ratio_R(s(1.5), s(u), s(v));
            CHECK(cur > prev);
            prev = cur;
        }
    }
    CHECK_THROWS_AS(ratio_R(s(0L), s(1L), s(1L)), std::domain_error);
}

TEST_CASE("ratio_C endpoints and the two independent routes") {
    BigScalar tol = pow10(-100, ctx);
    CHECK(abs(ratio_C(s(2.2), s(1.4), s(1L)) - s(1L)) < tol);
    CHECK(ratio_C(s(2.2), s(1.4), s(0L)).is_zero());
    CHECK_THROWS_AS(ratio_C(s(1L), s(1L), s(1.5)), std::domain_error);

    // the paper-quoted equivalence C_c(u,v) = 1 - F_{c+u}(F_u^{-1}(1-v))
    BigScalar a = ratio_C(s(3.5), s(4L), s(0.5));
    BigScalar b = ratio_C_cdf_route(s(3.5), s(4L), s(0.5));
    CHECK(abs(a - b) < pow10(-100, ctx));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dc(0.2, 5.0), du(0.2, 5.0), dv(0.02, 0.98);
    for (int i = 0; i < 100; ++i) {
        BigScalar c = s(dc(rng)), u = s(du(rng)), v = s(dv(rng));
        CHECK(abs(ratio_C(c, u, v) - ratio_C_cdf_route(c, u, v)) < pow10(-100, ctx));
    }
}

TEST_CASE("r_det is positive on sampled descending grids (STP in (c,u))") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(0.3, 5.0);
    for (double v : {0.0, 0.5, 2.0}) {
        for (int r : {2, 3, 4}) {
            for (int trial = 0; trial < 8; ++trial) {
                std::vector<double> cs, us;
                for (int i = 0; i < r; ++i) { cs.push_back(d(rng)); us.push_back(d(rng)); }
                std::sort(cs.begin(), cs.end(), std::greater<double>());
                std::sort(us.begin(), us.end(), std::greater<double>());
                bool distinct = true;
                for (int i = 0; i + 1 < r; ++i)
                    if (cs[i] - cs[i + 1] < 1e-3 || us[i] - us[i + 1] < 1e-3) distinct = false;
                if (!distinct) continue;
                std::vector<BigScalar> ct, ut;
                for (double c : cs) ct.push_back(s(c));
                for (double u : us) ut.push_back(s(u));
                auto [value, report] = r_det(DescendingTuple(ct), DescendingTuple(ut), s(v));
                for (const auto& rec : report.minors) CHECK(rec.raw_sign == Sign::Positive);
            }
        }
    }
}

TEST_CASE("det(R_{c_i}(u, v_j)) is positive on sampled draws (STP in (c,v))") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> d(0.3, 4.0), dv(0.1, 5.0);
    for (int r : {2, 3}) {
        for (int trial = 0; trial < 15; ++trial) {
            std::vector<double> cs, vs;
            for (int i = 0; i < r; ++i) { cs.push_back(d(rng)); vs.push_back(dv(rng)); }
            std::sort(cs.begin(), cs.end(), std::greater<double>());
            std::sort(vs.begin(), vs.end(), std::greater<double>());
            bool distinct = true;
            for (int i = 0; i + 1 < r; ++i)
                if (cs[i] - cs[i + 1] < 1e-3 || vs[i] - vs[i + 1] < 1e-3) distinct = false;
            if (!distinct) continue;
            double u = d(rng);
            Grid g;
            for (double c : cs) {
                std::vector<BigScalar> row;
                for (double v : vs) row.push_back(ratio_R(s(c), s(u), s(v)));
                g.push_back(std::move(row));
            }
            BigScalar value = det(g);
            std::vector<std::size_t> all;
            for (int i = 0; i < r; ++i) all.push_back(i);
            BigScalar scale = minor_scale(g, all, all, ctx);
            CHECK(sign_classify(value, scale, ctx) == Sign::Positive);
        }
    }
}

TEST_CASE("r_det_uv is SRR_2 (negative 2x2) and length-capped") {
    auto [value, report] = r_det_uv(
        s(1L), DescendingTuple({s(2L), s(1L)}), DescendingTuple({s(1L), s(0L)}));
    CHECK(value.is_negative());

    std::vector<BigScalar> four{s(4L), s(3L), s(2L), s(1L)};
    CHECK_THROWS_AS(r_det_uv(s(1L), DescendingTuple(four), DescendingTuple(four)),
                    std::invalid_argument);
}

TEST_CASE("c_det carries the SRR sign (-1)^{r(r-1)/2}") {
    {
        auto [value, report] = c_det(DescendingTuple({s(2L), s(1L)}), s(1L),
                                     DescendingTuple({s(0.7), s(0.3)}));
        CHECK(value.is_negative());  // r=2: sign (-1)^1
    }
    {
        auto [value, report] = c_det(DescendingTuple({s(3L), s(2L), s(1L)}), s(1L),
                                     DescendingTuple({s(0.8), s(0.5), s(0.2)}));
        CHECK(value.is_negative());  // r=3: sign (-1)^3
    }
}

TEST_CASE("c_det_cu reports a sign without asserting one") {
    auto [value, report] = c_det_cu(DescendingTuple({s(2L), s(1L)}),
                                    DescendingTuple({s(2L), s(1L)}), s(0.5));
    CHECK(!value.is_nan());
    CHECK(report.minors.size() == 5);
    std::vector<BigScalar> three{s(3L), s(2L), s(1L)};
    CHECK_THROWS_AS(c_det_cu(DescendingTuple(three), DescendingTuple(three), s(0.5)),
                    std::invalid_argument);
}

TEST_CASE("Gamma(c+u) C_c(u,v) is STP_2 on sampled draws") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> d(0.3, 4.0), dv(0.05, 0.95);
    int done = 0;
    while (done < 50) {
        double c2 = d(rng), c1 = c2 + d(rng) * 0.5 + 0.05;
        double u2 = d(rng), u1 = u2 + d(rng) * 0.5 + 0.05;
        double v = dv(rng);
        Grid g;
        for (double c : {c1, c2}) {
            std::vector<BigScalar> row;
            for (double u : {u1, u2})
                row.push_back(tgamma(s(c) + s(u)) * ratio_C(s(c), s(u), s(v)));
            g.push_back(std::move(row));
        }
        BigScalar d2 = det(g);
        BigScalar scale = minor_scale(g, {0, 1}, {0, 1}, ctx);
        CHECK(sign_classify(d2, scale, ctx) == Sign::Positive);
        ++done;
    }
}
