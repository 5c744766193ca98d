#ifndef TOTPOS_PREMIUM_HPP
#define TOTPOS_PREMIUM_HPP

#include "totpos/bigfloat.hpp"
#include "totpos/matrix.hpp"
#include "totpos/quadrature.hpp"
#include "totpos/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace totpos {

enum class LossFamily { Exponential, GammaDist, UniformDist };

/// Loss-variable distribution with the truncation policy used to cut the
/// quadrature range: the neglected tail mass of every integrand must stay
/// below 10^(-digits/2).
struct LossModel {
    LossFamily family = LossFamily::Exponential;
    double rate = 1.0;    // Exponential / Gamma
    double shape = 1.0;   // Gamma
    double a = 0.0;       // Uniform
    double b = 1.0;       // Uniform

    static LossModel exponential(double rate) {
        if (rate <= 0) throw std::invalid_argument("LossModel: rate must be positive");
        LossModel m;
        m.family = LossFamily::Exponential;
        m.rate = rate;
        return m;
    }
    static LossModel gamma_dist(double shape, double rate) {
        if (rate <= 0 || shape <= 0)
            throw std::invalid_argument("LossModel: shape and rate must be positive");
        LossModel m;
        m.family = LossFamily::GammaDist;
        m.shape = shape;
        m.rate = rate;
        return m;
    }
    static LossModel uniform(double a, double b) {
        if (!(b > a)) throw std::invalid_argument("LossModel: requires a < b");
        LossModel m;
        m.family = LossFamily::UniformDist;
        m.a = a;
        m.b = b;
        return m;
    }

    BigScalar density(const BigScalar& x, const PrecisionContext& ctx) const {
        const BigScalar zero = make_scalar(0L, ctx);
        switch (family) {
            case LossFamily::Exponential: {
                if (x < zero) return zero;
                BigScalar r = make_scalar(rate, ctx);
                return r * exp(-(r * x));
            }
            case LossFamily::GammaDist: {
                if (!(x > zero)) return zero;
                BigScalar r = make_scalar(rate, ctx);
                BigScalar s = make_scalar(shape, ctx);
                return exp(s * log(r) + (s - make_scalar(1L, ctx)) * log(x) - r * x) / tgamma(s);
            }
            case LossFamily::UniformDist: {
                BigScalar lo = make_scalar(a, ctx), hi = make_scalar(b, ctx);
                if (x < lo || x > hi) return zero;
                return make_scalar(1L, ctx) / (hi - lo);
            }
        }
        return zero;
    }

    double support_lo() const { return family == LossFamily::UniformDist ? a : 0.0; }
};

enum class UtilityFamily { Identity, Power, CappedLinear };

/// Non-decreasing utility f with a flag recording whether the family is
/// 1-Lipschitz by construction.
struct UtilitySpec {
    UtilityFamily family = UtilityFamily::Identity;
    double p = 1.0;    // Power exponent, p >= 1
    double cap = 1.0;  // CappedLinear cap

    static UtilitySpec identity() { return UtilitySpec{}; }
    static UtilitySpec power(double p) {
        if (p < 1) throw std::invalid_argument("UtilitySpec: power requires p >= 1");
        UtilitySpec u;
        u.family = UtilityFamily::Power;
        u.p = p;
        return u;
    }
    static UtilitySpec capped_linear(double cap) {
        if (cap < 0) throw std::invalid_argument("UtilitySpec: cap must be >= 0");
        UtilitySpec u;
        u.family = UtilityFamily::CappedLinear;
        u.cap = cap;
        return u;
    }

    bool lipschitz_1() const {
        return family == UtilityFamily::Identity || family == UtilityFamily::CappedLinear ||
               (family == UtilityFamily::Power && p == 1.0);
    }

    BigScalar operator()(const BigScalar& x) const {
        const PrecisionContext ctx = x.context();
        switch (family) {
            case UtilityFamily::Identity: return x;
            case UtilityFamily::Power:
                return x.is_zero() ? make_scalar(0L, ctx)
                                   : exp(make_scalar(p, ctx) * log(x));
            case UtilityFamily::CappedLinear: return min(x, make_scalar(cap, ctx));
        }
        return x;
    }
};

struct PremiumReport {
    BigScalar lambda;
    BigScalar H;       // the premium H[lambda, f(X)] = mu_lambda
    BigScalar mu;      // mean of f under the weighted law
    BigScalar sigma2;  // variance of f under the weighted law
    BigScalar vmr;     // sigma2 / mu
};

namespace detail {

/// Upper cutoff T so that every integrand's neglected tail is below
/// 10^(-digits/2); throws when the integrand diverges.
inline double truncation_point(const WeightFunctionSpec& spec, const LossModel& loss,
                               const BigScalar& lambda, const PrecisionContext& ctx) {
    if (loss.family == LossFamily::UniformDist) return loss.b;
    auto alpha_opt = growth_log_rate(spec, lambda);
    if (!alpha_opt)
        throw std::domain_error(
            "expectation: weight grows superexponentially; only a Uniform loss is admissible");
    double alpha = alpha_opt->to_double();
    double decay = loss.rate - alpha;
    if (decay <= 0)
        throw std::domain_error("expectation: integrand not integrable (weight growth " +
                                std::to_string(alpha) + " >= loss rate " +
                                std::to_string(loss.rate) + ")");
    double t = (0.5 * ctx.digits() * 2.302585092994046 + 120.0) / decay;
    return std::max(t, 50.0);
}

inline std::vector<BigScalar> integrand_breaks(const WeightFunctionSpec& spec,
                                               const UtilitySpec& u, const BigScalar& lambda,
                                               const PrecisionContext& ctx) {
    std::vector<BigScalar> breaks;
    if (spec.family == WeightFamily::CTE_w2) breaks.push_back(lambda);
    if (u.family == UtilityFamily::CappedLinear) breaks.push_back(make_scalar(u.cap, ctx));
    return breaks;
}

}  // namespace detail

/// E[w(lambda, X) f(X)^power] by adaptive quadrature over the truncated
/// support, panel boundaries pinned to any integrand kinks.
inline BigScalar expectation(const WeightFunctionSpec& spec, int power, const UtilitySpec& u,
                             const LossModel& loss, const BigScalar& lambda) {
    if (power < 0) throw std::invalid_argument("expectation: power must be >= 0");
    const PrecisionContext ctx = lambda.context();
    double t_cut = detail::truncation_point(spec, loss, lambda, ctx);
    BigScalar lo = make_scalar(loss.support_lo(), ctx);
    BigScalar hi = make_scalar(t_cut, ctx);
    auto integrand = [&](const BigScalar& x) {
        BigScalar val = eval(spec, lambda, x) * loss.density(x, ctx);
        for (int i = 0; i < power; ++i) val *= u(x);
        return val;
    };
    auto breaks = detail::integrand_breaks(spec, u, lambda, ctx);
    return integrate_piecewise(integrand, lo, hi, breaks, ctx);
}

/// The weighted premium H[lambda, f(X)^power] =
/// E[w f^power] / E[w].
inline BigScalar premium_H_power(const WeightFunctionSpec& spec, int power, const UtilitySpec& u,
                                 const LossModel& loss, const BigScalar& lambda) {
    const PrecisionContext ctx = lambda.context();
    BigScalar denom = expectation(spec, 0, u, loss, lambda);
    if (!(denom > make_scalar(0L, ctx)))
        throw std::domain_error("premium_H: weight annihilates the loss support");
    if (power == 0) return make_scalar(1L, ctx);
    return expectation(spec, power, u, loss, lambda) / denom;
}

inline BigScalar premium_H(const WeightFunctionSpec& spec, const UtilitySpec& u,
                           const LossModel& loss, const BigScalar& lambda) {
    return premium_H_power(spec, 1, u, loss, lambda);
}

/// k x k grid with grid[i][j] = H[lambda_i, f(X)^(k-1-j)] (last column
/// identically 1), plus the sign classification of all its minors.
inline std::pair<Grid, SignReport> premium_matrix(const WeightFunctionSpec& spec,
                                                  const UtilitySpec& u, const LossModel& loss,
                                                  const DescendingTuple& lambdas, int k) {
    if (k <= 0 || static_cast<std::size_t>(k) != lambdas.size())
        throw std::invalid_argument("premium_matrix: k must equal the lambda tuple length");
    const PrecisionContext ctx = lambdas[0].context();
    Grid grid(k, std::vector<BigScalar>());
    for (int i = 0; i < k; ++i) {
        BigScalar denom = expectation(spec, 0, u, loss, lambdas[i]);
        if (!(denom > make_scalar(0L, ctx)))
            throw std::domain_error("premium_matrix: zero denominator");
        for (int j = 0; j < k; ++j) {
            int e = k - 1 - j;
            grid[i].push_back(e == 0 ? make_scalar(1L, ctx)
                                     : expectation(spec, e, u, loss, lambdas[i]) / denom);
        }
    }
    SignReport report = classify_all_minors(grid, ctx, /*rr_signed=*/false);
    return {std::move(grid), std::move(report)};
}

/// Premium, weighted mean/variance, and variance-to-mean ratio per lambda,
/// in the given (ascending) grid order.
inline std::vector<PremiumReport> vmr_curve(const WeightFunctionSpec& spec, const UtilitySpec& u,
                                            const LossModel& loss,
                                            const std::vector<BigScalar>& lambdas) {
    std::vector<PremiumReport> out;
    out.reserve(lambdas.size());
    for (const auto& lambda : lambdas) {
        const PrecisionContext ctx = lambda.context();
        BigScalar denom = expectation(spec, 0, u, loss, lambda);
        if (!(denom > make_scalar(0L, ctx)))
            throw std::domain_error("vmr_curve: zero denominator");
        BigScalar mu = expectation(spec, 1, u, loss, lambda) / denom;
        BigScalar second = expectation(spec, 2, u, loss, lambda) / denom;
        BigScalar sigma2 = second - mu * mu;
        out.push_back({lambda, mu, mu, sigma2, sigma2 / mu});
    }
    return out;
}

struct LipschitzGap {
    BigScalar lhs;  // H[lambda1, f(X)] - H[lambda2, f(X)]
    BigScalar rhs;  // H[lambda1, X] - H[lambda2, X]
    bool holds = false;
};

/// Lipschitz comparison: for a 1-Lipschitz utility the premium gap in f
/// is bounded by the gap in the identity.
inline LipschitzGap lipschitz_gap(const WeightFunctionSpec& spec, const UtilitySpec& u,
                                  const LossModel& loss, const BigScalar& lambda1,
                                  const BigScalar& lambda2) {
    check_same_context(lambda1, lambda2);
    if (!(lambda1 > lambda2)) throw std::invalid_argument("lipschitz_gap: requires lambda1 > lambda2");
    if (!u.lipschitz_1()) throw std::invalid_argument("lipschitz_gap: utility is not 1-Lipschitz");
    const PrecisionContext ctx = lambda1.context();
    UtilitySpec identity = UtilitySpec::identity();
    LipschitzGap gap{make_scalar(0L, ctx), make_scalar(0L, ctx), false};
    gap.lhs = premium_H(spec, u, loss, lambda1) - premium_H(spec, u, loss, lambda2);
    gap.rhs = premium_H(spec, identity, loss, lambda1) - premium_H(spec, identity, loss, lambda2);
    gap.holds = gap.lhs <= gap.rhs + pow10(-(ctx.digits() / 4), ctx);
    return gap;
}

/// Two-route check of the order-2 difference representation:
///   E[w(l1,X)] E[w(l2,X)] (H[l1,f] - H[l2,f])
///     = iint_{x1 > x2} (f(x1) - f(x2)) det(w(l_i, x_j)) g(x1) g(x2) dx,
/// returning |left - right|.
///
/// The ordered double integral is evaluated by Fubini: expanding the 2x2
/// determinant and the utility difference makes the inner x2 integral a
/// combination of four running integrals C_i = int_0^{x1} w_i g and
/// D_i = int_0^{x1} u w_i g, which are accumulated in lockstep with the
/// outer composite Gauss-Legendre sweep.
inline BigScalar prelipschitz_identity_check(const WeightFunctionSpec& spec, const UtilitySpec& u,
                                             const LossModel& loss, const BigScalar& lambda1,
                                             const BigScalar& lambda2) {
    check_same_context(lambda1, lambda2);
    if (!(lambda1 > lambda2))
        throw std::invalid_argument("prelipschitz: requires lambda1 > lambda2");
    const PrecisionContext ctx = lambda1.context();
    const BigScalar zero = make_scalar(0L, ctx);

    BigScalar e1 = expectation(spec, 0, u, loss, lambda1);
    BigScalar e2 = expectation(spec, 0, u, loss, lambda2);
    BigScalar left = e1 * e2 *
                     (premium_H(spec, u, loss, lambda1) - premium_H(spec, u, loss, lambda2));

    const double t_cut = std::max(detail::truncation_point(spec, loss, lambda1, ctx),
                                  detail::truncation_point(spec, loss, lambda2, ctx));
    const double lo_d = loss.support_lo();

    // Composite panel layout: kinks of the integrand become panel edges,
    // then every stretch is subdivided to a width the outer rule resolves.
    const unsigned outer_order = 48;
    const unsigned gap_order = 24;
    const int tol_digits = ctx.digits() / 3 + 10;
    double c_est = loss.rate + std::max(std::abs(lambda1.to_double()), 1.0) + 1.0;
    double h = (4.0 / c_est) * std::pow(10.0, -static_cast<double>(tol_digits) /
                                                   (2.0 * outer_order));
    h = std::max(h, 1e-3);
    std::vector<double> edges{lo_d, t_cut};
    auto push_break = [&](const BigScalar& v) {
        double d = v.to_double();
        if (d > lo_d && d < t_cut) edges.push_back(d);
    };
    for (const auto& v : detail::integrand_breaks(spec, u, lambda1, ctx)) push_break(v);
    for (const auto& v : detail::integrand_breaks(spec, u, lambda2, ctx)) push_break(v);
    std::sort(edges.begin(), edges.end());

    const GLRule& outer_rule = detail::gl_rule(outer_order, ctx);
    const GLRule& gap_rule = detail::gl_rule(gap_order, ctx);
    const BigScalar half = make_scalar(0.5, ctx);

    // Running integrals from the support's left edge up to `pos`.
    BigScalar c1 = zero, c2 = zero, d1 = zero, d2 = zero;
    BigScalar pos = make_scalar(lo_d, ctx);
    BigScalar right = zero;

    auto advance_cumulants = [&](const BigScalar& target) {
        if (!(target > pos)) return;
        BigScalar mid = (pos + target) * half;
        BigScalar rad = (target - pos) * half;
        for (unsigned k = 0; k < gap_order; ++k) {
            BigScalar y = mid + rad * gap_rule.nodes[k];
            BigScalar g_y = loss.density(y, ctx);
            if (g_y.is_zero()) continue;
            BigScalar w1_y = eval(spec, lambda1, y);
            BigScalar w2_y = eval(spec, lambda2, y);
            BigScalar u_y = u(y);
            BigScalar wgt = gap_rule.weights[k] * rad;
            c1 += wgt * w1_y * g_y;
            c2 += wgt * w2_y * g_y;
            d1 += wgt * u_y * w1_y * g_y;
            d2 += wgt * u_y * w2_y * g_y;
        }
        pos = target;
    };

    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        double seg_lo = edges[e], seg_hi = edges[e + 1];
        if (!(seg_hi > seg_lo)) continue;
        long pieces = std::max(1L, static_cast<long>(std::ceil((seg_hi - seg_lo) / h)));
        double piece_w = (seg_hi - seg_lo) / static_cast<double>(pieces);
        for (long pc = 0; pc < pieces; ++pc) {
            BigScalar a = make_scalar(seg_lo + pc * piece_w, ctx);
            BigScalar b = make_scalar(pc + 1 == pieces ? seg_hi : seg_lo + (pc + 1) * piece_w, ctx);
            BigScalar mid = (a + b) * half;
            BigScalar rad = (b - a) * half;
            // Nodes in ascending order so the cumulants only move forward.
            for (std::size_t k = outer_order; k-- > 0;) {
                BigScalar x1 = mid + rad * outer_rule.nodes[k];
                advance_cumulants(x1);
                BigScalar g_x1 = loss.density(x1, ctx);
                if (g_x1.is_zero()) continue;
                BigScalar w1_x = eval(spec, lambda1, x1);
                BigScalar w2_x = eval(spec, lambda2, x1);
                BigScalar inner = u(x1) * (w1_x * c2 - w2_x * c1) - (w1_x * d2 - w2_x * d1);
                right += outer_rule.weights[k] * rad * g_x1 * inner;
            }
        }
    }
    return abs(left - right);
}

}  // namespace totpos

#endif  // TOTPOS_PREMIUM_HPP
