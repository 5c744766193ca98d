#ifndef TOTPOS_WEIGHTS_HPP
#define TOTPOS_WEIGHTS_HPP

#include "totpos/bigfloat.hpp"
#include "totpos/gamma.hpp"
#include "totpos/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace totpos {

enum class WeightFamily {
    Esscher_w1,
    AumannShapley_w1tilde,
    SizeBiased,
    CTE_w2,
    Kamps_w3,
    Kamps_k_w3k,
    PseudoPoisson_w4,
    PseudoPoissonRaw_w4tilde,
    W5,
    W6,
    W7,
};

/// Built-in choices of the increasing transform F in exp(lambda F(x)).
enum class TransformF { Identity, Log1p };

/// Closed-form descriptor of a two-argument kernel w(lambda, x) together
/// with its validity domain.
struct WeightFunctionSpec {
    WeightFamily family = WeightFamily::Esscher_w1;
    long k = 0;                               // order parameter for w3k
    TransformF transform = TransformF::Identity;  // for w1tilde

    std::string name() const {
        switch (family) {
            case WeightFamily::Esscher_w1: return "w1";
            case WeightFamily::AumannShapley_w1tilde: return "w1_tilde";
            case WeightFamily::SizeBiased: return "size_biased";
            case WeightFamily::CTE_w2: return "w2";
            case WeightFamily::Kamps_w3: return "w3";
            case WeightFamily::Kamps_k_w3k: return "w3_k";
            case WeightFamily::PseudoPoisson_w4: return "w4";
            case WeightFamily::PseudoPoissonRaw_w4tilde: return "w4_tilde";
            case WeightFamily::W5: return "w5";
            case WeightFamily::W6: return "w6";
            case WeightFamily::W7: return "w7";
        }
        return "unknown";
    }
};

inline std::optional<WeightFunctionSpec> weight_by_name(const std::string& name) {
    WeightFunctionSpec spec;
    if (name == "w1") spec.family = WeightFamily::Esscher_w1;
    else if (name == "w1_tilde") spec.family = WeightFamily::AumannShapley_w1tilde;
    else if (name == "size_biased") spec.family = WeightFamily::SizeBiased;
    else if (name == "w2" || name == "cte") spec.family = WeightFamily::CTE_w2;
    else if (name == "w3") spec.family = WeightFamily::Kamps_w3;
    else if (name == "w3_k") { spec.family = WeightFamily::Kamps_k_w3k; spec.k = 1; }
    else if (name == "w4") spec.family = WeightFamily::PseudoPoisson_w4;
    else if (name == "w4_tilde") spec.family = WeightFamily::PseudoPoissonRaw_w4tilde;
    else if (name == "w5") spec.family = WeightFamily::W5;
    else if (name == "w6") spec.family = WeightFamily::W6;
    else if (name == "w7") spec.family = WeightFamily::W7;
    else return std::nullopt;
    return spec;
}

/// Auxiliary map f(lambda, x) = (e^{lambda x} - 1) / lambda with
/// f(0, x) = x by right-continuity.  expm1 keeps the small-lambda regime
/// free of cancellation.
inline BigScalar f_lambda_x(const BigScalar& lambda, const BigScalar& x) {
    check_same_context(lambda, x);
    if (lambda.is_zero()) return x;
    return expm1(lambda * x) / lambda;
}

inline bool domain_contains(const WeightFunctionSpec& spec, const BigScalar& lambda,
                            const BigScalar& x) {
    check_same_context(lambda, x);
    const BigScalar zero = make_scalar(0L, lambda.context());
    switch (spec.family) {
        case WeightFamily::Esscher_w1:
        case WeightFamily::CTE_w2:
            return true;  // both arguments real
        case WeightFamily::PseudoPoisson_w4:
        case WeightFamily::PseudoPoissonRaw_w4tilde:
            return lambda >= zero && x > zero;  // lambda = 0 defined by continuity
        default:
            return lambda > zero && x > zero;
    }
}

inline BigScalar eval(const WeightFunctionSpec& spec, const BigScalar& lambda,
                      const BigScalar& x) {
    check_same_context(lambda, x);
    const PrecisionContext ctx = lambda.context();
    if (!domain_contains(spec, lambda, x))
        throw std::domain_error("eval: point outside the domain of " + spec.name());
    const BigScalar one = make_scalar(1L, ctx);
    switch (spec.family) {
        case WeightFamily::Esscher_w1:
            return exp(lambda * x);
        case WeightFamily::AumannShapley_w1tilde: {
            BigScalar fx = spec.transform == TransformF::Identity ? x : log1p(x);
            return exp(lambda * fx);
        }
        case WeightFamily::SizeBiased:
            return exp(x * log(lambda));
        case WeightFamily::CTE_w2:
            return x > lambda ? one : make_scalar(0L, ctx);
        case WeightFamily::Kamps_w3:
            return -expm1(-(x / lambda));
        case WeightFamily::Kamps_k_w3k: {
            // k! [1 - e^{-x/lambda} sum_{j<=k} (x/lambda)^j / j!]
            // equals the lower incomplete gamma at shape k+1.
            BigScalar shape = make_scalar(spec.k + 1, ctx);
            return lower_gamma(shape, x / lambda);
        }
        case WeightFamily::PseudoPoisson_w4:
            return exp(f_lambda_x(lambda, x)) - exp(x) + one;
        case WeightFamily::PseudoPoissonRaw_w4tilde: {
            // exp(((1+x)^lambda - 1)/lambda) - x, with the lambda = 0 limit 1 + ... = 1 + x - x.
            BigScalar inner = lambda.is_zero() ? log1p(x) : expm1(lambda * log1p(x)) / lambda;
            return exp(inner) - x;
        }
        case WeightFamily::W5:
            return expm1(x * log1p(lambda)) / (lambda * x);
        case WeightFamily::W6: {
            BigScalar u = lambda * x;
            if (u.is_zero()) return one;  // removable singularity of u/log(1+u)
            return u / log1p(u);
        }
        case WeightFamily::W7:
            return (log1p(lambda + x) / (lambda + x)) * (x / log1p(x));
    }
    throw std::logic_error("eval: unhandled family");
}

/// w_{3,k} as a standalone entry point (lambda > 0, x > 0).
inline BigScalar eval_w3k(long k, const BigScalar& lambda, const BigScalar& x) {
    if (k < 0) throw std::domain_error("eval_w3k: requires k >= 0");
    WeightFunctionSpec spec;
    spec.family = WeightFamily::Kamps_k_w3k;
    spec.k = k;
    return eval(spec, lambda, x);
}

// --- w6 series machinery --------------------------------------------------

/// theta_k = integral_0^1 binom(t, k) dt, the k-th Taylor coefficient of
/// u / log(1 + u) (a Gregory coefficient), computed exactly: expand the
/// falling-factorial polynomial t(t-1)...(t-k+1) over the rationals and
/// integrate term by term.  theta_0 = 1, theta_1 = 1/2, and for k >= 2 the
/// signs alternate: theta_2 = -1/12, theta_3 = 1/24, theta_4 = -19/720.
/// The magnitude |theta_k| equals (1/k!) * integral_0^1 t(1-t)...(k-1-t) dt.
inline Rational w6_theta(long k) {
    if (k < 0) throw std::domain_error("w6_theta: requires k >= 0");
    if (k == 0) return Rational(1);
    // poly holds coefficients of t(t-1)...(t-k+1), lowest degree first.
    std::vector<Rational> poly{Rational(0), Rational(1)};  // t
    for (long j = 1; j < k; ++j) {
        // multiply by (t - j)
        std::vector<Rational> next(poly.size() + 1, Rational(0));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] -= poly[i] * j;
            next[i + 1] += poly[i];
        }
        poly = std::move(next);
    }
    Rational integral = 0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        integral += poly[i] / Rational(static_cast<long>(i) + 1);
    Integer kfact = 1;
    for (long j = 2; j <= k; ++j) kfact *= j;
    return integral / Rational(kfact);
}

/// Partial sum of the expansion w6(lambda, x) = sum_k theta_k (lambda x)^k,
/// valid on lambda x < 1.
inline BigScalar w6_series_eval(const BigScalar& lambda, const BigScalar& x, long terms) {
    check_same_context(lambda, x);
    const PrecisionContext ctx = lambda.context();
    const BigScalar zero = make_scalar(0L, ctx);
    const BigScalar one = make_scalar(1L, ctx);
    if (lambda < zero || x < zero) throw std::domain_error("w6_series_eval: requires lambda, x >= 0");
    BigScalar u = lambda * x;
    if (u >= one) throw std::domain_error("w6_series_eval: series diverges for lambda*x >= 1");
    BigScalar sum = zero;
    BigScalar u_pow = one;
    for (long k = 0; k < terms; ++k) {
        sum += to_scalar(w6_theta(k), ctx) * u_pow;
        u_pow *= u;
    }
    return sum;
}

// --- truncation support for premium quadrature ---------------------------

/// Exponential growth envelope of a weight family: the smallest alpha with
/// w(lambda, x) = O(e^{alpha x}) on x -> infinity, or nullopt when growth
/// is superexponential (w4 families) and only compactly supported losses
/// are admissible.
inline std::optional<BigScalar> growth_log_rate(const WeightFunctionSpec& spec,
                                                const BigScalar& lambda) {
    const PrecisionContext ctx = lambda.context();
    const BigScalar zero = make_scalar(0L, ctx);
    switch (spec.family) {
        case WeightFamily::Esscher_w1:
            return max(zero, lambda);
        case WeightFamily::AumannShapley_w1tilde:
            return spec.transform == TransformF::Identity ? max(zero, lambda) : zero;
        case WeightFamily::SizeBiased:
            return max(zero, log(lambda));
        case WeightFamily::W5:
            return log1p(lambda);
        case WeightFamily::PseudoPoisson_w4:
        case WeightFamily::PseudoPoissonRaw_w4tilde:
            return std::nullopt;
        default:
            return zero;  // bounded or sub-exponential families
    }
}

}  // namespace totpos

#endif  // TOTPOS_WEIGHTS_HPP
