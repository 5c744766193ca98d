#ifndef TOTPOS_TPCHECK_HPP
#define TOTPOS_TPCHECK_HPP

#include "totpos/bigfloat.hpp"
#include "totpos/matrix.hpp"
#include "totpos/weights.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace totpos {

enum class TPProperty { TP, STP, RR, SRR };

inline const char* to_string(TPProperty p) {
    switch (p) {
        case TPProperty::TP: return "tp";
        case TPProperty::STP: return "stp";
        case TPProperty::RR: return "rr";
        case TPProperty::SRR: return "srr";
    }
    return "?";
}

inline std::optional<TPProperty> property_by_name(const std::string& name) {
    if (name == "tp") return TPProperty::TP;
    if (name == "stp") return TPProperty::STP;
    if (name == "rr") return TPProperty::RR;
    if (name == "srr") return TPProperty::SRR;
    return std::nullopt;
}

/// Sampling rectangle in (lambda, x), optionally restricted to the strip
/// lambda * x < 1 (the W6 convergence region).
struct Region {
    double lambda_min = 0.1;
    double lambda_max = 3.0;
    double x_min = 0.1;
    double x_max = 3.0;
    bool require_lambda_x_below_one = false;
};

struct Witness {
    std::vector<BigScalar> lambdas;  // descending
    std::vector<BigScalar> xs;       // descending
    std::vector<std::size_t> row_set;
    std::vector<std::size_t> col_set;
    BigScalar minor_value;
    Sign sign = Sign::Zero;
};

struct TPVerdict {
    int order_r = 0;
    TPProperty property = TPProperty::TP;
    bool consistent = true;
    long samples_checked = 0;
    std::optional<Witness> witness;
};

/// entries[i][j] = w(lambda_i, x_j); every grid point must lie in the
/// weight's domain.
inline KernelMatrix build_matrix(const WeightFunctionSpec& spec, const DescendingTuple& lambdas,
                                 const DescendingTuple& xs) {
    Grid entries(lambdas.size(), std::vector<BigScalar>());
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            entries[i].push_back(eval(spec, lambdas[i], xs[j]));
    return KernelMatrix(lambdas, xs, std::move(entries));
}

namespace detail {

/// Per-sample-index generator: the stream for sample i depends only on
/// (seed, i), so verdicts cannot depend on evaluation schedule.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 g(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    g.discard(8);
    return g;
}

inline double unit_uniform(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Draw a strictly descending r-tuple in [lo, hi] by sorting i.i.d.
/// uniforms, rejecting tuples with adjacent spread below 1e-6 * width.
inline std::vector<double> draw_descending(std::mt19937_64& g, int r, double lo, double hi) {
    const double width = hi - lo;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<double> vals(r);
        for (auto& v : vals) v = lo + width * unit_uniform(g);
        std::sort(vals.begin(), vals.end(), std::greater<double>());
        bool ok = true;
        for (int i = 0; i + 1 < r; ++i)
            if (vals[i] - vals[i + 1] < 1e-6 * width) { ok = false; break; }
        if (ok) return vals;
    }
    throw std::runtime_error("draw_descending: rejection failed (degenerate region)");
}

inline DescendingTuple to_tuple(const std::vector<double>& vals, const PrecisionContext& ctx) {
    std::vector<BigScalar> out;
    out.reserve(vals.size());
    for (double v : vals) out.push_back(make_scalar(v, ctx));
    return DescendingTuple(std::move(out));
}

/// Does the minor's classified sign violate the property?
inline bool violates(TPProperty property, const MinorRecord& rec) {
    switch (property) {
        case TPProperty::TP: return rec.raw_sign == Sign::Negative;
        case TPProperty::STP: return rec.raw_sign != Sign::Positive;
        // For RR/SRR the record's `sign` field already folds in the
        // (-1)^{s(s-1)/2} factor for the minor's size.
        case TPProperty::RR: return rec.sign == Sign::Negative;
        case TPProperty::SRR: return rec.sign != Sign::Positive;
    }
    return false;
}

/// Re-evaluate a candidate witness from scratch with guard digits and
/// confirm the violating classification survives.
inline bool confirm_witness(const WeightFunctionSpec& spec, const Witness& w,
                            TPProperty property, const PrecisionContext& ctx) {
    const PrecisionContext guard = ctx.with_extra_digits(40);
    std::vector<BigScalar> ls, xs;
    for (const auto& v : w.lambdas) ls.push_back(to_context(v, guard));
    for (const auto& v : w.xs) xs.push_back(to_context(v, guard));
    KernelMatrix m = build_matrix(spec, DescendingTuple(ls), DescendingTuple(xs));
    BigScalar value = minor_det(m.entries, w.row_set, w.col_set);
    BigScalar scale = minor_scale(m.entries, w.row_set, w.col_set, guard);
    if (!(scale > make_scalar(0L, guard))) return false;
    Sign raw = sign_classify(value, scale, guard);
    Sign adjusted = raw;
    std::size_t s = w.row_set.size();
    if ((property == TPProperty::RR || property == TPProperty::SRR) && rr_sign_flips(s)) {
        if (raw == Sign::Positive) adjusted = Sign::Negative;
        else if (raw == Sign::Negative) adjusted = Sign::Positive;
    }
    MinorRecord rec{w.row_set, w.col_set, value, adjusted, raw};
    return violates(property, rec);
}

}  // namespace detail

/// Check one sampled grid pair; returns the first confirmed violating
/// minor, if any.
inline std::optional<Witness> check_sample(const WeightFunctionSpec& spec,
                                           const DescendingTuple& lambdas,
                                           const DescendingTuple& xs, TPProperty property,
                                           const PrecisionContext& ctx) {
    KernelMatrix m = build_matrix(spec, lambdas, xs);
    SignReport report = classify_all_minors(
        m.entries, ctx, property == TPProperty::RR || property == TPProperty::SRR);
    for (const auto& rec : report.minors) {
        if (!detail::violates(property, rec)) continue;
        Witness w{lambdas.values(), xs.values(), rec.row_set, rec.col_set, rec.value, rec.sign};
        if (detail::confirm_witness(spec, w, property, ctx)) return w;
    }
    return std::nullopt;
}

/// Property scan over `samples` seeded random grids (plus any caller
/// supplied grid pairs, checked first).  A consistent verdict means
/// "no violation found at N samples", never a proof.
inline TPVerdict check_order(const WeightFunctionSpec& spec, const Region& region,
                             TPProperty property, int r, long samples, std::uint64_t rng_seed,
                             const PrecisionContext& ctx,
                             const std::vector<std::pair<DescendingTuple, DescendingTuple>>&
                                 seeded_grids = {}) {
    if (r < 1) throw std::invalid_argument("check_order: requires r >= 1");
    TPVerdict verdict;
    verdict.order_r = r;
    verdict.property = property;

    for (const auto& [ls, xs] : seeded_grids) {
        ++verdict.samples_checked;
        if (auto w = check_sample(spec, ls, xs, property, ctx)) {
            verdict.consistent = false;
            verdict.witness = std::move(w);
            return verdict;
        }
    }

    for (long i = 0; i < samples; ++i) {
        auto g = detail::sample_rng(rng_seed, static_cast<std::uint64_t>(i));
        auto x_vals = detail::draw_descending(g, r, region.x_min, region.x_max);
        double lambda_hi = region.lambda_max;
        if (region.require_lambda_x_below_one)
            lambda_hi = std::min(lambda_hi, 0.999 / x_vals.front());
        if (lambda_hi <= region.lambda_min)
            throw std::invalid_argument("check_order: region incompatible with lambda*x < 1");
        auto l_vals = detail::draw_descending(g, r, region.lambda_min, lambda_hi);
        DescendingTuple ls = detail::to_tuple(l_vals, ctx);
        DescendingTuple xs = detail::to_tuple(x_vals, ctx);
        ++verdict.samples_checked;
        if (auto w = check_sample(spec, ls, xs, property, ctx)) {
            verdict.consistent = false;
            verdict.witness = std::move(w);
            return verdict;
        }
    }
    return verdict;
}

/// Random search with local refinement; returns the confirmed witness with
/// the most negative normalized minor found within the budget, if any.
inline std::optional<Witness> search_counterexample(const WeightFunctionSpec& spec,
                                                    const Region& region, TPProperty property,
                                                    int r, long budget, std::uint64_t rng_seed,
                                                    const PrecisionContext& ctx) {
    if (budget < 1) throw std::invalid_argument("search_counterexample: requires budget >= 1");
    std::optional<Witness> best;
    BigScalar best_score = make_scalar(0L, ctx);  // normalized minor; want most negative

    auto consider = [&](const DescendingTuple& ls, const DescendingTuple& xs) {
        auto w = check_sample(spec, ls, xs, property, ctx);
        if (!w) return;
        KernelMatrix m = build_matrix(spec, ls, xs);
        BigScalar scale = minor_scale(m.entries, w->row_set, w->col_set, ctx);
        BigScalar score = w->minor_value / scale;
        if (property == TPProperty::SRR || property == TPProperty::RR) {
            if (rr_sign_flips(w->row_set.size())) score = -score;
        }
        if (!best || score < best_score) {
            best_score = score;
            best = std::move(w);
        }
    };

    for (long i = 0; i < budget; ++i) {
        auto g = detail::sample_rng(rng_seed + 0x517cc1b727220a95ULL, static_cast<std::uint64_t>(i));
        auto x_vals = detail::draw_descending(g, r, region.x_min, region.x_max);
        double lambda_hi = region.lambda_max;
        if (region.require_lambda_x_below_one)
            lambda_hi = std::min(lambda_hi, 0.999 / x_vals.front());
        if (lambda_hi <= region.lambda_min) continue;
        auto l_vals = detail::draw_descending(g, r, region.lambda_min, lambda_hi);
        consider(detail::to_tuple(l_vals, ctx), detail::to_tuple(x_vals, ctx));
    }

    // Coordinatewise refinement around the best witness found so far.
    if (best) {
        for (int pass = 0; pass < 3; ++pass) {
            double step = 0.05 / (pass + 1);
            Witness base = *best;
            for (std::size_t coord = 0; coord < base.lambdas.size() + base.xs.size(); ++coord) {
                for (double dir : {1.0, -1.0}) {
                    std::vector<BigScalar> ls = base.lambdas, xs = base.xs;
                    BigScalar delta = make_scalar(dir * step, ctx);
                    if (coord < ls.size()) ls[coord] += delta;
                    else xs[coord - ls.size()] += delta;
                    try {
                        DescendingTuple lt{ls}, xt{xs};
                        for (const auto& l : lt)
                            for (const auto& x : xt)
                                if (!domain_contains(spec, l, x)) throw std::domain_error("out");
                        consider(lt, xt);
                    } catch (const std::exception&) {
                        // perturbation left the admissible set; skip it
                    }
                }
            }
        }
    }
    return best;
}

}  // namespace totpos

#endif  // TOTPOS_TPCHECK_HPP
