#pragma once

#include "csv.hpp"
#include "family.hpp"
#include "norms.hpp"
#include "operators.hpp"
#include "pairs.hpp"
#include "profiles.hpp"
#include "weights.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace morrey {

struct RatioRecord {
    std::string theorem;
    std::string params;
    std::string pair;
    int level = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

inline Table ratio_table(const std::vector<RatioRecord>& recs)
{
    Table t{{"theorem", "params", "pair", "level", "lhs", "rhs", "ratio"}, {}};
    for (const auto& r : recs)
        t.add({r.theorem, r.params, r.pair, fmt(r.level), fmt(r.lhs), fmt(r.rhs), fmt(r.ratio)});
    return t;
}

inline CharParams char_params(const ExponentProfile& p, CharVariant variant)
{
    CharParams cp;
    cp.alpha = p.d("alpha");
    cp.n = p.n;
    cp.q1 = p.d("q1");
    cp.q2 = p.d("q2");
    cp.q = p.d("q");
    cp.p = p.has("p") ? p.d("p") : cp.q;
    cp.s = p.has("s") ? p.d("s") : 1.0;
    cp.t = p.has("t") ? p.d("t") : 1.0;
    cp.r = p.has("r") ? p.d("r") : std::numeric_limits<double>::infinity();
    cp.a = p.has("a") ? p.d("a") : 1.1;
    cp.variant = variant;
    return cp;
}

/// Weights of the weighted theorems on one grid. Defaults (origin at the
/// lower corner of the root):
///   two-weight: v = |x|^(3/40), w_i = |x|^(1/10)
///   one-weight: w_i = |x|^(1/10), v = w1 w2
///   olsen: v = |x|^(-1/8), w_i = 1
///   fsdual: w_i = |x|^(-1/20), v = w1 w2, right-side weights W_i
///   stein-weiss:  v = |x|^(-beta), w_i = |x|^(gamma_i) with beta = 1/20, gamma_i = 1/10
///   necessity: all ones
struct HarnessWeights {
    WeightSystem ws;
    GridFunction rhs_w1, rhs_w2; ///< weights multiplying f, g on the right side
    double constant = 1.0;       ///< weight constant multiplying the right side
};

inline HarnessWeights harness_weights(const ExponentProfile& p, const GridGeometry& g,
                                      const std::optional<PowerDescriptor>& override_powers = std::nullopt)
{
    const std::string& th = p.theorem;
    PowerDescriptor d;
    if (th == "two-weight") d = {-3.0 / 40.0, 0.1, 0.1, {0, 0}};
    else if (th == "one-weight") d = {-0.2, 0.1, 0.1, {0, 0}};
    else if (th == "olsen") d = {1.0 / 8.0, 0.0, 0.0, {0, 0}};
    else if (th == "fsdual") d = {0.1, -0.05, -0.05, {0, 0}};
    else if (th == "stein-weiss") d = {0.05, 0.1, 0.1, {0, 0}};
    else return {WeightSystem::unit(g), GridFunction::constant(g, 1.0, Sign::pos), GridFunction::constant(g, 1.0, Sign::pos)};
    if (override_powers) d = *override_powers;
    WeightSystem ws = WeightSystem::from_powers(d, g);
    if (th == "one-weight" || th == "fsdual") ws.v = multiply(ws.w1, ws.w2);
    HarnessWeights hw{ws, ws.w1, ws.w2};
    if (th == "fsdual") {
        const CubeFamily fam = dyadic_family(g);
        hw.rhs_w1 = fs_majorant(ws.w1, p.d("r1"), p.d("s1"), fam);
        hw.rhs_w2 = fs_majorant(ws.w2, p.d("r2"), p.d("s2"), fam);
    }
    const CubeFamily fam = dyadic_family(g);
    const bool small = p.d("s") < 1;
    if (th == "two-weight")
        hw.constant = char_two_weight(ws, char_params(p, small ? CharVariant::two_weight_s_lt_1 : CharVariant::two_weight_s_ge_1), fam).value;
    else if (th == "one-weight")
        hw.constant = char_one_weight(ws, char_params(p, small ? CharVariant::one_weight_s_lt_1 : CharVariant::one_weight_s_ge_1), fam).value;
    else if (th == "olsen")
        hw.constant = morrey_norm(ws.v, p.d("r"), p.d("t") / (1.0 - p.d("t")), fam).value;
    return hw;
}

struct RatioParts {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Left and right sides of the named inequality for one pair, norms over
/// the dyadic subcubes of the root.
inline RatioParts evaluate_inequality(const ExponentProfile& p, const GridFunction& f, const GridFunction& g,
                                      const HarnessWeights& hw)
{
    const std::string& th = p.theorem;
    const int n = p.n;
    const CubeFamily fam = dyadic_family(f.geom);
    const double alpha = p.d("alpha");
    auto norm = [&](const GridFunction& h, double outer, double inner) { return morrey_norm(h, outer, inner, fam).value; };
    if (th == "adams")
        return {norm(i_alpha(f, KernelSpec{alpha, n}), p.d("s"), p.d("t")), norm(f, p.d("p"), p.d("q"))};
    if (th == "bilinear-q1" || th == "bilinear-q")
        return {norm(b_alpha(f, g, KernelSpec{alpha, n}), p.d("s"), p.d("t")),
                norm(f, p.d("p1"), p.d("q1")) * norm(g, p.d("p2"), p.d("q2"))};
    if (th == "bilinear-p2")
        return {norm(b_alpha(f, g, KernelSpec{alpha, n}), p.d("p2"), p.d("q2")),
                norm(f, p.d("p1"), p.d("q1")) * norm(g, p.d("p2"), p.d("q2"))};
    if (th == "product")
        return {norm(multiply(g, i_alpha(f, KernelSpec{alpha, n})), p.d("r0"), p.d("r")),
                norm(g, p.d("q0"), p.d("q")) * norm(f, p.d("p0"), p.d("p"))};
    if (th == "stein-weiss") {
        const GridFunction bt = b_alpha(f, g, KernelSpec{n - alpha, n});
        return {norm(multiply(bt, hw.ws.v), p.d("s"), p.d("t")),
                norm(multiply(f, hw.rhs_w1), p.d("p1"), p.d("q1")) * norm(multiply(g, hw.rhs_w2), p.d("p2"), p.d("q2"))};
    }
    const double sup = product_morrey(multiply(f, hw.rhs_w1), p.d("q1"), multiply(g, hw.rhs_w2), p.d("q2"), p.d("p"), fam).value;
    if (th == "necessity") {
        const GridFunction m = m_alpha_bilinear(f, g, alpha, fam);
        return {norm(multiply(m, hw.ws.v), p.d("s"), p.d("t")), sup};
    }
    if (th == "two-weight" || th == "one-weight" || th == "olsen" || th == "fsdual")
        return {norm(multiply(b_alpha(f, g, KernelSpec{alpha, n}), hw.ws.v), p.d("s"), p.d("t")), hw.constant * sup};
    throw parameter_error("theorem " + th + " has no ratio harness");
}

struct HarnessOptions {
    std::vector<int> levels{4, 5, 6, 7};
    std::uint64_t seed = 1;
    int per_kind = 3;
    int dim = 1;
    std::vector<PairKind> kinds{PairKind::random_step, PairKind::indicator, PairKind::lattice, PairKind::bump};
    std::optional<PowerDescriptor> powers;
    double growth_slack = 1.05;
};

struct HarnessResult {
    std::vector<RatioRecord> records;
    std::vector<double> max_by_level;
    double worst_growth = 0.0; ///< max over consecutive levels of max_{L+1} / max_L
    bool stable = true;
};

inline double safe_ratio(const RatioParts& r)
{
    if (r.rhs == 0.0) {
        if (r.lhs == 0.0) return 0.0;
        throw numerical_error("nonzero left side with zero right side");
    }
    return r.lhs / r.rhs;
}

/// Ratios lhs/rhs of the named inequality over the pair mix and levels.
inline HarnessResult ratio_harness(const ExponentProfile& prof, const HarnessOptions& opt = {})
{
    const ExponentProfile p = complete(prof);
    validate_profile(p);
    detail::require(!opt.levels.empty(), "no levels given");
    HarnessResult res;
    for (int level : opt.levels) {
        const GridGeometry geom{DyadicCube{opt.dim, 0, {0, 0}}, level};
        const HarnessWeights hw = harness_weights(p, geom, opt.powers);
        const auto pairs = pair_family(opt.dim, opt.seed, opt.per_kind, level, opt.kinds);
        std::vector<RatioRecord> recs(pairs.size());
        detail::parallel_for(pairs.size(), [&](std::size_t i) {
            const RatioParts r = evaluate_inequality(p, pairs[i].f, pairs[i].g, hw);
            recs[i] = {p.theorem, p.canonical(), pairs[i].id, level, r.lhs, r.rhs, safe_ratio(r)};
        });
        double mx = 0.0;
        for (const auto& r : recs) mx = std::max(mx, r.ratio);
        res.max_by_level.push_back(mx);
        res.records.insert(res.records.end(), recs.begin(), recs.end());
    }
    for (std::size_t i = 1; i < res.max_by_level.size(); ++i) {
        const double g = res.max_by_level[i] / res.max_by_level[i - 1];
        res.worst_growth = std::max(res.worst_growth, g);
        if (res.max_by_level[i] > opt.growth_slack * res.max_by_level[i - 1]) res.stable = false;
    }
    return res;
}

} // namespace morrey
