#pragma once

#include "csv.hpp"
#include "decomposition.hpp"
#include "harness.hpp"
#include "operators.hpp"
#include "pairs.hpp"
#include "weights.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace morrey {

/// Outcome of one property check: verdict, headline measurement, CSV rows.
struct CheckResult {
    bool pass = false;
    std::string detail;
    Table table;
};

namespace detail {
inline std::vector<FunctionPair> random_pairs(int dim, std::uint64_t seed, int count, int level)
{
    std::vector<FunctionPair> out;
    for (int i = 0; i < count; ++i)
        out.push_back(make_pair(PairKind::random_step, dim, seed, static_cast<std::uint64_t>(i), level));
    return out;
}

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}
} // namespace detail

/// Pointwise ratio of B_alpha to its dyadic model (field + exact tail) on
/// Q0 = root, per level: c_L = min, C_L = max over pairs and midpoints.
/// Passes when max_L c_L / min_L c_L and max_L C_L / min_L C_L are both
/// below spread_limit.
inline CheckResult dyadic_equivalence_check(double alpha, int dim, std::uint64_t seed, int pairs,
                                            const std::vector<int>& levels, double spread_limit = 1.1)
{
    CheckResult r;
    r.table = Table{{"level", "c", "C", "C_over_c"}, {}};
    std::vector<double> lows, highs;
    const KernelSpec k{alpha, dim};
    for (int level : levels) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& pr : detail::random_pairs(dim, seed, pairs, level)) {
            const GridFunction b = b_alpha(pr.f, pr.g, k);
            const DyadicModel dm = b_alpha_dyadic(pr.f, pr.g, k, pr.f.geom.root);
            for (std::size_t i = 0; i < b.size(); ++i) {
                const double q = b[i] / (dm.field[i] + dm.tail[i]);
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        }
        lows.push_back(lo);
        highs.push_back(hi);
        r.table.add({fmt(level), fmt(lo), fmt(hi), fmt(hi / lo)});
    }
    auto spread = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
    };
    const double sc = spread(lows), sC = spread(highs);
    const double c = *std::min_element(lows.begin(), lows.end()), C = *std::max_element(highs.begin(), highs.end());
    r.pass = sc < spread_limit && sC < spread_limit;
    r.detail = "interval [" + detail::num(c) + ", " + detail::num(C) + "], c spread " + detail::num(sc) +
               ", C spread " + detail::num(sC);
    return r;
}

/// B(|f|,|g|) <= I(|f|^l)^(1/l) I(|g|^l')^(1/l') + slack at every midpoint.
inline CheckResult holder_check(double alpha, int dim, std::uint64_t seed, int pairs, int level,
                                const std::vector<double>& ls, double slack = 1e-9)
{
    CheckResult r;
    r.table = Table{{"l", "pair", "max_excess"}, {}};
    double worst = -std::numeric_limits<double>::infinity();
    const KernelSpec k{alpha, dim};
    const KernelTable kt = detail::table_for(k, GridGeometry{DyadicCube{dim, 0, {0, 0}}, level});
    for (double l : ls) {
        const double lp = l / (l - 1.0);
        for (const auto& pr : detail::random_pairs(dim, seed, pairs, level)) {
            const GridFunction b = b_alpha(pr.f, pr.g, kt);
            const GridFunction i1 = i_alpha(GridFunction(pr.f.geom, abs_power(pr.f, l), Sign::nonneg), kt);
            const GridFunction i2 = i_alpha(GridFunction(pr.g.geom, abs_power(pr.g, lp), Sign::nonneg), kt);
            double ex = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < b.size(); ++i)
                ex = std::max(ex, b[i] - std::pow(i1[i], 1.0 / l) * std::pow(i2[i], 1.0 / lp));
            worst = std::max(worst, ex);
            r.table.add({fmt(l), pr.id, fmt(ex)});
        }
    }
    r.pass = worst <= slack;
    r.detail = "max excess " + detail::num(worst);
    return r;
}

/// Observed c = max M_alpha / B_alpha per level; passes when every c stays
/// under (sqrt(n)/2)^(n - alpha) and the per-level values agree within 5%.
inline CheckResult maximal_control_check(double alpha, int dim, std::uint64_t seed, int pairs,
                                         const std::vector<int>& levels)
{
    CheckResult r;
    r.table = Table{{"level", "observed_c"}, {}};
    const double bound = std::pow(std::sqrt(static_cast<double>(dim)) / 2.0, dim - alpha);
    std::vector<double> cs;
    for (int level : levels) {
        double c = 0.0;
        for (const auto& pr : detail::random_pairs(dim, seed, pairs, level)) {
            const CubeFamily fam = dyadic_family(pr.f.geom);
            const GridFunction m = m_alpha_bilinear(pr.f, pr.g, alpha, fam);
            const GridFunction b = b_alpha(pr.f, pr.g, KernelSpec{alpha, dim});
            for (std::size_t i = 0; i < b.size(); ++i) c = std::max(c, m[i] / b[i]);
        }
        cs.push_back(c);
        r.table.add({fmt(level), fmt(c)});
    }
    const double hi = *std::max_element(cs.begin(), cs.end()), lo = *std::min_element(cs.begin(), cs.end());
    r.pass = hi <= bound * (1.0 + 1e-9) && hi <= 1.05 * lo;
    r.detail = "observed c in [" + detail::num(lo) + ", " + detail::num(hi) + "], bound " + detail::num(bound);
    return r;
}

/// Structural checks of one decomposition: partition, disjointness within a
/// generation, nesting of generations, sandwich and halving.
struct DecompositionAudit {
    bool partition = true, disjoint = true, nested = true, sandwich = true, halving = true;
    double worst_upper = 0.0; ///< max m_3Q / (4^n a^k)
    std::string first_failure;
};

inline DecompositionAudit audit_decomposition(const StoppingFamily& sf)
{
    DecompositionAudit au;
    const GridGeometry& g = sf.geom;
    const int nd = g.dim();
    auto fail = [&](bool& flag, const std::string& what) {
        if (flag && au.first_failure.empty()) au.first_failure = what;
        flag = false;
    };
    // Partition: every cell of Q0 is in exactly one of E_0, E_j^k.
    std::vector<int> hits(sf.label.size(), 0);
    const AlignedBox q0 = g.box_of(sf.q0);
    for (std::size_t c = 0; c < sf.label.size(); ++c) hits[c] += sf.label[c] == 0;
    for (std::size_t k = 0; k < sf.generations.size(); ++k) {
        const auto& gen = sf.generations[k];
        const double thr = std::pow(sf.a, static_cast<double>(k + 1));
        for (std::size_t j = 0; j < gen.size(); ++j) {
            const AlignedBox b = g.box_of(gen[j].cube);
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i)
                for (std::int64_t jj = b.lo[1]; jj < b.hi[1]; ++jj) {
                    const std::size_t c = g.index(i, jj);
                    hits[c] += sf.label[c] == static_cast<int>(k + 1);
                }
            for (std::size_t o = j + 1; o < gen.size(); ++o)
                if (gen[j].cube.intersects(gen[o].cube)) fail(au.disjoint, "overlap in generation " + std::to_string(k + 1));
            if (k > 0) {
                bool inside = false;
                for (const auto& up : sf.generations[k - 1]) inside = inside || up.cube.contains(gen[j].cube);
                if (!inside) fail(au.nested, "cube " + gen[j].cube.str() + " has no parent generation cube");
            }
            if (!(gen[j].m3q > thr)) fail(au.sandwich, "lower sandwich at " + gen[j].cube.str());
            const double upper = std::ldexp(thr, 2 * nd);
            au.worst_upper = std::max(au.worst_upper, gen[j].m3q / upper);
            if (gen[j].m3q > upper * (1.0 + 1e-12)) fail(au.sandwich, "upper sandwich at " + gen[j].cube.str());
        }
    }
    for (std::size_t c = 0; c < hits.size(); ++c) {
        const auto x = g.cell_of(c);
        const int want = q0.contains_cell(x[0], x[1]) ? 1 : 0;
        if (hits[c] != want) fail(au.partition, "cell " + std::to_string(c) + " covered " + std::to_string(hits[c]) + " times");
    }
    if (!verify_halving(sf).ok) fail(au.halving, "halving violated");
    return au;
}

/// Random spiky nonnegative data (cell values exp(U[-4, 4])) at `level`.
inline GridFunction spiky(int dim, int level, CounterRng& rng)
{
    return random_step(dim, level, rng, -4.0, 4.0);
}

inline CheckResult cz_check(int dim, int level, std::uint64_t seed, int seeds)
{
    CheckResult r;
    r.table = Table{{"seed", "a", "generations", "selected", "worst_upper", "worst_halving", "ok"}, {}};
    bool all = true;
    std::string first;
    for (int s = 0; s < seeds; ++s) {
        CounterRng rng(seed, 1000 + static_cast<std::uint64_t>(s));
        const GridFunction f = spiky(dim, level, rng), g = spiky(dim, level, rng);
        const DyadicCube q0 = f.geom.root;
        const double a = choose_a(f, g, q0);
        const StoppingFamily sf = cz_decompose(f, g, q0, a);
        const DecompositionAudit au = audit_decomposition(sf);
        const bool ok = au.partition && au.disjoint && au.nested && au.sandwich && au.halving;
        if (!ok && first.empty()) first = au.first_failure;
        all = all && ok;
        std::size_t sel = 0;
        for (const auto& gen : sf.generations) sel += gen.size();
        r.table.add({fmt(s), fmt(a), fmt(sf.generations.size()), fmt(sel), fmt(au.worst_upper),
                     fmt(verify_halving(sf).worst_ratio), ok ? "1" : "0"});
    }
    r.pass = all;
    r.detail = all ? std::to_string(seeds) + " decompositions audited" : first;
    return r;
}

/// packing_sum ratio <= 1 over t in {0.3, 0.5, 0.7}, alpha/n in {0.25, 0.5, 0.75}
/// and v in {1, single-cell spike, |x|^(-1/2)}.
inline CheckResult packing_check(int dim, int level)
{
    CheckResult r;
    r.table = Table{{"weight", "t", "alpha", "ratio"}, {}};
    const GridGeometry g{DyadicCube{dim, 0, {0, 0}}, level};
    std::vector<double> spike(static_cast<std::size_t>(g.cell_count()), 1.0);
    spike[spike.size() / 3] = 1e6;
    const std::vector<std::pair<std::string, GridFunction>> ws{
        {"one", GridFunction::constant(g, 1.0, Sign::pos)},
        {"spike", GridFunction(g, spike, Sign::pos)},
        {"power", power_weight(-0.5, {0.0, 0.0}, g)}};
    double worst = 0.0;
    for (const auto& [name, v] : ws)
        for (double t : {0.3, 0.5, 0.7})
            for (double af : {0.25, 0.5, 0.75}) {
                const double ratio = packing_sum(g.root, v, t, af * dim);
                worst = std::max(worst, ratio);
                r.table.add({name, fmt(t), fmt(af * dim), fmt(ratio)});
            }
    r.pass = worst <= 1.0;
    r.detail = "max ratio " + detail::num(worst);
    return r;
}

/// Two-weight (s < 1) constant against the single-cube constant that
/// dominates it, on one system; returns two_weight / remark.
inline double remark_chain_ratio(const WeightSystem& ws, const ExponentProfile& p)
{
    const CubeFamily fam = dyadic_family(ws.geom());
    const double two = char_two_weight(ws, char_params(p, CharVariant::two_weight_s_lt_1), fam).value;
    const double rem = char_remark(ws, char_params(p, CharVariant::remark), fam).value;
    return two / rem;
}

/// Weighted two-weight harness plus the dominance chain on power-weight
/// systems at every level and on seeded random positive systems.
inline CheckResult weighted_check(std::uint64_t seed, int random_systems)
{
    CheckResult r;
    const ExponentProfile p = default_profile("two-weight");
    HarnessOptions opt;
    opt.seed = seed;
    const HarnessResult h = ratio_harness(p, opt);
    r.table = ratio_table(h.records);
    double worst_chain = 0.0;
    for (int level : opt.levels) {
        const GridGeometry g{DyadicCube{1, 0, {0, 0}}, level};
        worst_chain = std::max(worst_chain, remark_chain_ratio(harness_weights(p, g).ws, p));
    }
    for (int s = 0; s < random_systems; ++s) {
        CounterRng rng(seed, 2000 + static_cast<std::uint64_t>(s));
        WeightSystem ws{random_step(1, 6, rng, -1.0, 1.0), random_step(1, 6, rng, -1.0, 1.0),
                        random_step(1, 6, rng, -1.0, 1.0), std::nullopt};
        worst_chain = std::max(worst_chain, remark_chain_ratio(ws, p));
    }
    const bool chain = worst_chain <= 1.0 + 1e-12;
    r.pass = h.stable && chain;
    r.detail = "worst level growth " + detail::num(h.worst_growth) + ", max two-weight/remark " + detail::num(worst_chain);
    return r;
}

struct SteinWeissResult {
    std::vector<double> characteristic; ///< per root level K
    bool conditions = false;            ///< the exponent conditions hold
    std::string verdict;                ///< FINITE, DIVERGENT or INCONCLUSIVE
    std::string violated;               ///< first violated exponent condition
    double a = 0.0;                     ///< exponent a used in the characteristic
    bool harness_stable = true;
    double harness_growth = 0.0;
};

/// Exponent conditions on (beta, gamma_i) for the bilinear Stein-Weiss
/// inequality; returns the first violated one or an empty string.
inline std::string stein_weiss_violation(const ExponentProfile& p, double beta, double g1, double g2)
{
    const double n = p.n, alpha = p.d("alpha"), s = p.d("s"), t = p.d("t");
    const double q1 = p.d("q1"), q2 = p.d("q2");
    if (!(beta < n * (1.0 / s - 1.0))) return "beta < n(1/s - 1)";
    if (!(g1 < n / conjugate(q1))) return "gamma1 < n/q1'";
    if (!(g2 < n / conjugate(q2))) return "gamma2 < n/q2'";
    const double bal = n + n / t - n / q1 - n / q2;
    if (std::fabs(alpha + beta + g1 + g2 - bal) > 1e-12) return "alpha + beta + gamma1 + gamma2 = n + n/t - n/q1 - n/q2";
    if (!(beta + g1 + g2 >= 0.0)) return "beta + gamma1 + gamma2 >= 0";
    return {};
}

/// Midpoint of (1, a_max), a_max = sup of a with a beta < n(1/s - 1),
/// gamma_i < n/(q_i/a)' and a < q_i; falls back to the profile's a when
/// the range is empty.
inline double stein_weiss_a(const ExponentProfile& p, double beta, double g1, double g2)
{
    const double n = p.n, s = p.d("s"), q1 = p.d("q1"), q2 = p.d("q2");
    double amax = std::min(q1, q2);
    if (beta > 0.0) amax = std::min(amax, n * (1.0 / s - 1.0) / beta);
    if (g1 > 0.0) amax = std::min(amax, q1 * (1.0 - g1 / n));
    if (g2 > 0.0) amax = std::min(amax, q2 * (1.0 - g2 / n));
    return amax > 1.0 ? 0.5 * (1.0 + amax) : p.d("a");
}

/// Single-cube power-weight constant over roots [0, 2^K)^n, K = 0..levels-1,
/// cells of side 2^-cell_depth; FINITE when the values agree within 10%,
/// DIVERGENT when every step grows by more than 10%.
inline SteinWeissResult stein_weiss_check(double beta, double g1, double g2, const ExponentProfile& prof,
                                          int levels = 5, int cell_depth = 6, bool run_harness = true)
{
    ExponentProfile p = complete(prof);
    p.theorem = "stein-weiss";
    validate_profile(p);
    SteinWeissResult res;
    res.violated = stein_weiss_violation(p, beta, g1, g2);
    res.conditions = res.violated.empty();
    CharParams cp = char_params(p, CharVariant::remark);
    res.a = cp.a = stein_weiss_a(p, beta, g1, g2);
    for (int k = 0; k < levels; ++k) {
        const GridGeometry g{DyadicCube{p.n, k, {0, 0}}, k + cell_depth};
        const WeightSystem ws = WeightSystem::from_powers({beta, g1, g2, {0.0, 0.0}}, g);
        res.characteristic.push_back(char_remark(ws, cp, dyadic_family(g)).value);
    }
    const auto& c = res.characteristic;
    const double hi = *std::max_element(c.begin(), c.end()), lo = *std::min_element(c.begin(), c.end());
    bool growing = true;
    for (std::size_t i = 1; i < c.size(); ++i) growing = growing && c[i] > 1.1 * c[i - 1];
    res.verdict = hi < 1.1 * lo ? "FINITE" : (growing ? "DIVERGENT" : "INCONCLUSIVE");
    if (run_harness && res.conditions) {
        HarnessOptions opt;
        opt.kinds = {PairKind::indicator};
        opt.per_kind = 6;
        opt.powers = PowerDescriptor{beta, g1, g2, {0.0, 0.0}};
        const HarnessResult h = ratio_harness(p, opt);
        res.harness_stable = h.stable;
        res.harness_growth = h.worst_growth;
    }
    return res;
}

struct NecessityResult {
    double char_testing = 0.0;
    double testing_constant = 0.0;   ///< 2^n
    double operator_constant = 0.0;  ///< max harness ratio for M_alpha
    double worst_testing = 0.0;      ///< max over cubes of lhs / (2^n rhs) in the testing estimate
    double worst_necessity = 0.0;    ///< max over cubes of char(Q) / (2^n K kappa(Q))
    bool testing_ok = false, necessity_ok = false;
};

/// Testing estimate on f = chi_Q w1^(-q1'), g = chi_Q w2^(-q2') for every
/// dyadic Q of side >= 2 cells, and the resulting bound on the testing
/// constant through the empirical operator constant.
inline NecessityResult necessity_check(const WeightSystem& ws, const ExponentProfile& prof, std::uint64_t seed = 1)
{
    ExponentProfile p = complete(prof);
    p.theorem = "necessity";
    validate_profile(p);
    ws.validate();
    const GridGeometry& g = ws.geom();
    const int n = g.dim();
    const double alpha = p.d("alpha"), t = p.d("t"), pp = p.d("p"), r = p.d("r");
    const double q1 = p.d("q1"), q2 = p.d("q2"), e1 = conjugate(q1), e2 = conjugate(q2);
    const CubeFamily fam = dyadic_family(g);
    NecessityResult res;
    res.testing_constant = std::ldexp(1.0, n);
    const HarnessWeights hw{ws, ws.w1, ws.w2, 1.0};
    const GridFunction s1(g, abs_power(ws.w1, -e1), Sign::pos), s2(g, abs_power(ws.w2, -e2), Sign::pos);

    struct PerCube {
        double testing = 0.0, ratio = 0.0, kappa = 1.0, char_q = 0.0;
    };
    std::vector<PerCube> per(fam.size());
    const LogPowerTable vmin(ws.v, -std::numeric_limits<double>::infinity());
    detail::parallel_for(fam.size(), [&](std::size_t i) {
        const AlignedBox& b = fam[i].box;
        if (b.extent(0) < 2) return;
        std::vector<double> fv(s1.size(), 0.0), gv(s2.size(), 0.0);
        for (std::int64_t x = b.lo[0]; x < b.hi[0]; ++x)
            for (std::int64_t y = b.lo[1]; y < b.hi[1]; ++y) {
                const std::size_t c = g.index(x, y);
                fv[c] = s1[c];
                gv[c] = s2[c];
            }
        const GridFunction f(g, std::move(fv), Sign::nonneg), gg(g, std::move(gv), Sign::nonneg);
        const double vol = g.box_volume(b);
        const double cells = static_cast<double>(b.cells());
        const double inf_v = std::exp(vmin.log_mean(b));
        const PrefixTable tf(g, f.values), tg(g, gg.values);
        const double af = tf.sum(b) / cells, ag = tg.sum(b) / cells;
        const GridFunction mv = multiply(m_alpha_bilinear(f, gg, alpha, fam), ws.v);
        const double lhs = std::pow(vol, alpha / n) * inf_v * af * ag;
        const double avg_t = std::pow(PrefixTable(g, abs_power(mv, t)).sum(b) / cells, 1.0 / t);
        per[i].testing = lhs / (res.testing_constant * avg_t);
        const RatioParts rp = evaluate_inequality(p, f, gg, hw);
        per[i].ratio = safe_ratio(rp);
        per[i].kappa = rp.rhs / (std::pow(vol, 1.0 / pp) * std::pow(af, 1.0 / q1) * std::pow(ag, 1.0 / q2));
        per[i].char_q = std::pow(vol, 1.0 / r) * inf_v * std::pow(af, 1.0 / e1) * std::pow(ag, 1.0 / e2);
    });
    // Operator constant: testing pairs plus the random harness mix.
    double kmax = 0.0;
    for (const auto& c : per) kmax = std::max(kmax, c.ratio);
    for (const auto& pr : pair_family(n, seed, 3, g.depth, {PairKind::random_step, PairKind::indicator}))
        if (pr.f.geom == g) kmax = std::max(kmax, safe_ratio(evaluate_inequality(p, pr.f, pr.g, hw)));
    res.operator_constant = kmax;
    for (std::size_t i = 0; i < per.size(); ++i) {
        if (fam[i].box.extent(0) < 2) continue;
        res.worst_testing = std::max(res.worst_testing, per[i].testing);
        res.worst_necessity =
            std::max(res.worst_necessity, per[i].char_q / (res.testing_constant * kmax * per[i].kappa));
    }
    CharParams cp = char_params(p, CharVariant::testing);
    res.char_testing = char_testing(ws, cp, fam).value;
    res.testing_ok = res.worst_testing <= 1.0 + 1e-12;
    res.necessity_ok = res.worst_necessity <= 1.0 + 1e-12;
    return res;
}

/// Weights constant on pairs of cells, values exp(U[-1, 1]).
inline WeightSystem random_block_weights(int dim, int level, CounterRng& rng)
{
    auto one = [&] { return random_step(dim, level - 1, rng, -1.0, 1.0).refined(1); };
    GridFunction v = one(), w1 = one(), w2 = one();
    return {v, w1, w2, std::nullopt};
}

struct FsDualResult {
    double worst_split = 0.0; ///< max over cubes of left / right in the Hoelder split
    HarnessResult harness;
    bool pass = false;
};

/// Hoelder split per cube for w_i = |x|^(gamma_i) at `level`, and the
/// two-weight harness with v = w1 w2 and the majorants W_i on the right side.
inline FsDualResult fs_dual_check(double gamma1, double gamma2, const ExponentProfile& prof, int level = 7,
                                  std::uint64_t seed = 1)
{
    ExponentProfile p = complete(prof);
    p.theorem = "fsdual";
    validate_profile(p);
    const GridGeometry g{DyadicCube{p.n, 0, {0, 0}}, level};
    const GridFunction w1 = power_weight(gamma1, {0.0, 0.0}, g), w2 = power_weight(gamma2, {0.0, 0.0}, g);
    const CubeFamily fam = dyadic_family(g);
    const double s = p.d("s"), a = p.d("a"), r = p.d("r");
    const double e = a * s / (1.0 - s);
    const double s1 = p.d("s1"), s2 = p.d("s2"), r1 = p.d("r1"), r2 = p.d("r2");
    const LogPowerTable tv(multiply(w1, w2), e), t1(w1, s1 / (1.0 - s1)), t2(w2, s2 / (1.0 - s2));
    FsDualResult res;
    const double lc = std::log(g.cell_volume());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const auto& b = fam[i].box;
        const double lv = std::log(static_cast<double>(b.cells())) + lc;
        const double left = lv / r + tv.log_power_mean(b);
        const double right = lv / r1 + t1.log_power_mean(b) + lv / r2 + t2.log_power_mean(b);
        res.worst_split = std::max(res.worst_split, std::exp(left - right));
    }
    HarnessOptions opt;
    opt.seed = seed;
    opt.powers = PowerDescriptor{-(gamma1 + gamma2), gamma1, gamma2, {0.0, 0.0}};
    res.harness = ratio_harness(p, opt);
    res.pass = res.worst_split <= 1.0 + 1e-12 && res.harness.stable;
    return res;
}

} // namespace morrey
