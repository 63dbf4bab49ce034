#pragma once

#include "family.hpp"
#include "grid.hpp"
#include "operators.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace morrey {

/// |x - center|^beta. In 1D each cell holds the exact cell average; in 2D
/// the value at the cell midpoint (Euclidean norm).
inline GridFunction power_weight(double beta, std::array<double, 2> center, const GridGeometry& geom)
{
    const double h = geom.cell_side();
    std::vector<double> v(static_cast<std::size_t>(geom.cell_count()));
    if (geom.dim() == 1) {
        const double c = center[0];
        const double e = beta + 1.0;
        // integral of u^beta over [a, a + len], a >= 0, without cancellation.
        auto from = [&](double a, double len) -> double {
            if (a <= 0.0) {
                detail::require(e > 0.0, "power weight: |x|^beta is not integrable at the center (beta <= -1)");
                return std::pow(len, e) / e;
            }
            const double l = std::log1p(len / a);
            if (e == 0.0) return l;
            return std::pow(a, e) * std::expm1(e * l) / e;
        };
        for (std::int64_t i = 0; i < geom.per_axis(); ++i) {
            const double lo = (static_cast<double>(geom.root.coords[0] * geom.per_axis() + i)) * h;
            const double hi = lo + h;
            double integral;
            if (lo >= c) integral = from(lo - c, h);
            else if (hi <= c) integral = from(c - hi, h);
            else integral = from(0.0, c - lo) + from(0.0, hi - c);
            v[static_cast<std::size_t>(i)] = beta == 0.0 ? 1.0 : integral / h;
        }
    } else {
        for (std::size_t k = 0; k < v.size(); ++k) {
            const auto c = geom.cell_of(k);
            const double dx = geom.midpoint(0, c[0]) - center[0];
            const double dy = geom.midpoint(1, c[1]) - center[1];
            const double r = std::hypot(dx, dy);
            detail::require(r > 0.0 || beta >= 0.0, "power weight: cell midpoint sits on the singular center");
            v[k] = beta == 0.0 ? 1.0 : std::pow(r, beta);
        }
    }
    for (double x : v) detail::require(x > 0.0 && std::isfinite(x), "power weight: non-positive or non-finite cell value");
    return GridFunction(geom, std::move(v), Sign::pos);
}

/// Exponents of a synthetic power-weight system: v = |x - c|^(-beta),
/// w_i = |x - c|^(gamma_i).
struct PowerDescriptor {
    double beta = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    std::array<double, 2> center{0.0, 0.0};
};

struct WeightSystem {
    GridFunction v, w1, w2;
    std::optional<PowerDescriptor> synthetic;

    static WeightSystem from_powers(const PowerDescriptor& d, const GridGeometry& g)
    {
        WeightSystem ws{power_weight(-d.beta, d.center, g), power_weight(d.gamma1, d.center, g),
                        power_weight(d.gamma2, d.center, g), d};
        return ws;
    }

    static WeightSystem unit(const GridGeometry& g)
    {
        return {GridFunction::constant(g, 1.0, Sign::pos), GridFunction::constant(g, 1.0, Sign::pos),
                GridFunction::constant(g, 1.0, Sign::pos), std::nullopt};
    }

    void validate() const
    {
        require_same_grid(v, w1);
        require_same_grid(v, w2);
        for (const GridFunction* f : {&v, &w1, &w2})
            for (double x : f->values) detail::require(x > 0.0, "weights must be strictly positive");
    }

    const GridGeometry& geom() const { return v.geom; }
};

enum class CharVariant { two_weight_s_lt_1, two_weight_s_ge_1, remark, one_weight_s_lt_1, one_weight_s_ge_1, testing };

inline const char* variant_name(CharVariant v)
{
    switch (v) {
    case CharVariant::two_weight_s_lt_1: return "two-weight-s<1";
    case CharVariant::two_weight_s_ge_1: return "two-weight-s>=1";
    case CharVariant::remark: return "remark";
    case CharVariant::one_weight_s_lt_1: return "one-weight-s<1";
    case CharVariant::one_weight_s_ge_1: return "one-weight-s>=1";
    default: return "testing";
    }
}

inline double conjugate(double x)
{
    detail::require(x > 1.0, "conjugate exponent needs x > 1");
    return x / (x - 1.0);
}

struct CharParams {
    double alpha = 0.5;
    int n = 1;
    double q1 = 2, q2 = 2, q = 1, p = 1, s = 1, t = 1;
    double r = std::numeric_limits<double>::infinity();
    double a = 1.1;
    CharVariant variant = CharVariant::two_weight_s_lt_1;

    double inv_r() const { return std::isinf(r) ? 0.0 : 1.0 / r; }

    /// Relations and side conditions of the variant; throws parameter_error
    /// naming the first violated one.
    void validate() const
    {
        auto close = [](double x, double y) { return std::fabs(x - y) <= 1e-12 * std::max({1.0, std::fabs(x), std::fabs(y)}); };
        detail::require(n == 1 || n == 2, "n must be 1 or 2");
        detail::require(q1 > 1 && q2 > 1 && std::isfinite(q1) && std::isfinite(q2), "1 < q1, q2 < inf violated");
        detail::require(close(1.0 / q, 1.0 / q1 + 1.0 / q2), "1/q != 1/q1 + 1/q2");
        detail::require(r > 0, "r must be positive");
        if (variant == CharVariant::testing) return;
        detail::require(t > 0 && s > 0 && p > 0, "s, t, p must be positive");
        if (variant == CharVariant::remark) {
            detail::require(s < 1, "remark constant requires 0 < s < 1");
            detail::require(a > 1 && a < std::min(q1, q2), "1 < a < min(q1, q2) violated");
            return;
        }
        detail::require(close(t / s, q / p), "t/s != q/p");
        detail::require(t <= 1, "0 < t <= 1 violated");
        detail::require(t <= s, "t <= s violated");
        const bool one = variant == CharVariant::one_weight_s_lt_1 || variant == CharVariant::one_weight_s_ge_1;
        const bool small = variant == CharVariant::two_weight_s_lt_1 || variant == CharVariant::one_weight_s_lt_1;
        if (one) {
            detail::require(std::isinf(r), "one-weight constant requires r = inf");
            detail::require(a > 1, "a > 1 violated");
        }
        if (small) {
            detail::require(s < 1, "this variant requires 0 < s < 1");
            if (!one) {
                detail::require(s / (1 - s) < r, "s/(1-s) < r violated");
                detail::require(a > 1 && a < std::min({r * (1 - s) / s, q1, q2}), "1 < a < min(r(1-s)/s, q1, q2) violated");
            }
        } else {
            detail::require(s >= 1, "this variant requires s >= 1");
            if (!one) detail::require(a > 1 && a < std::min(q1, q2), "1 < a < min(q1, q2) violated");
        }
    }

    /// Exponent of |Q| / |Q'| in the nested-pair constants.
    double ratio_exponent() const
    {
        const bool small = variant == CharVariant::two_weight_s_lt_1 || variant == CharVariant::one_weight_s_lt_1;
        return small ? (1 - s) / (a * s) : (1 - a * s) / (a * s);
    }

    /// Dual exponent applied to w_i^(-.) in the Q' averages.
    double dual(int i) const
    {
        const double qi = i == 1 ? q1 : q2;
        switch (variant) {
        case CharVariant::one_weight_s_lt_1:
        case CharVariant::one_weight_s_ge_1:
        case CharVariant::testing: return conjugate(qi);
        default: return conjugate(qi / a);
        }
    }
};

struct CharacteristicReport {
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();
    std::size_t inner = 0; ///< index of Q in the family
    std::size_t outer = 0; ///< index of Q' (equals inner for single-cube constants)
    FamilyEntry q{}, q_outer{};
    std::size_t pairs_scanned = 0;
    bool truncated = false; ///< pair budget reached before the scan finished
    bool overflow = false;  ///< log value above 700, value reported as +inf
};

namespace detail {

inline void finish(CharacteristicReport& r, const CubeFamily& fam)
{
    r.q = fam[r.inner];
    r.q_outer = fam[r.outer];
    if (r.log_value > 700.0) {
        r.overflow = true;
        r.value = std::numeric_limits<double>::infinity();
    } else {
        r.value = std::exp(r.log_value);
    }
}

inline void check_family(const CubeFamily& fam, const GridGeometry& g)
{
    detail::require(fam.size() > 0, "cube family is empty");
    detail::require(fam.geom == g, "family and weights live on different grids");
    for (const auto& e : fam.entries)
        detail::require(!e.box.clipped, "characteristic families must not contain clipped cubes");
}

/// max over nested pairs inner <= outer of a[inner] + b[outer]; pairs are
/// visited outer coarsest first, then inner in family order.
inline CharacteristicReport nested_scan(const CubeFamily& fam, const std::vector<double>& a,
                                        const std::vector<double>& b, std::size_t budget)
{
    CharacteristicReport r;
    for (std::size_t j = 0; j < fam.size() && !r.truncated; ++j) {
        if (b[j] == -std::numeric_limits<double>::infinity()) continue;
        const auto& outer = fam[j].box;
        for (std::size_t i = 0; i < fam.size(); ++i) {
            if (!outer.contains(fam[i].box)) continue;
            if (++r.pairs_scanned > budget) {
                r.truncated = true;
                --r.pairs_scanned;
                break;
            }
            const double v = a[i] + b[j];
            if (v > r.log_value) {
                r.log_value = v;
                r.inner = i;
                r.outer = j;
            }
        }
    }
    finish(r, fam);
    return r;
}

inline CharacteristicReport single_scan(const CubeFamily& fam, const std::vector<double>& c)
{
    CharacteristicReport r;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        ++r.pairs_scanned;
        if (c[i] > r.log_value) {
            r.log_value = c[i];
            r.inner = r.outer = i;
        }
    }
    finish(r, fam);
    return r;
}

inline double v_exponent(double t)
{
    return t >= 1.0 ? std::numeric_limits<double>::infinity() : t / (1.0 - t);
}

/// Per-cube log factors of a characteristic. Evaluating them for a single
/// pair reproduces the scanned value bit for bit.
struct CharFactors {
    CharParams cp;
    LogPowerTable v_tab, w1_tab, w2_tab;
    double e1 = 1, e2 = 1;
    double log_cell = 0;

    CharFactors(const WeightSystem& ws, const CharParams& p) : cp(p)
    {
        e1 = cp.dual(1);
        e2 = cp.dual(2);
        double pv;
        switch (cp.variant) {
        case CharVariant::remark: pv = cp.a * cp.s / (1 - cp.s); break;
        case CharVariant::testing: pv = -std::numeric_limits<double>::infinity(); break;
        default: pv = v_exponent(cp.t);
        }
        v_tab = LogPowerTable(ws.v, pv);
        w1_tab = LogPowerTable(ws.w1, -e1);
        w2_tab = LogPowerTable(ws.w2, -e2);
        log_cell = std::log(ws.geom().cell_volume());
    }

    double log_volume(const AlignedBox& b) const { return std::log(static_cast<double>(b.cells())) + log_cell; }
    double log_v(const AlignedBox& b) const { return v_tab.log_power_mean(b); }
    /// log of prod_i (avg w_i^(-e_i))^(1/e_i).
    double log_w(const AlignedBox& b) const { return -w1_tab.log_power_mean(b) - w2_tab.log_power_mean(b); }

    bool nested() const
    {
        return cp.variant != CharVariant::remark && cp.variant != CharVariant::testing;
    }

    double inner_term(const AlignedBox& b) const { return cp.ratio_exponent() * log_volume(b) + log_v(b); }

    double outer_term(const AlignedBox& b) const
    {
        return (cp.inv_r() - cp.ratio_exponent()) * log_volume(b) + log_w(b);
    }

    double single_term(const AlignedBox& b) const { return cp.inv_r() * log_volume(b) + log_v(b) + log_w(b); }

    double pair_log(const AlignedBox& q, const AlignedBox& qp) const
    {
        return nested() ? inner_term(q) + outer_term(qp) : single_term(q);
    }
};

} // namespace detail

/// Generic characteristic over a family, dispatching on the variant.
inline CharacteristicReport characteristic(const WeightSystem& ws, const CharParams& cp, const CubeFamily& fam,
                                           std::size_t pair_budget = 50'000'000)
{
    ws.validate();
    cp.validate();
    detail::check_family(fam, ws.geom());
    const detail::CharFactors cf(ws, cp);
    if (!cf.nested()) {
        std::vector<double> c(fam.size());
        detail::parallel_for(fam.size(), [&](std::size_t i) { c[i] = cf.single_term(fam[i].box); });
        return detail::single_scan(fam, c);
    }
    std::vector<double> a(fam.size()), b(fam.size());
    detail::parallel_for(fam.size(), [&](std::size_t i) {
        a[i] = cf.inner_term(fam[i].box);
        b[i] = cf.outer_term(fam[i].box);
    });
    return detail::nested_scan(fam, a, b, pair_budget);
}

/// Recomputes the defining product at one (Q, Q') pair from fresh tables.
inline double characteristic_at(const WeightSystem& ws, const CharParams& cp, const AlignedBox& q,
                                const AlignedBox& q_outer)
{
    const detail::CharFactors cf(ws, cp);
    return std::exp(cf.pair_log(q, q_outer));
}

/// Nested-pair constant with the (q_i/a)' duals; variant must be one of the two-weight ones.
inline CharacteristicReport char_two_weight(const WeightSystem& ws, const CharParams& cp, const CubeFamily& fam,
                                            std::size_t pair_budget = 50'000'000)
{
    detail::require(cp.variant == CharVariant::two_weight_s_lt_1 || cp.variant == CharVariant::two_weight_s_ge_1,
                    "char_two_weight needs a two-weight variant");
    return characteristic(ws, cp, fam, pair_budget);
}

/// Single-cube constant |Q|^(1/r) (avg v^(as/(1-s)))^((1-s)/(as)) prod (avg w_i^(-(q_i/a)'))^(1/(q_i/a)').
inline CharacteristicReport char_remark(const WeightSystem& ws, CharParams cp, const CubeFamily& fam)
{
    detail::require(cp.s < 1, "remark constant requires s < 1");
    cp.variant = CharVariant::remark;
    return characteristic(ws, cp, fam);
}

/// One-weight constant: r = inf, duals q_i', and v must equal w1 w2.
inline CharacteristicReport char_one_weight(const WeightSystem& ws, CharParams cp, const CubeFamily& fam,
                                            std::size_t pair_budget = 50'000'000)
{
    ws.validate();
    for (std::size_t i = 0; i < ws.v.size(); ++i) {
        const double prod = ws.w1[i] * ws.w2[i];
        detail::require(std::fabs(ws.v[i] - prod) <= 1e-12 * std::max(std::fabs(prod), 1e-300),
                        "one-weight constant requires v = w1 * w2 pointwise");
    }
    if (cp.variant != CharVariant::one_weight_s_ge_1) cp.variant = CharVariant::one_weight_s_lt_1;
    cp.variant = cp.s < 1 ? CharVariant::one_weight_s_lt_1 : CharVariant::one_weight_s_ge_1;
    cp.r = std::numeric_limits<double>::infinity();
    return characteristic(ws, cp, fam, pair_budget);
}

/// sup_Q |Q|^(1/r) (min_Q v) prod (avg_Q w_i^(-q_i'))^(1/q_i').
inline CharacteristicReport char_testing(const WeightSystem& ws, CharParams cp, const CubeFamily& fam)
{
    cp.variant = CharVariant::testing;
    return characteristic(ws, cp, fam);
}

/// sup_Q (avg w) (avg w^(1-p'))^(p-1).
inline CharacteristicReport ap_characteristic(const GridFunction& w, double p, const CubeFamily& fam)
{
    detail::require(p > 1, "A_p constant requires p > 1");
    for (double x : w.values) detail::require(x > 0.0, "A_p weight must be positive");
    detail::check_family(fam, w.geom);
    const LogPowerTable t1(w, 1.0);
    const double e = 1.0 - conjugate(p);
    const LogPowerTable t2(w, e);
    std::vector<double> c(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) c[i] = t1.log_mean(fam[i].box) + (p - 1.0) * t2.log_mean(fam[i].box);
    return detail::single_scan(fam, c);
}

/// W(x) = sup over family cubes Q containing x of |Q|^(1/r) (avg_Q w^(s/(1-s)))^((1-s)/s).
inline GridFunction fs_majorant(const GridFunction& w, double r, double s, const CubeFamily& fam)
{
    detail::require(s > 0.0 && s < 1.0, "Fefferman-Stein majorant requires 0 < s < 1");
    detail::require(r > 0.0, "r must be positive");
    for (double x : w.values) detail::require(x > 0.0, "weight must be positive");
    detail::check_family(fam, w.geom);
    const LogPowerTable tw(w, s / (1.0 - s));
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    const double log_cell = std::log(w.geom.cell_volume());
    GridFunction out = detail::scatter_sup(fam, [&](std::size_t i) {
        const auto& b = fam[i].box;
        return std::exp(inv_r * (std::log(static_cast<double>(b.cells())) + log_cell) + tw.log_power_mean(b));
    });
    out.sign = Sign::pos;
    return out;
}

} // namespace morrey
