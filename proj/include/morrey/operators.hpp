#pragma once

#include "detail/parallel.hpp"
#include "family.hpp"
#include "grid.hpp"
#include "kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <vector>

namespace morrey {

// Operator outputs are GridFunctions on the input grid, sampled at cell
// midpoints. A y-cell centred at j*h maps midpoints to midpoints, so
// f(x - y) and g(x + y) are constant on it and each sum below is the exact
// integral for step data, up to the kernel cell integrals.

namespace detail {
inline Sign product_sign(const GridFunction& f, const GridFunction& g)
{
    return (f.sign != Sign::none && g.sign != Sign::none) ? Sign::nonneg : Sign::none;
}

inline KernelTable table_for(const KernelSpec& k, const GridGeometry& g)
{
    detail::require(k.dim == g.dim(), "kernel dimension differs from grid dimension");
    return KernelTable(k, g.cell_side(), g.per_axis());
}

/// Length of [(|j| - 1/2) h, (|j| + 1/2) h] inside [-d, d].
inline double overlap(std::int64_t j, double d, double h)
{
    const double a = std::fabs(static_cast<double>(j));
    const double lo = std::max((a - 0.5) * h, -d);
    const double hi = std::min((a + 0.5) * h, d);
    return std::max(0.0, hi - lo);
}
} // namespace detail

/// I_alpha f(x) = integral of f(y) |x - y|^(alpha - n) dy.
inline GridFunction i_alpha(const GridFunction& f, const KernelTable& kt)
{
    const auto& g = f.geom;
    const std::int64_t n = g.per_axis();
    std::vector<double> out(f.size(), 0.0);
    detail::parallel_for(f.size(), [&](std::size_t idx) {
        const auto c = g.cell_of(idx);
        long double s = 0.0L;
        if (g.dim() == 1) {
            for (std::int64_t k = 0; k < n; ++k) s += f.at(k) * kt(c[0] - k);
        } else {
            for (std::int64_t a = 0; a < n; ++a)
                for (std::int64_t b = 0; b < n; ++b) s += f.at(a, b) * kt(c[0] - a, c[1] - b);
        }
        out[idx] = static_cast<double>(s);
    });
    return GridFunction(g, std::move(out), f.sign == Sign::none ? Sign::none : Sign::nonneg);
}

inline GridFunction i_alpha(const GridFunction& f, const KernelSpec& k)
{
    k.validate();
    return i_alpha(f, detail::table_for(k, f.geom));
}

/// B_alpha(f, g)(x) = integral of f(x - y) g(x + y) |y|^(alpha - n) dy.
inline GridFunction b_alpha(const GridFunction& f, const GridFunction& g, const KernelTable& kt)
{
    require_same_grid(f, g);
    const auto& geo = f.geom;
    const std::int64_t n = geo.per_axis();
    std::vector<double> out(f.size(), 0.0);
    detail::parallel_for(f.size(), [&](std::size_t idx) {
        const auto c = geo.cell_of(idx);
        long double s = 0.0L;
        if (geo.dim() == 1) {
            const std::int64_t r = std::min(c[0], n - 1 - c[0]);
            for (std::int64_t j = -r; j <= r; ++j) s += f.at(c[0] - j) * g.at(c[0] + j) * kt(j);
        } else {
            const std::int64_t r0 = std::min(c[0], n - 1 - c[0]);
            const std::int64_t r1 = std::min(c[1], n - 1 - c[1]);
            for (std::int64_t a = -r0; a <= r0; ++a)
                for (std::int64_t b = -r1; b <= r1; ++b)
                    s += f.at(c[0] - a, c[1] - b) * g.at(c[0] + a, c[1] + b) * kt(a, b);
        }
        out[idx] = static_cast<double>(s);
    });
    return GridFunction(geo, std::move(out), detail::product_sign(f, g));
}

inline GridFunction b_alpha(const GridFunction& f, const GridFunction& g, const KernelSpec& k)
{
    k.validate();
    require_same_grid(f, g);
    return b_alpha(f, g, detail::table_for(k, f.geom));
}

/// B_d(f, g)(x) = integral over |y|_inf <= d of f(x - y) g(x + y) dy.
inline GridFunction b_truncated(const GridFunction& f, const GridFunction& g, double d)
{
    require_same_grid(f, g);
    detail::require(d > 0.0, "truncation radius d must be positive");
    const auto& geo = f.geom;
    const double h = geo.cell_side();
    const std::int64_t n = geo.per_axis();
    const auto reach = static_cast<std::int64_t>(std::ceil(d / h + 0.5));
    std::vector<double> out(f.size(), 0.0);
    detail::parallel_for(f.size(), [&](std::size_t idx) {
        const auto c = geo.cell_of(idx);
        long double s = 0.0L;
        if (geo.dim() == 1) {
            const std::int64_t r = std::min({c[0], n - 1 - c[0], reach});
            for (std::int64_t j = -r; j <= r; ++j) {
                const double w = detail::overlap(j, d, h);
                if (w > 0.0) s += f.at(c[0] - j) * g.at(c[0] + j) * w;
            }
        } else {
            const std::int64_t r0 = std::min({c[0], n - 1 - c[0], reach});
            const std::int64_t r1 = std::min({c[1], n - 1 - c[1], reach});
            for (std::int64_t a = -r0; a <= r0; ++a) {
                const double wa = detail::overlap(a, d, h);
                if (wa <= 0.0) continue;
                for (std::int64_t b = -r1; b <= r1; ++b) {
                    const double wb = detail::overlap(b, d, h);
                    if (wb > 0.0) s += f.at(c[0] - a, c[1] - b) * g.at(c[0] + a, c[1] + b) * wa * wb;
                }
            }
        }
        out[idx] = static_cast<double>(s);
    });
    return GridFunction(geo, std::move(out), detail::product_sign(f, g));
}

namespace detail {
/// For one target cell, B_D(x) for D = 2^m cells, m = 0..levels-1, from
/// shell sums: cells strictly inside the D-cube count fully, cells on its
/// boundary shell count half per boundary axis.
inline void dyadic_truncations(const GridFunction& f, const GridFunction& g, std::array<std::int64_t, 2> c,
                               int levels, std::vector<double>& out)
{
    const auto& geo = f.geom;
    const std::int64_t n = geo.per_axis();
    const std::int64_t top = std::int64_t{1} << (levels - 1);
    out.assign(static_cast<std::size_t>(levels), 0.0);
    if (geo.dim() == 1) {
        const std::int64_t r = std::min({c[0], n - 1 - c[0], top});
        std::vector<long double> shell(static_cast<std::size_t>(top + 1), 0.0L);
        for (std::int64_t j = -r; j <= r; ++j)
            shell[static_cast<std::size_t>(std::llabs(j))] += f.at(c[0] - j) * g.at(c[0] + j);
        long double inner = 0.0L;
        std::int64_t m = 0;
        for (int lv = 0; lv < levels; ++lv) {
            const std::int64_t d = std::int64_t{1} << lv;
            while (m < d) inner += shell[static_cast<std::size_t>(m++)];
            out[lv] = static_cast<double>((inner + 0.5L * shell[static_cast<std::size_t>(d)]) * geo.cell_volume());
        }
        return;
    }
    const std::int64_t r0 = std::min({c[0], n - 1 - c[0], top});
    const std::int64_t r1 = std::min({c[1], n - 1 - c[1], top});
    std::vector<long double> edge(static_cast<std::size_t>(top + 1), 0.0L);
    std::vector<long double> corner(static_cast<std::size_t>(top + 1), 0.0L);
    for (std::int64_t a = -r0; a <= r0; ++a)
        for (std::int64_t b = -r1; b <= r1; ++b) {
            const long double p = f.at(c[0] - a, c[1] - b) * g.at(c[0] + a, c[1] + b);
            const std::int64_t aa = std::llabs(a), bb = std::llabs(b);
            if (aa == bb) corner[static_cast<std::size_t>(aa)] += p;
            else edge[static_cast<std::size_t>(std::max(aa, bb))] += p;
        }
    long double inner = 0.0L;
    std::int64_t m = 0;
    for (int lv = 0; lv < levels; ++lv) {
        const std::int64_t d = std::int64_t{1} << lv;
        while (m < d) {
            inner += edge[static_cast<std::size_t>(m)] + corner[static_cast<std::size_t>(m)];
            ++m;
        }
        const long double s = inner + 0.5L * edge[static_cast<std::size_t>(d)] + 0.25L * corner[static_cast<std::size_t>(d)];
        out[lv] = static_cast<double>(s * geo.cell_volume());
    }
}
} // namespace detail

struct DyadicModel {
    /// sum over Q in D(Q0), x in Q, l(Q) >= cell side of |Q|^(alpha/n - 1) B_{l(Q)}(f, g)(x)
    GridFunction field;
    /// exact value of the omitted terms with l(Q) < cell side (they only see
    /// the cell containing x): 2^n h^alpha f(x) g(x) / (2^alpha - 1)
    GridFunction tail;
};

/// Dyadic model of B_alpha localized to Q0; zero outside Q0.
inline DyadicModel b_alpha_dyadic(const GridFunction& f, const GridFunction& g, const KernelSpec& k,
                                  const DyadicCube& q0)
{
    k.validate();
    require_same_grid(f, g);
    const auto& geo = f.geom;
    detail::require(k.dim == geo.dim(), "kernel dimension differs from grid dimension");
    detail::require(geo.resolves(q0), "Q0 " + q0.str() + " must be a dyadic cube inside the grid root");
    const AlignedBox box = geo.box_of(q0);
    const int levels = q0.level - geo.cell_level() + 1;
    const int nd = geo.dim();
    const double h = geo.cell_side();
    std::vector<double> coef(static_cast<std::size_t>(levels));
    for (int lv = 0; lv < levels; ++lv) {
        const double side = std::ldexp(h, lv);
        coef[lv] = std::pow(side, k.alpha - nd); // |Q|^(alpha/n - 1)
    }
    std::vector<double> out(f.size(), 0.0), tail(f.size(), 0.0);
    const double tail_coef = std::ldexp(std::pow(h, k.alpha), nd) / (std::pow(2.0, k.alpha) - 1.0);
    detail::parallel_for(f.size(), [&](std::size_t idx) {
        const auto c = geo.cell_of(idx);
        if (!box.contains_cell(c[0], c[1])) return;
        std::vector<double> bd;
        detail::dyadic_truncations(f, g, c, levels, bd);
        long double s = 0.0L;
        for (int lv = 0; lv < levels; ++lv) s += coef[lv] * bd[lv];
        out[idx] = static_cast<double>(s);
        tail[idx] = tail_coef * f[idx] * g[idx];
    });
    const Sign sg = detail::product_sign(f, g);
    return {GridFunction(geo, std::move(out), sg), GridFunction(geo, std::move(tail), sg)};
}

namespace detail {
/// out[x] = max over entries containing x of value(entry).
template <class Value>
GridFunction scatter_sup(const CubeFamily& fam, Value&& value)
{
    const auto& g = fam.geom;
    std::vector<double> per(fam.size());
    detail::parallel_for(fam.size(), [&](std::size_t i) { per[i] = value(i); });
    std::vector<double> out(static_cast<std::size_t>(g.cell_count()), 0.0);
    for (std::size_t e = 0; e < fam.size(); ++e) {
        const auto& b = fam[e].box;
        const double v = per[e];
        if (g.dim() == 1) {
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i) out[i] = std::max(out[i], v);
        } else {
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i)
                for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j) {
                    double& o = out[g.index(i, j)];
                    o = std::max(o, v);
                }
        }
    }
    return GridFunction(g, std::move(out), Sign::nonneg);
}

inline std::vector<double> family_sides(const CubeFamily& fam)
{
    std::set<std::int64_t> sides;
    for (const auto& e : fam.entries) sides.insert(e.box.extent(0));
    std::vector<double> d;
    for (auto s : sides) d.push_back(static_cast<double>(s) * fam.geom.cell_side());
    return d;
}
} // namespace detail

/// Bilinear fractional maximal function: max over d = l(Q)/2, l(Q) a side
/// length occurring in the family, of (2d)^(alpha - n) B_d(|f|, |g|)(x).
inline GridFunction m_alpha_bilinear(const GridFunction& f, const GridFunction& g, double alpha,
                                     const CubeFamily& fam)
{
    require_same_grid(f, g);
    detail::require(alpha >= 0.0 && alpha < f.geom.dim(), "maximal exponent alpha must lie in [0, n)");
    detail::require(fam.geom == f.geom, "family and functions live on different grids");
    std::vector<double> af(f.size()), ag(g.size());
    for (std::size_t i = 0; i < af.size(); ++i) {
        af[i] = std::fabs(f[i]);
        ag[i] = std::fabs(g[i]);
    }
    const GridFunction fa(f.geom, std::move(af), Sign::nonneg), ga(g.geom, std::move(ag), Sign::nonneg);
    std::vector<double> out(f.size(), 0.0);
    for (double side : detail::family_sides(fam)) {
        const double d = 0.5 * side;
        const GridFunction bd = b_truncated(fa, ga, d);
        const double c = std::pow(side, alpha - f.geom.dim());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], c * bd[i]);
    }
    return GridFunction(f.geom, std::move(out), Sign::nonneg);
}

/// sup over family cubes Q containing x of |Q|^(alpha/n) (avg_Q |f|^r1)^(1/r1) (avg_Q |g|^r2)^(1/r2).
inline GridFunction m_alpha_vector(const GridFunction& f, const GridFunction& g, double alpha, double r1, double r2,
                                   const CubeFamily& fam)
{
    require_same_grid(f, g);
    detail::require(r1 > 0.0 && r2 > 0.0, "maximal exponents r1, r2 must be positive");
    detail::require(alpha >= 0.0, "alpha must be nonnegative");
    detail::require(fam.geom == f.geom, "family and functions live on different grids");
    const PrefixTable tf(f.geom, abs_power(f, r1)), tg(g.geom, abs_power(g, r2));
    const int nd = f.geom.dim();
    return detail::scatter_sup(fam, [&](std::size_t i) {
        const auto& b = fam[i].box;
        const double c = static_cast<double>(b.cells());
        const double af = tf.sum(b) / c, ag = tg.sum(b) / c;
        if (af <= 0.0 || ag <= 0.0) return 0.0;
        return std::pow(fam.volume(i), alpha / nd) * std::pow(af, 1.0 / r1) * std::pow(ag, 1.0 / r2);
    });
}

/// sup over family cubes Q containing x of
/// |Q|^(alpha/n) avg_Q|f| avg_Q|g| (avg_Q v^(t/(1-t)))^((1-t)/t), with max_Q v at t = 1.
inline GridFunction m_tilde(const GridFunction& f, const GridFunction& g, const GridFunction& v, double alpha,
                            double t, const CubeFamily& fam)
{
    require_same_grid(f, g);
    require_same_grid(f, v);
    detail::require(t > 0.0 && t <= 1.0, "m_tilde requires 0 < t <= 1");
    detail::require(alpha >= 0.0, "alpha must be nonnegative");
    detail::require(fam.geom == f.geom, "family and functions live on different grids");
    for (double x : v.values) detail::require(x > 0.0, "weight v must be positive");
    const PrefixTable tf(f.geom, abs_power(f, 1.0)), tg(g.geom, abs_power(g, 1.0));
    const double pv = t == 1.0 ? std::numeric_limits<double>::infinity() : t / (1.0 - t);
    const LogPowerTable lv(v, pv);
    const int nd = f.geom.dim();
    return detail::scatter_sup(fam, [&](std::size_t i) {
        const auto& b = fam[i].box;
        const double c = static_cast<double>(b.cells());
        const double af = tf.sum(b) / c, ag = tg.sum(b) / c;
        if (af <= 0.0 || ag <= 0.0) return 0.0;
        return std::exp((alpha / nd) * std::log(fam.volume(i)) + std::log(af) + std::log(ag) +
                        lv.log_power_mean(b));
    });
}

/// m_3Q(f, g) = avg_3Q f * avg_3Q g with zero extension outside the grid.
inline double m_triple_at(const PrefixTable& tf, const PrefixTable& tg, const DyadicCube& q)
{
    const AlignedBox b = triple(q, tf.geometry());
    return (tf.sum(b) / b.nominal_cells) * (tg.sum(b) / b.nominal_cells);
}

/// sup over dyadic family cubes Q containing x of avg_3Q f * avg_3Q g.
inline GridFunction m_triple_dyadic(const GridFunction& f, const GridFunction& g, const CubeFamily& fam)
{
    require_same_grid(f, g);
    detail::require(f.sign != Sign::none && g.sign != Sign::none, "M_3D requires nonnegative inputs");
    detail::require(fam.geom == f.geom, "family and functions live on different grids");
    for (const auto& e : fam.entries) detail::require(e.cube.has_value(), "M_3D needs a family of dyadic cubes");
    const PrefixTable tf(f.geom, f.values), tg(g.geom, g.values);
    return detail::scatter_sup(fam, [&](std::size_t i) { return m_triple_at(tf, tg, *fam[i].cube); });
}

} // namespace morrey
