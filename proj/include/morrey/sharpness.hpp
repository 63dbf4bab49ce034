#pragma once

#include "csv.hpp"
#include "family.hpp"
#include "norms.hpp"
#include "operators.hpp"
#include "profiles.hpp"

#include <cmath>
#include <vector>

namespace morrey {

/// Lattice pair at delta = 2^-m on the unit root: N = floor(delta^(q1/p1 - 1))
/// cubes Q_j of side delta centred at (j + 1/2)/N snapped to the cell
/// lattice, f = delta^(-n/p1) and g = delta^(-n/p2) on the union of the 3Q_j.
struct SharpnessPair {
    GridFunction f, g;
    std::int64_t lattice = 0; ///< N per axis
    std::vector<AlignedBox> cubes;   ///< the Q_j
    std::vector<AlignedBox> triples; ///< the 3Q_j
};

/// Cells have side delta/2 (grid depth m + 1).
inline SharpnessPair build_sharpness_pair(const ExponentProfile& prof, int m)
{
    detail::require(m >= 1 && m <= 20, "delta exponent m must lie in [1, 20]");
    const int n = prof.n;
    const double delta = std::ldexp(1.0, -m);
    const double q1p1 = prof.d("q1") / prof.d("p1");
    const auto lattice = static_cast<std::int64_t>(std::floor(std::pow(delta, q1p1 - 1.0) * (1.0 + 1e-12)));
    if (lattice < 1 || 3.0 * delta * static_cast<double>(lattice) > 1.0)
        throw numerical_error("delta = 2^-" + std::to_string(m) + " is unresolvable: 3 delta N > 1 with N = " +
                              std::to_string(lattice));
    const GridGeometry geom{DyadicCube{n, 0, {0, 0}}, m + 1};
    const std::int64_t cells = geom.per_axis();
    // Centre (j + 1/2)/N on the cell-boundary lattice: index of the boundary nearest the centre.
    std::vector<std::int64_t> centre(static_cast<std::size_t>(lattice));
    for (std::int64_t j = 0; j < lattice; ++j)
        centre[j] = static_cast<std::int64_t>(std::llround((static_cast<double>(j) + 0.5) / static_cast<double>(lattice) *
                                                           static_cast<double>(cells)));
    SharpnessPair sp;
    sp.lattice = lattice;
    std::vector<double> mask(static_cast<std::size_t>(geom.cell_count()), 0.0);
    const std::int64_t per = lattice;
    const std::int64_t count = n == 2 ? per * per : per;
    for (std::int64_t k = 0; k < count; ++k) {
        const std::int64_t j0 = n == 2 ? k / per : k;
        const std::int64_t j1 = n == 2 ? k % per : 0;
        AlignedBox q{n, {0, 0}, {1, 1}, false, 0.0}, t = q;
        for (int a = 0; a < n; ++a) {
            const std::int64_t c = centre[a == 0 ? j0 : j1];
            q.lo[a] = c - 1;
            q.hi[a] = c + 1;
            t.lo[a] = std::max<std::int64_t>(c - 3, 0);
            t.hi[a] = std::min<std::int64_t>(c + 3, cells);
        }
        q.nominal_cells = static_cast<double>(q.cells());
        t.nominal_cells = std::pow(3.0, n) * q.nominal_cells;
        t.clipped = t.cells() != q.cells() * (n == 2 ? 9 : 3);
        sp.cubes.push_back(q);
        sp.triples.push_back(t);
        for (std::int64_t i = t.lo[0]; i < t.hi[0]; ++i)
            for (std::int64_t jj = t.lo[1]; jj < t.hi[1]; ++jj) mask[geom.index(i, jj)] = 1.0;
    }
    std::vector<double> fv(mask.size()), gv(mask.size());
    const double hf = std::pow(delta, -n / prof.d("p1"));
    const double hg = std::pow(delta, -n / prof.d("p2"));
    for (std::size_t i = 0; i < mask.size(); ++i) {
        fv[i] = hf * mask[i];
        gv[i] = hg * mask[i];
    }
    sp.f = GridFunction(geom, std::move(fv), Sign::nonneg);
    sp.g = GridFunction(geom, std::move(gv), Sign::nonneg);
    return sp;
}

struct SharpnessRow {
    int m = 0;
    double delta = 0.0;
    std::int64_t lattice = 0;
    double min_pointwise = 0.0; ///< min of B_alpha(f, g) over the union of the Q_j
    double floor = 0.0;         ///< delta^(-n/s)
    double norm_f = 0.0, norm_g = 0.0;             ///< over every aligned cube
    double norm_f_small = 0.0, norm_g_small = 0.0; ///< over aligned cubes with side <= 3 delta
    double bound_f = 0.0, bound_g = 0.0;           ///< 3^(n/p_i)
    double norm_b = 0.0;                           ///< ||B_alpha(f, g)||_{M^s_t} over the dyadic family
    double slope = 0.0;                            ///< least-squares slope of log norm_b vs log delta so far
    double support = 0.0;                          ///< measure of the union of the Q_j
};

struct SharpnessResult {
    std::vector<SharpnessRow> rows;
    double slope = 0.0;
    double predicted = 0.0; ///< n (q1/p1 - t/s) / t
    bool blowup_branch = true;

    Table table() const
    {
        Table t{{"m", "delta", "N", "min_pointwise", "floor", "norm_f", "norm_f_small", "bound_f", "norm_g",
                 "norm_g_small", "bound_g", "norm_b", "slope_so_far"},
                {}};
        for (const auto& r : rows)
            t.add({fmt(r.m), fmt(r.delta), fmt(static_cast<long long>(r.lattice)), fmt(r.min_pointwise), fmt(r.floor),
                   fmt(r.norm_f), fmt(r.norm_f_small), fmt(r.bound_f), fmt(r.norm_g), fmt(r.norm_g_small),
                   fmt(r.bound_g), fmt(r.norm_b), fmt(r.slope)});
        return t;
    }
};

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double k = static_cast<double>(x.size());
    if (x.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

namespace detail {
inline double sup_with_side_cap(const MorreyEvaluator& ev, const CubeFamily& fam, std::int64_t max_side)
{
    double best = 0.0;
    for (std::size_t i = 0; i < fam.size(); ++i)
        if (fam[i].box.extent(0) <= max_side) best = std::max(best, ev.at(fam[i].box));
    return best;
}
} // namespace detail

/// Runs the lattice construction for delta = 2^-m, m in ms.
inline SharpnessResult run_sharpness(const ExponentProfile& prof, const std::vector<int>& ms)
{
    ExponentProfile p = prof;
    p.theorem = "sharp";
    validate_profile(p);
    detail::require(!ms.empty(), "delta schedule is empty");
    const int n = p.n;
    const double alpha = p.d("alpha"), s = p.d("s"), t = p.d("t");
    SharpnessResult res;
    res.blowup_branch = p.get("t") / p.get("s") > p.get("q1") / p.get("p1");
    res.predicted = n * (p.d("q1") / p.d("p1") - t / s) / t;
    std::vector<double> lx, ly;
    for (int m : ms) {
        const SharpnessPair sp = build_sharpness_pair(p, m);
        SharpnessRow row;
        row.m = m;
        row.delta = std::ldexp(1.0, -m);
        row.lattice = sp.lattice;
        row.floor = std::pow(row.delta, -n / s);
        const GridFunction b = b_alpha(sp.f, sp.g, KernelSpec{alpha, n});
        const GridGeometry& geom = sp.f.geom;
        double mn = std::numeric_limits<double>::infinity();
        for (const auto& q : sp.cubes)
            for (std::int64_t i = q.lo[0]; i < q.hi[0]; ++i)
                for (std::int64_t j = q.lo[1]; j < q.hi[1]; ++j) mn = std::min(mn, b.at(i, j));
        row.min_pointwise = mn;
        const CubeFamily all = all_aligned_family(geom);
        const MorreyEvaluator ef(sp.f, p.d("p1"), p.d("q1")), eg(sp.g, p.d("p2"), p.d("q2"));
        row.norm_f = ef.sup(all).value;
        row.norm_g = eg.sup(all).value;
        row.norm_f_small = detail::sup_with_side_cap(ef, all, 6);
        row.norm_g_small = detail::sup_with_side_cap(eg, all, 6);
        row.bound_f = std::pow(3.0, n / p.d("p1"));
        row.bound_g = std::pow(3.0, n / p.d("p2"));
        row.norm_b = morrey_norm(b, s, t, dyadic_family(geom)).value;
        row.support = static_cast<double>(sp.cubes.size()) * std::pow(row.delta, n);
        lx.push_back(std::log(row.delta));
        ly.push_back(std::log(row.norm_b));
        row.slope = least_squares_slope(lx, ly);
        res.rows.push_back(row);
    }
    res.slope = res.rows.back().slope;
    return res;
}

} // namespace morrey
