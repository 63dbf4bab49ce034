#pragma once

#include "csv.hpp"
#include "grid.hpp"
#include "operators.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace morrey {

struct SelectedCube {
    DyadicCube cube;
    double m3q = 0.0;        ///< avg_3Q f * avg_3Q g
    std::int64_t e_cells = 0; ///< cells of Q \ D_{k+1}
};

/// Stopping-time decomposition of Q0. generations[k - 1] holds the maximal
/// cubes of D_k; label[c] is the largest k with cell c in D_k (0 for E_0,
/// -1 outside Q0).
struct StoppingFamily {
    GridGeometry geom{};
    DyadicCube q0{};
    double a = 2.0;
    std::vector<std::vector<SelectedCube>> generations;
    std::vector<int> label;
    std::int64_t e0_cells = 0;

    std::int64_t q0_cells() const { return geom.box_of(q0).cells(); }

    /// Cell mask of E_0 (k = 0) or of E_j^k.
    std::vector<bool> e_mask(int k, std::size_t j = 0) const
    {
        std::vector<bool> m(label.size(), false);
        if (k == 0) {
            for (std::size_t c = 0; c < label.size(); ++c) m[c] = label[c] == 0;
            return m;
        }
        const AlignedBox b = geom.box_of(generations.at(static_cast<std::size_t>(k - 1)).at(j).cube);
        for (std::size_t c = 0; c < label.size(); ++c) {
            const auto x = geom.cell_of(c);
            m[c] = label[c] == k && b.contains_cell(x[0], x[1]);
        }
        return m;
    }

    Table table() const
    {
        Table t{{"k", "level", "coord0", "coord1", "m3q", "e_measure"}, {}};
        t.add({"0", fmt(q0.level), fmt(static_cast<long long>(q0.coords[0])),
               fmt(static_cast<long long>(q0.coords[1])), "", fmt(static_cast<double>(e0_cells) * geom.cell_volume())});
        for (std::size_t k = 0; k < generations.size(); ++k)
            for (const auto& s : generations[k])
                t.add({fmt(static_cast<int>(k + 1)), fmt(s.cube.level), fmt(static_cast<long long>(s.cube.coords[0])),
                       fmt(static_cast<long long>(s.cube.coords[1])), fmt(s.m3q),
                       fmt(static_cast<double>(s.e_cells) * geom.cell_volume())});
        return t;
    }
};

namespace detail {

/// m_3Q for every dyadic subcube of q0, stored per level (coarsest first)
/// in row-major local coordinates.
struct TripleTree {
    DyadicCube q0;
    int dim = 1;
    std::vector<std::vector<double>> m;

    std::int64_t per_axis(int depth) const { return std::int64_t{1} << depth; }

    std::size_t slot(int depth, const DyadicCube& q) const
    {
        const std::int64_t n = per_axis(depth);
        const std::int64_t i0 = q.coords[0] - (q0.coords[0] << depth);
        const std::int64_t i1 = dim == 2 ? q.coords[1] - (q0.coords[1] << depth) : 0;
        return static_cast<std::size_t>(dim == 2 ? i0 * n + i1 : i0);
    }

    DyadicCube cube(int depth, std::size_t s) const
    {
        const std::int64_t n = per_axis(depth);
        const auto i = static_cast<std::int64_t>(s);
        DyadicCube q{dim, q0.level - depth, {0, 0}};
        q.coords[0] = (q0.coords[0] << depth) + (dim == 2 ? i / n : i);
        if (dim == 2) q.coords[1] = (q0.coords[1] << depth) + i % n;
        return q;
    }
};

} // namespace detail

/// Selects, for k = 1, 2, ..., the inclusion-maximal dyadic subcubes Q of Q0
/// with avg_3Q f * avg_3Q g > a^k (zero extension outside the grid).
inline StoppingFamily cz_decompose(const GridFunction& f, const GridFunction& g, const DyadicCube& q0, double a)
{
    require_same_grid(f, g);
    detail::require(a > 1.0, "threshold base a must exceed 1");
    detail::require(f.sign != Sign::none && g.sign != Sign::none, "decomposition requires nonnegative inputs");
    const GridGeometry& geom = f.geom;
    detail::require(geom.resolves(q0), "Q0 must be a cube inside the grid root");
    detail::require(q0.level > geom.cell_level(), "grid cells must be strictly finer than Q0");

    const int depth = q0.level - geom.cell_level();
    detail::TripleTree tree{q0, geom.dim(), {}};
    const PrefixTable tf(geom, f.values), tg(geom, g.values);
    double max_m = 0.0;
    for (int d = 0; d <= depth; ++d) {
        const std::int64_t n = tree.per_axis(d);
        const std::size_t count = static_cast<std::size_t>(geom.dim() == 2 ? n * n : n);
        std::vector<double> level(count);
        detail::parallel_for(count, [&](std::size_t s) { level[s] = m_triple_at(tf, tg, tree.cube(d, s)); });
        for (double v : level) max_m = std::max(max_m, v);
        tree.m.push_back(std::move(level));
    }

    StoppingFamily sf{geom, q0, a, {}, std::vector<int>(static_cast<std::size_t>(geom.cell_count()), -1), 0};
    const AlignedBox qb = geom.box_of(q0);
    for (std::int64_t i = qb.lo[0]; i < qb.hi[0]; ++i)
        for (std::int64_t j = qb.lo[1]; j < qb.hi[1]; ++j) sf.label[geom.index(i, j)] = 0;

    const int k_max = max_m > a ? static_cast<int>(std::ceil(std::log(max_m) / std::log(a))) : 0;
    for (int k = 1; k <= k_max; ++k) {
        const double thr = std::pow(a, k);
        std::vector<SelectedCube> gen;
        // covered[s]: some cube at this depth or above (an ancestor) exceeds thr.
        std::vector<char> covered_parent;
        for (int d = 0; d <= depth; ++d) {
            const auto& lv = tree.m[static_cast<std::size_t>(d)];
            std::vector<char> covered(lv.size(), 0);
            for (std::size_t s = 0; s < lv.size(); ++s) {
                bool parent_hit = false;
                if (d > 0) parent_hit = covered_parent[tree.slot(d - 1, tree.cube(d, s).parent())] != 0;
                const bool hit = lv[s] > thr;
                covered[s] = parent_hit || hit;
                if (hit && !parent_hit) gen.push_back({tree.cube(d, s), lv[s], 0});
            }
            covered_parent = std::move(covered);
        }
        if (gen.empty()) break;
        std::sort(gen.begin(), gen.end(),
                  [](const SelectedCube& x, const SelectedCube& y) { return canonical_less(x.cube, y.cube); });
        for (const auto& s : gen) {
            const AlignedBox b = geom.box_of(s.cube);
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i)
                for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j) sf.label[geom.index(i, j)] = k;
        }
        sf.generations.push_back(std::move(gen));
    }
    for (std::size_t k = 0; k < sf.generations.size(); ++k)
        for (auto& s : sf.generations[k]) {
            const AlignedBox b = geom.box_of(s.cube);
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i)
                for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j)
                    s.e_cells += sf.label[geom.index(i, j)] == static_cast<int>(k + 1);
        }
    for (int v : sf.label) sf.e0_cells += v == 0;
    return sf;
}

struct HalvingReport {
    bool ok = true;
    double worst_ratio = 0.0; ///< max of |Q ∩ D_{k+1}| / |Q|, including Q0 against D_1
    std::optional<DyadicCube> offending;
    int offending_generation = -1;
};

/// Checks |Q_j^k ∩ D_{k+1}| <= |Q_j^k| / 2 and |D_1| <= |Q0| / 2.
inline HalvingReport verify_halving(const StoppingFamily& sf)
{
    HalvingReport r;
    auto visit = [&](const DyadicCube& q, std::int64_t cells, std::int64_t e, int k) {
        const double ratio = static_cast<double>(cells - e) / static_cast<double>(cells);
        if (ratio > r.worst_ratio) r.worst_ratio = ratio;
        if (2 * (cells - e) > cells && r.ok) {
            r.ok = false;
            r.offending = q;
            r.offending_generation = k;
        }
    };
    if (!sf.generations.empty()) visit(sf.q0, sf.q0_cells(), sf.e0_cells, 0);
    for (std::size_t k = 0; k < sf.generations.size(); ++k)
        for (const auto& s : sf.generations[k]) visit(s.cube, sf.geom.box_of(s.cube).cells(), s.e_cells, static_cast<int>(k + 1));
    return r;
}

/// Smallest a in {2, 4, 8, ...} whose decomposition passes verify_halving.
inline double choose_a(const GridFunction& f, const GridFunction& g, const DyadicCube& q0)
{
    for (double a = 2.0;; a *= 2.0)
        if (verify_halving(cz_decompose(f, g, q0, a)).ok) return a;
}

/// Ratio of sum over dyadic Q in Q_jk of |Q|^((alpha/n + 1) t) (int_Q v^(t/(1-t)))^(1-t)
/// to 2^(alpha t)/(2^(alpha t) - 1) |Q_jk|^((alpha/n) t + 1) (avg_{Q_jk} v^(t/(1-t)))^(1-t).
inline double packing_sum(const DyadicCube& qjk, const GridFunction& v, double t, double alpha)
{
    detail::require(t > 0.0 && t < 1.0, "packing sum requires 0 < t < 1");
    detail::require(alpha > 0.0, "alpha must be positive");
    const GridGeometry& geom = v.geom;
    detail::require(geom.resolves(qjk), "cube must lie inside the grid root");
    const int n = geom.dim();
    const double pw = t / (1.0 - t);
    const PrefixTable tv(geom, abs_power(v, pw));
    const double cell = geom.cell_volume();
    long double lhs = 0.0L;
    for (const auto& q : enumerate_subcubes(qjk, geom.cell_level())) {
        const AlignedBox b = geom.box_of(q);
        const double vol = geom.box_volume(b);
        const double integral = tv.sum(b) * cell;
        if (integral <= 0.0) continue;
        lhs += std::exp((alpha / n + 1.0) * t * std::log(vol) + (1.0 - t) * std::log(integral));
    }
    const AlignedBox b = geom.box_of(qjk);
    const double vol = geom.box_volume(b);
    const double avg = tv.sum(b) / static_cast<double>(b.cells());
    const double at = std::exp2(alpha * t);
    const double rhs = at / (at - 1.0) * std::exp(((alpha / n) * t + 1.0) * std::log(vol) + (1.0 - t) * std::log(avg));
    return static_cast<double>(lhs) / rhs;
}

} // namespace morrey
