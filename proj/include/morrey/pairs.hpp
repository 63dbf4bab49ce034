#pragma once

#include "grid.hpp"
#include "random.hpp"
#include "sharpness.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace morrey {

struct FunctionPair {
    std::string id;
    GridFunction f, g;
};

enum class PairKind { random_step, indicator, lattice, bump };

inline const char* pair_kind_name(PairKind k)
{
    switch (k) {
    case PairKind::random_step: return "step";
    case PairKind::indicator: return "indicator";
    case PairKind::lattice: return "lattice";
    default: return "bump";
    }
}

/// Depth at which random step data are drawn; finer levels refine it.
inline constexpr int base_depth = 3;

/// Step function on the unit root with i.i.d. cell values exp(U[-2, 2]) at
/// depth `depth`.
inline GridFunction random_step(int dim, int depth, CounterRng& rng, double lo = -2.0, double hi = 2.0)
{
    const GridGeometry g{DyadicCube{dim, 0, {0, 0}}, depth};
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
    for (double& x : v) x = rng.log_uniform(lo, hi);
    return GridFunction(g, std::move(v), Sign::pos);
}

/// Indicator of a random dyadic subcube of the unit root with side 2^-k,
/// k in [0, depth].
inline GridFunction random_indicator(int dim, int depth, CounterRng& rng)
{
    const GridGeometry g{DyadicCube{dim, 0, {0, 0}}, depth};
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(depth) + 1));
    DyadicCube q{dim, -k, {0, 0}};
    for (int a = 0; a < dim; ++a) q.coords[a] = static_cast<std::int64_t>(rng.below(std::uint64_t{1} << k));
    const AlignedBox b = g.box_of(q);
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()), 0.0);
    for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i)
        for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j) v[g.index(i, j)] = 1.0;
    return GridFunction(g, std::move(v), Sign::nonneg);
}

/// exp(-1/(1 - |x - c|^2/w^2)) inside the ball, sampled at cell midpoints.
inline GridFunction bump(const GridGeometry& g, std::array<double, 2> c, double w)
{
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto cell = g.cell_of(k);
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double d = (g.midpoint(a, cell[a]) - c[a]) / w;
            r2 += d * d;
        }
        v[k] = r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    }
    return GridFunction(g, std::move(v), Sign::nonneg);
}

/// Pair `index` of a kind at grid depth `level` (>= base_depth, or >= 4 for
/// the lattice pair). Step and indicator data are drawn at base_depth and
/// refined, so every level carries the same function.
inline FunctionPair make_pair(PairKind kind, int dim, std::uint64_t seed, std::uint64_t index, int level)
{
    CounterRng rng(seed, (static_cast<std::uint64_t>(kind) << 32) + index);
    const std::string id = std::string(pair_kind_name(kind)) + "-" + std::to_string(index);
    switch (kind) {
    case PairKind::random_step: {
        detail::require(level >= base_depth, "level below the base depth of random data");
        GridFunction f = random_step(dim, base_depth, rng), g = random_step(dim, base_depth, rng);
        return {id, f.refined(level - base_depth), g.refined(level - base_depth)};
    }
    case PairKind::indicator: {
        detail::require(level >= base_depth, "level below the base depth of random data");
        GridFunction f = random_indicator(dim, base_depth, rng), g = random_indicator(dim, base_depth, rng);
        return {id, f.refined(level - base_depth), g.refined(level - base_depth)};
    }
    case PairKind::lattice: {
        detail::require(level >= 4, "lattice pair needs level >= 4");
        ExponentProfile p = default_profile("sharp");
        p.n = dim;
        const SharpnessPair sp = build_sharpness_pair(p, 3);
        return {id, sp.f.refined(level - 4), sp.g.refined(level - 4)};
    }
    default: {
        const GridGeometry g{DyadicCube{dim, 0, {0, 0}}, level};
        std::array<double, 2> c1{rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
        std::array<double, 2> c2{rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
        const double w1 = rng.uniform(0.15, 0.3), w2 = rng.uniform(0.15, 0.3);
        return {id, bump(g, c1, w1), bump(g, c2, w2)};
    }
    }
}

/// The harness mix: `per_kind` pairs of each kind (one lattice pair).
inline std::vector<FunctionPair> pair_family(int dim, std::uint64_t seed, int per_kind, int level,
                                             const std::vector<PairKind>& kinds = {PairKind::random_step,
                                                                                   PairKind::indicator,
                                                                                   PairKind::lattice, PairKind::bump})
{
    std::vector<FunctionPair> out;
    for (PairKind k : kinds) {
        const int count = k == PairKind::lattice ? 1 : per_kind;
        for (int i = 0; i < count; ++i) out.push_back(make_pair(k, dim, seed, static_cast<std::uint64_t>(i), level));
    }
    return out;
}

} // namespace morrey
