#pragma once

#include "grid.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace morrey {

enum class FamilyTag { dyadic_subcubes, all_aligned, custom };

inline const char* family_name(FamilyTag t)
{
    switch (t) {
    case FamilyTag::dyadic_subcubes: return "dyadic";
    case FamilyTag::all_aligned: return "all";
    default: return "custom";
    }
}

struct FamilyEntry {
    AlignedBox box;
    std::optional<DyadicCube> cube;

    std::string str() const { return cube ? cube->str() : box.str(); }
};

/// Finite set of cubes on one grid over which suprema are taken. Entries are
/// kept coarsest first, then by lower corner, so ties resolve the same way
/// on every run.
struct CubeFamily {
    FamilyTag tag = FamilyTag::custom;
    GridGeometry geom{};
    std::vector<FamilyEntry> entries;
    /// Set when a budget forced a coarser enumeration than requested.
    bool truncated = false;

    std::size_t size() const { return entries.size(); }
    const FamilyEntry& operator[](std::size_t i) const { return entries[i]; }
    double volume(std::size_t i) const { return geom.box_volume(entries[i].box); }
};

namespace detail {
inline void sort_entries(std::vector<FamilyEntry>& e)
{
    std::stable_sort(e.begin(), e.end(), [](const FamilyEntry& a, const FamilyEntry& b) {
        if (a.box.cells() != b.box.cells()) return a.box.cells() > b.box.cells();
        return a.box.lo < b.box.lo;
    });
}
} // namespace detail

/// Dyadic subcubes of q0 (default: the root) down to min_level (default: the
/// cell level).
inline CubeFamily dyadic_family(const GridGeometry& g, std::optional<DyadicCube> q0 = std::nullopt,
                                std::optional<int> min_level = std::nullopt)
{
    const DyadicCube top = q0.value_or(g.root);
    const int lo = min_level.value_or(g.cell_level());
    detail::require(lo >= g.cell_level(), "dyadic family: min_level finer than the grid");
    CubeFamily fam{FamilyTag::dyadic_subcubes, g, {}, false};
    for (const auto& q : enumerate_subcubes(top, lo)) fam.entries.push_back({g.box_of(q), q});
    return fam;
}

/// Every grid-aligned cube inside the root. In 2D, when the full count
/// exceeds the budget, falls back to power-of-two sides placed at half-side
/// strides and marks the family truncated.
inline CubeFamily all_aligned_family(const GridGeometry& g, std::size_t budget = 400000)
{
    CubeFamily fam{FamilyTag::all_aligned, g, {}, false};
    const std::int64_t n = g.per_axis();
    auto push = [&](std::int64_t i, std::int64_t j, std::int64_t side) {
        AlignedBox b{g.dim(), {i, j}, {i + side, g.dim() == 2 ? j + side : 1}, false, 0.0};
        b.nominal_cells = static_cast<double>(b.cells());
        fam.entries.push_back({b, std::nullopt});
    };
    if (g.dim() == 1) {
        for (std::int64_t side = n; side >= 1; --side)
            for (std::int64_t i = 0; i + side <= n; ++i) push(i, 0, side);
    } else {
        std::size_t full = 0;
        for (std::int64_t side = 1; side <= n; ++side)
            full += static_cast<std::size_t>((n - side + 1) * (n - side + 1));
        if (full <= budget) {
            for (std::int64_t side = n; side >= 1; --side)
                for (std::int64_t i = 0; i + side <= n; ++i)
                    for (std::int64_t j = 0; j + side <= n; ++j) push(i, j, side);
        } else {
            fam.truncated = true;
            for (std::int64_t side = n; side >= 1; side /= 2) {
                const std::int64_t stride = std::max<std::int64_t>(side / 2, 1);
                for (std::int64_t i = 0; i + side <= n; i += stride)
                    for (std::int64_t j = 0; j + side <= n; j += stride) push(i, j, side);
            }
        }
    }
    // Attach dyadic addresses where the box is a dyadic cube.
    for (auto& e : fam.entries) {
        const std::int64_t side = e.box.extent(0);
        if ((side & (side - 1)) != 0) continue;
        bool aligned = true;
        for (int a = 0; a < g.dim(); ++a) aligned = aligned && e.box.lo[a] % side == 0;
        if (!aligned) continue;
        int shift = 0;
        while ((std::int64_t{1} << shift) < side) ++shift;
        DyadicCube q{g.dim(), g.cell_level() + shift, {0, 0}};
        for (int a = 0; a < g.dim(); ++a) q.coords[a] = (g.root.coords[a] * n + e.box.lo[a]) >> shift;
        e.cube = q;
    }
    detail::sort_entries(fam.entries);
    return fam;
}

inline CubeFamily custom_family(const GridGeometry& g, const std::vector<DyadicCube>& cubes)
{
    detail::require(!cubes.empty(), "custom family must be nonempty");
    CubeFamily fam{FamilyTag::custom, g, {}, false};
    for (const auto& q : cubes) fam.entries.push_back({g.box_of(q), q});
    detail::sort_entries(fam.entries);
    return fam;
}

inline CubeFamily make_family(const GridGeometry& g, FamilyTag tag)
{
    return tag == FamilyTag::all_aligned ? all_aligned_family(g) : dyadic_family(g);
}

} // namespace morrey
