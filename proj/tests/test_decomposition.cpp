#include "morrey/checks.hpp"
#include "morrey/decomposition.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace morrey;

namespace {

GridGeometry unit(int dim, int depth) { return GridGeometry{DyadicCube{dim, 0, {0, 0}}, depth}; }

GridFunction with_spike(const GridGeometry& g, std::size_t cell, double height)
{
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()), 1.0);
    v[cell] = height;
    return GridFunction(g, v, Sign::pos);
}

// avg over the nominal triple (zero extension) by direct loops.
double triple_avg(const GridFunction& f, const DyadicCube& q)
{
    const GridGeometry& g = f.geom;
    const AlignedBox b = g.box_of(q);
    const std::int64_t side = b.extent(0);
    double s = 0.0;
    for (std::int64_t i = b.lo[0] - side; i < b.hi[0] + side; ++i) {
        if (i < 0 || i >= g.per_axis()) continue;
        if (g.dim() == 1) {
            s += f[static_cast<std::size_t>(i)];
            continue;
        }
        for (std::int64_t j = b.lo[1] - side; j < b.hi[1] + side; ++j)
            if (j >= 0 && j < g.per_axis()) s += f.at(i, j);
    }
    return s / (std::pow(3.0, g.dim()) * static_cast<double>(b.cells()));
}

std::set<std::string> maximal_over(const GridFunction& f, const GridFunction& g, double thr)
{
    std::set<std::string> out;
    const auto all = enumerate_subcubes(f.geom.root, f.geom.cell_level());
    for (const auto& q : all) {
        if (!(triple_avg(f, q) * triple_avg(g, q) > thr)) continue;
        bool maximal = true;
        for (DyadicCube p = q; p.level < f.geom.root.level;) {
            p = p.parent();
            if (triple_avg(f, p) * triple_avg(g, p) > thr) maximal = false;
        }
        if (maximal) out.insert(q.str());
    }
    return out;
}

} // namespace

TEST(Decomposition, ConstantDataSelectsNothing)
{
    const GridGeometry g = unit(1, 5);
    const GridFunction one = GridFunction::constant(g, 1.0, Sign::pos);
    const StoppingFamily sf = cz_decompose(one, one, g.root, 2.0);
    EXPECT_TRUE(sf.generations.empty());
    EXPECT_EQ(sf.e0_cells, g.cell_count());
    EXPECT_TRUE(verify_halving(sf).ok);
    EXPECT_EQ(choose_a(one, one, g.root), 2.0);
}

TEST(Decomposition, SpikeMatchesBruteForce)
{
    for (int dim : {1, 2}) {
        const GridGeometry g = unit(dim, dim == 1 ? 6 : 3);
        const GridFunction f = with_spike(g, static_cast<std::size_t>(g.cell_count() / 3), 500.0);
        const GridFunction h = with_spike(g, static_cast<std::size_t>(g.cell_count() / 3 + 1), 80.0);
        const StoppingFamily sf = cz_decompose(f, h, g.root, 4.0);
        ASSERT_FALSE(sf.generations.empty());
        for (std::size_t k = 0; k < sf.generations.size(); ++k) {
            std::set<std::string> got;
            for (const auto& s : sf.generations[k]) {
                got.insert(s.cube.str());
                EXPECT_NEAR(s.m3q, triple_avg(f, s.cube) * triple_avg(h, s.cube), 1e-10 * s.m3q);
            }
            EXPECT_EQ(got, maximal_over(f, h, std::pow(4.0, static_cast<double>(k + 1))));
        }
        EXPECT_TRUE(maximal_over(f, h, std::pow(4.0, static_cast<double>(sf.generations.size() + 1))).empty());
    }
}

TEST(Decomposition, AuditOverSeeds)
{
    for (int dim : {1, 2}) {
        for (std::uint64_t s = 0; s < 20; ++s) {
            CounterRng rng(5, s);
            const int level = dim == 1 ? 7 : 4;
            const GridFunction f = spiky(dim, level, rng), g = spiky(dim, level, rng);
            const double a = choose_a(f, g, f.geom.root);
            const DecompositionAudit au = audit_decomposition(cz_decompose(f, g, f.geom.root, a));
            EXPECT_TRUE(au.partition && au.disjoint && au.nested && au.sandwich && au.halving) << au.first_failure;
            EXPECT_LE(au.worst_upper, 1.0 + 1e-12);
        }
    }
}

TEST(Decomposition, SubcubeRoot)
{
    CounterRng rng(6, 0);
    const GridFunction f = spiky(1, 7, rng), g = spiky(1, 7, rng);
    const DyadicCube q0{1, -2, {1, 0}};
    const StoppingFamily sf = cz_decompose(f, g, q0, choose_a(f, g, q0));
    const DecompositionAudit au = audit_decomposition(sf);
    EXPECT_TRUE(au.partition && au.nested && au.sandwich) << au.first_failure;
    for (const auto& gen : sf.generations)
        for (const auto& s : gen) EXPECT_TRUE(q0.contains(s.cube));
    EXPECT_EQ(std::count(sf.label.begin(), sf.label.end(), -1), f.geom.cell_count() - 32);
}

TEST(Decomposition, EMaskPartitionsQ0)
{
    CounterRng rng(7, 0);
    const GridFunction f = spiky(1, 6, rng), g = spiky(1, 6, rng);
    const StoppingFamily sf = cz_decompose(f, g, f.geom.root, choose_a(f, g, f.geom.root));
    std::vector<int> hits(sf.label.size(), 0);
    auto add = [&](const std::vector<bool>& m) {
        for (std::size_t c = 0; c < m.size(); ++c) hits[c] += m[c];
    };
    add(sf.e_mask(0));
    for (std::size_t k = 0; k < sf.generations.size(); ++k)
        for (std::size_t j = 0; j < sf.generations[k].size(); ++j) add(sf.e_mask(static_cast<int>(k + 1), j));
    for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Decomposition, SmallBaseBreaksHalving)
{
    CounterRng rng(8, 0);
    const GridFunction f = spiky(1, 7, rng), g = spiky(1, 7, rng);
    const HalvingReport r = verify_halving(cz_decompose(f, g, f.geom.root, 1.01));
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.offending.has_value());
    EXPECT_GE(r.offending_generation, 0);
    EXPECT_GT(r.worst_ratio, 0.5);
}

TEST(Decomposition, ChooseAOnSingleSpike)
{
    // Regression values for a height-100 spike on a unit background, depth 7.
    const std::vector<std::pair<std::size_t, double>> expected{{0, 16.0}, {37, 64.0}, {64, 8.0}, {127, 16.0}};
    for (const auto& [cell, a] : expected) {
        const GridFunction f = with_spike(unit(1, 7), cell, 100.0);
        EXPECT_EQ(choose_a(f, f, f.geom.root), a) << cell;
        EXPECT_TRUE(verify_halving(cz_decompose(f, f, f.geom.root, 64.0)).ok) << cell;
    }
}

TEST(Decomposition, ChooseACertifiesHalvingOnRandomData)
{
    for (std::uint64_t s = 0; s < 10; ++s) {
        CounterRng rng(9, s);
        const GridFunction f = spiky(1, 7, rng), g = spiky(1, 7, rng);
        const double a = choose_a(f, g, f.geom.root);
        EXPECT_TRUE(verify_halving(cz_decompose(f, g, f.geom.root, a)).ok);
        if (a > 2.0) EXPECT_FALSE(verify_halving(cz_decompose(f, g, f.geom.root, a / 2.0)).ok);
    }
}

TEST(Decomposition, RejectsBadInput)
{
    const GridGeometry g = unit(1, 4);
    const GridFunction one = GridFunction::constant(g, 1.0, Sign::pos);
    EXPECT_THROW(cz_decompose(one, one, g.root, 1.0), parameter_error);
    EXPECT_THROW(cz_decompose(one, one, g.cell_cube(3), 2.0), parameter_error);
    EXPECT_THROW(cz_decompose(GridFunction(g, one.values, Sign::none), one, g.root, 2.0), parameter_error);
}

TEST(Packing, UnitWeightClosedForm)
{
    for (int dim : {1, 2}) {
        const int depth = dim == 1 ? 6 : 4;
        const GridGeometry g = unit(dim, depth);
        const GridFunction one = GridFunction::constant(g, 1.0, Sign::pos);
        for (double t : {0.3, 0.7})
            for (double alpha : {0.25 * dim, 0.9 * dim}) {
                const double expect = 1.0 - std::exp2(-alpha * t * (depth + 1));
                EXPECT_NEAR(packing_sum(g.root, one, t, alpha), expect, 1e-12);
            }
    }
}

TEST(Packing, BoundOnWeights)
{
    EXPECT_TRUE(packing_check(1, 7).pass);
    EXPECT_TRUE(packing_check(2, 4).pass);
    const GridGeometry g = unit(1, 6);
    EXPECT_THROW(packing_sum(g.root, GridFunction::constant(g, 1.0, Sign::pos), 1.0, 0.5), parameter_error);
}
