#pragma once

#include "family.hpp"
#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace morrey {

struct NormReport {
    double value = 0.0;
    std::size_t index = 0; ///< position of the attaining entry in the family
    FamilyEntry attaining{};
};

/// (sum over the box of |f|^t times cell volume)^(1/t).
inline double lebesgue_norm(const GridFunction& f, double t, const AlignedBox& box)
{
    detail::require(t > 0.0, "Lebesgue exponent must be positive");
    long double s = 0.0L;
    const auto& g = f.geom;
    auto add = [&](double v) {
        const double a = std::fabs(v);
        s += (t == 1.0) ? a : (t == 2.0 ? a * a : std::pow(a, t));
    };
    if (g.dim() == 1) {
        for (std::int64_t i = box.lo[0]; i < box.hi[0]; ++i) add(f.at(i));
    } else {
        for (std::int64_t i = box.lo[0]; i < box.hi[0]; ++i)
            for (std::int64_t j = box.lo[1]; j < box.hi[1]; ++j) add(f.at(i, j));
    }
    return std::pow(static_cast<double>(s) * g.cell_volume(), 1.0 / t);
}

inline double lebesgue_norm(const GridFunction& f, double t)
{
    return lebesgue_norm(f, t, f.geom.full_box());
}

/// sup over levels v of v * |{|f| >= v}|^(1/p); exact for step functions.
inline double weak_quasinorm(const GridFunction& f, double p)
{
    detail::require(p > 0.0, "weak exponent must be positive");
    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::fabs(f[i]);
    std::sort(a.begin(), a.end(), std::greater<>());
    const double cell = f.geom.cell_volume();
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] <= 0.0) break;
        // Only the last index of a run of equal values carries the full level-set measure.
        if (i + 1 < a.size() && a[i + 1] == a[i]) continue;
        best = std::max(best, a[i] * std::pow(static_cast<double>(i + 1) * cell, 1.0 / p));
    }
    return best;
}

/// max over Q in the family of |Q|^(1/p) (avg_Q |f|^q)^(1/q).
class MorreyEvaluator {
public:
    MorreyEvaluator(const GridFunction& f, double p, double q) : p_(p), q_(q), table_(f.geom, abs_power(f, q))
    {
        detail::require(q > 0.0, "Morrey inner exponent q must be positive");
        detail::require(std::isfinite(p), "Morrey outer exponent p must be finite");
        detail::require(q <= p, "Morrey norm requires 0 < q <= p (got q > p)");
    }

    /// |Q|^(1/p) (avg_Q |f|^q)^(1/q) for one box.
    double at(const AlignedBox& b) const
    {
        const auto& g = table_.geometry();
        const double avg = table_.sum(b) / static_cast<double>(b.cells());
        if (avg <= 0.0) return 0.0;
        return std::pow(g.box_volume(b), 1.0 / p_) * std::pow(avg, 1.0 / q_);
    }

    NormReport sup(const CubeFamily& fam) const
    {
        detail::require(fam.size() > 0, "cube family is empty");
        detail::require(fam.geom == table_.geometry(), "family and function live on different grids");
        NormReport r;
        r.attaining = fam[0];
        for (std::size_t i = 0; i < fam.size(); ++i) {
            const double v = at(fam[i].box);
            if (v > r.value) {
                r.value = v;
                r.index = i;
                r.attaining = fam[i];
            }
        }
        return r;
    }

private:
    double p_;
    double q_;
    PrefixTable table_;
};

inline NormReport morrey_norm(const GridFunction& f, double p, double q, const CubeFamily& fam)
{
    return MorreyEvaluator(f, p, q).sup(fam);
}

/// sup over Q of |Q|^(1/p) prod_i (avg_Q |f_i|^{q_i})^(1/q_i), the right side
/// shape of the weighted theorems (f_i already multiplied by their weights).
inline NormReport product_morrey(const GridFunction& f1, double q1, const GridFunction& f2, double q2, double p,
                                 const CubeFamily& fam)
{
    require_same_grid(f1, f2);
    detail::require(q1 > 0 && q2 > 0 && p > 0, "exponents must be positive");
    PrefixTable t1(f1.geom, abs_power(f1, q1));
    PrefixTable t2(f2.geom, abs_power(f2, q2));
    NormReport r;
    r.attaining = fam[0];
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const auto& b = fam[i].box;
        const double c = static_cast<double>(b.cells());
        const double a1 = t1.sum(b) / c;
        const double a2 = t2.sum(b) / c;
        if (a1 <= 0.0 || a2 <= 0.0) continue;
        const double v = std::pow(fam.volume(i), 1.0 / p) * std::pow(a1, 1.0 / q1) * std::pow(a2, 1.0 / q2);
        if (v > r.value) {
            r.value = v;
            r.index = i;
            r.attaining = fam[i];
        }
    }
    return r;
}

} // namespace morrey
