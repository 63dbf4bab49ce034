#pragma once

#include "checks.hpp"
#include "csv.hpp"
#include "sharpness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace morrey {

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    std::string detail;
    Table table;
    double seconds = 0.0; ///< wall time, reported but never written to CSV
};

namespace detail {
inline CriterionResult timed(const std::string& id, const std::string& name, const std::function<CheckResult()>& run)
{
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult c = run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {id, name, c.pass, c.detail, std::move(c.table), secs};
}

inline double rel_err(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }
} // namespace detail

/// Closed-form quadrature anchor: B and I of chi_[0,1) at x = 1/2, alpha = 1/2,
/// depth 8, against 2 sqrt(2) within 0.5%.
inline CheckResult closed_form_check()
{
    const GridGeometry g{DyadicCube{1, 0, {0, 0}}, 8};
    const GridFunction one = GridFunction::constant(g, 1.0, Sign::pos);
    const KernelSpec k{0.5, 1};
    const std::size_t c = one.nearest_cell({0.5, 0.0});
    const double b = b_alpha(one, one, k)[c], i = i_alpha(one, k)[c];
    const double ref = 2.0 * std::sqrt(2.0);
    CheckResult r;
    r.table = Table{{"operator", "value", "reference", "rel_error"}, {}};
    r.table.add({"B", fmt(b), fmt(ref), fmt(detail::rel_err(b, ref))});
    r.table.add({"I", fmt(i), fmt(ref), fmt(detail::rel_err(i, ref))});
    r.pass = detail::rel_err(b, ref) < 5e-3 && detail::rel_err(i, ref) < 5e-3;
    r.detail = "B = " + detail::num(b) + ", I = " + detail::num(i) + ", reference " + detail::num(ref);
    return r;
}

inline const std::vector<int>& sharpness_schedule()
{
    static const std::vector<int> ms{4, 5, 6, 7, 8};
    return ms;
}

/// Norm bounds of the lattice pair. `full` compares the norms over every
/// aligned cube; otherwise only cubes of side <= 3 delta, together with the
/// pointwise floor.
inline CheckResult sharpness_bounds_check(bool full)
{
    const SharpnessResult s = run_sharpness(default_profile("sharp"), sharpness_schedule());
    CheckResult r;
    r.table = s.table();
    r.pass = true;
    double worst_f = 0.0, worst_g = 0.0, floor_ratio = std::numeric_limits<double>::infinity();
    const double slack = 1.0 + 1e-12;
    for (const auto& row : s.rows) {
        const double nf = full ? row.norm_f : row.norm_f_small, ng = full ? row.norm_g : row.norm_g_small;
        worst_f = std::max(worst_f, nf / row.bound_f);
        worst_g = std::max(worst_g, ng / row.bound_g);
        floor_ratio = std::min(floor_ratio, row.min_pointwise / row.floor);
    }
    r.pass = worst_f <= slack && worst_g <= slack && floor_ratio >= 0.95;
    r.detail = std::string(full ? "all cubes" : "cubes of side <= 3 delta") + ": max norm_f/bound " +
               detail::num(worst_f) + ", max norm_g/bound " + detail::num(worst_g) + ", min B/floor " +
               detail::num(floor_ratio);
    return r;
}

/// Blow-up slope <= -0.07, and slope within 0.03 of 0 on the boundary t/s = q1/p1.
inline CheckResult sharpness_slope_check()
{
    ExponentProfile p = default_profile("sharp");
    const SharpnessResult blow = run_sharpness(p, sharpness_schedule());
    p.set("t", Rational(5, 2));
    const SharpnessResult edge = run_sharpness(p, sharpness_schedule());
    CheckResult r;
    r.table = Table{{"branch", "m", "norm_b", "slope_so_far", "predicted"}, {}};
    for (const auto& row : blow.rows) r.table.add({"blowup", fmt(row.m), fmt(row.norm_b), fmt(row.slope), fmt(blow.predicted)});
    for (const auto& row : edge.rows) r.table.add({"boundary", fmt(row.m), fmt(row.norm_b), fmt(row.slope), fmt(edge.predicted)});
    r.pass = blow.slope <= -0.07 && std::fabs(edge.slope) <= 0.03;
    r.detail = "slope " + detail::num(blow.slope) + " (predicted " + detail::num(blow.predicted) + "), boundary slope " +
               detail::num(edge.slope);
    return r;
}

inline CheckResult stein_weiss_dichotomy_check()
{
    const ExponentProfile p = default_profile("stein-weiss");
    struct Triple {
        double beta, g1, g2;
        const char* expect;
    };
    const std::vector<Triple> triples{{0.05, 0.1, 0.1, "FINITE"},
                                      {-0.05, 0.15, 0.15, "FINITE"},
                                      {-0.2, 0.0, 0.0, "DIVERGENT"},
                                      {-0.1, -0.05, 0.0, "DIVERGENT"}};
    CheckResult r;
    r.table = Table{{"beta", "gamma1", "gamma2", "a", "K", "characteristic", "verdict", "expected"}, {}};
    r.pass = true;
    std::string detail;
    for (const auto& t : triples) {
        const SteinWeissResult s = stein_weiss_check(t.beta, t.g1, t.g2, p);
        const bool ok = s.verdict == t.expect && (std::string(t.expect) != "FINITE" || (s.conditions && s.harness_stable));
        r.pass = r.pass && ok;
        for (std::size_t k = 0; k < s.characteristic.size(); ++k)
            r.table.add({fmt(t.beta), fmt(t.g1), fmt(t.g2), fmt(s.a), fmt(k), fmt(s.characteristic[k]), s.verdict, t.expect});
        if (!detail.empty()) detail += "; ";
        detail += "(" + detail::num(t.beta) + ", " + detail::num(t.g1) + ", " + detail::num(t.g2) + ") " + s.verdict;
    }
    r.detail = detail;
    return r;
}

inline CheckResult necessity_systems_check(std::uint64_t seed, int systems)
{
    const ExponentProfile p = default_profile("necessity");
    CheckResult r;
    r.table = Table{{"system", "char_testing", "operator_constant", "worst_testing", "worst_necessity"}, {}};
    r.pass = true;
    double wt = 0.0, wn = 0.0;
    for (int s = 0; s < systems; ++s) {
        CounterRng rng(seed, 3000 + static_cast<std::uint64_t>(s));
        const NecessityResult n = necessity_check(random_block_weights(1, 6, rng), p, seed);
        r.pass = r.pass && n.testing_ok && n.necessity_ok;
        wt = std::max(wt, n.worst_testing);
        wn = std::max(wn, n.worst_necessity);
        r.table.add({fmt(s), fmt(n.char_testing), fmt(n.operator_constant), fmt(n.worst_testing), fmt(n.worst_necessity)});
    }
    r.detail = "max testing ratio " + detail::num(wt) + ", max necessity ratio " + detail::num(wn);
    return r;
}

inline CheckResult concat(CheckResult a, const CheckResult& b, const std::string& tag_a, const std::string& tag_b)
{
    CheckResult out;
    out.pass = a.pass && b.pass;
    out.detail = tag_a + ": " + a.detail + "; " + tag_b + ": " + b.detail;
    out.table.columns = {"case"};
    out.table.columns.insert(out.table.columns.end(), a.table.columns.begin(), a.table.columns.end());
    for (auto row : a.table.rows) {
        row.insert(row.begin(), tag_a);
        out.table.rows.push_back(row);
    }
    for (auto row : b.table.rows) {
        row.insert(row.begin(), tag_b);
        out.table.rows.push_back(row);
    }
    return out;
}

inline const std::vector<std::string>& criterion_ids()
{
    static const std::vector<std::string> ids{"1", "2a", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11"};
    return ids;
}

/// Runs one criterion by id with the given seed.
inline CriterionResult run_criterion(const std::string& id, std::uint64_t seed = 1)
{
    using detail::timed;
    if (id == "1") return timed(id, "closed-form quadrature", closed_form_check);
    if (id == "2a") return timed(id, "sharpness small-cube bounds and floor", [] { return sharpness_bounds_check(false); });
    if (id == "2") return timed(id, "sharpness norm bounds", [] { return sharpness_bounds_check(true); });
    if (id == "3") return timed(id, "sharpness blow-up slope", sharpness_slope_check);
    if (id == "4")
        return timed(id, "dyadic model equivalence", [&] { return dyadic_equivalence_check(0.5, 1, seed, 20, {4, 5, 6, 7}); });
    if (id == "5")
        return timed(id, "pointwise Hoelder bound", [&] { return holder_check(0.5, 1, seed, 20, 7, {1.5, 2.0, 3.0}); });
    if (id == "6")
        return timed(id, "maximal control", [&] { return maximal_control_check(0.5, 1, seed, 20, {4, 5, 6, 7}); });
    if (id == "7")
        return timed(id, "stopping-time decomposition",
                     [&] { return concat(cz_check(1, 8, seed, 20), cz_check(2, 5, seed, 20), "n=1", "n=2"); });
    if (id == "8")
        return timed(id, "packing bound", [] { return concat(packing_check(1, 8), packing_check(2, 5), "n=1", "n=2"); });
    if (id == "9") return timed(id, "weighted harness and dominance chain", [&] { return weighted_check(seed, 10); });
    if (id == "10") return timed(id, "power-weight dichotomy", stein_weiss_dichotomy_check);
    if (id == "11") return timed(id, "necessity on block weights", [&] { return necessity_systems_check(seed, 10); });
    throw parameter_error("unknown criterion " + id);
}

/// Runs every criterion; when `out_dir` is non-empty writes criterion_<id>.csv
/// per criterion and summary.csv.
inline std::vector<CriterionResult> selftest(std::uint64_t seed, const std::string& out_dir = {})
{
    std::vector<CriterionResult> res;
    for (const auto& id : criterion_ids()) res.push_back(run_criterion(id, seed));
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        Table summary{{"id", "name", "pass", "detail"}, {}};
        for (const auto& r : res) {
            r.table.write_csv_file(out_dir + "/criterion_" + r.id + ".csv");
            summary.add({r.id, r.name, r.pass ? "PASS" : "FAIL", r.detail});
        }
        summary.write_csv_file(out_dir + "/summary.csv");
    }
    return res;
}

} // namespace morrey
