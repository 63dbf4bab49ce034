#pragma once

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace morrey {

/// The dyadic cube 2^level * (coords + [0,1)^dim), dim in {1, 2}.
struct DyadicCube {
    int dim = 1;
    int level = 0;
    std::array<std::int64_t, 2> coords{0, 0};

    double side() const { return std::ldexp(1.0, level); }
    double volume() const { return std::ldexp(1.0, level * dim); }
    double lower(int axis) const { return std::ldexp(static_cast<double>(coords[axis]), level); }
    double center(int axis) const { return lower(axis) + 0.5 * side(); }

    DyadicCube parent() const
    {
        DyadicCube p = *this;
        p.level = level + 1;
        for (int a = 0; a < dim; ++a) p.coords[a] = coords[a] >> 1;
        return p;
    }

    /// Child i: bit a of i selects the upper half along axis a.
    DyadicCube child(int i) const
    {
        DyadicCube c = *this;
        c.level = level - 1;
        for (int a = 0; a < dim; ++a) c.coords[a] = 2 * coords[a] + ((i >> a) & 1);
        return c;
    }

    int child_count() const { return 1 << dim; }

    bool contains(const DyadicCube& o) const
    {
        if (o.dim != dim || o.level > level) return false;
        const int shift = level - o.level;
        for (int a = 0; a < dim; ++a)
            if ((o.coords[a] >> shift) != coords[a]) return false;
        return true;
    }

    bool intersects(const DyadicCube& o) const { return contains(o) || o.contains(*this); }

    std::string str() const
    {
        std::string s = "L" + std::to_string(level) + ":(" + std::to_string(coords[0]);
        if (dim == 2) s += "," + std::to_string(coords[1]);
        return s + ")";
    }

    friend bool operator==(const DyadicCube& a, const DyadicCube& b)
    {
        return a.dim == b.dim && a.level == b.level && a.coords[0] == b.coords[0] &&
               (a.dim == 1 || a.coords[1] == b.coords[1]);
    }
};

/// Coarsest first, then lower corner lexicographically (axis 0 slowest).
inline bool canonical_less(const DyadicCube& a, const DyadicCube& b)
{
    if (a.level != b.level) return a.level > b.level;
    if (a.coords[0] != b.coords[0]) return a.coords[0] < b.coords[0];
    return a.dim == 2 && a.coords[1] < b.coords[1];
}

/// Every dyadic Q inside root with min_level <= level(Q) <= root.level, in
/// canonical order.
inline std::vector<DyadicCube> enumerate_subcubes(const DyadicCube& root, int min_level)
{
    detail::require(min_level <= root.level, "enumerate_subcubes: min_level above root level");
    detail::require(root.dim == 1 || root.dim == 2, "dimension must be 1 or 2");
    detail::require(root.level - min_level <= (root.dim == 1 ? 24 : 12),
                    "enumerate_subcubes: level range too deep");
    std::vector<DyadicCube> out;
    for (int level = root.level; level >= min_level; --level) {
        const int shift = root.level - level;
        const std::int64_t per_axis = std::int64_t{1} << shift;
        const std::int64_t count1 = root.dim == 2 ? per_axis : 1;
        for (std::int64_t i = 0; i < per_axis; ++i)
            for (std::int64_t j = 0; j < count1; ++j) {
                DyadicCube q{root.dim, level, {(root.coords[0] << shift) + i, 0}};
                if (root.dim == 2) q.coords[1] = (root.coords[1] << shift) + j;
                out.push_back(q);
            }
    }
    return out;
}

/// Axis-aligned box of whole cells [lo, hi) in grid-local indices.
struct AlignedBox {
    int dim = 1;
    std::array<std::int64_t, 2> lo{0, 0};
    std::array<std::int64_t, 2> hi{1, 1};
    /// Set when the geometric box left the grid and was cut back.
    bool clipped = false;
    /// Cell count of the box before clipping.
    double nominal_cells = 0.0;

    std::int64_t extent(int axis) const { return hi[axis] - lo[axis]; }
    std::int64_t cells() const { return dim == 1 ? extent(0) : extent(0) * extent(1); }

    bool contains_cell(std::int64_t i0, std::int64_t i1 = 0) const
    {
        if (i0 < lo[0] || i0 >= hi[0]) return false;
        return dim == 1 || (i1 >= lo[1] && i1 < hi[1]);
    }

    bool contains(const AlignedBox& o) const
    {
        for (int a = 0; a < dim; ++a)
            if (o.lo[a] < lo[a] || o.hi[a] > hi[a]) return false;
        return true;
    }

    std::string str() const
    {
        std::string s = "[" + std::to_string(lo[0]) + "," + std::to_string(hi[0]) + ")";
        if (dim == 2) s += "x[" + std::to_string(lo[1]) + "," + std::to_string(hi[1]) + ")";
        return s;
    }

    friend bool operator==(const AlignedBox& a, const AlignedBox& b)
    {
        return a.dim == b.dim && a.lo == b.lo && a.hi == b.hi;
    }
};

/// Root cube plus refinement depth: cells have side 2^(root.level - depth).
struct GridGeometry {
    DyadicCube root{};
    int depth = 0;

    int dim() const { return root.dim; }
    std::int64_t per_axis() const { return std::int64_t{1} << depth; }
    std::int64_t cell_count() const { return dim() == 1 ? per_axis() : per_axis() * per_axis(); }
    int cell_level() const { return root.level - depth; }
    double cell_side() const { return std::ldexp(1.0, cell_level()); }
    double cell_volume() const { return std::ldexp(1.0, cell_level() * dim()); }

    std::size_t index(std::int64_t i0, std::int64_t i1 = 0) const
    {
        return static_cast<std::size_t>(dim() == 1 ? i0 : i0 * per_axis() + i1);
    }

    std::array<std::int64_t, 2> cell_of(std::size_t idx) const
    {
        const auto i = static_cast<std::int64_t>(idx);
        if (dim() == 1) return {i, 0};
        return {i / per_axis(), i % per_axis()};
    }

    /// Midpoint coordinate of local cell index i along an axis.
    double midpoint(int axis, std::int64_t i) const
    {
        return (static_cast<double>(root.coords[axis] * per_axis() + i) + 0.5) * cell_side();
    }

    AlignedBox full_box() const
    {
        AlignedBox b{dim(), {0, 0}, {per_axis(), dim() == 2 ? per_axis() : 1}, false, 0.0};
        b.nominal_cells = static_cast<double>(b.cells());
        return b;
    }

    bool resolves(const DyadicCube& q) const
    {
        return q.dim == dim() && q.level >= cell_level() && root.contains(q);
    }

    /// Cells covered by a dyadic cube inside the root.
    AlignedBox box_of(const DyadicCube& q) const
    {
        detail::require(q.dim == dim(), "cube dimension differs from grid dimension");
        detail::require(q.level >= cell_level(), "cube is finer than the grid cells");
        detail::require(root.contains(q), "cube " + q.str() + " lies outside the root " + root.str());
        const int shift = q.level - cell_level();
        AlignedBox b;
        b.dim = dim();
        for (int a = 0; a < dim(); ++a) {
            b.lo[a] = (q.coords[a] << shift) - root.coords[a] * per_axis();
            b.hi[a] = b.lo[a] + (std::int64_t{1} << shift);
        }
        if (dim() == 1) {
            b.lo[1] = 0;
            b.hi[1] = 1;
        }
        b.nominal_cells = static_cast<double>(b.cells());
        return b;
    }

    DyadicCube cell_cube(std::int64_t i0, std::int64_t i1 = 0) const
    {
        DyadicCube c{dim(), cell_level(), {root.coords[0] * per_axis() + i0, 0}};
        if (dim() == 2) c.coords[1] = root.coords[1] * per_axis() + i1;
        return c;
    }

    double box_volume(const AlignedBox& b) const { return static_cast<double>(b.cells()) * cell_volume(); }

    friend bool operator==(const GridGeometry& a, const GridGeometry& b)
    {
        return a.root == b.root && a.depth == b.depth;
    }
};

enum class Sign { none, nonneg, pos };

inline const char* sign_name(Sign s)
{
    switch (s) {
    case Sign::nonneg: return "nonneg";
    case Sign::pos: return "pos";
    default: return "none";
    }
}

/// Piecewise-constant function on the cells of a root cube, zero outside.
/// Values are stored row-major (axis 0 slowest).
struct GridFunction {
    GridGeometry geom{};
    std::vector<double> values;
    Sign sign = Sign::none;

    GridFunction() = default;
    GridFunction(GridGeometry g, std::vector<double> v, Sign s = Sign::none)
        : geom(g), values(std::move(v)), sign(s)
    {
        validate();
    }

    static GridFunction constant(GridGeometry g, double c, Sign s = Sign::none)
    {
        return GridFunction(g, std::vector<double>(static_cast<std::size_t>(g.cell_count()), c), s);
    }

    void validate() const
    {
        detail::require(geom.dim() == 1 || geom.dim() == 2, "dimension must be 1 or 2");
        detail::require(geom.depth >= 0, "depth must be nonnegative");
        detail::require(values.size() == static_cast<std::size_t>(geom.cell_count()),
                        "value count " + std::to_string(values.size()) + " does not match 2^(n*L) = " +
                            std::to_string(geom.cell_count()));
        for (double v : values) {
            detail::require(std::isfinite(v), "non-finite grid value");
            if (sign == Sign::nonneg) detail::require(v >= 0.0, "value below zero in a nonneg function");
            if (sign == Sign::pos) detail::require(v > 0.0, "nonpositive value in a positive function");
        }
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    double at(std::int64_t i0, std::int64_t i1 = 0) const { return values[geom.index(i0, i1)]; }

    /// Same step function on a grid refined by `extra` levels.
    GridFunction refined(int extra) const
    {
        detail::require(extra >= 0, "refinement must be nonnegative");
        GridGeometry g = geom;
        g.depth += extra;
        std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
        for (std::size_t k = 0; k < v.size(); ++k) {
            const auto c = g.cell_of(k);
            v[k] = at(c[0] >> extra, geom.dim() == 2 ? (c[1] >> extra) : 0);
        }
        return GridFunction(g, std::move(v), sign);
    }

    /// Value of the cell whose midpoint is nearest to x; on a tie the cell
    /// containing x wins.
    std::size_t nearest_cell(const std::array<double, 2>& x) const
    {
        std::array<std::int64_t, 2> c{0, 0};
        for (int a = 0; a < geom.dim(); ++a) {
            const double u = x[a] / geom.cell_side() - static_cast<double>(geom.root.coords[a] * geom.per_axis());
            const auto i = static_cast<std::int64_t>(std::floor(u));
            c[a] = std::clamp<std::int64_t>(i, 0, geom.per_axis() - 1);
        }
        return geom.index(c[0], c[1]);
    }

    double max_abs() const
    {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::fabs(v));
        return m;
    }
};

inline void require_same_grid(const GridFunction& a, const GridFunction& b)
{
    detail::require(a.geom == b.geom, "grid mismatch: functions live on different grids");
}

/// Elementwise product.
inline GridFunction multiply(const GridFunction& a, const GridFunction& b)
{
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
    Sign s = Sign::none;
    if (a.sign == Sign::pos && b.sign == Sign::pos) s = Sign::pos;
    else if (a.sign != Sign::none && b.sign != Sign::none) s = Sign::nonneg;
    return GridFunction(a.geom, std::move(v), s);
}

inline GridFunction scaled(const GridFunction& a, double c)
{
    std::vector<double> v(a.values);
    for (double& x : v) x *= c;
    Sign s = Sign::none;
    if (c > 0) s = a.sign;
    else if (c == 0) s = Sign::nonneg;
    return GridFunction(a.geom, std::move(v), s);
}

/// |f|^power elementwise; power < 0 requires f != 0, power == 0 gives 1.
inline std::vector<double> abs_power(const GridFunction& f, double power)
{
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = std::fabs(f[i]);
        if (power == 0.0) v[i] = 1.0;
        else if (power == 1.0) v[i] = x;
        else if (power == 2.0) v[i] = x * x;
        else {
            detail::require(power > 0.0 || x > 0.0, "nonpositive value raised to a negative power");
            v[i] = std::pow(x, power);
        }
    }
    return v;
}

/// Cumulative sums over the cells of a grid; box sums by inclusion-exclusion.
class PrefixTable {
public:
    PrefixTable() = default;
    PrefixTable(const GridGeometry& g, std::vector<double> data) : geom_(g), data_(std::move(data))
    {
        detail::require(data_.size() == static_cast<std::size_t>(g.cell_count()), "prefix table size mismatch");
        const std::int64_t n = g.per_axis();
        if (g.dim() == 1) {
            cum_.assign(static_cast<std::size_t>(n + 1), 0.0L);
            for (std::int64_t i = 0; i < n; ++i) cum_[i + 1] = cum_[i] + data_[i];
        } else {
            stride_ = n + 1;
            cum_.assign(static_cast<std::size_t>(stride_ * stride_), 0.0L);
            for (std::int64_t i = 0; i < n; ++i) {
                long double row = 0.0L;
                for (std::int64_t j = 0; j < n; ++j) {
                    row += data_[g.index(i, j)];
                    cum_[(i + 1) * stride_ + (j + 1)] = cum_[i * stride_ + (j + 1)] + row;
                }
            }
        }
        for (double v : data_) scale_ += std::fabs(static_cast<long double>(v));
    }

    const GridGeometry& geometry() const { return geom_; }

    /// Sum of the stored values over the cells of the box.
    double sum(const AlignedBox& b) const
    {
        long double s = 0.0L;
        if (geom_.dim() == 1) {
            s = cum_[b.hi[0]] - cum_[b.lo[0]];
        } else {
            s = cum_[b.hi[0] * stride_ + b.hi[1]] - cum_[b.lo[0] * stride_ + b.hi[1]] -
                cum_[b.hi[0] * stride_ + b.lo[1]] + cum_[b.lo[0] * stride_ + b.lo[1]];
        }
        // Cancellation guard: small sums relative to the table are redone directly.
        if (std::fabs(s) <= 1e-6L * scale_) return direct_sum(b);
        return static_cast<double>(s);
    }

    double direct_sum(const AlignedBox& b) const
    {
        long double s = 0.0L;
        if (geom_.dim() == 1) {
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i) s += data_[i];
        } else {
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i)
                for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j) s += data_[geom_.index(i, j)];
        }
        return static_cast<double>(s);
    }

    const std::vector<double>& data() const { return data_; }

private:
    GridGeometry geom_{};
    std::vector<double> data_;
    std::vector<long double> cum_;
    std::int64_t stride_ = 0;
    long double scale_ = 0.0L;
};

/// Mean of |f|^power over the cells of a box.
inline double box_average(const GridFunction& f, const AlignedBox& box, double power)
{
    PrefixTable t(f.geom, abs_power(f, power));
    return t.sum(box) / static_cast<double>(box.cells());
}

/// 3Q = Q(c_Q, 3 l(Q)) cut to the grid; the clip is recorded on the box.
inline AlignedBox triple(const DyadicCube& q, const GridGeometry& g)
{
    detail::require(q.level >= g.cell_level(), "triple: cube " + q.str() + " is finer than the grid cells");
    AlignedBox b = g.box_of(q);
    const std::int64_t s = b.extent(0);
    b.nominal_cells = std::pow(3.0, g.dim()) * static_cast<double>(b.cells());
    for (int a = 0; a < g.dim(); ++a) {
        std::int64_t lo = b.lo[a] - s;
        std::int64_t hi = b.hi[a] + s;
        if (lo < 0 || hi > g.per_axis()) b.clipped = true;
        b.lo[a] = std::max<std::int64_t>(lo, 0);
        b.hi[a] = std::min<std::int64_t>(hi, g.per_axis());
    }
    return b;
}

/// log of the power mean ingredients of a function over boxes, robust to
/// huge exponents: for finite p, log(avg |f|^p); for p = +inf, log max |f|;
/// for p = -inf, log min |f|.
class LogPowerTable {
public:
    LogPowerTable() = default;
    LogPowerTable(const GridFunction& f, double p) : geom_(f.geom), p_(p)
    {
        detail::require(p != 0.0 && !std::isnan(p), "power mean exponent must be nonzero");
        logs_.resize(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double x = std::fabs(f[i]);
            detail::require(x > 0.0 || p > 0.0, "nonpositive weight value raised to a negative power");
            logs_[i] = std::log(x); // -inf for zero
        }
        if (std::isinf(p)) return;
        shift_ = -std::numeric_limits<double>::infinity();
        for (double l : logs_)
            if (std::isfinite(l)) shift_ = std::max(shift_, p * l);
        std::vector<double> e(f.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            e[i] = std::isfinite(logs_[i]) ? std::exp(p * logs_[i] - shift_) : 0.0;
        if (!std::isfinite(shift_)) shift_ = 0.0;
        table_ = PrefixTable(f.geom, std::move(e));
    }

    double exponent() const { return p_; }

    /// log(avg_box |f|^p) (finite p) or log extremum (infinite p).
    double log_mean(const AlignedBox& b) const
    {
        if (std::isinf(p_)) {
            const bool want_max = p_ > 0;
            double best = want_max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
            for_each_cell(b, [&](std::size_t k) {
                best = want_max ? std::max(best, logs_[k]) : std::min(best, logs_[k]);
            });
            return best;
        }
        const double s = table_.sum(b);
        if (s <= 0.0) return -std::numeric_limits<double>::infinity();
        return shift_ + std::log(s / static_cast<double>(b.cells()));
    }

    /// log of (avg |f|^p)^(1/p), the log power mean; extremum for infinite p.
    double log_power_mean(const AlignedBox& b) const
    {
        const double lm = log_mean(b);
        return std::isinf(p_) ? lm : lm / p_;
    }

private:
    template <class F>
    void for_each_cell(const AlignedBox& b, F&& fn) const
    {
        if (geom_.dim() == 1) {
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i) fn(static_cast<std::size_t>(i));
        } else {
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i)
                for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j) fn(geom_.index(i, j));
        }
    }

    GridGeometry geom_{};
    double p_ = 1.0;
    double shift_ = 0.0;
    std::vector<double> logs_;
    PrefixTable table_;
};

} // namespace morrey
