#pragma once

#include "errors.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace morrey {

enum class SingularRule {
    exact,    ///< closed form in 1D; polar reduction to a smooth 1D integral in 2D
    subdivide ///< 2D: dyadic midpoint subdivision of the singular cell to a fixed depth
};

/// Kernel |y|^(alpha - n) with 0 < alpha < n.
struct KernelSpec {
    double alpha = 0.5;
    int dim = 1;
    SingularRule rule = SingularRule::exact;
    int subdivide_depth = 12;

    void validate() const
    {
        detail::require(dim == 1 || dim == 2, "kernel dimension must be 1 or 2");
        detail::require(alpha > 0.0 && alpha < dim,
                        "kernel exponent alpha must lie in (0, n); got " + std::to_string(alpha));
        detail::require(subdivide_depth >= 1 && subdivide_depth <= 14, "subdivision depth must lie in [1, 14]");
    }
};

namespace detail {

/// integral over [j - 1/2, j + 1/2] of |u|^(alpha - 1), unit cells.
inline double unit_cell_1d(double alpha, std::int64_t j)
{
    if (j < 0) j = -j;
    if (j == 0) return 2.0 * std::pow(0.5, alpha) / alpha;
    const double x = 1.0 / (2.0 * static_cast<double>(j));
    const double d = std::expm1(alpha * std::log1p(x)) - std::expm1(alpha * std::log1p(-x));
    return std::pow(static_cast<double>(j), alpha) * d / alpha;
}

/// integral over [0,1]^2 of |u|^(alpha - 2), by the polar form
/// (2/alpha) * integral_0^{pi/4} cos(theta)^(-alpha) dtheta.
inline double unit_square_2d_exact(double alpha)
{
    using boost::math::quadrature::gauss_kronrod;
    const double quarter_pi = boost::math::constants::pi<double>() / 4.0;
    auto f = [alpha](double th) { return std::pow(std::cos(th), -alpha); };
    const double i = gauss_kronrod<double, 31>::integrate(f, 0.0, quarter_pi, 10, 1e-15);
    return 2.0 * i / alpha;
}

/// Same integral by midpoint sums on the dyadic subdivision of depth d,
/// using that the inner quarter at depth d equals 2^-alpha times the whole
/// square at depth d-1.
inline double unit_square_2d_midpoint(double alpha, int depth)
{
    auto k = [alpha](double x, double y) { return std::pow(x * x + y * y, 0.5 * (alpha - 2.0)); };
    double m = k(0.5, 0.5);
    for (int d = 1; d <= depth; ++d) {
        const std::int64_t n = std::int64_t{1} << d;
        const double h = 1.0 / static_cast<double>(n);
        long double outer = 0.0L;
        for (std::int64_t i = 0; i < n; ++i)
            for (std::int64_t j = 0; j < n; ++j) {
                if (i < n / 2 && j < n / 2) continue;
                outer += k((static_cast<double>(i) + 0.5) * h, (static_cast<double>(j) + 0.5) * h);
            }
        m = std::pow(2.0, -alpha) * m + static_cast<double>(outer) * h * h;
    }
    return m;
}

/// integral over the unit cell centred at (j0, j1) of |u|^(alpha - 2), j != 0.
inline double unit_cell_2d_regular(double alpha, std::int64_t j0, std::int64_t j1)
{
    const double c0 = static_cast<double>(j0);
    const double c1 = static_cast<double>(j1);
    auto k = [alpha](double x, double y) { return std::pow(x * x + y * y, 0.5 * (alpha - 2.0)); };
    const std::int64_t r = std::max(std::llabs(j0), std::llabs(j1));
    if (r <= 3) {
        using boost::math::quadrature::gauss_kronrod;
        auto inner = [&](double x) {
            auto fy = [&](double y) { return k(x, y); };
            return gauss_kronrod<double, 21>::integrate(fy, c1 - 0.5, c1 + 0.5, 8, 1e-14);
        };
        return gauss_kronrod<double, 21>::integrate(inner, c0 - 0.5, c0 + 0.5, 8, 1e-14);
    }
    using boost::math::quadrature::gauss;
    auto inner = [&](double x) {
        auto fy = [&](double y) { return k(x, y); };
        return gauss<double, 10>::integrate(fy, c1 - 0.5, c1 + 0.5);
    };
    return gauss<double, 10>::integrate(inner, c0 - 0.5, c0 + 0.5);
}

} // namespace detail

/// Integrals of the kernel over the cells of a lattice with side h centred at
/// j*h, for offsets |j_a| <= radius. Symmetric in each coordinate.
class KernelTable {
public:
    KernelTable() = default;
    KernelTable(const KernelSpec& spec, double h, std::int64_t radius) : spec_(spec), radius_(radius)
    {
        spec.validate();
        detail::require(h > 0.0 && radius >= 0, "kernel table needs positive cell side and nonnegative radius");
        const double scale = std::pow(h, spec.alpha);
        const std::int64_t w = radius + 1;
        if (spec.dim == 1) {
            k_.resize(static_cast<std::size_t>(w));
            for (std::int64_t j = 0; j <= radius; ++j) k_[j] = scale * detail::unit_cell_1d(spec.alpha, j);
        } else {
            k_.resize(static_cast<std::size_t>(w * w));
            for (std::int64_t a = 0; a <= radius; ++a)
                for (std::int64_t b = a; b <= radius; ++b) {
                    double v;
                    if (a == 0 && b == 0) {
                        const double sq = spec.rule == SingularRule::exact
                                              ? detail::unit_square_2d_exact(spec.alpha)
                                              : detail::unit_square_2d_midpoint(spec.alpha, spec.subdivide_depth);
                        // The centred cell is four copies of [0,1/2]^2 = 2^-alpha [0,1]^2.
                        v = 4.0 * std::pow(2.0, -spec.alpha) * sq;
                    } else {
                        v = detail::unit_cell_2d_regular(spec.alpha, a, b);
                    }
                    k_[a * w + b] = scale * v;
                    k_[b * w + a] = scale * v;
                }
        }
    }

    const KernelSpec& spec() const { return spec_; }
    std::int64_t radius() const { return radius_; }

    double operator()(std::int64_t j0, std::int64_t j1 = 0) const
    {
        if (j0 < 0) j0 = -j0;
        if (j1 < 0) j1 = -j1;
        if (spec_.dim == 1) return k_[j0];
        return k_[j0 * (radius_ + 1) + j1];
    }

private:
    KernelSpec spec_{};
    std::int64_t radius_ = 0;
    std::vector<double> k_;
};

} // namespace morrey
