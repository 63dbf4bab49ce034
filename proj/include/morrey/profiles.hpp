#pragma once

#include "errors.hpp"
#include "rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace morrey {

/// Theorem identifiers understood by the validators and the ratio harness.
inline const std::vector<std::string>& theorem_ids()
{
    static const std::vector<std::string> ids{"adams", "bilinear-q1", "bilinear-q", "bilinear-p2", "product", "two-weight",
                                              "one-weight", "olsen", "fsdual", "stein-weiss", "necessity", "sharp"};
    return ids;
}

/// Named exact exponents (alpha, p1, q1, p2, q2, p, q, s, t, r, a, ...) plus
/// the dimension n. Missing names are an error when a predicate needs them.
struct ExponentProfile {
    std::string theorem;
    int n = 1;
    std::map<std::string, Rational> v;

    Rational get(const std::string& name) const
    {
        auto it = v.find(name);
        if (it == v.end()) throw parameter_error(theorem + ": missing exponent " + name);
        return it->second;
    }
    double d(const std::string& name) const { return get(name).value(); }
    bool has(const std::string& name) const { return v.count(name) != 0; }
    ExponentProfile& set(const std::string& name, Rational x)
    {
        v[name] = x;
        return *this;
    }

    /// "theorem n=1 a=6/5 alpha=1/4 ..." in key order.
    std::string canonical() const
    {
        std::string s = theorem + " n=" + std::to_string(n);
        for (const auto& [k, x] : v) s += " " + k + "=" + x.str();
        return s;
    }
};

namespace detail {

inline Rational inv(const Rational& x) { return x.reciprocal(); }

inline void rel(bool ok, const ExponentProfile& p, const std::string& what)
{
    if (!ok) throw parameter_error(p.theorem + ": violated " + what);
}

/// (x)' = x / (x - 1).
inline Rational conj(const Rational& x) { return x / (x - Rational(1)); }

} // namespace detail

/// Fills the derived exponents (q from q1, q2; p from p1, p2 where the
/// theorem uses it) without overwriting given values.
inline ExponentProfile complete(ExponentProfile p)
{
    using detail::inv;
    if (p.has("q1") && p.has("q2") && !p.has("q")) p.set("q", inv(inv(p.get("q1")) + inv(p.get("q2"))));
    if (p.has("p1") && p.has("p2") && !p.has("p") && (p.theorem == "stein-weiss")) p.set("p", inv(inv(p.get("p1")) + inv(p.get("p2"))));
    return p;
}

/// Checks every hypothesis of the named theorem exactly; throws
/// parameter_error naming the first violated relation.
inline void validate_profile(const ExponentProfile& in)
{
    using detail::inv;
    using detail::rel;
    const ExponentProfile p = complete(in);
    const Rational zero(0), one(1);
    const Rational n(p.n);
    rel(p.n == 1 || p.n == 2, p, "n in {1, 2}");
    const std::string& th = p.theorem;
    auto A = [&] { return p.get("alpha"); };
    auto two_weight_common = [&](bool strict_alpha) {
        const Rational q1 = p.get("q1"), q2 = p.get("q2"), q = p.get("q"), pp = p.get("p"), s = p.get("s"),
                       t = p.get("t"), r = p.get("r");
        rel(zero < A() && A() < n, p, "0 < alpha < n");
        rel(one < q1 && one < q2 && !q1.is_infinite() && !q2.is_infinite(), p, "1 < q1, q2 < inf");
        rel(inv(q) == inv(q1) + inv(q2), p, "1/q = 1/q1 + 1/q2");
        rel(zero < q && q <= pp && !pp.is_infinite(), p, "0 < q <= p < inf");
        rel(zero < t && t <= s && !s.is_infinite(), p, "0 < t <= s < inf");
        rel(zero < r, p, "0 < r <= inf");
        if (strict_alpha) rel(A() / n > inv(r), p, "alpha/n > 1/r");
        rel(inv(s) == inv(pp) + inv(r) - A() / n, p, "1/s = 1/p + 1/r - alpha/n");
        rel(t / s == q / pp, p, "t/s = q/p");
        rel(t <= one, p, "0 < t <= 1");
    };

    if (th == "adams") {
        const Rational pp = p.get("p"), q = p.get("q"), s = p.get("s"), t = p.get("t");
        rel(zero < A() && A() < n, p, "0 < alpha < n");
        rel(one < q && q <= pp && !pp.is_infinite(), p, "1 < q <= p < inf");
        rel(one < t && t <= s && !s.is_infinite(), p, "1 < t <= s < inf");
        rel(inv(s) == inv(pp) - A() / n, p, "1/s = 1/p - alpha/n");
        rel(t / s == q / pp, p, "t/s = q/p");
    } else if (th == "bilinear-q1" || th == "bilinear-q") {
        const Rational p1 = p.get("p1"), q1 = p.get("q1"), p2 = p.get("p2"), q2 = p.get("q2"), s = p.get("s"),
                       t = p.get("t");
        rel(one < q1 && q1 <= p1 && !p1.is_infinite(), p, "1 < q1 <= p1 < inf");
        rel(one < q2 && q2 <= p2 && !p2.is_infinite(), p, "1 < q2 <= p2 < inf");
        rel(inv(q1) + inv(q2) < one, p, "1/q1 + 1/q2 < 1");
        rel(one < t && t <= s && !s.is_infinite(), p, "1 < t <= s < inf");
        rel(zero < A() && A() < n, p, "0 < alpha < n");
        rel(inv(s) == inv(p1) + inv(p2) - A() / n, p, "1/s = 1/p1 + 1/p2 - alpha/n");
        if (th == "bilinear-q1") {
            rel(t / s == q1 / p1, p, "t/s = q1/p1");
            rel(q1 / p1 == q2 / p2, p, "q1/p1 = q2/p2");
        } else {
            rel(inv(t) == inv(q1) + inv(q2) - A() / n, p, "1/t = 1/q1 + 1/q2 - alpha/n");
        }
    } else if (th == "bilinear-p2") {
        const Rational p1 = p.get("p1"), q1 = p.get("q1"), p2 = p.get("p2"), q2 = p.get("q2");
        rel(zero < A() && A() < n, p, "0 < alpha < n");
        rel(p1 == n / A(), p, "p1 = n/alpha");
        rel(one < q1 && q1 <= p1, p, "1 < q1 <= p1");
        rel(one < q2 && q2 <= p2 && p2 < q2 * n / A(), p, "1 < q2 <= p2 < q2 n/alpha");
        rel(inv(q1) + inv(q2) < one, p, "1/q1 + 1/q2 < 1");
    } else if (th == "product") {
        const Rational p0 = p.get("p0"), pp = p.get("p"), q0 = p.get("q0"), q = p.get("q"), r0 = p.get("r0"),
                       r = p.get("r");
        rel(zero < A() && A() < n, p, "0 < alpha < n");
        rel(one < pp && pp <= p0 && !p0.is_infinite(), p, "1 < p <= p0 < inf");
        rel(one < q && q <= q0 && !q0.is_infinite(), p, "1 < q <= q0 < inf");
        rel(one < r && r <= r0 && !r0.is_infinite(), p, "1 < r <= r0 < inf");
        rel(q > r, p, "q > r");
        rel(inv(p0) > A() / n, p, "1/p0 > alpha/n");
        rel(inv(q0) <= A() / n, p, "1/q0 <= alpha/n");
        rel(inv(r0) == inv(p0) + inv(q0) - A() / n, p, "1/r0 = 1/p0 + 1/q0 - alpha/n");
        rel(r / r0 == pp / p0, p, "r/r0 = p/p0");
    } else if (th == "two-weight" || th == "fsdual") {
        two_weight_common(true);
        const Rational s = p.get("s"), r = p.get("r"), a = p.get("a"), q1 = p.get("q1"), q2 = p.get("q2");
        if (s < one) {
            rel(s / (one - s) < r, p, "s/(1-s) < r");
            rel(one < a && a < r * (one - s) / s && a < q1 && a < q2, p, "1 < a < min(r(1-s)/s, q1, q2)");
        } else {
            rel(one < a && a < q1 && a < q2, p, "1 < a < min(q1, q2)");
        }
        if (th == "fsdual") {
            const Rational s1 = p.get("s1"), s2 = p.get("s2"), r1 = p.get("r1"), r2 = p.get("r2");
            rel(s < one, p, "0 < s < 1");
            rel(zero < s1 && s1 < one && zero < s2 && s2 < one, p, "0 < s_i < 1");
            rel(s1 / (one - s1) < r1 && s2 / (one - s2) < r2, p, "s_i/(1-s_i) < r_i");
            rel((one - s) / (a * s) == (one - s1) / s1 + (one - s2) / s2, p,
                "(1-s)/(as) = (1-s1)/s1 + (1-s2)/s2");
            rel(inv(r) == inv(r1) + inv(r2), p, "1/r = 1/r1 + 1/r2");
        }
    } else if (th == "olsen") {
        two_weight_common(true);
        const Rational s = p.get("s"), r = p.get("r"), a = p.get("a");
        rel(s < one, p, "0 < t <= s < 1");
        rel(s / (one - s) < r, p, "s/(1-s) < r");
        rel(one < a, p, "a > 1");
    } else if (th == "one-weight") {
        const Rational q1 = p.get("q1"), q2 = p.get("q2"), q = p.get("q"), pp = p.get("p"), s = p.get("s"),
                       t = p.get("t"), a = p.get("a");
        rel(zero < A() && A() < n, p, "0 < alpha < n");
        rel(one < q1 && one < q2 && !q1.is_infinite() && !q2.is_infinite(), p, "1 < q1, q2 < inf");
        rel(inv(q) == inv(q1) + inv(q2), p, "1/q = 1/q1 + 1/q2");
        rel(zero < q && q <= pp && !pp.is_infinite(), p, "0 < q <= p < inf");
        rel(zero < t && t <= s && !s.is_infinite(), p, "0 < t <= s < inf");
        rel(one < a, p, "a > 1");
        rel(inv(s) == inv(pp) - A() / n, p, "1/s = 1/p - alpha/n");
        rel(t / s == q / pp, p, "t/s = q/p");
        rel(t <= one, p, "0 < t <= 1");
    } else if (th == "stein-weiss") {
        const Rational p1 = p.get("p1"), q1 = p.get("q1"), p2 = p.get("p2"), q2 = p.get("q2"), pp = p.get("p"),
                       q = p.get("q"), s = p.get("s"), t = p.get("t"), r = p.get("r"), a = p.get("a");
        rel(zero < A() && A() < n, p, "0 < alpha < n");
        rel(one < q1 && q1 <= p1 && !p1.is_infinite(), p, "1 < q1 <= p1 < inf");
        rel(one < q2 && q2 <= p2 && !p2.is_infinite(), p, "1 < q2 <= p2 < inf");
        rel(zero < t && t <= s && s < one, p, "0 < t <= s < 1");
        rel(n / (n - A()) < r, p, "n/(n-alpha) < r <= inf");
        rel(one < a && a < q1 && a < q2, p, "1 < a < min(q1, q2)");
        rel(inv(pp) == inv(p1) + inv(p2), p, "1/p = 1/p1 + 1/p2");
        rel(inv(s) == inv(pp) + inv(r) - (n - A()) / n, p, "1/s = 1/p + 1/r - (n-alpha)/n");
        rel(inv(t) == inv(q) + inv(r) - (n - A()) / n, p, "1/t = 1/q + 1/r - (n-alpha)/n");
    } else if (th == "necessity") {
        const Rational q1 = p.get("q1"), q2 = p.get("q2"), q = p.get("q"), pp = p.get("p"), s = p.get("s"),
                       t = p.get("t"), r = p.get("r");
        rel(zero <= A() && A() < n, p, "0 <= alpha < n");
        rel(one < q1 && one < q2 && !q1.is_infinite() && !q2.is_infinite(), p, "1 < q1, q2 < inf");
        rel(inv(q) == inv(q1) + inv(q2), p, "1/q = 1/q1 + 1/q2");
        rel(zero < q && q <= pp && !pp.is_infinite(), p, "0 < q <= p < inf");
        rel(one <= t && t <= s && !s.is_infinite(), p, "1 <= t <= s < inf");
        rel(A() / n >= inv(r) && inv(r) >= zero, p, "alpha/n >= 1/r >= 0");
        rel(inv(s) == inv(pp) + inv(r) - A() / n, p, "1/s = 1/p + 1/r - alpha/n");
        rel(t / s == q / pp, p, "t/s = q/p");
    } else if (th == "sharp") {
        const Rational p1 = p.get("p1"), q1 = p.get("q1"), p2 = p.get("p2"), q2 = p.get("q2"), s = p.get("s"),
                       t = p.get("t");
        rel(zero < A() && A() < n, p, "0 < alpha < n");
        rel(zero < t && t <= s && !s.is_infinite(), p, "0 < t <= s < inf");
        rel(zero < q1 && q1 <= p1 && !p1.is_infinite(), p, "0 < q1 <= p1 < inf");
        rel(zero < q2 && q2 <= p2 && !p2.is_infinite(), p, "0 < q2 <= p2 < inf");
        rel(inv(s) == inv(p1) + inv(p2) - A() / n, p, "1/s = 1/p1 + 1/p2 - alpha/n");
        rel(q1 / p1 >= q2 / p2, p, "q1/p1 >= q2/p2 (the implemented branch)");
        rel(t / s >= q1 / p1, p, "t/s >= q1/p1");
    } else {
        throw parameter_error("unknown theorem id " + th);
    }
}

/// Parameter sets used by the harness; each satisfies its validator.
inline ExponentProfile default_profile(const std::string& th)
{
    auto R = [](const char* s) { return Rational::parse(s); };
    ExponentProfile p{th, 1, {}};
    if (th == "adams") {
        p.set("alpha", R("3/10")).set("p", R("2")).set("q", R("3/2")).set("s", R("5")).set("t", R("15/4"));
    } else if (th == "bilinear-q1") {
        p.set("alpha", R("3/10")).set("p1", R("4")).set("q1", R("3")).set("p2", R("4")).set("q2", R("3"));
        p.set("s", R("5")).set("t", R("15/4"));
    } else if (th == "bilinear-q") {
        p.set("alpha", R("3/10")).set("p1", R("4")).set("q1", R("3")).set("p2", R("4")).set("q2", R("3"));
        p.set("s", R("5")).set("t", R("30/11"));
    } else if (th == "bilinear-p2") {
        p.set("alpha", R("1/2")).set("p1", R("2")).set("q1", R("2")).set("p2", R("4")).set("q2", R("3"));
    } else if (th == "product") {
        p.set("alpha", R("1/2")).set("p0", R("3/2")).set("p", R("5/4")).set("q0", R("4")).set("q", R("3"));
        p.set("r0", R("12/5")).set("r", R("2"));
    } else if (th == "two-weight" || th == "fsdual" || th == "olsen") {
        p.set("alpha", R("1/4")).set("q1", R("3/2")).set("q2", R("3/2")).set("p", R("3/4")).set("r", R("8"));
        p.set("a", R("6/5")).set("s", R("24/29")).set("t", R("24/29"));
        if (th == "fsdual") p.set("s1", R("288/313")).set("s2", R("288/313")).set("r1", R("16")).set("r2", R("16"));
    } else if (th == "one-weight") {
        p.set("alpha", R("1/4")).set("q1", R("3/2")).set("q2", R("3/2")).set("p", R("3/4")).set("a", R("6/5"));
        p.set("s", R("12/13")).set("t", R("12/13")).set("r", Rational::infinity());
    } else if (th == "stein-weiss") {
        p.set("alpha", R("1/2")).set("q1", R("5/4")).set("q2", R("5/4")).set("p1", R("3/2")).set("p2", R("3/2"));
        p.set("r", R("4")).set("a", R("11/10")).set("s", R("12/13")).set("t", R("20/27"));
    } else if (th == "necessity") {
        p.set("alpha", R("1/2")).set("q1", R("3")).set("q2", R("3")).set("p", R("2")).set("r", R("4"));
        p.set("s", R("4")).set("t", R("3"));
    } else if (th == "sharp") {
        p.set("alpha", R("3/10")).set("p1", R("4")).set("q1", R("2")).set("p2", R("4")).set("q2", R("2"));
        p.set("s", R("5")).set("t", R("5"));
    } else {
        throw parameter_error("unknown theorem id " + th);
    }
    return complete(p);
}

} // namespace morrey
