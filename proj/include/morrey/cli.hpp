#pragma once

#include "checks.hpp"
#include "csv.hpp"
#include "decomposition.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "mgf.hpp"
#include "norms.hpp"
#include "operators.hpp"
#include "profiles.hpp"
#include "rational.hpp"
#include "selftest.hpp"
#include "sharpness.hpp"
#include "weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace morrey::cli {

inline const std::vector<std::string>& exponent_names()
{
    static const std::vector<std::string> names{"alpha", "p", "q", "p1", "q1", "p2", "q2", "s",
                                                "t", "r", "a", "beta", "gamma1", "gamma2"};
    return names;
}

/// Parsed command line. Exponents are kept as exact rationals.
struct RunConfig {
    std::string command;
    std::string kind; ///< experiment name
    std::map<std::string, Rational> exps;
    int dim = 1;
    int depth = 6;
    int rootlevel = 0;
    std::uint64_t seed = 1;
    std::string in, in2, v, w1, w2, out;
    std::string family = "dyadic";
    std::string norm = "morrey";
    std::string op = "b";
    std::string variant = "two-weight-s<1";
    std::string theorem;
    std::vector<int> levels;
    std::vector<int> deltas;
    int systems = 10;
    int per_kind = 3;
    std::size_t budget = 50000000;
    int subdivide = 0; ///< 0: exact singular-cell rule, else subdivision depth
    double slack = 1.05;
    bool json = false;

    bool has(const std::string& name) const { return exps.count(name) != 0; }
    double d(const std::string& name) const
    {
        auto it = exps.find(name);
        if (it == exps.end()) throw parameter_error("missing exponent --" + name);
        return it->second.value();
    }

    /// Canonical argument vector; parsing it yields the same configuration.
    std::vector<std::string> canonical() const;
    std::string canonical_string() const
    {
        std::string s;
        for (const auto& a : canonical()) s += (s.empty() ? "" : " ") + a;
        return s;
    }
};

namespace detail {

inline std::string join_ints(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

/// "4..8" or "4,5,6".
inline std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    try {
        if (const auto dots = text.find(".."); dots != std::string::npos) {
            const int lo = std::stoi(text.substr(0, dots)), hi = std::stoi(text.substr(dots + 2));
            ::morrey::detail::require(lo <= hi, "empty range " + text);
            for (int i = lo; i <= hi; ++i) out.push_back(i);
            return out;
        }
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    } catch (const std::logic_error&) {
        throw parameter_error("cannot parse integer list '" + text + "'");
    }
    ::morrey::detail::require(!out.empty(), "empty integer list");
    return out;
}

inline std::string fmt_slack(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace detail

inline std::vector<std::string> RunConfig::canonical() const
{
    std::vector<std::string> a{command};
    if (!kind.empty()) a.push_back(kind);
    for (const auto& [k, x] : exps) {
        a.push_back("--" + k);
        a.push_back(x.str());
    }
    auto opt = [&](const std::string& k, const std::string& v) {
        a.push_back("--" + k);
        a.push_back(v);
    };
    opt("budget", std::to_string(budget));
    opt("depth", std::to_string(depth));
    if (!deltas.empty()) opt("deltas", detail::join_ints(deltas));
    opt("dim", std::to_string(dim));
    opt("family", family);
    if (!in.empty()) opt("in", in);
    if (!in2.empty()) opt("in2", in2);
    if (json) a.push_back("--json");
    if (!levels.empty()) opt("levels", detail::join_ints(levels));
    a.push_back("--" + norm);
    opt("op", op);
    if (!out.empty()) opt("out", out);
    opt("per-kind", std::to_string(per_kind));
    opt("rootlevel", std::to_string(rootlevel));
    opt("seed", std::to_string(seed));
    opt("slack", detail::fmt_slack(slack));
    opt("subdivide", std::to_string(subdivide));
    opt("systems", std::to_string(systems));
    if (!theorem.empty()) opt("theorem", theorem);
    if (!v.empty()) opt("v", v);
    opt("variant", variant);
    if (!w1.empty()) opt("w1", w1);
    if (!w2.empty()) opt("w2", w2);
    return a;
}

inline const std::vector<std::string>& commands()
{
    static const std::vector<std::string> c{"norm", "op", "char", "cz", "experiment", "selftest"};
    return c;
}

inline const std::vector<std::string>& experiments()
{
    static const std::vector<std::string> e{"sharpness", "harness", "sw", "necessity", "fsdual"};
    return e;
}

/// Parses arguments (without the program name). Throws parameter_error on
/// any malformed or unknown input.
inline RunConfig parse(const std::vector<std::string>& args)
{
    RunConfig c;
    CLI::App app{"morrey"};
    app.set_help_flag();
    std::map<std::string, std::string> raw;
    for (const auto& n : exponent_names()) app.add_option("--" + n, raw[n]);
    std::string levels, deltas;
    bool morrey = false, lebesgue = false, weak = false;
    app.add_option("--dim", c.dim);
    app.add_option("--depth", c.depth);
    app.add_option("--rootlevel", c.rootlevel);
    app.add_option("--seed", c.seed);
    app.add_option("--in", c.in);
    app.add_option("--in2", c.in2);
    app.add_option("--v", c.v);
    app.add_option("--w1", c.w1);
    app.add_option("--w2", c.w2);
    app.add_option("--out", c.out);
    app.add_option("--family", c.family)->check(CLI::IsMember({"dyadic", "all"}));
    app.add_option("--op", c.op)->check(CLI::IsMember({"i", "b", "b-dyadic", "m", "m-triple"}));
    app.add_option("--variant", c.variant)
        ->check(CLI::IsMember({"two-weight-s<1", "two-weight-s>=1", "remark", "one-weight-s<1", "one-weight-s>=1", "testing"}));
    app.add_option("--theorem", c.theorem);
    app.add_option("--levels", levels);
    app.add_option("--deltas", deltas);
    app.add_option("--systems", c.systems);
    app.add_option("--per-kind", c.per_kind);
    app.add_option("--budget", c.budget);
    app.add_option("--subdivide", c.subdivide);
    app.add_option("--slack", c.slack);
    app.add_flag("--json", c.json);
    app.add_flag("--morrey", morrey);
    app.add_flag("--lebesgue", lebesgue);
    app.add_flag("--weak", weak);
    std::vector<std::string> positional;
    app.add_option("command", positional);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        throw parameter_error(std::string("command line: ") + e.what());
    }
    ::morrey::detail::require(!positional.empty(), "missing subcommand (one of norm, op, char, cz, experiment, selftest)");
    c.command = positional[0];
    bool known = false;
    for (const auto& k : commands()) known = known || k == c.command;
    ::morrey::detail::require(known, "unknown subcommand '" + c.command + "'");
    if (c.command == "experiment") {
        ::morrey::detail::require(positional.size() == 2, "experiment needs one name: sharpness, harness, sw, necessity, fsdual");
        c.kind = positional[1];
        bool ok = false;
        for (const auto& k : experiments()) ok = ok || k == c.kind;
        ::morrey::detail::require(ok, "unknown experiment '" + c.kind + "'");
    } else {
        ::morrey::detail::require(positional.size() == 1, "unexpected argument '" + (positional.size() > 1 ? positional[1] : "") + "'");
    }
    for (const auto& [k, text] : raw)
        if (!text.empty()) c.exps[k] = Rational::parse(text);
    ::morrey::detail::require(int(morrey) + int(lebesgue) + int(weak) <= 1, "choose one of --morrey, --lebesgue, --weak");
    if (lebesgue) c.norm = "lebesgue";
    if (weak) c.norm = "weak";
    if (!levels.empty()) c.levels = detail::parse_int_list(levels);
    if (!deltas.empty()) c.deltas = detail::parse_int_list(deltas);
    ::morrey::detail::require(c.dim == 1 || c.dim == 2, "--dim must be 1 or 2");
    ::morrey::detail::require(c.depth >= 0 && c.depth <= 24, "--depth must lie in [0, 24]");
    ::morrey::detail::require(c.systems > 0 && c.per_kind > 0, "--systems and --per-kind must be positive");
    ::morrey::detail::require(c.subdivide >= 0 && c.subdivide <= 20, "--subdivide must lie in [0, 20]");
    ::morrey::detail::require(c.slack >= 1.0, "--slack must be at least 1");
    return c;
}

/// Writes tables as CSV files and, with --json, as JSON lines on stdout.
class Output {
public:
    explicit Output(const RunConfig& c, std::ostream& os) : c_(c), os_(os) {}

    void table(const std::string& name, const Table& t, const std::string& path) const
    {
        if (!path.empty()) t.write_csv_file(path);
        if (!c_.json) return;
        for (const auto& row : t.rows) {
            nlohmann::ordered_json j;
            j["table"] = name;
            for (std::size_t i = 0; i < row.size(); ++i) j[t.columns[i]] = cell(row[i]);
            os_ << j.dump() << '\n';
        }
    }

    void summary(const std::string& text, const nlohmann::ordered_json& fields = {}) const
    {
        if (c_.json) {
            nlohmann::ordered_json j;
            j["summary"] = text;
            for (auto it = fields.begin(); it != fields.end(); ++it) j[it.key()] = it.value();
            os_ << j.dump() << '\n';
        } else {
            os_ << text << '\n';
        }
    }

    std::string path_in_out_dir(const std::string& file) const
    {
        if (c_.out.empty()) return {};
        std::filesystem::create_directories(c_.out);
        return c_.out + "/" + file;
    }

private:
    static nlohmann::ordered_json cell(const std::string& s)
    {
        if (s.empty()) return nullptr;
        char* end = nullptr;
        const double x = std::strtod(s.c_str(), &end);
        if (end == s.c_str() + s.size() && std::isfinite(x)) {
            if (s.find_first_of(".eE") == std::string::npos) return std::stoll(s);
            return x;
        }
        return s;
    }

    const RunConfig& c_;
    std::ostream& os_;
};

namespace detail {

inline ExponentProfile profile_with_overrides(const std::string& theorem, const RunConfig& c)
{
    ExponentProfile p = default_profile(theorem);
    p.n = c.dim;
    bool qi = false, pi = false;
    for (const auto& [k, x] : c.exps) {
        if (k == "beta" || k == "gamma1" || k == "gamma2") continue;
        p.set(k, x);
        qi = qi || k == "q1" || k == "q2";
        pi = pi || k == "p1" || k == "p2";
    }
    if (qi && !c.has("q")) p.v.erase("q");
    if (pi && !c.has("p") && theorem == "stein-weiss") p.v.erase("p");
    if (theorem == "sharp" && !c.has("s") && p.has("p1") && p.has("p2")) {
        using ::morrey::detail::inv;
        p.set("s", inv(inv(p.get("p1")) + inv(p.get("p2")) - p.get("alpha") / Rational(p.n)));
    }
    return complete(p);
}

inline KernelSpec kernel_spec(const RunConfig& c, double alpha, int dim)
{
    KernelSpec k{alpha, dim};
    if (c.subdivide > 0) {
        k.rule = SingularRule::subdivide;
        k.subdivide_depth = c.subdivide;
    }
    k.validate();
    return k;
}

inline CubeFamily family_for(const RunConfig& c, const GridGeometry& g)
{
    return make_family(g, c.family == "all" ? FamilyTag::all_aligned : FamilyTag::dyadic_subcubes);
}

inline CharVariant variant_of(const std::string& name)
{
    for (CharVariant v : {CharVariant::two_weight_s_lt_1, CharVariant::two_weight_s_ge_1, CharVariant::remark,
                          CharVariant::one_weight_s_lt_1, CharVariant::one_weight_s_ge_1, CharVariant::testing})
        if (name == variant_name(v)) return v;
    throw parameter_error("unknown variant " + name);
}

inline std::string num(double x) { return ::morrey::detail::num(x); }

inline int run_norm(const RunConfig& c, const Output& out)
{
    ::morrey::detail::require(!c.in.empty(), "norm needs --in");
    const GridFunction f = mgf::read_file(c.in);
    if (c.norm == "lebesgue") {
        const double v = lebesgue_norm(f, c.d("t"));
        out.summary("lebesgue norm " + num(v), {{"value", v}});
        return 0;
    }
    if (c.norm == "weak") {
        const double v = weak_quasinorm(f, c.d("p"));
        out.summary("weak quasinorm " + num(v), {{"value", v}});
        return 0;
    }
    const Rational p = c.exps.count("p") ? c.exps.at("p") : throw parameter_error("missing exponent --p");
    const Rational q = c.exps.count("q") ? c.exps.at("q") : throw parameter_error("missing exponent --q");
    ::morrey::detail::require(Rational(0) < q && q <= p && !p.is_infinite(), "0 < q <= p < inf violated");
    const NormReport r = morrey_norm(f, p.value(), q.value(), family_for(c, f.geom));
    out.summary("morrey norm " + num(r.value) + " attained at " + r.attaining.str(),
                {{"value", r.value}, {"cube", r.attaining.str()}});
    return 0;
}

inline int run_op(const RunConfig& c, const Output& out)
{
    ::morrey::detail::require(!c.in.empty(), "op needs --in");
    const GridFunction f = mgf::read_file(c.in);
    const GridFunction g = c.in2.empty() ? f : mgf::read_file(c.in2);
    const int n = f.geom.dim();
    GridFunction res;
    if (c.op == "i") {
        res = i_alpha(f, kernel_spec(c, c.d("alpha"), n));
    } else if (c.op == "b") {
        res = b_alpha(f, g, kernel_spec(c, c.d("alpha"), n));
    } else if (c.op == "b-dyadic") {
        const DyadicModel dm = b_alpha_dyadic(f, g, kernel_spec(c, c.d("alpha"), n), f.geom.root);
        std::vector<double> v(dm.field.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = dm.field[i] + dm.tail[i];
        res = GridFunction(f.geom, std::move(v), Sign::nonneg);
    } else if (c.op == "m") {
        res = m_alpha_bilinear(f, g, c.d("alpha"), family_for(c, f.geom));
    } else {
        res = m_triple_dyadic(f, g, dyadic_family(f.geom));
    }
    if (!c.out.empty()) mgf::write_file(c.out, res);
    double mx = 0.0;
    for (double x : res.values) mx = std::max(mx, std::fabs(x));
    out.summary("op " + c.op + ": " + std::to_string(res.size()) + " cells, max " + num(mx),
                {{"op", c.op}, {"cells", res.size()}, {"max", mx}});
    return 0;
}

inline int run_char(const RunConfig& c, const Output& out)
{
    WeightSystem ws;
    if (!c.v.empty() || !c.w1.empty() || !c.w2.empty()) {
        ::morrey::detail::require(!c.v.empty() && !c.w1.empty() && !c.w2.empty(), "char needs all of --v, --w1, --w2");
        ws = WeightSystem{mgf::read_file(c.v), mgf::read_file(c.w1), mgf::read_file(c.w2), std::nullopt};
    } else {
        const GridGeometry g{DyadicCube{c.dim, c.rootlevel, {0, 0}}, c.depth + c.rootlevel};
        auto get = [&](const char* k) { return c.has(k) ? c.d(k) : 0.0; };
        ws = WeightSystem::from_powers({get("beta"), get("gamma1"), get("gamma2"), {0.0, 0.0}}, g);
    }
    ws.validate();
    CharParams cp;
    cp.alpha = c.d("alpha");
    cp.n = ws.geom().dim();
    cp.q1 = c.d("q1");
    cp.q2 = c.d("q2");
    cp.q = c.has("q") ? c.d("q") : 1.0 / (1.0 / cp.q1 + 1.0 / cp.q2);
    cp.p = c.has("p") ? c.d("p") : cp.q;
    cp.s = c.has("s") ? c.d("s") : 1.0;
    cp.t = c.has("t") ? c.d("t") : 1.0;
    cp.r = c.has("r") ? c.d("r") : std::numeric_limits<double>::infinity();
    cp.a = c.has("a") ? c.d("a") : 1.1;
    cp.variant = variant_of(c.variant);
    const CharacteristicReport r = characteristic(ws, cp, family_for(c, ws.geom()), c.budget);
    if (r.overflow) throw numerical_error("characteristic overflows: log value " + num(r.log_value));
    std::string text = std::string("characteristic ") + variant_name(cp.variant) + " " + num(r.value) + " at " + r.q.str();
    if (r.outer != r.inner) text += " inside " + r.q_outer.str();
    if (r.truncated) text += " (pair budget reached)";
    out.summary(text, {{"value", r.value}, {"cube", r.q.str()}, {"outer", r.q_outer.str()}, {"truncated", r.truncated}});
    return 0;
}

inline int run_cz(const RunConfig& c, const Output& out)
{
    ::morrey::detail::require(!c.in.empty(), "cz needs --in");
    const GridFunction f = mgf::read_file(c.in);
    const GridFunction g = c.in2.empty() ? f : mgf::read_file(c.in2);
    const DyadicCube q0 = f.geom.root;
    const double a = c.has("a") ? c.d("a") : choose_a(f, g, q0);
    const StoppingFamily sf = cz_decompose(f, g, q0, a);
    const HalvingReport h = verify_halving(sf);
    out.table("cz", sf.table(), c.out);
    std::size_t sel = 0;
    for (const auto& gen : sf.generations) sel += gen.size();
    out.summary("cz: a = " + num(a) + ", " + std::to_string(sf.generations.size()) + " generations, " + std::to_string(sel) +
                    " cubes, halving " + (h.ok ? "holds" : "fails") + " (worst " + num(h.worst_ratio) + ")",
                {{"a", a}, {"generations", sf.generations.size()}, {"cubes", sel}, {"halving", h.ok}});
    return 0;
}

inline int run_experiment(const RunConfig& c, const Output& out)
{
    if (c.kind == "sharpness") {
        const ExponentProfile p = profile_with_overrides("sharp", c);
        const std::vector<int> ms = c.deltas.empty() ? std::vector<int>{4, 5, 6, 7, 8} : c.deltas;
        const SharpnessResult r = run_sharpness(p, ms);
        out.table("sharpness", r.table(), out.path_in_out_dir("sharpness.csv"));
        out.summary("sharpness: slope " + num(r.slope) + ", predicted " + num(r.predicted) +
                        (r.blowup_branch ? " (blow-up branch)" : " (boundary branch)"),
                    {{"slope", r.slope}, {"predicted", r.predicted}});
        return 0;
    }
    if (c.kind == "harness") {
        ::morrey::detail::require(!c.theorem.empty(), "harness needs --theorem");
        ::morrey::detail::require(c.theorem != "sharp", "the lattice construction runs under 'experiment sharpness'");
        const ExponentProfile p = profile_with_overrides(c.theorem, c);
        HarnessOptions opt;
        if (!c.levels.empty()) opt.levels = c.levels;
        opt.seed = c.seed;
        opt.per_kind = c.per_kind;
        opt.dim = c.dim;
        opt.growth_slack = c.slack;
        if (c.has("beta") || c.has("gamma1") || c.has("gamma2")) {
            auto get = [&](const char* k) { return c.has(k) ? c.d(k) : 0.0; };
            opt.powers = PowerDescriptor{get("beta"), get("gamma1"), get("gamma2"), {0.0, 0.0}};
        }
        const HarnessResult h = ratio_harness(p, opt);
        out.table("harness", ratio_table(h.records), out.path_in_out_dir("harness_" + c.theorem + ".csv"));
        std::string mx;
        for (double m : h.max_by_level) mx += (mx.empty() ? "" : " ") + num(m);
        out.summary("harness " + c.theorem + ": max ratio per level " + mx + ", worst growth " + num(h.worst_growth) +
                        (h.stable ? ", stable" : ", unstable"),
                    {{"stable", h.stable}, {"worst_growth", h.worst_growth}});
        return h.stable ? 0 : 1;
    }
    if (c.kind == "sw") {
        const ExponentProfile p = profile_with_overrides("stein-weiss", c);
        auto get = [&](const char* k) { return c.has(k) ? c.d(k) : 0.0; };
        const int levels = c.levels.empty() ? 5 : c.levels.back() + 1;
        const SteinWeissResult s = stein_weiss_check(get("beta"), get("gamma1"), get("gamma2"), p, levels);
        Table t{{"K", "characteristic"}, {}};
        for (std::size_t k = 0; k < s.characteristic.size(); ++k) t.add({fmt(k), fmt(s.characteristic[k])});
        out.table("sw", t, out.path_in_out_dir("sw.csv"));
        out.summary("sw: " + s.verdict + (s.conditions ? ", conditions hold" : ", violated: " + s.violated),
                    {{"verdict", s.verdict}, {"conditions", s.conditions}, {"a", s.a}});
        return 0;
    }
    if (c.kind == "necessity") {
        const ExponentProfile p = profile_with_overrides("necessity", c);
        Table t{{"system", "char_testing", "operator_constant", "worst_testing", "worst_necessity"}, {}};
        bool ok = true;
        for (int s = 0; s < c.systems; ++s) {
            CounterRng rng(c.seed, 3000 + static_cast<std::uint64_t>(s));
            const NecessityResult n = necessity_check(random_block_weights(c.dim, c.depth, rng), p, c.seed);
            ok = ok && n.testing_ok && n.necessity_ok;
            t.add({fmt(s), fmt(n.char_testing), fmt(n.operator_constant), fmt(n.worst_testing), fmt(n.worst_necessity)});
        }
        out.table("necessity", t, out.path_in_out_dir("necessity.csv"));
        out.summary(std::string("necessity: ") + (ok ? "bounds hold" : "bound violated") + " on " +
                        std::to_string(c.systems) + " systems",
                    {{"ok", ok}});
        return ok ? 0 : 1;
    }
    // fsdual
    const ExponentProfile p = profile_with_overrides("fsdual", c);
    const double g1 = c.has("gamma1") ? c.d("gamma1") : -0.05, g2 = c.has("gamma2") ? c.d("gamma2") : -0.05;
    const FsDualResult r = fs_dual_check(g1, g2, p, c.depth, c.seed);
    out.table("fsdual", ratio_table(r.harness.records), out.path_in_out_dir("fsdual.csv"));
    out.summary("fsdual: worst split ratio " + num(r.worst_split) + (r.harness.stable ? ", stable" : ", unstable"),
                {{"worst_split", r.worst_split}, {"stable", r.harness.stable}});
    return r.pass ? 0 : 1;
}

inline int run_selftest(const RunConfig& c, const Output& out, std::ostream& os)
{
    const std::string dir = c.out.empty() ? "selftest_out" : c.out;
    const auto res = selftest(c.seed, dir);
    bool all = true;
    Table t{{"id", "name", "pass", "detail"}, {}};
    for (const auto& r : res) {
        all = all && r.pass;
        if (!c.json) os << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << '\n';
        t.add({r.id, r.name, r.pass ? "PASS" : "FAIL", r.detail});
    }
    out.table("selftest", t, {});
    std::size_t passed = 0;
    for (const auto& r : res) passed += r.pass;
    out.summary("selftest: " + std::to_string(passed) + "/" + std::to_string(res.size()) + " criteria pass, CSVs in " + dir,
                {{"passed", passed}, {"total", res.size()}});
    return all ? 0 : 1;
}

} // namespace detail

/// Entry point: 0 success, 1 failed check, 2 invalid parameters, 3 numerical failure.
inline int run(const std::vector<std::string>& args, std::ostream& os = std::cout, std::ostream& err = std::cerr)
{
    try {
        const RunConfig c = parse(args);
        const Output out(c, os);
        if (c.command == "norm") return detail::run_norm(c, out);
        if (c.command == "op") return detail::run_op(c, out);
        if (c.command == "char") return detail::run_char(c, out);
        if (c.command == "cz") return detail::run_cz(c, out);
        if (c.command == "experiment") return detail::run_experiment(c, out);
        return detail::run_selftest(c, out, os);
    } catch (const parameter_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return 3;
    }
}

} // namespace morrey::cli
