#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hnpers/hnpers.hpp"

using namespace hnpers;

namespace {

struct Config {
    std::vector<std::string> modules;
    std::string stab;
    std::string window;
    std::string res = "1/4";
    std::string theta = "auto";
    std::uint32_t prime = 0;
    std::uint32_t prime2 = 0;
    bool oracle = false;
    std::uint64_t seed = harness::Options{}.seed;
    std::string out;
    bool quick = false;
    bool mutate_slope = false;
    std::string profile;
    bool skyscraper = false;
    std::vector<int> criteria;
};

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::usage: return 1;
        case ErrorKind::parse: return 2;
        case ErrorKind::validation:
        case ErrorKind::refinement: return 3;
        case ErrorKind::budget: return 4;
        case ErrorKind::invariant: return 5;
    }
    return 5;
}

bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

PrimeField prime_field(std::uint32_t p) {
    if (!is_prime(p) || p >= (1u << 31)) fail(ErrorKind::validation, std::to_string(p) + " is not a supported prime");
    return PrimeField{p};
}

std::vector<Rational> parse_list(const std::string& s, char sep) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            out.push_back(parse_rational(item));
        } catch (const Error&) {
            fail(ErrorKind::usage, "cannot read '" + item + "' as a rational");
        }
    }
    return out;
}

/// "lo:hi" for every axis, or one "lo:hi" per axis separated by commas.
std::pair<Point, Point> parse_window(const std::string& s, std::size_t n) {
    require(!s.empty(), "--window is required");
    Point lo, hi;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto v = parse_list(part, ':');
        require(v.size() == 2 && v[0] <= v[1], "window axes are written lo:hi");
        lo.push_back(v[0]);
        hi.push_back(v[1]);
    }
    if (lo.size() == 1 && n > 1) {
        lo.assign(n, lo[0]);
        hi.assign(n, hi[0]);
    }
    require(lo.size() == n, "window has the wrong number of axes");
    return {lo, hi};
}

Rational parse_res(const std::string& s) {
    auto v = parse_list(s, ',');
    require(v.size() == 1 && v[0] > 0, "--res must be a positive rational");
    return v[0];
}

Json point_json(const Point& p) { return io::point_json(p); }

Json type_json(const HNType& t) {
    Json a = Json::array();
    for (const auto& e : t) a.push_back({{"slope", io::rational_json(e.slope)}, {"dims", e.dims}});
    return a;
}

Json grid_json(const GridFunction& g) {
    Json a = Json::array();
    for (std::size_t i = 0; i < g.n(); ++i) a.push_back(point_json(g.axis(i)));
    return a;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) fail(ErrorKind::usage, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

template <Field K>
Json hn_report(const GridModule<K>& v, const StabilityCondition& z, const Config& c) {
    InvariantOptions opt;
    FilteredRankInvariant<K> inv(v, z, opt);
    auto sh = inv.shifted(Point(v.n(), Rational(0)));
    Json j;
    j["field"] = v.field().name();
    j["grid"] = grid_json(sh->grid);
    j["slopes"] = Json::array();
    for (const auto& s : sh->filtration.slopes) j["slopes"].push_back(io::rational_json(s));
    j["steps"] = Json::array();
    for (const auto& w : sh->filtration.steps) j["steps"].push_back(w.dims());
    j["type"] = type_json(hn_type(sh->filtration));
    if (c.oracle) {
        if constexpr (FiniteField<K>) {
            auto o = oracle_hn_filtration(sh->module, sh->ds, opt.oracle_dim_budget);
            j["oracle"] = {{"agrees", o == sh->filtration}};
            if (!(o == sh->filtration)) fail(ErrorKind::invariant, "engine and oracle HN filtrations differ");
        } else {
            fail(ErrorKind::usage, "--oracle needs a prime field");
        }
    }
    return j;
}

template <Field K>
int run_hn(const Presentation& p, K field, const StabilityCondition& z, const Config& c, std::ostream& out) {
    Json j = hn_report(from_presentation(p, field), z, c);
    if (c.prime2) {
        Json k = hn_report(from_presentation(p, prime_field(c.prime2)), z, Config{});
        j["prime2"] = {{"field", k["field"]}, {"type", k["type"]}, {"same_type", k["type"] == j["type"]}};
    }
    out << j.dump(2) << "\n";
    return 0;
}

template <Field K>
std::vector<Rational> theta_list(const std::string& spec, const std::vector<Rational>& slopes, const StabilityCondition& z) {
    if (spec != "auto") return parse_list(spec, ',');
    std::vector<Rational> out{theta_min(z) - 1};
    out.insert(out.end(), slopes.begin(), slopes.end());
    return out;
}

template <Field K>
int run_s(const Presentation& p, K field, const StabilityCondition& z, const Config& c, std::ostream& out) {
    auto v = from_presentation(p, field);
    FilteredRankInvariant<K> inv(v, z);
    if (!c.profile.empty()) {
        Point x = parse_list(c.profile, ',');
        require(x.size() == v.n(), "--profile point has the wrong dimension");
        Json j;
        j["x"] = point_json(x);
        j["slopes"] = Json::array();
        for (const auto& s : inv.theta_profile(x)) j["slopes"].push_back(io::rational_json(s));
        j["type"] = type_json(inv.hn_type_at(x));
        out << j.dump(2) << "\n";
        return 0;
    }
    if (c.skyscraper) {
        Json j = Json::array();
        auto types = skyscraper_invariant(v, z.beta);
        for (std::size_t q = 0; q < types.size(); ++q)
            j.push_back({{"point", point_json(v.grid().value(q))}, {"type", type_json(types[q])}});
        out << j.dump(2) << "\n";
        return 0;
    }
    auto [lo, hi] = parse_window(c.window, v.n());
    Lattice lat(lo, hi, parse_res(c.res));
    SampledHN<K> sampled(inv, lat);
    for (std::size_t i = 0; i < v.n(); ++i) out << "x" << i + 1 << ",";
    for (std::size_t i = 0; i < v.n(); ++i) out << "y" << i + 1 << ",";
    out << "theta,value\n";
    for (const auto& th : theta_list<K>(c.theta, sampled.slopes(), z)) {
        auto f = sampled.at(th);
        for (std::size_t a = 0; a < lat.count(); ++a)
            for (std::size_t b = 0; b < lat.count(); ++b) {
                for (const auto& x : lat.point(a)) out << x << ",";
                for (const auto& y : lat.point(b)) out << y << ",";
                out << th << ",";
                if (f(a, b) == SampledFunctor::kInf)
                    out << "inf\n";
                else
                    out << f(a, b) << "\n";
            }
    }
    return 0;
}

template <Field K>
int run_distance(const Presentation& pa, const Presentation& pb, K field, const StabilityCondition& z, const Config& c,
                 std::ostream& out) {
    auto v = from_presentation(pa, field), w = from_presentation(pb, field);
    require(v.n() == w.n(), "modules have different dimensions");
    auto [lo, hi] = parse_window(c.window, v.n());
    Rational h = parse_res(c.res);
    Lattice lat(lo, hi, h);
    FilteredRankInvariant<K> iv(v, z), iw(w, z);
    SampledHN<K> sv(iv, lat), sw(iw, lat);
    std::vector<Rational> thetas = c.theta == "auto" ? hn_thresholds(sv, sw, z) : parse_list(c.theta, ',');
    Json j;
    j["resolution"] = io::rational_json(h);
    j["window"] = {{"lo", point_json(lo)}, {"hi", point_json(hi)}};
    j["lattice_points"] = lat.count();
    j["rank_invariant_erosion"] = io::rational_json(erosion_distance(sample_rho(v, lat), sample_rho(w, lat)));
    j["per_theta"] = Json::array();
    Rational best = 0, best_landscape = 0;
    for (const auto& th : thetas) {
        auto fv = sv.at(th), fw = sw.at(th);
        Rational e = erosion_distance(fv, fw);
        Rational l = landscape_distance(fv, fw, std::max<std::size_t>(1, std::max(max_value(fv), max_value(fw))));
        best = std::max(best, e);
        best_landscape = std::max(best_landscape, l);
        j["per_theta"].push_back(
            {{"theta", io::rational_json(th)}, {"erosion", io::rational_json(e)}, {"landscape", io::rational_json(l)}});
    }
    j["hn_distance"] = io::rational_json(best);
    j["landscape_distance"] = io::rational_json(best_landscape);
    out << j.dump(2) << "\n";
    return 0;
}

template <Field K>
int run_breakpoints(const Presentation& p, K field, const StabilityCondition& z, const Config& c, std::ostream& out) {
    require(p.n == 1, "breakpoints are only supported for one parameter");
    FilteredRankInvariant<K> inv(from_presentation(p, field), z);
    auto [lo, hi] = parse_window(c.window, 1);
    auto bp = x_breakpoints_1d(inv, lo[0], hi[0]);
    Json j;
    j["region"] = {io::rational_json(bp.lo), io::rational_json(bp.hi)};
    j["breakpoints"] = Json::array();
    for (std::size_t k = 0; k < bp.points.size(); ++k)
        j["breakpoints"].push_back(
            {{"x", io::rational_json(bp.points[k])}, {"exact", static_cast<bool>(bp.exact[k])}, {"type", bp.at_points[k].str()}});
    j["intervals"] = Json::array();
    for (std::size_t k = 0; k < bp.intervals.size(); ++k)
        j["intervals"].push_back({{"sample", io::rational_json(bp.samples[k])},
                                  {"type", bp.intervals[k].str()},
                                  {"hn_type", type_json(bp.interval_types[k])}});
    out << j.dump(2) << "\n";
    return 0;
}

/// Calls `body` with F_p for p from --prime, else the module file, else 2.
template <class Body>
int with_field(const Presentation& p, const Config& c, Body&& body) {
    return body(prime_field(c.prime ? c.prime : p.prime.value_or(2)));
}

struct Inputs {
    std::vector<Presentation> modules;
    StabilityCondition z;
};

Inputs load_inputs(const Config& c, std::size_t count) {
    require(c.modules.size() == count, "expected " + std::to_string(count) + " --module argument(s)");
    require(!c.stab.empty(), "--stab is required");
    Inputs in;
    for (const auto& m : c.modules) in.modules.push_back(load_module(m));
    std::vector<std::vector<Rational>> axes(in.modules[0].n);
    for (const auto& p : in.modules) {
        require(p.n == in.modules[0].n, "modules have different dimensions");
        for (std::size_t i = 0; i < p.n; ++i) {
            for (const auto& g : p.generators) axes[i].push_back(g[i]);
            for (const auto& r : p.relations) axes[i].push_back(r.point[i]);
        }
    }
    std::optional<GridFunction> box;
    if (in.modules[0].n > 0 && !axes[0].empty()) box = GridFunction::from_coordinates(axes);
    in.z = parse_condition_text(io::read_file(c.stab), box);
    require(in.z.n == in.modules[0].n, "module and condition dimensions differ");
    return in;
}

int run_harness(const Config& c, std::ostream& out) {
    harness::Options o;
    o.seed = c.seed;
    o.quick = c.quick;
    o.mutate_slope = c.mutate_slope;
    bool ok = true;
    Json report = Json::array();
    harness::run(o, c.criteria, [&](const harness::CriterionResult& r) {
        ok = ok && r.passed;
        std::cerr << harness::format_line(r) << std::endl;
        report.push_back({{"criterion", r.id},
                          {"name", r.name},
                          {"passed", r.passed},
                          {"cases", r.cases},
                          {"seconds", r.seconds},
                          {"detail", r.detail}});
    });
    out << Json{{"seed", c.seed}, {"quick", c.quick}, {"passed", ok}, {"criteria", report}}.dump(2) << "\n";
    return ok ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Harder-Narasimhan filtered rank invariants of multiparameter persistence modules"};
    app.require_subcommand(1);
    Config c;

    auto add_inputs = [&](CLI::App* sub, bool two) {
        sub->add_option("--module", c.modules, two ? "module files (JSON or firep), given twice" : "module file (JSON or firep)")
            ->required()
            ->expected(1, two ? 2 : 1);
        sub->add_option("--stab", c.stab, "stability condition file (JSON)")->required();
        sub->add_option("--prime", c.prime, "compute over F_p instead of the field in the module file");
    };

    auto* hn = app.add_subcommand("hn", "HN filtration of a module at the origin");
    add_inputs(hn, false);
    hn->add_flag("--oracle", c.oracle, "cross-check against brute-force enumeration");
    hn->add_option("--prime2", c.prime2, "also report the HN type over a second prime (32749 when no value is given)")
        ->expected(0, 1)
        ->default_str("32749");

    auto* s = app.add_subcommand("s", "sample the HN filtered rank invariant as CSV");
    add_inputs(s, false);
    s->add_option("--window", c.window, "lo:hi or lo1:hi1,lo2:hi2");
    s->add_option("--res", c.res, "lattice spacing")->capture_default_str();
    s->add_option("--theta", c.theta, "comma separated thresholds or auto")->capture_default_str();
    s->add_option("--profile", c.profile, "report the slopes and HN type at this point instead");
    s->add_flag("--skyscraper", c.skyscraper, "report skyscraper HN types at the module grid vertices instead");

    auto* d = app.add_subcommand("distance", "sampled HN and landscape distances between two modules");
    add_inputs(d, true);
    d->add_option("--window", c.window, "lo:hi or lo1:hi1,lo2:hi2")->required();
    d->add_option("--res", c.res, "lattice spacing")->capture_default_str();
    d->add_option("--theta", c.theta, "comma separated thresholds or auto")->capture_default_str();

    auto* h = app.add_subcommand("harness", "run the seeded property suites");
    h->add_option("--seed", c.seed, "base seed")->capture_default_str();
    h->add_flag("--quick", c.quick, "reduced case counts");
    h->add_option("--criterion", c.criteria, "run only these criteria (1-10)");
    h->add_flag("--mutate-slope", c.mutate_slope, "flip the slope sign in the engine; the suite must fail");

    auto* b = app.add_subcommand("breakpoints", "exact x-breakpoints of the HN type (one parameter)");
    add_inputs(b, false);
    b->add_option("--window", c.window, "lo:hi")->required();

    for (auto* sub : {hn, s, d, h, b}) sub->add_option("--out", c.out, "write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        Output out(c.out);
        std::ostream& os = out.stream();
        if (*h) return run_harness(c, os);
        const bool two = static_cast<bool>(*d);
        Inputs in = load_inputs(c, two ? 2 : 1);
        const auto& p = in.modules[0];
        return with_field(p, c, [&](auto field) {
            if (*hn) return run_hn(p, field, in.z, c, os);
            if (*s) return run_s(p, field, in.z, c, os);
            if (*d) return run_distance(p, in.modules[1], field, in.z, c, os);
            return run_breakpoints(p, field, in.z, c, os);
        });
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    }
}
