#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hnpers/chambers.hpp"
#include "hnpers/distances.hpp"

namespace hnpers::harness {

using Rng = std::mt19937_64;

struct Options {
    std::uint64_t seed = 20240611;
    bool quick = false;         // reduced case counts
    bool mutate_slope = false;  // run the engine with flipped slopes
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::size_t cases = 0;
    double seconds = 0;
    std::string detail;
};

inline std::string format_line(const CriterionResult& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f s", r.seconds);
    return std::string(r.passed ? "PASS" : "FAIL") + "  criterion " + std::to_string(r.id) + " (" + r.name +
           "): " + std::to_string(r.cases) + " cases, " + buf + (r.detail.empty() ? "" : "; " + r.detail);
}

// ---- generators ----

inline Rational half_step(Rng& rng, long lo, long hi) {
    return make_rational(lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)), 2);
}

/// Integer coordinates in [0, side), 0/1 coefficients, relations only on generators below them.
inline Presentation random_presentation(Rng& rng, std::size_t n, int side, int gens, int rels) {
    Presentation p;
    p.n = n;
    for (int j = 0; j < gens; ++j) {
        Point g;
        for (std::size_t i = 0; i < n; ++i) g.push_back(Rational(static_cast<long>(rng() % side)));
        p.generators.push_back(g);
    }
    for (int r = 0; r < rels; ++r) {
        Point q;
        for (std::size_t i = 0; i < n; ++i) q.push_back(Rational(static_cast<long>(rng() % side)));
        std::vector<Rational> c;
        for (int j = 0; j < gens; ++j) c.push_back(leq(p.generators[j], q) ? Rational(long(rng() % 2)) : Rational(0));
        p.relations.push_back({q, c});
    }
    return p;
}

inline DiscreteStability random_discrete(Rng& rng, const GridPoset& P, int amax = 3) {
    DiscreteStability ds{P, {}, {}};
    for (std::size_t v = 0; v < P.count(); ++v) {
        ds.alpha.push_back(Rational(long(rng() % (amax + 1))));
        ds.beta.push_back(make_rational(1 + long(rng() % 4), 1 + long(rng() % 3)));
    }
    return ds;
}

/// Point masses (eval) or a cube density plus a point mass (step), with the default β of `box`.
inline StabilityCondition random_condition(Rng& rng, const GridFunction& box, bool step) {
    const std::size_t n = box.n();
    StabilityCondition z;
    z.n = n;
    z.mode = step ? StabilityMode::step : StabilityMode::eval;
    z.beta = default_beta(box);
    std::size_t terms = 1 + rng() % 2;
    for (std::size_t t = 0; t < terms; ++t) {
        AlphaTerm a;
        a.coeff = Rational(1 + long(rng() % 3));
        for (std::size_t i = 0; i < n; ++i) {
            Rational lo = half_step(rng, -1, 4);
            if (step && t == 0)
                a.carrier.push_back(Interval::half_open(lo, Rational(lo + half_step(rng, 1, 3))));
            else
                a.carrier.push_back(Interval::point(lo));
        }
        z.alpha.push_back(std::move(a));
    }
    return z;
}

/// Submodule generated by one random subspace per vertex.
template <Field K>
Submodule<K> random_submodule(Rng& rng, const GridModule<K>& v) {
    std::vector<Subspace<K>> seeds;
    for (std::size_t p = 0; p < v.poset().count(); ++p) {
        auto all = enumerate_subspaces(v.field(), v.dim(p));
        seeds.push_back(rng() % 3 == 0 ? Subspace<K>::zero(v.field(), v.dim(p)) : all[rng() % all.size()]);
    }
    return sub_generated(v, seeds);
}

/// Extra coordinates strictly inside the hull of g, one per axis.
inline std::vector<std::vector<Rational>> interior_coordinates(Rng& rng, const GridFunction& g) {
    std::vector<std::vector<Rational>> extra(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) {
        const auto& a = g.axis(i);
        if (a.front() == a.back()) continue;
        Rational t = make_rational(1 + long(rng() % 7), 8);
        extra[i].push_back(a.front() + (a.back() - a.front()) * t);
    }
    return extra;
}

// ---- criteria ----

namespace detail {

inline CriterionResult timed(int id, std::string name, const std::function<std::size_t(std::string&)>& body) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    auto t0 = std::chrono::steady_clock::now();
    try {
        std::string failure;
        r.cases = body(failure);
        r.passed = failure.empty();
        r.detail = failure;
    } catch (const Error& e) {
        r.passed = false;
        r.detail = std::string(to_string(e.kind())) + " error: " + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::size_t scaled(const Options& o, std::size_t full, std::size_t quick) { return o.quick ? quick : full; }

}  // namespace detail

/// Engine and brute-force oracle agree on random F_2 modules.
inline CriterionResult oracle_equivalence(const Options& o) {
    return detail::timed(1, "oracle equivalence", [&](std::string& failure) {
        Rng rng(o.seed + 1);
        const PrimeField F2{2};
        EngineOptions eo;
        eo.flip_slope_sign = o.mutate_slope;
        std::size_t target = detail::scaled(o, 300, 60), done = 0;
        for (std::size_t attempt = 0; done < target && attempt < 50 * target; ++attempt) {
            std::size_t n = 1 + rng() % 2;
            auto u = from_presentation(random_presentation(rng, n, 3, 1 + rng() % 4, rng() % 4), F2);
            if (u.is_zero() || u.total_dim() > 8) continue;
            auto ds = random_discrete(rng, u.poset());
            if (!(hn_filtration(u, ds, eo) == oracle_hn_filtration(u, ds, 8))) {
                failure = "oracle_equivalence violated: engine and oracle filtrations differ at case " +
                          std::to_string(done);
                return done;
            }
            ++done;
        }
        if (done < target) failure = "generated only " + std::to_string(done) + " cases";
        return done;
    });
}

/// s_eval is independent of the adapted grid; HN filtrations commute with pushforward.
inline CriterionResult diagram_invariance(const Options& o) {
    return detail::timed(2, "commuting-diagram invariance", [&](std::string& failure) {
        Rng rng(o.seed + 2);
        const PrimeField F2{2};
        std::size_t target = detail::scaled(o, 100, 20), done = 0;
        for (; done < target; ++done) {
            std::size_t n = 1 + done % 2;
            auto v = from_presentation(random_presentation(rng, n, 3, 1 + rng() % 3, rng() % 3), F2);
            auto z = random_condition(rng, v.grid(), done % 3 == 2);
            FilteredRankInvariant<PrimeField> a(v, z);
            GridFunction g = a.adapted_grid(Point(n, Rational(0)));
            auto extra = interior_coordinates(rng, g);
            InvariantOptions io;
            io.extra_coordinates = extra;
            for (auto& ax : io.extra_coordinates) ax.push_back(half_step(rng, -2, 6));
            FilteredRankInvariant<PrimeField> b(v, z, io);
            for (int s = 0; s < 10; ++s) {
                Point x, y;
                for (std::size_t i = 0; i < n; ++i) {
                    x.push_back(make_rational(long(rng() % 13) - 4, 4));
                    y.push_back(x.back() + make_rational(long(rng() % 9), 4));
                }
                auto slopes = a.theta_profile(x);
                slopes.push_back(Rational(0));
                slopes.push_back(theta_min(z) - 1);
                for (const auto& th : slopes)
                    if (a.s_eval(th, x, y) != b.s_eval(th, x, y)) {
                        failure = "s_eval depends on the adapted grid at case " + std::to_string(done);
                        return done;
                    }
            }
            GridFunction g2 = add_coordinates(g, extra);
            auto u = pushforward(v, g), u2 = pushforward(v, g2);
            auto h = hn_filtration(u, pullback_Z(z, g));
            auto h2 = hn_filtration(u2, pullback_Z(z, g2));
            GridMap t = embedding(g, g2);
            bool same = h.slopes == h2.slopes && h.length() == h2.length();
            for (std::size_t k = 0; same && k < h.length(); ++k)
                same = pushforward_submodule(t, u, h.steps[k]) == h2.steps[k];
            if (!same) {
                failure = "HN filtration does not commute with pushforward at case " + std::to_string(done);
                return done;
            }
        }
        return done;
    });
}

/// Pushforward along a refinement preserves and reflects semistability.
inline CriterionResult semistability_transfer(const Options& o) {
    return detail::timed(3, "semistability transfer", [&](std::string& failure) {
        Rng rng(o.seed + 3);
        const PrimeField F2{2};
        std::size_t target = detail::scaled(o, 100, 20), done = 0;
        auto semistable = [](const GridModule<PrimeField>& u, const DiscreteStability& ds) {
            return oracle_hn_filtration(u, ds, 12).length() <= 1;
        };
        for (std::size_t attempt = 0; done < target && attempt < 40 * target; ++attempt) {
            std::size_t n = 1 + attempt % 2;
            auto v = from_presentation(random_presentation(rng, n, 3, 1 + rng() % 3, rng() % 3), F2);
            if (v.is_zero()) continue;
            auto z = random_condition(rng, v.grid(), attempt % 3 == 2);
            FilteredRankInvariant<PrimeField> inv(v, z);
            GridFunction g = inv.adapted_grid(Point(n, Rational(0)));
            GridFunction g2 = add_coordinates(g, interior_coordinates(rng, g));
            auto u = pushforward(v, g);
            auto ds = pullback_Z(z, g), ds2 = pullback_Z(z, g2);
            if (u.total_dim() > 6) continue;
            auto u2 = pushforward(u, g2);
            if (u2.total_dim() > 12) continue;
            if (semistable(u, ds) != semistable(u2, ds2)) {
                failure = "semistability of a module and its pushforward differ at attempt " + std::to_string(attempt);
                return done;
            }
            auto top = hn_filtration(u, ds).steps.front();
            auto w = submodule_as_module(u, top);
            if (!semistable(w, ds)) {
                failure = "first HN step is not semistable at attempt " + std::to_string(attempt);
                return done;
            }
            if (!semistable(pushforward(w, g2), ds2)) {
                failure = "pushforward of a semistable module is unstable at attempt " + std::to_string(attempt);
                return done;
            }
            ++done;
        }
        if (done < target) failure = "generated only " + std::to_string(done) + " cases";
        return done;
    });
}

/// Closed form of s^θ for the unit square under the skyscraper at the origin.
inline CriterionResult unit_square_closed_form(const Options& o) {
    return detail::timed(4, "unit square closed form", [&](std::string& failure) {
        Rng rng(o.seed + 4);
        const PrimeField F2{2};
        Presentation p;
        p.n = 2;
        p.generators = {{Rational(0), Rational(0)}};
        p.relations = {{{Rational(1), Rational(0)}, {Rational(1)}}, {{Rational(0), Rational(1)}, {Rational(1)}}};
        StepFactor unit{{Rational(0), Rational(1)}, {Rational(1)}, Rational(1, 2), Rational(1, 2)};
        auto z = skyscraper_condition({Rational(0), Rational(0)}, BetaSpec{{BetaTerm{{unit, unit}}}});
        FilteredRankInvariant<PrimeField> inv(from_presentation(p, F2), z);
        std::size_t target = detail::scaled(o, 200, 50), done = 0;
        for (; done < target; ++done) {
            Point x{make_rational(long(rng() % 13) - 2, 8), make_rational(long(rng() % 13) - 2, 8)};
            Point y{x[0] + make_rational(long(rng() % 9), 8), x[1] + make_rational(long(rng() % 9), 8)};
            Rational theta = make_rational(1 + long(rng() % 24), 4);
            bool inside = x[0] >= 0 && x[1] >= 0 && y[0] < 1 && y[1] < 1;
            bool expect = inside && (1 - x[0]) * (1 - x[1]) <= 1 / theta;
            if (*inv.s_eval(theta, x, y) != (expect ? 1u : 0u)) {
                failure = "s^" + theta.get_str() + " differs from the closed form at x = (" + x[0].get_str() + "," +
                          x[1].get_str() + ")";
                return done;
            }
        }
        return done;
    });
}

/// Below theta_min the filtered rank invariant is the rank invariant.
inline CriterionResult theta_min_law(const Options& o) {
    return detail::timed(5, "theta_min law", [&](std::string& failure) {
        Rng rng(o.seed + 5);
        const PrimeField F2{2};
        std::size_t target = detail::scaled(o, 50, 10), done = 0;
        for (; done < target; ++done) {
            std::size_t n = 1 + done % 2;
            auto v = from_presentation(random_presentation(rng, n, 3, 1 + rng() % 3, rng() % 3), F2);
            auto z = random_condition(rng, v.grid(), done % 2 == 1);
            FilteredRankInvariant<PrimeField> inv(v, z);
            Rational th = theta_min(z) - 1;
            for (int s = 0; s < 20; ++s) {
                Point x, y;
                for (std::size_t i = 0; i < n; ++i) {
                    x.push_back(make_rational(long(rng() % 17) - 4, 4));
                    y.push_back(x.back() + make_rational(long(rng() % 9), 4));
                }
                if (inv.s_eval(th, x, y) != rank_invariant(v, x, y)) {
                    failure = "s at theta_min - 1 differs from the rank invariant at case " + std::to_string(done);
                    return done;
                }
            }
        }
        return done;
    });
}

/// Module maps send HN^θ of the source into HN^θ of the target.
inline CriterionResult functoriality(const Options& o) {
    return detail::timed(7, "functoriality", [&](std::string& failure) {
        Rng rng(o.seed + 7);
        const PrimeField F2{2};
        std::size_t target = detail::scaled(o, 200, 40), done = 0;
        for (std::size_t attempt = 0; done < target && attempt < 20 * target; ++attempt) {
            std::size_t n = 1 + attempt % 2;
            auto v = from_presentation(random_presentation(rng, n, 3, 1 + rng() % 3, rng() % 3), F2);
            if (v.is_zero() || v.total_dim() > 10) continue;
            auto ds = random_discrete(rng, v.poset());
            auto w1 = random_submodule(rng, v), w2 = random_submodule(rng, v);
            auto src = submodule_as_module(v, w1);
            auto qr = quotient(v, w2);
            std::vector<Matrix<PrimeField>> comps;
            bool nonzero = false;
            for (std::size_t p = 0; p < v.poset().count(); ++p) {
                comps.push_back(qr.projections[p] * w1.components[p].basis().transpose());
                const auto& m = comps.back();
                for (std::size_t i = 0; i < m.rows(); ++i)
                    for (std::size_t j = 0; j < m.cols(); ++j) nonzero = nonzero || !(m(i, j) == 0);
            }
            if (!nonzero) continue;
            ModuleMap<PrimeField> f(src, qr.module, comps);
            std::set<Rational> thetas;
            for (const auto* m : {&f.source, &f.target})
                if (!m->is_zero())
                    for (const auto& s : hn_filtration(*m, ds).slopes) thetas.insert(s);
            if (!thetas.empty()) thetas.insert(*thetas.begin() - 1);
            for (const auto& th : thetas)
                if (!check_functoriality(f, ds, th)) {
                    failure = "map does not respect HN^" + th.get_str() + " at case " + std::to_string(done);
                    return done;
                }
            ++done;
        }
        if (done < target) failure = "generated only " + std::to_string(done) + " cases";
        return done;
    });
}

/// Pairs (V, moved V) for the stability criteria and what was measured on them.
struct StabilityPair {
    std::size_t n = 1;
    Rational eps;
    Rational resolution;
    bool certified = false;
    Rational rho_erosion;
    Rational hn_distance;
    Rational worst_landscape_gap;  // max over θ of landscape distance minus erosion
    Rational continuous_landscape;  // |λ_V - λ_W| from bisection at sampled points
    std::size_t thresholds = 0;
};

inline std::vector<StabilityPair> stability_pairs(const Options& o) {
    Rng rng(o.seed + 6);
    const PrimeField F2{2};
    const Rational tol(1, 64);
    std::vector<StabilityPair> out;
    std::size_t count = detail::scaled(o, 54, 6);
    const Rational eps_values[] = {Rational(1, 4), Rational(1, 2), Rational(1)};
    for (std::size_t c = 0; c < count; ++c) {
        std::size_t n = c % 3 == 2 ? 2 : 1;
        Rational eps = eps_values[(c / 3) % 3];
        auto pres = n == 1 ? random_presentation(rng, 1, 3, 1 + rng() % 3, rng() % 3)
                           : random_presentation(rng, 2, 2, 1 + rng() % 2, rng() % 2);
        auto pert = perturb(pres, eps, rng(), F2);
        GridFunction box = interleaving_grid(pert.original.grid(), pert.moved.grid(), Rational(0));
        StabilityCondition z = n == 1 ? random_condition(rng, box, c % 2 == 0)
                                      : skyscraper_condition({half_step(rng, 0, 2), half_step(rng, 0, 2)},
                                                             default_beta(box));
        FilteredRankInvariant<PrimeField> iv(pert.original, z), iw(pert.moved, z);
        for (Rational h : {Rational(1, 8), Rational(1, 16)}) {
            StabilityPair sp;
            sp.n = n;
            sp.eps = eps;
            sp.resolution = h;
            sp.certified = verify_interleaving(pert.certificate, pert.original, pert.moved);
            Lattice lat = n == 1 ? Lattice({Rational(-2)}, {Rational(4)}, h)
                                 : (h == Rational(1, 8) ? Lattice({Rational(-1), Rational(-1)}, {Rational(2), Rational(2)}, h)
                                                        : Lattice({Rational(-1, 2), Rational(-1, 2)}, {Rational(1), Rational(1)}, h));
            sp.rho_erosion = erosion_distance(sample_rho(pert.original, lat), sample_rho(pert.moved, lat));
            SampledHN<PrimeField> sv(iv, lat), sw(iw, lat);
            auto thetas = hn_thresholds(sv, sw, z);
            sp.thresholds = thetas.size();
            sp.worst_landscape_gap = Rational(-1000);
            Rational best_theta = thetas.front();
            for (const auto& th : thetas) {
                auto fv = sv.at(th), fw = sw.at(th);
                Rational e = erosion_distance(fv, fw);
                Rational l = landscape_distance(fv, fw, std::max<std::size_t>(1, std::max(max_value(fv), max_value(fw))));
                if (e > sp.hn_distance) {
                    sp.hn_distance = e;
                    best_theta = th;
                }
                sp.worst_landscape_gap = std::max(sp.worst_landscape_gap, Rational(l - e));
            }
            for (int s = 0; s < 2; ++s) {
                Point x = lat.point(rng() % lat.count());
                Rational a = landscape_eval(iv, 1, x, best_theta, tol), b = landscape_eval(iw, 1, x, best_theta, tol);
                sp.continuous_landscape = std::max(sp.continuous_landscape, Rational(abs(a - b)));
            }
            out.push_back(sp);
        }
    }
    return out;
}

inline std::string pair_label(const StabilityPair& p, std::size_t k) {
    return "pair " + std::to_string(k) + " (n=" + std::to_string(p.n) + ", eps=" + p.eps.get_str() +
           ", h=" + p.resolution.get_str() + ")";
}

inline CriterionResult hn_stability(const std::vector<StabilityPair>& pairs, double seconds, bool quick) {
    CriterionResult r;
    r.id = 6;
    r.name = "HN stability";
    r.cases = pairs.size() / 2;
    r.seconds = seconds;
    r.passed = quick || r.cases >= 50;
    if (!r.passed) r.detail = "too few pairs";
    for (std::size_t k = 0; k < pairs.size() && r.passed; ++k) {
        const auto& p = pairs[k];
        if (!p.certified) r.detail = pair_label(p, k) + ": interleaving certificate rejected";
        else if (p.rho_erosion > p.eps) r.detail = pair_label(p, k) + ": rank invariant erosion " + p.rho_erosion.get_str() + " exceeds eps";
        else if (p.hn_distance > p.eps) r.detail = pair_label(p, k) + ": hn_distance " + p.hn_distance.get_str() + " exceeds eps";
        r.passed = r.detail.empty();
    }
    return r;
}

inline CriterionResult landscape_chain(const std::vector<StabilityPair>& pairs, double seconds) {
    CriterionResult r;
    r.id = 8;
    r.name = "landscape chain";
    r.cases = pairs.size();
    r.seconds = seconds;
    const Rational tol(1, 64);
    for (std::size_t k = 0; k < pairs.size() && r.detail.empty(); ++k) {
        const auto& p = pairs[k];
        if (p.worst_landscape_gap > 0) r.detail = pair_label(p, k) + ": landscape distance exceeds the erosion";
        else if (p.hn_distance > p.eps) r.detail = pair_label(p, k) + ": erosion exceeds eps";
        else if (p.continuous_landscape > p.eps + tol) r.detail = pair_label(p, k) + ": bisected landscapes differ by more than eps + tol";
    }
    r.passed = r.detail.empty();
    return r;
}

/// Exact 1-d breakpoints agree with dense sampling at step 1/64.
inline CriterionResult chamber_exactness(const Options& o) {
    return detail::timed(9, "1-d chamber exactness", [&](std::string& failure) {
        Rng rng(o.seed + 9);
        const PrimeField F2{2};
        std::size_t target = detail::scaled(o, 30, 6), done = 0;
        const Rational lo(-2), hi(4), step(1, 64);
        for (; done < target; ++done) {
            auto v = from_presentation(random_presentation(rng, 1, 4, 1 + rng() % 3, rng() % 3), F2);
            auto z = skyscraper_condition({half_step(rng, -1, 6)}, default_beta(v.grid()));
            FilteredRankInvariant<PrimeField> inv(v, z);
            auto bp = x_breakpoints_1d(inv, lo, hi);
            auto type = [&](const Rational& x) { return combinatorial_type_at(inv, {x}); };
            for (Rational x = lo; x < hi; x += step) {
                if (type(x) == type(x + step)) continue;
                bool recorded = false;
                for (const auto& p : bp.points) recorded = recorded || (x <= p && p <= x + step);
                if (!recorded) {
                    failure = "unrecorded type change in [" + x.get_str() + ", " + Rational(x + step).get_str() + "]";
                    return done;
                }
            }
            const Rational d(1, 1 << 20);
            for (const auto& p : bp.points) {
                auto tp = type(p);
                if (tp == type(p - d) && tp == type(p + d)) {
                    failure = "breakpoint " + p.get_str() + " witnesses no change";
                    return done;
                }
            }
            std::vector<Rational> ends{lo};
            for (const auto& p : bp.points)
                if (lo < p && p < hi) ends.push_back(p);
            ends.push_back(hi);
            if (ends.size() != bp.intervals.size() + 1) {
                failure = "interval count does not match the breakpoints";
                return done;
            }
            for (std::size_t k = 0; k < bp.intervals.size(); ++k) {
                const Rational &a = ends[k], &b = ends[k + 1];
                for (Rational x = a + step; x < b; x += step)
                    if (!(type(x) == bp.intervals[k])) {
                        failure = "interval type differs from the sampled type at " + x.get_str();
                        return done;
                    }
            }
        }
        return done;
    });
}

/// The three pathological conditions are rejected with the right diagnostic.
inline CriterionResult validation_guardrails(const Options&) {
    return detail::timed(10, "validation guardrails", [&](std::string& failure) {
        BetaSpec beta{{BetaTerm{{StepFactor{{Rational(-1), Rational(2)}, {Rational(1)}, Rational(1, 2), Rational(1, 2)}}}}};
        struct Case {
            const char* code;
            StabilityCondition z;
        };
        StabilityCondition increasing{1, StabilityMode::step, {AlphaTerm{{Interval::half_open(Rational(0), Rational(1))}, Rational(1), Rational(1)}}, beta};
        StabilityCondition negative{1, StabilityMode::eval, {AlphaTerm{{Interval::point(Rational(0))}, Rational(-1), {}}}, beta};
        StabilityCondition at_infinity{1, StabilityMode::step, {AlphaTerm{{Interval::half_open(Rational(0), ExtRational::pos_inf())}, Rational(1), {}}}, beta};
        std::vector<Case> cases{{"alpha_density_not_step", increasing},
                                {"alpha_negative_coefficient", negative},
                                {"alpha_carrier_unbounded", at_infinity}};
        for (const auto& c : cases) {
            auto d = validate(c.z);
            bool found = false;
            for (const auto& x : d) found = found || x.code == c.code;
            if (!found) {
                failure = std::string("expected diagnostic ") + c.code;
                return std::size_t{0};
            }
            try {
                FilteredRankInvariant<PrimeField>(GridModule<PrimeField>::zero(PrimeField{2}, 1), c.z);
                failure = std::string("condition with ") + c.code + " was accepted";
                return std::size_t{0};
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::validation) {
                    failure = std::string("wrong error kind for ") + c.code;
                    return std::size_t{0};
                }
            }
        }
        return cases.size();
    });
}

/// Runs the selected criteria (all when `only` is empty) in order.
inline std::vector<CriterionResult> run(const Options& o, const std::vector<int>& only = {},
                                        const std::function<void(const CriterionResult&)>& report = {}) {
    auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
    std::vector<CriterionResult> out;
    auto emit = [&](CriterionResult r) {
        if (report) report(r);
        out.push_back(std::move(r));
    };
    if (wanted(1)) emit(oracle_equivalence(o));
    if (wanted(2)) emit(diagram_invariance(o));
    if (wanted(3)) emit(semistability_transfer(o));
    if (wanted(4)) emit(unit_square_closed_form(o));
    if (wanted(5)) emit(theta_min_law(o));
    if (wanted(6) || wanted(8)) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<StabilityPair> pairs;
        std::string error;
        try {
            pairs = stability_pairs(o);
        } catch (const Error& e) {
            error = std::string(to_string(e.kind())) + " error: " + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (int id : {6, 8}) {
            if (!wanted(id)) continue;
            CriterionResult r = id == 6 ? hn_stability(pairs, secs, o.quick) : landscape_chain(pairs, secs);
            if (!error.empty()) r.passed = false, r.detail = error;
            if (id == 8) emit(functoriality(o));
            emit(r);
        }
        if (!wanted(8) && wanted(7)) emit(functoriality(o));
    } else if (wanted(7)) {
        emit(functoriality(o));
    }
    if (wanted(9)) emit(chamber_exactness(o));
    if (wanted(10)) emit(validation_guardrails(o));
    return out;
}

}  // namespace hnpers::harness
