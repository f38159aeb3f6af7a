#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hnpers/invariants.hpp"

namespace hnpers {

/// Loci μ(d) = μ(d') for pairs of distinct nonzero sub-dimension vectors of dim_U.
struct WallSystem {
    GridPoset base;
    std::vector<std::size_t> dims;
    std::vector<std::vector<std::size_t>> vectors;
    std::vector<std::pair<std::size_t, std::size_t>> walls;  // indices into vectors

    /// Whether ds lies on the wall, i.e. Im(d)Re(d') = Im(d')Re(d).
    bool on_wall(std::size_t w, const DiscreteStability& ds) const {
        const auto& d = vectors[walls[w].first];
        const auto& e = vectors[walls[w].second];
        return ds.im(d) * ds.re(e) == ds.im(e) * ds.re(d);
    }
};

namespace detail {

inline std::vector<std::vector<std::size_t>> sub_dimension_vectors(const std::vector<std::size_t>& dims,
                                                                   std::size_t budget) {
    std::size_t count = 1;
    for (auto d : dims) {
        count *= d + 1;
        if (count > budget) fail(ErrorKind::budget, "too many sub-dimension vectors for the wall system");
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(dims.size(), 0);
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t r = k;
        bool nonzero = false;
        for (std::size_t v = 0; v < dims.size(); ++v) {
            cur[v] = r % (dims[v] + 1);
            r /= dims[v] + 1;
            nonzero = nonzero || cur[v] > 0;
        }
        if (nonzero) out.push_back(cur);
    }
    return out;
}

}  // namespace detail

template <Field K>
WallSystem wall_system(const GridModule<K>& u, std::size_t budget = 4096) {
    WallSystem w{u.poset(), u.dims(), detail::sub_dimension_vectors(u.dims(), budget), {}};
    for (std::size_t i = 0; i < w.vectors.size(); ++i)
        for (std::size_t j = i + 1; j < w.vectors.size(); ++j) w.walls.emplace_back(i, j);
    return w;
}

/// Coordinates of a condition that can meet a shifted module grid: α carriers,
/// the origin and the breakpoints of β within [lo, hi].
inline std::vector<std::vector<Rational>> condition_coordinates(const StabilityCondition& z, const Point& lo,
                                                                const Point& hi) {
    std::vector<std::vector<Rational>> axes(z.n);
    for (std::size_t i = 0; i < z.n; ++i) {
        axes[i].push_back(Rational(0));
        for (const auto& t : z.alpha) {
            auto c = t.coordinates(i);
            axes[i].insert(axes[i].end(), c.begin(), c.end());
        }
        auto bp = z.beta.breakpoints(i, lo[i], hi[i]);
        axes[i].insert(axes[i].end(), bp.begin(), bp.end());
        std::sort(axes[i].begin(), axes[i].end());
        axes[i].erase(std::unique(axes[i].begin(), axes[i].end()), axes[i].end());
    }
    return axes;
}

/// Values of x_i where some comparator g - x_i - c (c a condition coordinate, off by at most one) vanishes.
inline std::vector<Rational> axis_cuts(const std::vector<Rational>& gv, const std::vector<Rational>& gz) {
    std::set<Rational> cuts;
    for (const auto& g : gv)
        for (const auto& c : gz)
            for (int k = -1; k <= 1; ++k) cuts.insert(g - c + Rational(k));
    return {cuts.begin(), cuts.end()};
}

struct CubePartition {
    std::vector<Cube> parts;
    std::vector<Refinement> combinatorics;  // common refinement of the shifted module grid and gz, per part
};

/// Splits region into open cells and cut points on which the relative order of the
/// shifted module grid and the condition grid is constant.
inline CubePartition cube_partition(const GridFunction& gv, const GridFunction& gz, const Cube& region) {
    const std::size_t n = gv.n();
    require(gz.n() == n && region.axes.size() == n, "partition inputs must share a dimension");
    if (n > 2) fail(ErrorKind::usage, "cube partitions are only supported for n <= 2");
    require(region.bounded(), "partition region must be bounded");

    std::vector<std::vector<Interval>> per_axis(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Interval& r = region.axes[i];
        Rational lo = r.lo.value(), hi = r.hi.value();
        std::vector<Rational> pts{lo};
        for (const auto& c : axis_cuts(gv.axis(i), gz.axis(i)))
            if (lo < c && c < hi) pts.push_back(c);
        pts.push_back(hi);
        if (lo == hi) {
            if (r.lo_closed && r.hi_closed) per_axis[i].push_back(Interval::point(lo));
            continue;
        }
        if (r.lo_closed) per_axis[i].push_back(Interval::point(lo));
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            per_axis[i].push_back(Interval::open(pts[k], pts[k + 1]));
            if (k + 2 < pts.size()) per_axis[i].push_back(Interval::point(pts[k + 1]));
        }
        if (r.hi_closed) per_axis[i].push_back(Interval::point(hi));
    }

    CubePartition out;
    std::vector<std::size_t> sizes;
    for (const auto& a : per_axis) sizes.push_back(a.size());
    if (std::find(sizes.begin(), sizes.end(), 0u) != sizes.end()) return out;
    GridPoset P(sizes);
    for (std::size_t idx = 0; idx < P.count(); ++idx) {
        auto c = P.coord(idx);
        Cube cube;
        Point rep;
        for (std::size_t i = 0; i < n; ++i) {
            const Interval& iv = per_axis[i][c[i]];
            cube.axes.push_back(iv);
            rep.push_back((iv.lo.value() + iv.hi.value()) / 2);
        }
        out.parts.push_back(cube);
        out.combinatorics.push_back(common_refinement(shift_grid(gv, rep), gz));
    }
    return out;
}

/// Dimension functions of the HN subquotients with repeated grid slices merged and a
/// leading zero slice dropped, so that it depends only on the order type of the
/// filtration and not on where its jumps sit. Slopes are dropped since they move
/// continuously with x.
struct CombinatorialType {
    std::vector<std::size_t> sizes;
    std::vector<std::vector<std::size_t>> layers;  // [step][compressed vertex]

    friend bool operator==(const CombinatorialType&, const CombinatorialType&) = default;

    std::string str() const {
        std::string out = "[";
        for (std::size_t k = 0; k < layers.size(); ++k) {
            out += k ? ", (" : "(";
            for (std::size_t j = 0; j < layers[k].size(); ++j) out += (j ? "," : "") + std::to_string(layers[k][j]);
            out += ")";
        }
        return out + "]";
    }
};

template <Field K>
CombinatorialType combinatorial_type(const HNFiltration<K>& filt, const GridPoset& P) {
    const std::size_t L = filt.length();
    std::vector<std::vector<std::size_t>> tuple(P.count(), std::vector<std::size_t>(L, 0));
    for (std::size_t k = 0; k < L; ++k) {
        auto cur = filt.steps[k].dims();
        for (std::size_t v = 0; v < P.count(); ++v)
            tuple[v][k] = cur[v] - (k ? filt.steps[k - 1].components[v].dim() : 0);
    }
    std::vector<std::vector<std::size_t>> keep(P.n());
    for (std::size_t i = 0; i < P.n(); ++i) {
        keep[i].push_back(0);
        for (std::size_t j = 1; j < P.size(i); ++j) {
            bool same = true;
            for (std::size_t v = 0; v < P.count() && same; ++v)
                if (P.axis_coord(v, i) == j) same = tuple[v] == tuple[v - P.stride(i)];
            if (!same) keep[i].push_back(j);
        }
        if (keep[i].size() > 1) {
            bool zero = true;
            for (std::size_t v = 0; v < P.count() && zero; ++v)
                if (P.axis_coord(v, i) == 0)
                    zero = std::all_of(tuple[v].begin(), tuple[v].end(), [](std::size_t d) { return d == 0; });
            if (zero) keep[i].erase(keep[i].begin());
        }
    }
    CombinatorialType t;
    for (const auto& k : keep) t.sizes.push_back(k.size());
    GridPoset Q(t.sizes);
    t.layers.assign(L, std::vector<std::size_t>(Q.count()));
    for (std::size_t w = 0; w < Q.count(); ++w) {
        auto c = Q.coord(w);
        Coord src(P.n());
        for (std::size_t i = 0; i < P.n(); ++i) src[i] = keep[i][c[i]];
        for (std::size_t k = 0; k < L; ++k) t.layers[k][w] = tuple[P.index(src)][k];
    }
    return t;
}

template <Field K>
CombinatorialType combinatorial_type_at(const FilteredRankInvariant<K>& inv, const Point& x) {
    auto sh = inv.shifted(x);
    return combinatorial_type(sh->filtration, sh->grid.poset());
}

/// x-values in a closed interval where the combinatorial HN type of T_x^* V changes (n = 1).
struct Breakpoints1D {
    Rational lo, hi;
    std::vector<Rational> points;
    std::vector<bool> exact;                     // false for rational stand-ins of irrational wall roots
    std::vector<CombinatorialType> at_points;
    std::vector<Rational> samples;               // one interior sample per interval
    std::vector<CombinatorialType> intervals;    // open pieces of [lo, hi] between breakpoints
    std::vector<HNType> interval_types;
};

namespace detail {

struct Affine {
    Rational c0, c1;  // c0 + c1 x
};

/// Real roots of a x^2 + b x + c strictly inside (lo, hi); irrational roots are
/// approximated to within (hi - lo) / 2^40 and flagged.
inline std::vector<std::pair<Rational, bool>> quadratic_roots(const Rational& a, const Rational& b, const Rational& c,
                                                              const Rational& lo, const Rational& hi) {
    std::vector<std::pair<Rational, bool>> out;
    auto keep = [&](const Rational& r, bool ex) {
        if (lo < r && r < hi) out.emplace_back(r, ex);
    };
    if (a == 0) {
        if (b != 0) keep(-c / b, true);
        return out;
    }
    Rational disc = b * b - 4 * a * c;
    if (disc < 0) return out;
    if (mpz_perfect_square_p(disc.get_num_mpz_t()) && mpz_perfect_square_p(disc.get_den_mpz_t())) {
        mpz_class sn, sd;
        mpz_sqrt(sn.get_mpz_t(), disc.get_num_mpz_t());
        mpz_sqrt(sd.get_mpz_t(), disc.get_den_mpz_t());
        Rational s(sn, sd);
        s.canonicalize();
        keep((-b - s) / (2 * a), true);
        keep((-b + s) / (2 * a), true);
        return out;
    }
    auto f = [&](const Rational& x) { return (a * x + b) * x + c; };
    auto sign = [](const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    Rational vertex = -b / (2 * a);
    std::vector<Rational> ends{lo};
    if (lo < vertex && vertex < hi) ends.push_back(vertex);
    ends.push_back(hi);
    Rational width = (hi - lo) / Rational(mpz_class(1) << 40);
    for (std::size_t k = 0; k + 1 < ends.size(); ++k) {
        Rational l = ends[k], r = ends[k + 1];
        int sl = sign(f(l)), sr = sign(f(r));
        if (sl == 0 || sr == 0 || sl == sr) continue;
        while (r - l > width) {
            Rational m = (l + r) / 2;
            if (sign(f(m)) == sl)
                l = m;
            else
                r = m;
        }
        keep((l + r) / 2, false);
    }
    return out;
}

}  // namespace detail

template <Field K>
Breakpoints1D x_breakpoints_1d(const FilteredRankInvariant<K>& inv, const Rational& lo, const Rational& hi,
                               std::size_t wall_budget = 4096) {
    const auto& v = inv.module();
    const auto& z = inv.condition();
    if (v.n() != 1) fail(ErrorKind::usage, "exact x-breakpoints are only available for n = 1");
    require(lo <= hi, "region must satisfy lo <= hi");

    const auto& gv = v.grid().axis(0);
    Point zlo{gv.front() - hi - 3}, zhi{gv.back() - lo + 3};
    auto gz = condition_coordinates(z, zlo, zhi)[0];
    auto cuts = axis_cuts(gv, gz);

    Rational ext_lo = lo - 1, ext_hi = hi + 1;
    for (const auto& c : cuts) {
        if (c < lo) ext_lo = c;
        if (c > hi) {
            ext_hi = c;
            break;
        }
    }
    std::vector<Rational> part_pts{ext_lo};
    for (const auto& c : cuts)
        if (ext_lo < c && c < ext_hi) part_pts.push_back(c);
    part_pts.push_back(ext_hi);

    std::map<Rational, bool> cand;
    for (const auto& p : part_pts) cand[p] = true;
    for (std::size_t k = 0; k + 1 < part_pts.size(); ++k) {
        const Rational &a = part_pts[k], &b = part_pts[k + 1];
        std::vector<DiscreteStability> probes;
        std::vector<Rational> xs;
        for (int j = 1; j <= 3; ++j) {
            xs.push_back(a + (b - a) * Rational(j) / 4);
            probes.push_back(inv.shifted({xs.back()})->ds);
        }
        const std::size_t nv = probes[0].alpha.size();
        for (const auto& p : probes)
            if (p.alpha.size() != nv) fail(ErrorKind::invariant, "grid combinatorics changed inside a partition cell");
        std::vector<detail::Affine> im(nv), re(nv);
        for (std::size_t w = 0; w < nv; ++w) {
            auto fit = [&](const Rational& y1, const Rational& y2, const Rational& y3) {
                Rational slope = (y2 - y1) / (xs[1] - xs[0]);
                if (y3 != y2 + slope * (xs[2] - xs[1]))
                    fail(ErrorKind::invariant, "stability vector is not affine inside a partition cell");
                return detail::Affine{y1 - slope * xs[0], slope};
            };
            im[w] = fit(probes[0].alpha[w], probes[1].alpha[w], probes[2].alpha[w]);
            re[w] = fit(probes[0].beta[w], probes[1].beta[w], probes[2].beta[w]);
        }
        auto dims = inv.shifted({xs[1]})->module.dims();
        std::set<std::vector<Rational>> lines;
        for (const auto& d : detail::sub_dimension_vectors(dims, wall_budget)) {
            std::vector<Rational> f(4, Rational(0));
            for (std::size_t w = 0; w < nv; ++w) {
                if (!d[w]) continue;
                Rational m(static_cast<long>(d[w]));
                f[0] += m * im[w].c0, f[1] += m * im[w].c1, f[2] += m * re[w].c0, f[3] += m * re[w].c1;
            }
            lines.insert(f);
        }
        std::vector<std::vector<Rational>> ls(lines.begin(), lines.end());
        for (std::size_t i = 0; i < ls.size(); ++i)
            for (std::size_t j = i + 1; j < ls.size(); ++j) {
                const auto &p = ls[i], &q = ls[j];
                Rational A = p[1] * q[3] - q[1] * p[3];
                Rational B = p[0] * q[3] + p[1] * q[2] - q[0] * p[3] - q[1] * p[2];
                Rational C = p[0] * q[2] - q[0] * p[2];
                if (A == 0 && B == 0) continue;
                for (const auto& [r, ex] : detail::quadratic_roots(A, B, C, a, b)) {
                    auto it = cand.find(r);
                    if (it == cand.end()) cand.emplace(r, ex);
                }
            }
    }

    std::vector<Rational> cs;
    std::vector<bool> cex;
    for (const auto& [c, ex] : cand) cs.push_back(c), cex.push_back(ex);
    std::vector<CombinatorialType> at(cs.size()), mid(cs.size() - 1);
    std::vector<Rational> mids(cs.size() - 1);
    for (std::size_t k = 0; k < cs.size(); ++k) at[k] = combinatorial_type_at(inv, {cs[k]});
    for (std::size_t k = 0; k + 1 < cs.size(); ++k) {
        mids[k] = (cs[k] + cs[k + 1]) / 2;
        mid[k] = combinatorial_type_at(inv, {mids[k]});
    }

    Breakpoints1D out{lo, hi, {}, {}, {}, {}, {}, {}};
    for (std::size_t k = 1; k + 1 < cs.size(); ++k) {
        if (cs[k] < lo || cs[k] > hi) continue;
        if (at[k] == mid[k - 1] && at[k] == mid[k]) continue;
        out.points.push_back(cs[k]);
        out.exact.push_back(cex[k]);
        out.at_points.push_back(at[k]);
    }
    std::vector<Rational> ends{lo};
    for (const auto& p : out.points)
        if (lo < p && p < hi) ends.push_back(p);
    ends.push_back(hi);
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        if (ends[i] == ends[i + 1]) continue;
        std::size_t k = 0;
        while (cs[k + 1] <= ends[i]) ++k;
        out.samples.push_back(mids[k]);
        out.intervals.push_back(mid[k]);
        out.interval_types.push_back(inv.hn_type_at({mids[k]}));
    }
    return out;
}

/// Whether the combinatorial HN type agrees at random rational points of a cube.
template <Field K>
bool constancy_check(const FilteredRankInvariant<K>& inv, const Cube& part, std::size_t probes,
                     std::uint64_t seed = 0) {
    require(part.bounded(), "constancy checks need a bounded part");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick(1, 1023);
    auto sample = [&] {
        Point x;
        for (const auto& iv : part.axes) {
            if (iv.is_point())
                x.push_back(iv.lo.value());
            else
                x.push_back(iv.lo.value() + (iv.hi.value() - iv.lo.value()) * make_rational(pick(rng), 1024));
        }
        return x;
    };
    auto ref = combinatorial_type_at(inv, sample());
    for (std::size_t k = 1; k < probes; ++k)
        if (!(combinatorial_type_at(inv, sample()) == ref)) return false;
    return true;
}

}  // namespace hnpers
