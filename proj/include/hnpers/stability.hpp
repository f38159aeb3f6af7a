#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hnpers/module.hpp"

namespace hnpers {

/// A one-dimensional positive step function: constant values on the window
/// cells [grid_j, grid_{j+1}) and geometric unit-cell tails outside. The right
/// cell [hi+m, hi+m+1) carries values.back() * right_ratio^(m+1), and the left
/// cell [lo-m-1, lo-m) carries values.front() * left_ratio^(m+1).
struct StepFactor {
    std::vector<Rational> grid;
    std::vector<Rational> values;
    Rational left_ratio{1, 2};
    Rational right_ratio{1, 2};

    const Rational& lo() const { return grid.front(); }
    const Rational& hi() const { return grid.back(); }

    /// Integral of the factor over (-inf, x).
    Rational antiderivative(const ExtRational& x) const {
        if (x.is_neg_inf()) return 0;
        const Rational& v0 = values.front();
        const Rational& vl = values.back();
        Rational left_total = v0 * left_ratio / (1 - left_ratio);
        if (x.is_pos_inf()) return left_total + window_integral(hi()) + vl * right_ratio / (1 - right_ratio);
        const Rational& t = x.value();
        if (t < lo()) {
            Rational s = lo() - t;
            unsigned long m0 = static_cast<unsigned long>(ceil_div(s).get_ui()) - 1;
            Rational full = v0 * pow(left_ratio, m0 + 2) / (1 - left_ratio);
            Rational partial = (t - (lo() - Rational(m0 + 1))) * v0 * pow(left_ratio, m0 + 1);
            return full + partial;
        }
        if (t <= hi()) return left_total + window_integral(t);
        Rational s = t - hi();
        unsigned long m1 = floor_div(s).get_ui();
        Rational full = vl * right_ratio * (1 - pow(right_ratio, m1)) / (1 - right_ratio);
        Rational partial = (s - Rational(m1)) * vl * pow(right_ratio, m1 + 1);
        return left_total + window_integral(hi()) + full + partial;
    }

    Rational integral(const Interval& iv) const {
        if (iv.empty() || iv.lo == iv.hi) return 0;
        return antiderivative(iv.hi) - antiderivative(iv.lo);
    }

    /// Breakpoints of the step function lying in [a, b].
    std::vector<Rational> breakpoints(const Rational& a, const Rational& b) const {
        std::vector<Rational> out;
        for (const auto& g : grid)
            if (a <= g && g <= b) out.push_back(g);
        if (b > hi()) {
            Rational start = a > hi() ? Rational(Rational(ceil_div(a - hi())) + hi()) : Rational(hi() + 1);
            for (Rational c = start; c <= b; c += 1) out.push_back(c);
        }
        if (a < lo()) {
            Rational start = b < lo() ? Rational(lo() - Rational(ceil_div(lo() - b))) : Rational(lo() - 1);
            for (Rational c = start; c >= a; c -= 1) out.push_back(c);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    StepFactor shifted(const Rational& x) const {
        StepFactor f = *this;
        for (auto& g : f.grid) g -= x;
        return f;
    }

private:
    Rational window_integral(const Rational& t) const {
        Rational acc = 0;
        for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
            if (t <= grid[j]) break;
            Rational right = std::min(t, grid[j + 1]);
            acc += (right - grid[j]) * values[j];
        }
        return acc;
    }
};

struct BetaTerm {
    std::vector<StepFactor> axes;
};

/// β as a finite sum of separable products of step factors.
struct BetaSpec {
    std::vector<BetaTerm> terms;

    std::size_t n() const { return terms.empty() ? 0 : terms.front().axes.size(); }

    Rational integral(const Cube& c) const {
        if (c.empty()) return 0;
        Rational total = 0;
        for (const auto& t : terms) {
            Rational prod = 1;
            for (std::size_t i = 0; i < c.n() && prod != 0; ++i) prod *= t.axes[i].integral(c.axes[i]);
            total += prod;
        }
        return total;
    }

    std::vector<Rational> breakpoints(std::size_t axis, const Rational& a, const Rational& b) const {
        std::vector<Rational> out;
        for (const auto& t : terms) {
            auto bp = t.axes[axis].breakpoints(a, b);
            out.insert(out.end(), bp.begin(), bp.end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    BetaSpec shifted(const Point& x) const {
        BetaSpec b = *this;
        for (auto& t : b.terms)
            for (std::size_t i = 0; i < t.axes.size(); ++i) t.axes[i] = t.axes[i].shifted(x[i]);
        return b;
    }
};

/// Value 1 on the box [lo - 1, hi + 1) and tails with ratio 1/2.
inline BetaSpec default_beta(const Point& lo, const Point& hi) {
    BetaTerm t;
    for (std::size_t i = 0; i < lo.size(); ++i)
        t.axes.push_back(StepFactor{{lo[i] - 1, hi[i] + 1}, {Rational(1)}, Rational(1, 2), Rational(1, 2)});
    return BetaSpec{{t}};
}

inline BetaSpec default_beta(const GridFunction& g) {
    Point lo, hi;
    for (const auto& a : g.axes()) {
        lo.push_back(a.front());
        hi.push_back(a.back());
    }
    return default_beta(lo, hi);
}

/// coeff * δ_carrier, where each carrier axis is a bounded half-open interval or a point.
struct AlphaTerm {
    std::vector<Interval> carrier;
    Rational coeff = 1;
    std::optional<Rational> density_slope;  // non-step densities are representable only to be rejected

    bool full_dimensional() const {
        return std::none_of(carrier.begin(), carrier.end(), [](const Interval& i) { return i.is_point(); });
    }

    /// δ_carrier(1_c): product of normalised per-axis measures.
    Rational weight(const Cube& c) const {
        Rational w = 1;
        for (std::size_t i = 0; i < carrier.size(); ++i) {
            const auto& k = carrier[i];
            const auto& ci = c.axes[i];
            if (k.is_point()) {
                if (!ci.contains(k.lo.value())) return 0;
                continue;
            }
            ExtRational a = std::max(k.lo, ci.lo), b = std::min(k.hi, ci.hi);
            if (b <= a) return 0;
            w *= (b.value() - a.value()) / k.length();
        }
        return w;
    }

    /// Per-axis finite coordinates of the carrier.
    std::vector<Rational> coordinates(std::size_t axis) const {
        const auto& k = carrier[axis];
        std::vector<Rational> out;
        if (k.lo.finite()) out.push_back(k.lo.value());
        if (k.hi.finite() && !k.is_point()) out.push_back(k.hi.value());
        return out;
    }
};

enum class StabilityMode { eval, step };

inline std::string to_string(StabilityMode m) { return m == StabilityMode::eval ? "eval" : "step"; }

struct Diagnostic {
    std::string code;
    std::string message;
};

/// Z_{α,β}: imaginary part a finite combination of averaging forms, real part β.
struct StabilityCondition {
    std::size_t n = 1;
    StabilityMode mode = StabilityMode::eval;
    std::vector<AlphaTerm> alpha;
    BetaSpec beta;

    bool has_negative_terms() const {
        return std::any_of(alpha.begin(), alpha.end(), [](const AlphaTerm& t) { return t.coeff < 0; });
    }

    Rational alpha_of_cube(const Cube& c) const {
        Rational total = 0;
        for (const auto& t : alpha) total += t.coeff * t.weight(c);
        return total;
    }

    /// Coordinates of the α carriers and the β windows, per axis.
    GridFunction base_grid() const {
        std::vector<std::vector<Rational>> axes(n);
        for (const auto& t : alpha)
            for (std::size_t i = 0; i < n; ++i) {
                auto c = t.coordinates(i);
                axes[i].insert(axes[i].end(), c.begin(), c.end());
            }
        for (const auto& bt : beta.terms)
            for (std::size_t i = 0; i < n; ++i)
                axes[i].insert(axes[i].end(), bt.axes[i].grid.begin(), bt.axes[i].grid.end());
        for (auto& a : axes)
            if (a.empty()) a.push_back(Rational(0));
        auto g = GridFunction::from_coordinates(axes);
        for (std::size_t i = 0; i < n; ++i) {
            auto bp = beta.breakpoints(i, g.axis(i).front(), g.axis(i).back());
            axes[i].insert(axes[i].end(), bp.begin(), bp.end());
        }
        return GridFunction::from_coordinates(axes);
    }

    StabilityCondition shifted(const Point& x) const {
        require(x.size() == n, "shift: dimension mismatch");
        StabilityCondition z = *this;
        for (auto& t : z.alpha)
            for (std::size_t i = 0; i < n; ++i) {
                auto& k = t.carrier[i];
                if (k.lo.finite()) k.lo = ExtRational(k.lo.value() - x[i]);
                if (k.hi.finite()) k.hi = ExtRational(k.hi.value() - x[i]);
            }
        z.beta = beta.shifted(x);
        return z;
    }
};

/// The condition translated by -x, so that its slopes on V equal those of the original on T_x^* V.
inline StabilityCondition shift_Z(const StabilityCondition& z, const Point& x) { return z.shifted(x); }

inline StabilityCondition skyscraper_condition(const Point& q, BetaSpec beta) {
    StabilityCondition z;
    z.n = q.size();
    z.mode = StabilityMode::eval;
    AlphaTerm t;
    for (const auto& c : q) t.carrier.push_back(Interval::point(c));
    z.alpha.push_back(std::move(t));
    z.beta = std::move(beta);
    return z;
}

/// Structural checks. Signed full-dimensional step terms pass only when allow_signed is set.
inline std::vector<Diagnostic> validate(const StabilityCondition& z, bool allow_signed = false) {
    std::vector<Diagnostic> out;
    auto add = [&](std::string code, std::string msg) { out.push_back({std::move(code), std::move(msg)}); };
    for (std::size_t k = 0; k < z.alpha.size(); ++k) {
        const auto& t = z.alpha[k];
        std::string name = "alpha term " + std::to_string(k);
        if (t.carrier.size() != z.n) {
            add("dimension_mismatch", name + " has " + std::to_string(t.carrier.size()) + " axes");
            continue;
        }
        bool bounded = true;
        for (const auto& iv : t.carrier) bounded &= iv.bounded() && !iv.empty();
        if (!bounded) add("alpha_carrier_unbounded", name + " has an unbounded or empty carrier");
        if (t.density_slope && *t.density_slope != 0)
            add("alpha_density_not_step", name + " has a non-constant density on its carrier");
        if (t.coeff < 0) {
            bool signed_ok = allow_signed && z.mode == StabilityMode::step && t.full_dimensional();
            if (!signed_ok) add("alpha_negative_coefficient", name + " has coefficient " + t.coeff.get_str());
        }
        if (z.mode == StabilityMode::eval && bounded && !std::all_of(t.carrier.begin(), t.carrier.end(),
                                                                     [](const Interval& i) { return i.is_point(); }))
            add("mode_mismatch", name + " is not a point carrier in eval mode");
    }
    if (z.beta.terms.empty()) add("beta_nonpositive", "beta has no terms");
    for (std::size_t k = 0; k < z.beta.terms.size(); ++k) {
        const auto& bt = z.beta.terms[k];
        std::string name = "beta term " + std::to_string(k);
        if (bt.axes.size() != z.n) {
            add("dimension_mismatch", name + " has " + std::to_string(bt.axes.size()) + " axes");
            continue;
        }
        for (std::size_t i = 0; i < bt.axes.size(); ++i) {
            const auto& f = bt.axes[i];
            std::string ax = name + " axis " + std::to_string(i);
            bool increasing = f.grid.size() >= 2;
            for (std::size_t j = 1; j < f.grid.size(); ++j) increasing &= f.grid[j - 1] < f.grid[j];
            if (!increasing) add("beta_grid_not_increasing", ax + " needs at least two strictly increasing breakpoints");
            if (f.values.size() + 1 != f.grid.size())
                add("dimension_mismatch", ax + " needs one value per window cell");
            for (const auto& v : f.values)
                if (v <= 0) add("beta_nonpositive", ax + " has value " + v.get_str());
            for (const auto* r : {&f.left_ratio, &f.right_ratio})
                if (*r <= 0 || *r >= 1) add("beta_ratio_out_of_range", ax + " has tail ratio " + r->get_str());
        }
    }
    return out;
}

inline void require_valid(const StabilityCondition& z, bool allow_signed = false) {
    auto d = validate(z, allow_signed);
    if (d.empty()) return;
    std::string msg;
    for (const auto& x : d) msg += (msg.empty() ? "" : "; ") + x.code + ": " + x.message;
    fail(ErrorKind::validation, msg);
}

/// Stability data pulled back to a finite grid poset.
struct DiscreteStability {
    GridPoset grid;
    std::vector<Rational> alpha;
    std::vector<Rational> beta;

    Rational im(const std::vector<std::size_t>& d) const {
        Rational s = 0;
        for (std::size_t p = 0; p < d.size(); ++p)
            if (d[p]) s += alpha[p] * static_cast<unsigned long>(d[p]);
        return s;
    }
    Rational re(const std::vector<std::size_t>& d) const {
        Rational s = 0;
        for (std::size_t p = 0; p < d.size(); ++p)
            if (d[p]) s += beta[p] * static_cast<unsigned long>(d[p]);
        return s;
    }
    Rational slope(const std::vector<std::size_t>& d) const {
        require(d.size() == alpha.size(), "slope: dimension vector has the wrong length");
        Rational r = re(d);
        if (r == 0) fail(ErrorKind::usage, "slope of the zero module");
        return im(d) / r;
    }
    bool nonnegative() const {
        return std::all_of(alpha.begin(), alpha.end(), [](const Rational& a) { return a >= 0; });
    }
    std::string key() const {
        std::string k;
        for (auto s : grid.sizes()) k += std::to_string(s) + ",";
        k += "|";
        for (const auto& a : alpha) k += a.get_str() + ",";
        k += "|";
        for (const auto& b : beta) k += b.get_str() + ",";
        return k;
    }
};

/// Coordinates that g is missing for the condition to be discretisable on it.
inline std::vector<std::string> missing_coordinates(const StabilityCondition& z, const GridFunction& g) {
    std::set<std::string> missing;
    auto need = [&](std::size_t i, const Rational& c) {
        if (!g.contains_coordinate(i, c)) missing.insert("axis " + std::to_string(i) + ": " + c.get_str());
    };
    for (const auto& t : z.alpha) {
        bool relevant = true;
        for (std::size_t i = 0; i < z.n; ++i) {
            const auto& k = t.carrier[i];
            const Rational& top = k.is_point() ? k.lo.value() : k.hi.value();
            if (k.is_point() ? top < g.axis(i).front() : top <= g.axis(i).front()) relevant = false;
        }
        if (!relevant) continue;
        for (std::size_t i = 0; i < z.n; ++i) {
            for (const auto& c : t.coordinates(i))
                if (c >= g.axis(i).front()) need(i, c);
            const auto& k = t.carrier[i];
            if (z.mode == StabilityMode::step && k.is_point() && k.lo.value() >= g.axis(i).back())
                missing.insert("axis " + std::to_string(i) + ": a coordinate above " + k.lo.value().get_str());
        }
    }
    if (z.mode == StabilityMode::step)
        for (std::size_t i = 0; i < z.n; ++i)
            for (const auto& c : z.beta.breakpoints(i, g.axis(i).front(), g.axis(i).back())) need(i, c);
    return {missing.begin(), missing.end()};
}

/// f^*Z on the vertices of g: α and β of the indicator of each cube.
inline DiscreteStability pullback_Z(const StabilityCondition& z, const GridFunction& g) {
    require(g.n() == z.n, "pullback_Z: dimension mismatch");
    auto miss = missing_coordinates(z, g);
    if (!miss.empty()) {
        std::string msg = "grid " + g.str() + " is not adapted to the condition; missing";
        for (const auto& m : miss) msg += " [" + m + "]";
        fail(ErrorKind::refinement, msg);
    }
    DiscreteStability ds{g.poset(), {}, {}};
    for (std::size_t p = 0; p < g.poset().count(); ++p) {
        Cube c = g.cube_of(p);
        ds.alpha.push_back(z.alpha_of_cube(c));
        ds.beta.push_back(z.beta.integral(c));
    }
    return ds;
}

/// Im Z of a module, exact by linearity over the cubes of its grid.
template <Field K>
Rational alpha_eval(const StabilityCondition& z, const GridModule<K>& v) {
    Rational s = 0;
    for (std::size_t p = 0; p < v.poset().count(); ++p)
        if (v.dim(p)) s += z.alpha_of_cube(v.grid().cube_of(p)) * static_cast<unsigned long>(v.dim(p));
    return s;
}

template <Field K>
Rational beta_eval(const StabilityCondition& z, const GridModule<K>& v) {
    Rational s = 0;
    for (std::size_t p = 0; p < v.poset().count(); ++p)
        if (v.dim(p)) s += z.beta.integral(v.grid().cube_of(p)) * static_cast<unsigned long>(v.dim(p));
    return s;
}

/// min(0, min_c a_c) / min_c b_c over the bounded cells of the base grid.
inline Rational theta_min(const StabilityCondition& z) {
    auto g = z.base_grid();
    const auto& P = g.poset();
    std::optional<Rational> min_a, min_b;
    for (std::size_t v = 0; v < P.count(); ++v) {
        Cube c = g.cube_of(v);
        if (!c.bounded()) continue;
        Rational a = 0;
        for (const auto& t : z.alpha)
            if (t.full_dimensional()) a += t.coeff * t.weight(c);
        Rational b = z.beta.integral(c);
        if (!min_a || a < *min_a) min_a = a;
        if (!min_b || b < *min_b) min_b = b;
    }
    if (!min_a || *min_a >= 0) return 0;
    return *min_a / *min_b;
}

}  // namespace hnpers
