#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hnpers/rational.hpp"

namespace hnpers {

using Coord = std::vector<std::size_t>;

/// The finite grid poset {0..m_1-1} x ... x {0..m_n-1} with the product order.
/// Vertices are linearised with axis 0 varying fastest.
class GridPoset {
public:
    GridPoset() = default;
    explicit GridPoset(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
        require(!sizes_.empty(), "grid poset needs at least one axis");
        strides_.resize(sizes_.size());
        std::size_t s = 1;
        for (std::size_t i = 0; i < sizes_.size(); ++i) {
            require(sizes_[i] > 0, "grid poset axes must be nonempty");
            strides_[i] = s;
            s *= sizes_[i];
        }
        count_ = s;
        order_.resize(count_);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::vector<std::size_t> level(count_);
        for (std::size_t v = 0; v < count_; ++v) {
            auto c = coord(v);
            level[v] = std::accumulate(c.begin(), c.end(), std::size_t{0});
        }
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return level[a] < level[b]; });
    }

    std::size_t n() const { return sizes_.size(); }
    std::size_t count() const { return count_; }
    const std::vector<std::size_t>& sizes() const { return sizes_; }
    std::size_t size(std::size_t axis) const { return sizes_[axis]; }
    std::size_t stride(std::size_t axis) const { return strides_[axis]; }

    std::size_t index(const Coord& c) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n(); ++i) idx += c[i] * strides_[i];
        return idx;
    }
    Coord coord(std::size_t idx) const {
        Coord c(n());
        for (std::size_t i = 0; i < n(); ++i) {
            c[i] = idx % sizes_[i];
            idx /= sizes_[i];
        }
        return c;
    }
    std::size_t axis_coord(std::size_t idx, std::size_t axis) const { return (idx / strides_[axis]) % sizes_[axis]; }

    /// Index of v + e_axis, if it exists.
    std::optional<std::size_t> successor(std::size_t v, std::size_t axis) const {
        if (axis_coord(v, axis) + 1 >= sizes_[axis]) return std::nullopt;
        return v + strides_[axis];
    }
    std::optional<std::size_t> predecessor(std::size_t v, std::size_t axis) const {
        if (axis_coord(v, axis) == 0) return std::nullopt;
        return v - strides_[axis];
    }

    bool leq(std::size_t a, std::size_t b) const {
        for (std::size_t i = 0; i < n(); ++i)
            if (axis_coord(a, i) > axis_coord(b, i)) return false;
        return true;
    }

    /// Vertices sorted by coordinate sum: a linear extension of the order.
    const std::vector<std::size_t>& linear_extension() const { return order_; }

    friend bool operator==(const GridPoset& a, const GridPoset& b) { return a.sizes_ == b.sizes_; }

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> strides_;
    std::vector<std::size_t> order_;
    std::size_t count_ = 0;
};

/// One axis of a cube: an interval with optional infinite bounds.
struct Interval {
    ExtRational lo = ExtRational::neg_inf();
    ExtRational hi = ExtRational::pos_inf();
    bool lo_closed = true;
    bool hi_closed = false;

    static Interval half_open(ExtRational a, ExtRational b) { return {std::move(a), std::move(b), true, false}; }
    static Interval point(const Rational& a) { return {a, a, true, true}; }
    static Interval open(ExtRational a, ExtRational b) { return {std::move(a), std::move(b), false, false}; }

    bool bounded() const { return lo.finite() && hi.finite(); }
    bool is_point() const { return bounded() && lo == hi && lo_closed && hi_closed; }
    bool empty() const {
        if (lo > hi) return true;
        if (lo == hi) return !(lo_closed && hi_closed) || !lo.finite();
        return false;
    }
    bool contains(const Rational& x) const {
        ExtRational e(x);
        bool above = lo_closed ? lo <= e : lo < e;
        bool below = hi_closed ? e <= hi : e < hi;
        return above && below;
    }
    /// Lebesgue length; requires a bounded interval.
    Rational length() const {
        if (empty()) return 0;
        return hi.value() - lo.value();
    }
    friend bool operator==(const Interval&, const Interval&) = default;
    std::string str() const {
        return std::string(lo_closed ? "[" : "(") + lo.str() + "," + hi.str() + (hi_closed ? "]" : ")");
    }
};

/// A product of intervals in Q^n.
struct Cube {
    std::vector<Interval> axes;

    std::size_t n() const { return axes.size(); }
    bool bounded() const {
        return std::all_of(axes.begin(), axes.end(), [](const Interval& i) { return i.bounded(); });
    }
    bool empty() const {
        return std::any_of(axes.begin(), axes.end(), [](const Interval& i) { return i.empty(); });
    }
    bool contains(const Point& q) const {
        require(q.size() == n(), "cube/point dimension mismatch");
        for (std::size_t i = 0; i < n(); ++i)
            if (!axes[i].contains(q[i])) return false;
        return true;
    }
    friend bool operator==(const Cube&, const Cube&) = default;
    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < n(); ++i) out += (i ? "x" : "") + axes[i].str();
        return out;
    }
};

/// Per-axis coordinates attached to a grid poset. A proper grid function has
/// strictly increasing axes; improper ones are only built by internal code.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::vector<std::vector<Rational>> axes) : axes_(std::move(axes)) {
        validate_shape();
        for (const auto& a : axes_)
            for (std::size_t j = 1; j < a.size(); ++j)
                require(a[j - 1] < a[j], "grid axes must be strictly increasing");
        poset_ = GridPoset(sizes());
    }
    static GridFunction improper(std::vector<std::vector<Rational>> axes) {
        GridFunction g;
        g.axes_ = std::move(axes);
        g.validate_shape();
        for (const auto& a : g.axes_)
            for (std::size_t j = 1; j < a.size(); ++j) {
                require(a[j - 1] <= a[j], "improper grid axes must be nondecreasing");
                if (a[j - 1] == a[j]) g.proper_ = false;
            }
        g.poset_ = GridPoset(g.sizes());
        return g;
    }
    /// Sorted, deduplicated coordinates per axis.
    static GridFunction from_coordinates(std::vector<std::vector<Rational>> axes) {
        for (auto& a : axes) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
        return GridFunction(std::move(axes));
    }

    std::size_t n() const { return axes_.size(); }
    bool proper() const { return proper_; }
    const GridPoset& poset() const { return poset_; }
    const std::vector<std::vector<Rational>>& axes() const { return axes_; }
    const std::vector<Rational>& axis(std::size_t i) const { return axes_[i]; }
    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> s;
        for (const auto& a : axes_) s.push_back(a.size());
        return s;
    }

    Point value(const Coord& c) const {
        Point p(n());
        for (std::size_t i = 0; i < n(); ++i) p[i] = axes_[i][c[i]];
        return p;
    }
    Point value(std::size_t vertex) const { return value(poset_.coord(vertex)); }

    /// Coordinatewise maximal p with g(p) <= q; nullopt encodes -inf.
    std::optional<Coord> floor(const Point& q) const {
        require(proper_, "floor requires a proper grid function");
        require(q.size() == n(), "floor: point dimension mismatch");
        Coord c(n());
        for (std::size_t i = 0; i < n(); ++i) {
            auto it = std::upper_bound(axes_[i].begin(), axes_[i].end(), q[i]);
            if (it == axes_[i].begin()) return std::nullopt;
            c[i] = static_cast<std::size_t>(it - axes_[i].begin()) - 1;
        }
        return c;
    }
    std::optional<std::size_t> floor_index(const Point& q) const {
        auto c = floor(q);
        if (!c) return std::nullopt;
        return poset_.index(*c);
    }

    /// Fiber of p under the floor function: a product of half-open cells,
    /// unbounded above on last indices.
    Cube cube_of(const Coord& p) const {
        Cube c;
        for (std::size_t i = 0; i < n(); ++i) {
            ExtRational hi = p[i] + 1 < axes_[i].size() ? ExtRational(axes_[i][p[i] + 1]) : ExtRational::pos_inf();
            c.axes.push_back(Interval::half_open(axes_[i][p[i]], hi));
        }
        return c;
    }
    Cube cube_of(std::size_t vertex) const { return cube_of(poset_.coord(vertex)); }

    /// The floor is -inf exactly on the union of these half-spaces {q_i < g_i(0)}.
    std::vector<Cube> neg_inf_region() const {
        std::vector<Cube> out;
        for (std::size_t i = 0; i < n(); ++i) {
            Cube c;
            c.axes.assign(n(), Interval{});
            c.axes[i] = Interval::open(ExtRational::neg_inf(), axes_[i].front());
            out.push_back(std::move(c));
        }
        return out;
    }

    bool contains_coordinate(std::size_t axis, const Rational& x) const {
        return std::binary_search(axes_[axis].begin(), axes_[axis].end(), x);
    }

    friend bool operator==(const GridFunction& a, const GridFunction& b) { return a.axes_ == b.axes_; }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < n(); ++i) {
            out += i ? "x{" : "{";
            for (std::size_t j = 0; j < axes_[i].size(); ++j) out += (j ? "," : "") + axes_[i][j].get_str();
            out += "}";
        }
        return out;
    }

private:
    void validate_shape() {
        require(!axes_.empty(), "grid function needs at least one axis");
        for (const auto& a : axes_) require(!a.empty(), "grid axes must be nonempty");
    }

    std::vector<std::vector<Rational>> axes_;
    GridPoset poset_;
    bool proper_ = true;
};

/// Per-axis strictly increasing index maps between grid posets.
struct GridMap {
    GridPoset domain;
    GridPoset codomain;
    std::vector<std::vector<std::size_t>> index_maps;

    Coord apply(const Coord& c) const {
        Coord out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) out[i] = index_maps[i][c[i]];
        return out;
    }
    std::size_t apply_index(std::size_t v) const { return codomain.index(apply(domain.coord(v))); }

    static GridMap identity(const GridPoset& p) {
        GridMap m{p, p, {}};
        for (std::size_t i = 0; i < p.n(); ++i) {
            std::vector<std::size_t> id(p.size(i));
            std::iota(id.begin(), id.end(), std::size_t{0});
            m.index_maps.push_back(std::move(id));
        }
        return m;
    }
    friend bool operator==(const GridMap& a, const GridMap& b) {
        return a.domain == b.domain && a.codomain == b.codomain && a.index_maps == b.index_maps;
    }
};

/// Index embedding of `coarse` into `fine`; every coarse coordinate must be a fine one.
inline GridMap embedding(const GridFunction& coarse, const GridFunction& fine) {
    require(coarse.n() == fine.n(), "embedding: dimension mismatch");
    GridMap m{coarse.poset(), fine.poset(), {}};
    for (std::size_t i = 0; i < coarse.n(); ++i) {
        std::vector<std::size_t> idx;
        for (const auto& x : coarse.axis(i)) {
            const auto& f = fine.axis(i);
            auto it = std::lower_bound(f.begin(), f.end(), x);
            if (it == f.end() || *it != x)
                fail(ErrorKind::refinement, "grid " + fine.str() + " does not contain coordinate " + x.get_str() +
                                                " on axis " + std::to_string(i));
            idx.push_back(static_cast<std::size_t>(it - f.begin()));
        }
        m.index_maps.push_back(std::move(idx));
    }
    return m;
}

inline bool refines(const GridFunction& fine, const GridFunction& coarse) {
    if (fine.n() != coarse.n()) return false;
    for (std::size_t i = 0; i < coarse.n(); ++i)
        for (const auto& x : coarse.axis(i))
            if (!fine.contains_coordinate(i, x)) return false;
    return true;
}

/// Adds coordinates per axis (sorted union).
inline GridFunction add_coordinates(const GridFunction& g, const std::vector<std::vector<Rational>>& extra) {
    require(extra.size() == g.n(), "add_coordinates: dimension mismatch");
    auto axes = g.axes();
    for (std::size_t i = 0; i < g.n(); ++i) axes[i].insert(axes[i].end(), extra[i].begin(), extra[i].end());
    return GridFunction::from_coordinates(std::move(axes));
}

struct Refinement {
    GridFunction grid;
    GridMap left;
    GridMap right;
};

/// Independent common refinement: per-axis sorted union of coordinates,
/// together with the two index embeddings.
inline Refinement common_refinement(const GridFunction& g1, const GridFunction& g2) {
    require(g1.n() == g2.n(), "common_refinement: dimension mismatch");
    require(g1.proper() && g2.proper(), "common_refinement requires proper grids");
    GridFunction g = add_coordinates(g1, g2.axes());
    return {g, embedding(g1, g), embedding(g2, g)};
}

/// Grid of the x-shifted module: every coordinate g_i(p) becomes g_i(p) - x_i.
inline GridFunction shift_grid(const GridFunction& g, const Point& x) {
    require(x.size() == g.n(), "shift_grid: dimension mismatch");
    auto axes = g.axes();
    for (std::size_t i = 0; i < g.n(); ++i)
        for (auto& c : axes[i]) c -= x[i];
    if (g.proper()) return GridFunction(std::move(axes));
    return GridFunction::improper(std::move(axes));
}

struct Extension {
    GridFunction grid;
    std::vector<std::vector<bool>> inside_window;  // per axis, per coordinate
};

/// Extends g by extra coordinates and records which coordinates lie in the window.
inline Extension restrict_and_extend(const GridFunction& g, const std::vector<std::vector<Rational>>& extra,
                                     const Cube& window) {
    require(window.n() == g.n(), "restrict_and_extend: dimension mismatch");
    Extension e{add_coordinates(g, extra), {}};
    for (std::size_t i = 0; i < g.n(); ++i) {
        std::vector<bool> in;
        for (const auto& c : e.grid.axis(i)) in.push_back(window.axes[i].contains(c));
        e.inside_window.push_back(std::move(in));
    }
    return e;
}

}  // namespace hnpers
