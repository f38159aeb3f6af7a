#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hnpers/grid.hpp"
#include "hnpers/subspace.hpp"

namespace hnpers {

/// A finite presentation: generators at points of Q^n and relations given as
/// coefficient rows over the generators. Coefficients are stored exactly and
/// reduced into the working field when a module is built.
struct Presentation {
    struct Relation {
        Point point;
        std::vector<Rational> coeffs;
    };
    std::size_t n = 1;
    std::vector<Point> generators;
    std::vector<Relation> relations;
    std::optional<std::uint32_t> prime;  // field marker; nullopt means Q

    void validate() const {
        require(n >= 1, "presentation dimension must be positive");
        for (std::size_t j = 0; j < generators.size(); ++j)
            if (generators[j].size() != n)
                fail(ErrorKind::validation, "generator " + std::to_string(j) + " has wrong dimension");
        for (std::size_t r = 0; r < relations.size(); ++r) {
            const auto& rel = relations[r];
            if (rel.point.size() != n)
                fail(ErrorKind::validation, "relation " + std::to_string(r) + " has wrong dimension");
            if (rel.coeffs.size() != generators.size())
                fail(ErrorKind::validation, "relation " + std::to_string(r) + " needs one coefficient per generator");
            for (std::size_t j = 0; j < generators.size(); ++j) {
                if (rel.coeffs[j] == 0) continue;
                for (std::size_t i = 0; i < n; ++i)
                    if (generators[j][i] > rel.point[i])
                        fail(ErrorKind::validation, "relation " + std::to_string(r) +
                                                        " has a coefficient on generator " + std::to_string(j) +
                                                        " which is not below it");
            }
        }
    }
};

inline bool leq(const Point& a, const Point& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

/// Finite grid representation: a space per vertex and a matrix per Hasse edge.
template <Field K>
class GridModule {
public:
    using Mat = Matrix<K>;

    GridModule() = default;
    GridModule(K field, GridFunction grid, std::vector<std::size_t> dims, std::vector<std::vector<Mat>> edges)
        : field_(field), grid_(std::move(grid)), dims_(std::move(dims)), edges_(std::move(edges)) {
        const auto& P = grid_.poset();
        require(grid_.proper(), "grid modules live on proper grids");
        require(dims_.size() == P.count(), "one dimension per vertex required");
        require(edges_.size() == P.n(), "one edge family per axis required");
        for (std::size_t a = 0; a < P.n(); ++a) {
            require(edges_[a].size() == P.count(), "one edge slot per vertex required");
            for (std::size_t v = 0; v < P.count(); ++v) {
                auto s = P.successor(v, a);
                if (!s) {
                    edges_[a][v] = Mat(field_, 0, 0);
                    continue;
                }
                const Mat& m = edges_[a][v];
                if (m.rows() != dims_[*s] || m.cols() != dims_[v])
                    fail(ErrorKind::invariant, "edge map shape mismatch at vertex " + std::to_string(v));
            }
        }
        if (auto bad = commutativity_violation())
            fail(ErrorKind::invariant, "edge maps do not commute at " + *bad);
    }

    static GridModule zero(K field, std::size_t n) {
        GridFunction g(std::vector<std::vector<Rational>>(n, std::vector<Rational>{Rational(0)}));
        std::vector<std::vector<Mat>> e(n, std::vector<Mat>(1));
        return GridModule(field, g, {0}, e);
    }

    const K& field() const { return field_; }
    const GridFunction& grid() const { return grid_; }
    const GridPoset& poset() const { return grid_.poset(); }
    std::size_t n() const { return grid_.n(); }
    std::size_t dim(std::size_t v) const { return dims_[v]; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t total_dim() const {
        std::size_t s = 0;
        for (auto d : dims_) s += d;
        return s;
    }
    bool is_zero() const { return total_dim() == 0; }
    const Mat& edge(std::size_t axis, std::size_t v) const { return edges_[axis][v]; }
    const std::vector<std::vector<Mat>>& edges() const { return edges_; }

    /// Dimension at an arbitrary point of Q^n.
    std::size_t dim_at(const Point& q) const {
        auto f = grid_.floor_index(q);
        return f ? dims_[*f] : 0;
    }

    /// Composite structure map V_from -> V_to for from <= to.
    Mat map(std::size_t from, std::size_t to) const {
        const auto& P = poset();
        require(P.leq(from, to), "structure map requested between incomparable vertices");
        Mat result = Mat::identity(field_, dims_[from]);
        std::size_t cur = from;
        for (std::size_t a = 0; a < P.n(); ++a) {
            std::size_t target = P.axis_coord(to, a);
            while (P.axis_coord(cur, a) < target) {
                result = edges_[a][cur] * result;
                cur += P.stride(a);
            }
        }
        return result;
    }

    std::optional<std::string> commutativity_violation() const {
        const auto& P = poset();
        for (std::size_t v = 0; v < P.count(); ++v)
            for (std::size_t a = 0; a < P.n(); ++a)
                for (std::size_t b = a + 1; b < P.n(); ++b) {
                    auto va = P.successor(v, a), vb = P.successor(v, b);
                    if (!va || !vb) continue;
                    if (edges_[b][*va] * edges_[a][v] != edges_[a][*vb] * edges_[b][v])
                        return "vertex " + std::to_string(v) + " axes " + std::to_string(a) + "," + std::to_string(b);
                }
        return std::nullopt;
    }

private:
    K field_{};
    GridFunction grid_;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<Mat>> edges_;
};

/// Rank value of the rank invariant; nullopt encodes +inf.
using RankValue = std::optional<std::size_t>;

inline std::string rank_str(const RankValue& r) { return r ? std::to_string(*r) : "inf"; }

template <Field K>
RankValue rank_invariant(const GridModule<K>& v, const Point& x, const Point& y) {
    if (!leq(x, y)) return std::nullopt;
    auto fx = v.grid().floor_index(x);
    auto fy = v.grid().floor_index(y);
    if (!fx || !fy) return std::size_t{0};
    return rank(v.map(*fx, *fy));
}

/// A module built from a presentation, keeping the bookkeeping needed to
/// locate generator images: at every vertex the active generators, the
/// relation subspace among them, and the free generators spanning the cokernel.
template <Field K>
struct PresentedModule {
    struct VertexData {
        std::vector<std::size_t> active;  // generator indices
        Subspace<K> relations;            // in K^{active.size()}
        std::vector<std::size_t> free;    // positions in `active`
    };
    Presentation presentation;
    GridModule<K> module;
    std::vector<VertexData> vertices;

    /// Coordinates of generator j in the space at vertex v.
    typename Matrix<K>::Vector generator_vector(std::size_t j, std::size_t v) const {
        const auto& vd = vertices[v];
        const K& f = module.field();
        auto it = std::lower_bound(vd.active.begin(), vd.active.end(), j);
        require(it != vd.active.end() && *it == j, "generator not active at vertex");
        typename Matrix<K>::Vector e(vd.active.size(), f.zero());
        e[static_cast<std::size_t>(it - vd.active.begin())] = f.one();
        auto r = vd.relations.reduce(std::move(e));
        typename Matrix<K>::Vector out;
        for (auto c : vd.free) out.push_back(r[c]);
        return out;
    }
};

template <Field K>
PresentedModule<K> present(const Presentation& pres, K field, std::optional<GridFunction> grid_override = {}) {
    pres.validate();
    std::vector<std::vector<Rational>> axes(pres.n);
    for (const auto& g : pres.generators)
        for (std::size_t i = 0; i < pres.n; ++i) axes[i].push_back(g[i]);
    for (const auto& r : pres.relations)
        for (std::size_t i = 0; i < pres.n; ++i) axes[i].push_back(r.point[i]);
    for (auto& a : axes)
        if (a.empty()) a.push_back(Rational(0));
    GridFunction grid = GridFunction::from_coordinates(axes);
    if (grid_override) {
        require(refines(*grid_override, grid), "override grid must contain the presentation coordinates");
        grid = *grid_override;
    }
    const auto& P = grid.poset();

    std::vector<std::vector<typename K::value_type>> coeffs(pres.relations.size());
    for (std::size_t r = 0; r < pres.relations.size(); ++r)
        for (const auto& c : pres.relations[r].coeffs) coeffs[r].push_back(field.from_rational(c));

    PresentedModule<K> out;
    out.presentation = pres;
    out.vertices.resize(P.count());
    std::vector<std::size_t> dims(P.count());
    for (std::size_t v = 0; v < P.count(); ++v) {
        Point q = grid.value(v);
        auto& vd = out.vertices[v];
        for (std::size_t j = 0; j < pres.generators.size(); ++j)
            if (leq(pres.generators[j], q)) vd.active.push_back(j);
        std::vector<typename Matrix<K>::Vector> rows;
        for (std::size_t r = 0; r < pres.relations.size(); ++r) {
            if (!leq(pres.relations[r].point, q)) continue;
            typename Matrix<K>::Vector row;
            for (auto j : vd.active) row.push_back(coeffs[r][j]);
            rows.push_back(std::move(row));
        }
        vd.relations = Subspace<K>::span(field, vd.active.size(), rows);
        vd.free = vd.relations.free_columns();
        dims[v] = vd.free.size();
    }

    std::vector<std::vector<Matrix<K>>> edges(P.n(), std::vector<Matrix<K>>(P.count()));
    for (std::size_t a = 0; a < P.n(); ++a)
        for (std::size_t v = 0; v < P.count(); ++v) {
            auto s = P.successor(v, a);
            if (!s) continue;
            Matrix<K> m(field, dims[*s], dims[v]);
            const auto& src = out.vertices[v];
            const auto& dst = out.vertices[*s];
            for (std::size_t c = 0; c < src.free.size(); ++c) {
                std::size_t gen = src.active[src.free[c]];
                auto pos = static_cast<std::size_t>(std::lower_bound(dst.active.begin(), dst.active.end(), gen) -
                                                    dst.active.begin());
                typename Matrix<K>::Vector e(dst.active.size(), field.zero());
                e[pos] = field.one();
                auto r = dst.relations.reduce(std::move(e));
                for (std::size_t k = 0; k < dst.free.size(); ++k) m(k, c) = r[dst.free[k]];
            }
            edges[a][v] = std::move(m);
        }
    out.module = GridModule<K>(field, grid, dims, edges);
    return out;
}

template <Field K>
GridModule<K> from_presentation(const Presentation& pres, K field) {
    return present(pres, field).module;
}

/// Indicator of a spread (connected convex subset) of the grid poset.
template <Field K>
GridModule<K> spread_module(K field, const GridFunction& grid, const std::vector<bool>& indicator) {
    const auto& P = grid.poset();
    require(indicator.size() == P.count(), "spread indicator needs one entry per vertex");
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < P.count(); ++v)
        if (indicator[v]) members.push_back(v);
    for (auto u : members)
        for (auto w : members) {
            if (u == w || !P.leq(u, w)) continue;
            for (std::size_t z = 0; z < P.count(); ++z)
                if (!indicator[z] && P.leq(u, z) && P.leq(z, w))
                    fail(ErrorKind::validation, "not convex: vertex " + to_string(grid.value(z)) + " lies between " +
                                                    to_string(grid.value(u)) + " and " + to_string(grid.value(w)));
        }
    if (!members.empty()) {
        std::vector<bool> seen(P.count(), false);
        std::vector<std::size_t> stack{members.front()};
        seen[members.front()] = true;
        std::size_t reached = 0;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            ++reached;
            for (std::size_t a = 0; a < P.n(); ++a)
                for (auto nb : {P.successor(v, a), P.predecessor(v, a)})
                    if (nb && indicator[*nb] && !seen[*nb]) {
                        seen[*nb] = true;
                        stack.push_back(*nb);
                    }
        }
        if (reached != members.size()) {
            for (auto v : members)
                if (!seen[v])
                    fail(ErrorKind::validation, "not connected: vertex " + to_string(grid.value(v)) +
                                                    " is unreachable from " + to_string(grid.value(members.front())));
        }
    }
    std::vector<std::size_t> dims(P.count());
    for (std::size_t v = 0; v < P.count(); ++v) dims[v] = indicator[v] ? 1 : 0;
    std::vector<std::vector<Matrix<K>>> edges(P.n(), std::vector<Matrix<K>>(P.count()));
    for (std::size_t a = 0; a < P.n(); ++a)
        for (std::size_t v = 0; v < P.count(); ++v)
            if (auto s = P.successor(v, a)) {
                edges[a][v] = Matrix<K>(field, dims[*s], dims[v]);
                if (dims[v] && dims[*s]) edges[a][v](0, 0) = field.one();
            }
    return GridModule<K>(field, grid, dims, edges);
}

namespace detail {
/// Floor of a target vertex along a grid map: the largest source index per axis
/// mapping at or below it.
inline std::optional<std::size_t> map_floor(const GridMap& t, std::size_t target_vertex) {
    const auto& P = t.codomain;
    Coord c(P.n());
    for (std::size_t a = 0; a < P.n(); ++a) {
        std::size_t q = P.axis_coord(target_vertex, a);
        const auto& m = t.index_maps[a];
        auto it = std::upper_bound(m.begin(), m.end(), q);
        if (it == m.begin()) return std::nullopt;
        c[a] = static_cast<std::size_t>(it - m.begin()) - 1;
    }
    return t.domain.index(c);
}
}  // namespace detail

/// Left Kan extension along t: the space at q is U at the t-floor of q.
template <Field K>
GridModule<K> pushforward(const GridMap& t, const GridModule<K>& u, const GridFunction& target) {
    require(t.domain == u.poset() && t.codomain == target.poset(), "pushforward: grid map does not match");
    const auto& P = target.poset();
    const K& f = u.field();
    std::vector<std::optional<std::size_t>> fl(P.count());
    std::vector<std::size_t> dims(P.count());
    for (std::size_t v = 0; v < P.count(); ++v) {
        fl[v] = detail::map_floor(t, v);
        dims[v] = fl[v] ? u.dim(*fl[v]) : 0;
    }
    std::vector<std::vector<Matrix<K>>> edges(P.n(), std::vector<Matrix<K>>(P.count()));
    for (std::size_t a = 0; a < P.n(); ++a)
        for (std::size_t v = 0; v < P.count(); ++v)
            if (auto s = P.successor(v, a)) {
                if (fl[v] && fl[*s])
                    edges[a][v] = u.map(*fl[v], *fl[*s]);
                else
                    edges[a][v] = Matrix<K>(f, dims[*s], dims[v]);
            }
    return GridModule<K>(f, target, dims, edges);
}

/// Pushforward onto a refining grid along the coordinate embedding.
template <Field K>
GridModule<K> pushforward(const GridModule<K>& u, const GridFunction& target) {
    return pushforward(embedding(u.grid(), target), u, target);
}

/// Restriction along t: (t^* V)_p = V_{t(p)}.
template <Field K>
GridModule<K> pullback(const GridMap& t, const GridModule<K>& v, const GridFunction& domain) {
    require(t.codomain == v.poset() && t.domain == domain.poset(), "pullback: grid map does not match");
    const auto& P = domain.poset();
    std::vector<std::size_t> dims(P.count());
    for (std::size_t p = 0; p < P.count(); ++p) dims[p] = v.dim(t.apply_index(p));
    std::vector<std::vector<Matrix<K>>> edges(P.n(), std::vector<Matrix<K>>(P.count()));
    for (std::size_t a = 0; a < P.n(); ++a)
        for (std::size_t p = 0; p < P.count(); ++p)
            if (auto s = P.successor(p, a)) edges[a][p] = v.map(t.apply_index(p), t.apply_index(*s));
    return GridModule<K>(v.field(), domain, dims, edges);
}

template <Field K>
GridModule<K> shift_module(const GridModule<K>& v, const Point& x) {
    return GridModule<K>(v.field(), shift_grid(v.grid(), x), v.dims(), v.edges());
}

/// A submodule: one subspace per vertex, closed under the structure maps.
template <Field K>
struct Submodule {
    std::vector<Subspace<K>> components;

    std::size_t dim(std::size_t v) const { return components[v].dim(); }
    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> d;
        for (const auto& c : components) d.push_back(c.dim());
        return d;
    }
    std::size_t total_dim() const {
        std::size_t s = 0;
        for (const auto& c : components) s += c.dim();
        return s;
    }
    bool is_zero() const { return total_dim() == 0; }
    bool contains(const Submodule& o) const {
        for (std::size_t v = 0; v < components.size(); ++v)
            if (!components[v].contains(o.components[v])) return false;
        return true;
    }
    friend bool operator==(const Submodule& a, const Submodule& b) { return a.components == b.components; }
    std::string key() const {
        std::string k;
        for (const auto& c : components) k += c.str() + "|";
        return k;
    }
};

template <Field K>
Submodule<K> zero_submodule(const GridModule<K>& v) {
    Submodule<K> w;
    for (std::size_t p = 0; p < v.poset().count(); ++p) w.components.push_back(Subspace<K>::zero(v.field(), v.dim(p)));
    return w;
}

template <Field K>
Submodule<K> full_submodule(const GridModule<K>& v) {
    Submodule<K> w;
    for (std::size_t p = 0; p < v.poset().count(); ++p) w.components.push_back(Subspace<K>::full(v.field(), v.dim(p)));
    return w;
}

/// First Hasse edge along which w is not closed, if any.
template <Field K>
std::optional<std::string> closure_violation(const GridModule<K>& v, const Submodule<K>& w) {
    const auto& P = v.poset();
    if (w.components.size() != P.count()) return "wrong number of components";
    for (std::size_t p = 0; p < P.count(); ++p) {
        if (w.components[p].ambient() != v.dim(p)) return "component " + std::to_string(p) + " has wrong ambient";
        for (std::size_t a = 0; a < P.n(); ++a)
            if (auto s = P.successor(p, a))
                if (!w.components[*s].contains(push(v.edge(a, p), w.components[p])))
                    return "edge " + to_string(v.grid().value(p)) + " -> " + to_string(v.grid().value(*s));
    }
    return std::nullopt;
}

/// Smallest submodule containing the seeds. One pass in linear-extension order
/// suffices because every vertex receives pushes from all its predecessors.
template <Field K>
Submodule<K> sub_generated(const GridModule<K>& v, const std::vector<Subspace<K>>& seeds) {
    const auto& P = v.poset();
    require(seeds.size() == P.count(), "sub_generated: one seed per vertex required");
    Submodule<K> w;
    w.components.resize(P.count());
    for (auto p : P.linear_extension()) {
        require(seeds[p].ambient() == v.dim(p), "sub_generated: seed in wrong ambient space");
        Subspace<K> acc = seeds[p];
        for (std::size_t a = 0; a < P.n(); ++a)
            if (auto q = P.predecessor(p, a)) acc = subspace_sum(acc, push(v.edge(a, *q), w.components[*q]));
        w.components[p] = std::move(acc);
    }
    return w;
}

template <Field K>
Submodule<K> sub_sum(const Submodule<K>& a, const Submodule<K>& b) {
    Submodule<K> w;
    for (std::size_t p = 0; p < a.components.size(); ++p)
        w.components.push_back(subspace_sum(a.components[p], b.components[p]));
    return w;
}

template <Field K>
Submodule<K> sub_intersect(const Submodule<K>& a, const Submodule<K>& b) {
    Submodule<K> w;
    for (std::size_t p = 0; p < a.components.size(); ++p)
        w.components.push_back(subspace_intersect(a.components[p], b.components[p]));
    return w;
}

/// The submodule as a module in its own right, in the coordinates of the
/// stored RREF bases.
template <Field K>
GridModule<K> submodule_as_module(const GridModule<K>& v, const Submodule<K>& w) {
    const auto& P = v.poset();
    std::vector<std::vector<Matrix<K>>> edges(P.n(), std::vector<Matrix<K>>(P.count()));
    for (std::size_t a = 0; a < P.n(); ++a)
        for (std::size_t p = 0; p < P.count(); ++p)
            if (auto s = P.successor(p, a)) {
                const auto& src = w.components[p];
                const auto& dst = w.components[*s];
                Matrix<K> m(v.field(), dst.dim(), src.dim());
                for (std::size_t c = 0; c < src.dim(); ++c) {
                    auto img = v.edge(a, p).apply(src.basis_vector(c));
                    for (std::size_t k = 0; k < dst.dim(); ++k) m(k, c) = img[dst.pivots()[k]];
                }
                edges[a][p] = std::move(m);
            }
    return GridModule<K>(v.field(), v.grid(), w.dims(), edges);
}

template <Field K>
struct QuotientResult {
    GridModule<K> module;
    std::vector<Matrix<K>> projections;  // V_p -> (V/W)_p
};

template <Field K>
QuotientResult<K> quotient(const GridModule<K>& v, const Submodule<K>& w) {
    if (auto bad = closure_violation(v, w)) fail(ErrorKind::validation, "quotient by a non-submodule: " + *bad);
    const auto& P = v.poset();
    const K& f = v.field();
    std::vector<std::vector<std::size_t>> free(P.count());
    std::vector<Matrix<K>> proj(P.count());
    std::vector<std::size_t> dims(P.count());
    for (std::size_t p = 0; p < P.count(); ++p) {
        free[p] = w.components[p].free_columns();
        dims[p] = free[p].size();
        Matrix<K> m(f, dims[p], v.dim(p));
        for (std::size_t c = 0; c < v.dim(p); ++c) {
            typename Matrix<K>::Vector e(v.dim(p), f.zero());
            e[c] = f.one();
            auto r = w.components[p].reduce(std::move(e));
            for (std::size_t k = 0; k < dims[p]; ++k) m(k, c) = r[free[p][k]];
        }
        proj[p] = std::move(m);
    }
    std::vector<std::vector<Matrix<K>>> edges(P.n(), std::vector<Matrix<K>>(P.count()));
    for (std::size_t a = 0; a < P.n(); ++a)
        for (std::size_t p = 0; p < P.count(); ++p)
            if (auto s = P.successor(p, a)) {
                Matrix<K> lift(f, v.dim(p), dims[p]);
                for (std::size_t k = 0; k < dims[p]; ++k) lift(free[p][k], k) = f.one();
                edges[a][p] = proj[*s] * v.edge(a, p) * lift;
            }
    return {GridModule<K>(f, v.grid(), dims, edges), std::move(proj)};
}

/// Preimage of a submodule of V/W under the projection.
template <Field K>
Submodule<K> lift_submodule(const QuotientResult<K>& q, const Submodule<K>& s) {
    Submodule<K> w;
    for (std::size_t p = 0; p < q.projections.size(); ++p)
        w.components.push_back(preimage(q.projections[p], s.components[p]));
    return w;
}

template <Field K>
GridModule<K> direct_sum(const GridModule<K>& a, const GridModule<K>& b) {
    auto ref = common_refinement(a.grid(), b.grid());
    auto A = pushforward(ref.left, a, ref.grid);
    auto B = pushforward(ref.right, b, ref.grid);
    const auto& P = ref.grid.poset();
    const K& f = a.field();
    std::vector<std::size_t> dims(P.count());
    for (std::size_t p = 0; p < P.count(); ++p) dims[p] = A.dim(p) + B.dim(p);
    std::vector<std::vector<Matrix<K>>> edges(P.n(), std::vector<Matrix<K>>(P.count()));
    for (std::size_t ax = 0; ax < P.n(); ++ax)
        for (std::size_t p = 0; p < P.count(); ++p)
            if (auto s = P.successor(p, ax)) {
                Matrix<K> m(f, dims[*s], dims[p]);
                const auto& ea = A.edge(ax, p);
                const auto& eb = B.edge(ax, p);
                for (std::size_t r = 0; r < ea.rows(); ++r)
                    for (std::size_t c = 0; c < ea.cols(); ++c) m(r, c) = ea(r, c);
                for (std::size_t r = 0; r < eb.rows(); ++r)
                    for (std::size_t c = 0; c < eb.cols(); ++c) m(ea.rows() + r, ea.cols() + c) = eb(r, c);
                edges[ax][p] = std::move(m);
            }
    return GridModule<K>(f, ref.grid, dims, edges);
}

/// A natural transformation between modules over a common grid.
template <Field K>
struct ModuleMap {
    GridModule<K> source;
    GridModule<K> target;
    std::vector<Matrix<K>> components;

    ModuleMap() = default;
    ModuleMap(GridModule<K> s, GridModule<K> t, std::vector<Matrix<K>> c)
        : source(std::move(s)), target(std::move(t)), components(std::move(c)) {
        if (auto bad = naturality_violation()) fail(ErrorKind::invariant, "map is not natural: " + *bad);
    }

    std::optional<std::string> naturality_violation() const {
        if (!(source.grid() == target.grid())) return "source and target grids differ";
        const auto& P = source.poset();
        if (components.size() != P.count()) return "wrong number of components";
        for (std::size_t p = 0; p < P.count(); ++p) {
            if (components[p].rows() != target.dim(p) || components[p].cols() != source.dim(p))
                return "component shape at vertex " + std::to_string(p);
            for (std::size_t a = 0; a < P.n(); ++a)
                if (auto s = P.successor(p, a))
                    if (target.edge(a, p) * components[p] != components[*s] * source.edge(a, p))
                        return "square at vertex " + std::to_string(p) + " axis " + std::to_string(a);
        }
        return std::nullopt;
    }

    static ModuleMap identity(const GridModule<K>& v) {
        std::vector<Matrix<K>> c;
        for (std::size_t p = 0; p < v.poset().count(); ++p) c.push_back(Matrix<K>::identity(v.field(), v.dim(p)));
        return ModuleMap(v, v, c);
    }
    static ModuleMap zero(const GridModule<K>& s, const GridModule<K>& t) {
        std::vector<Matrix<K>> c;
        for (std::size_t p = 0; p < s.poset().count(); ++p) c.emplace_back(s.field(), t.dim(p), s.dim(p));
        return ModuleMap(s, t, c);
    }
};

template <Field K>
ModuleMap<K> compose(const ModuleMap<K>& g, const ModuleMap<K>& f) {
    std::vector<Matrix<K>> c;
    for (std::size_t p = 0; p < f.components.size(); ++p) c.push_back(g.components[p] * f.components[p]);
    return ModuleMap<K>(f.source, g.target, c);
}

template <Field K>
Submodule<K> apply_map_to_submodule(const ModuleMap<K>& f, const Submodule<K>& w) {
    Submodule<K> out;
    for (std::size_t p = 0; p < f.components.size(); ++p) out.components.push_back(push(f.components[p], w.components[p]));
    return out;
}

/// Pushforward of a submodule of u onto a refining grid.
template <Field K>
Submodule<K> pushforward_submodule(const GridMap& t, const GridModule<K>& u, const Submodule<K>& w) {
    Submodule<K> out;
    for (std::size_t v = 0; v < t.codomain.count(); ++v) {
        auto fl = detail::map_floor(t, v);
        out.components.push_back(fl ? w.components[*fl] : Subspace<K>::zero(u.field(), 0));
    }
    return out;
}

}  // namespace hnpers
