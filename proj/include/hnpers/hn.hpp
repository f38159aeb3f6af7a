#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "hnpers/stability.hpp"

namespace hnpers {

struct EngineOptions {
    std::uint64_t node_budget = 5'000'000;
    std::uint64_t subspace_budget = 1u << 20;
    bool dinkelbach = false;
    bool flip_slope_sign = false;  // deliberate mutation for harness self-checks
};

template <Field K>
struct Destabilizer {
    Submodule<K> submodule;
    Rational slope;
};

template <Field K>
struct HNFiltration {
    std::vector<Submodule<K>> steps;  // V^1 ⊊ ... ⊊ V^l = parent
    std::vector<Rational> slopes;     // μ(V^j / V^{j-1})

    std::size_t length() const { return steps.size(); }
    friend bool operator==(const HNFiltration& a, const HNFiltration& b) {
        return a.steps == b.steps && a.slopes == b.slopes;
    }
};

struct HNTypeEntry {
    Rational slope;
    std::vector<std::size_t> dims;  // cumulative dimension vector of V^j
    friend bool operator==(const HNTypeEntry&, const HNTypeEntry&) = default;
};
using HNType = std::vector<HNTypeEntry>;

inline std::string to_string(const HNType& t) {
    std::string out = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        out += (i ? ", (" : "(") + t[i].slope.get_str() + ", (";
        for (std::size_t j = 0; j < t[i].dims.size(); ++j) out += (j ? "," : "") + std::to_string(t[i].dims[j]);
        out += "))";
    }
    return out + "]";
}

namespace detail {

template <Field K>
std::vector<Subspace<K>> components_with(const Submodule<K>& w, std::size_t p, Subspace<K> s) {
    auto c = w.components;
    c[p] = std::move(s);
    return c;
}

template <Field K>
Rational dim_dot(const std::vector<Rational>& weights, const Submodule<K>& w) {
    Rational s = 0;
    for (std::size_t p = 0; p < weights.size(); ++p)
        if (w.dim(p)) s += weights[p] * static_cast<unsigned long>(w.dim(p));
    return s;
}

/// Depth-first enumeration of the submodules generated on the given vertices.
/// Each generated submodule is visited once: at the k-th vertex the choice is a
/// subspace of V_p modulo the part already forced by earlier choices.
template <FiniteField K, class Visit, class Prune>
void enumerate_generated(const GridModule<K>& u, const std::vector<std::size_t>& support, const EngineOptions& opt,
                         std::uint64_t& nodes, Visit&& visit, Prune&& prune) {
    const K& f = u.field();
    std::function<void(std::size_t, const Submodule<K>&)> rec = [&](std::size_t k, const Submodule<K>& w) {
        if (++nodes > opt.node_budget)
            fail(ErrorKind::budget, "HN engine exceeded its node budget of " + std::to_string(opt.node_budget));
        if (k == support.size()) {
            visit(w);
            return;
        }
        if (prune(k, w)) return;
        std::size_t p = support[k];
        const Subspace<K>& forced = w.components[p];
        auto free = forced.free_columns();
        for_each_subspace<K>(f, free.size(), opt.subspace_budget, [&](const Subspace<K>& s) {
            if (s.is_zero()) {
                rec(k + 1, w);
                return;
            }
            std::vector<typename Matrix<K>::Vector> gens;
            for (std::size_t i = 0; i < s.dim(); ++i) {
                typename Matrix<K>::Vector v(u.dim(p), f.zero());
                auto b = s.basis_vector(i);
                for (std::size_t j = 0; j < free.size(); ++j) v[free[j]] = b[j];
                gens.push_back(std::move(v));
            }
            auto seed = subspace_sum(forced, Subspace<K>::span(f, u.dim(p), gens));
            rec(k + 1, sub_generated(u, components_with(w, p, std::move(seed))));
        });
    };
    rec(0, zero_submodule(u));
}

}  // namespace detail

/// The maximal submodule among those of maximal slope.
template <Field K>
Destabilizer<K> max_slope_destabilizer(const GridModule<K>& u, const DiscreteStability& ds,
                                       const EngineOptions& opt = {}) {
    if constexpr (!FiniteField<K>) {
        fail(ErrorKind::usage, "the HN engine enumerates subspaces and needs a finite field; reduce modulo a prime");
    } else {
        require(!u.is_zero(), "destabilizer of the zero module");
        require(ds.alpha.size() == u.poset().count(), "stability and module grids differ");
        if (!ds.nonnegative())
            fail(ErrorKind::usage, "the HN engine needs a nonnegative imaginary part; use the oracle for signed conditions");
        auto full = full_submodule(u);
        Rational a_total = ds.im(u.dims());
        if (a_total == 0 && !opt.flip_slope_sign) return {full, Rational(0)};

        std::vector<std::size_t> support;
        for (auto p : u.poset().linear_extension())
            if ((ds.alpha[p] > 0 || opt.flip_slope_sign) && u.dim(p) > 0) support.push_back(p);

        auto score = [&](const Rational& s) { return opt.flip_slope_sign ? Rational(-s) : s; };
        std::uint64_t nodes = 0;
        std::optional<Rational> best;
        std::optional<Submodule<K>> best_sum;

        auto consider = [&](const Submodule<K>& w) {
            if (w.is_zero()) return;
            Rational s = score(ds.slope(w.dims()));
            if (!best || s > *best) {
                best = s;
                best_sum = w;
            } else if (s == *best) {
                best_sum = sub_sum(*best_sum, w);
            }
        };
        auto no_prune = [](std::size_t, const Submodule<K>&) { return false; };

        if (opt.flip_slope_sign) {
            detail::enumerate_generated(u, support, opt, nodes, consider, no_prune);
            return {*best_sum, score(*best)};
        }

        if (opt.dinkelbach) {
            Rational lambda = ds.slope(u.dims());
            while (true) {
                std::optional<Rational> top;
                std::optional<Submodule<K>> arg;
                detail::enumerate_generated(
                    u, support, opt, nodes,
                    [&](const Submodule<K>& w) {
                        if (w.is_zero()) return;
                        Rational val = detail::dim_dot(ds.alpha, w) - lambda * detail::dim_dot(ds.beta, w);
                        if (!top || val > *top) {
                            top = val;
                            arg = w;
                        }
                    },
                    no_prune);
                if (*top <= 0) break;
                lambda = ds.slope(arg->dims());
            }
            best = lambda;
            best_sum = zero_submodule(u);
            detail::enumerate_generated(
                u, support, opt, nodes,
                [&](const Submodule<K>& w) {
                    if (!w.is_zero() && ds.slope(w.dims()) == lambda) best_sum = sub_sum(*best_sum, w);
                },
                no_prune);
            return {*best_sum, lambda};
        }

        auto prune = [&](std::size_t k, const Submodule<K>& w) {
            if (!best || w.is_zero()) return false;
            Rational a = detail::dim_dot(ds.alpha, w);
            for (std::size_t j = k; j < support.size(); ++j) {
                std::size_t p = support[j];
                a += ds.alpha[p] * static_cast<unsigned long>(u.dim(p) - w.dim(p));
            }
            return a / detail::dim_dot(ds.beta, w) < *best;
        };
        detail::enumerate_generated(u, support, opt, nodes, consider, prune);
        return {*best_sum, *best};
    }
}

template <Field K>
bool is_semistable(const GridModule<K>& u, const DiscreteStability& ds, const EngineOptions& opt = {}) {
    return max_slope_destabilizer(u, ds, opt).submodule == full_submodule(u);
}

namespace detail {

template <Field K>
void check_filtration(const GridModule<K>& u, const HNFiltration<K>& h) {
    for (std::size_t j = 1; j < h.slopes.size(); ++j)
        if (!(h.slopes[j - 1] > h.slopes[j]))
            fail(ErrorKind::invariant, "HN slopes are not strictly decreasing");
    for (std::size_t j = 0; j < h.steps.size(); ++j) {
        if (closure_violation(u, h.steps[j])) fail(ErrorKind::invariant, "HN step is not a submodule");
        if (j > 0 && (!h.steps[j].contains(h.steps[j - 1]) || h.steps[j] == h.steps[j - 1]))
            fail(ErrorKind::invariant, "HN steps are not a strict chain");
    }
    if (!h.steps.empty() && !(h.steps.back() == full_submodule(u)))
        fail(ErrorKind::invariant, "HN filtration does not end at the module");
}

}  // namespace detail

/// Recursive peeling: V^{j+1} is the preimage of the maximal destabilizer of u / V^j.
template <Field K>
HNFiltration<K> hn_filtration(const GridModule<K>& u, const DiscreteStability& ds, const EngineOptions& opt = {}) {
    HNFiltration<K> h;
    if (u.is_zero()) return h;
    auto full = full_submodule(u);
    Submodule<K> cur = zero_submodule(u);
    QuotientResult<K> q{u, {}};
    for (std::size_t p = 0; p < u.poset().count(); ++p) q.projections.push_back(Matrix<K>::identity(u.field(), u.dim(p)));
    while (!(cur == full)) {
        auto d = max_slope_destabilizer(q.module, ds, opt);
        cur = lift_submodule(q, d.submodule);
        h.steps.push_back(cur);
        h.slopes.push_back(d.slope);
        if (!(cur == full)) q = quotient(u, cur);
    }
    if (!opt.flip_slope_sign) detail::check_filtration(u, h);
    return h;
}

/// The step selected by θ: the last V^i with μ(V^i/V^{i-1}) ≥ θ.
template <Field K>
Submodule<K> hn_theta(const GridModule<K>& u, const HNFiltration<K>& h, const Rational& theta) {
    std::size_t k = 0;
    while (k < h.slopes.size() && h.slopes[k] >= theta) ++k;
    return k == 0 ? zero_submodule(u) : h.steps[k - 1];
}

template <Field K>
Submodule<K> hn_theta(const GridModule<K>& u, const DiscreteStability& ds, const Rational& theta,
                      const EngineOptions& opt = {}) {
    return hn_theta(u, hn_filtration(u, ds, opt), theta);
}

template <Field K>
HNType hn_type(const HNFiltration<K>& h) {
    HNType t;
    for (std::size_t j = 0; j < h.steps.size(); ++j) t.push_back({h.slopes[j], h.steps[j].dims()});
    return t;
}

template <Field K>
HNType hn_type(const GridModule<K>& u, const DiscreteStability& ds, const EngineOptions& opt = {}) {
    return hn_type(hn_filtration(u, ds, opt));
}

/// Every submodule of u, as closures of all tuples of vertex subspaces.
template <FiniteField K>
std::vector<Submodule<K>> all_submodules(const GridModule<K>& u, std::size_t dim_budget = 8) {
    if (u.total_dim() > dim_budget)
        fail(ErrorKind::budget, "oracle enumeration refused: total dimension " + std::to_string(u.total_dim()) +
                                    " exceeds " + std::to_string(dim_budget));
    const auto& P = u.poset();
    std::vector<std::vector<Subspace<K>>> choices(P.count());
    for (std::size_t p = 0; p < P.count(); ++p) choices[p] = enumerate_subspaces(u.field(), u.dim(p));
    std::vector<Submodule<K>> out;
    std::unordered_set<std::string> seen;
    std::vector<std::size_t> idx(P.count(), 0);
    while (true) {
        std::vector<Subspace<K>> seeds;
        for (std::size_t p = 0; p < P.count(); ++p) seeds.push_back(choices[p][idx[p]]);
        auto w = sub_generated(u, seeds);
        if (seen.insert(w.key()).second) out.push_back(std::move(w));
        std::size_t p = 0;
        while (p < P.count() && ++idx[p] == choices[p].size()) idx[p++] = 0;
        if (p == P.count()) break;
    }
    return out;
}

/// HN filtration from first principles over the full submodule lattice.
template <FiniteField K>
HNFiltration<K> oracle_hn_filtration(const GridModule<K>& u, const DiscreteStability& ds, std::size_t dim_budget = 8) {
    HNFiltration<K> h;
    if (u.is_zero()) return h;
    auto subs = all_submodules(u, dim_budget);
    auto full = full_submodule(u);
    Submodule<K> cur = zero_submodule(u);
    while (!(cur == full)) {
        Rational a0 = ds.im(cur.dims()), b0 = ds.re(cur.dims());
        std::optional<Rational> best;
        std::vector<const Submodule<K>*> argmax;
        for (const auto& w : subs) {
            if (!w.contains(cur) || w == cur) continue;
            Rational s = (ds.im(w.dims()) - a0) / (ds.re(w.dims()) - b0);
            if (!best || s > *best) {
                best = s;
                argmax = {&w};
            } else if (s == *best) {
                argmax.push_back(&w);
            }
        }
        const Submodule<K>* top = argmax.front();
        for (auto* w : argmax)
            if (w->total_dim() > top->total_dim()) top = w;
        for (auto* w : argmax)
            if (!top->contains(*w)) fail(ErrorKind::invariant, "oracle: maximizers have no maximum");
        cur = *top;
        h.steps.push_back(cur);
        h.slopes.push_back(*best);
    }
    detail::check_filtration(u, h);
    return h;
}

/// f(HN^θ source) ⊆ HN^θ target.
template <Field K>
bool check_functoriality(const ModuleMap<K>& f, const DiscreteStability& ds, const Rational& theta,
                         const EngineOptions& opt = {}) {
    auto src = f.source.is_zero() ? zero_submodule(f.source) : hn_theta(f.source, ds, theta, opt);
    auto tgt = f.target.is_zero() ? zero_submodule(f.target) : hn_theta(f.target, ds, theta, opt);
    return tgt.contains(apply_map_to_submodule(f, src));
}

}  // namespace hnpers
