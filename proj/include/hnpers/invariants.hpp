#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hnpers/hn.hpp"

namespace hnpers {

struct InvariantOptions {
    EngineOptions engine;
    bool oracle = false;               // brute-force HN, also admits signed step conditions
    std::size_t oracle_dim_budget = 12;
    std::vector<std::vector<Rational>> extra_coordinates;  // added to every adapted grid
};

/// HN data of the x-shifted module on its adapted grid.
template <Field K>
struct ShiftedHN {
    GridFunction grid;
    GridModule<K> module;
    DiscreteStability ds;
    HNFiltration<K> filtration;
    std::size_t origin = 0;
    std::vector<std::vector<int>> rank_cache;  // [step][vertex], -1 when unknown

    std::size_t step_index(const Rational& theta) const {
        std::size_t k = 0;
        while (k < filtration.slopes.size() && filtration.slopes[k] >= theta) ++k;
        return k;
    }
};

/// s^θ_{Z,V}(x, y) = rank(HN^θ_Z T_x^* V)_{0 ≤ y - x}, evaluated on finite adapted grids.
template <Field K>
class FilteredRankInvariant {
public:
    FilteredRankInvariant(GridModule<K> v, StabilityCondition z, InvariantOptions opt = {})
        : v_(std::move(v)), z_(std::move(z)), opt_(std::move(opt)) {
        require(v_.n() == z_.n, "module and condition dimensions differ");
        require_valid(z_, opt_.oracle);
        if (z_.has_negative_terms() && !opt_.oracle)
            fail(ErrorKind::usage, "signed conditions are only supported in oracle mode");
        if (!opt_.extra_coordinates.empty()) require(opt_.extra_coordinates.size() == v_.n(), "extra coordinates per axis");
    }

    const GridModule<K>& module() const { return v_; }
    const StabilityCondition& condition() const { return z_; }
    const InvariantOptions& options() const { return opt_; }

    /// Finite grid adapted to both T_x^* V and Z, containing the origin.
    GridFunction adapted_grid(const Point& x) const {
        const std::size_t n = v_.n();
        std::vector<std::vector<Rational>> axes(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& c : v_.grid().axis(i)) axes[i].push_back(c - x[i]);
            for (const auto& t : z_.alpha) {
                auto c = t.coordinates(i);
                axes[i].insert(axes[i].end(), c.begin(), c.end());
            }
            axes[i].push_back(Rational(0));
            if (!opt_.extra_coordinates.empty())
                axes[i].insert(axes[i].end(), opt_.extra_coordinates[i].begin(), opt_.extra_coordinates[i].end());
        }
        auto g = GridFunction::from_coordinates(axes);
        if (z_.mode == StabilityMode::step) {
            for (std::size_t i = 0; i < n; ++i) {
                axes[i].push_back(g.axis(i).back() + 1);
                auto bp = z_.beta.breakpoints(i, g.axis(i).front(), g.axis(i).back() + 1);
                axes[i].insert(axes[i].end(), bp.begin(), bp.end());
            }
            g = GridFunction::from_coordinates(axes);
        }
        return g;
    }

    std::shared_ptr<ShiftedHN<K>> shifted(const Point& x) const {
        require(x.size() == v_.n(), "query point has the wrong dimension");
        GridFunction g = adapted_grid(x);
        GridFunction sg = shift_grid(v_.grid(), x);
        GridMap t = embedding(sg, g);
        DiscreteStability ds = pullback_Z(z_, g);
        std::string key = ds.key() + "#";
        for (const auto& m : t.index_maps) {
            for (auto j : m) key += std::to_string(j) + ",";
            key += ";";
        }
        {
            std::lock_guard<std::mutex> lock(*mutex_);
            auto it = memo_->find(key);
            if (it != memo_->end()) return it->second;
        }
        auto out = std::make_shared<ShiftedHN<K>>();
        out->grid = g;
        out->module = pushforward(t, shift_module(v_, x), g);
        out->ds = std::move(ds);
        out->filtration = compute_filtration(out->module, out->ds);
        out->origin = *g.floor_index(Point(v_.n(), Rational(0)));
        out->rank_cache.assign(out->filtration.length() + 1, std::vector<int>(g.poset().count(), -1));
        std::lock_guard<std::mutex> lock(*mutex_);
        return memo_->emplace(key, out).first->second;
    }

    RankValue s_eval(const Rational& theta, const Point& x, const Point& y) const {
        if (!leq(x, y)) return std::nullopt;
        auto sh = shifted(x);
        Point d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) d[i] = y[i] - x[i];
        std::size_t target = *sh->grid.floor_index(d);
        return rank_at(*sh, sh->step_index(theta), target);
    }

    /// HN slopes of the discretised shifted module, strictly decreasing.
    std::vector<Rational> theta_profile(const Point& x) const { return shifted(x)->filtration.slopes; }

    HNType hn_type_at(const Point& x) const { return hn_type(shifted(x)->filtration); }

    std::size_t memo_size() const {
        std::lock_guard<std::mutex> lock(*mutex_);
        return memo_->size();
    }

    static std::size_t rank_at(ShiftedHN<K>& sh, std::size_t step, std::size_t target) {
        if (step == 0) return 0;
        int& cached = sh.rank_cache[step][target];
        if (cached < 0) {
            const auto& w = sh.filtration.steps[step - 1];
            cached = static_cast<int>(push(sh.module.map(sh.origin, target), w.components[sh.origin]).dim());
        }
        return static_cast<std::size_t>(cached);
    }

private:
    HNFiltration<K> compute_filtration(const GridModule<K>& u, const DiscreteStability& ds) const {
        if constexpr (FiniteField<K>) {
            if (opt_.oracle) return oracle_hn_filtration(u, ds, opt_.oracle_dim_budget);
        }
        return hn_filtration(u, ds, opt_.engine);
    }

    GridModule<K> v_;
    StabilityCondition z_;
    InvariantOptions opt_;
    std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
    std::shared_ptr<std::map<std::string, std::shared_ptr<ShiftedHN<K>>>> memo_ =
        std::make_shared<std::map<std::string, std::shared_ptr<ShiftedHN<K>>>>();
};

/// HN type of v under the skyscraper condition at each sample point.
template <Field K>
std::vector<HNType> skyscraper_invariant(const GridModule<K>& v, const BetaSpec& beta, std::vector<Point> samples = {},
                                         const EngineOptions& opt = {}) {
    if (samples.empty())
        for (std::size_t p = 0; p < v.poset().count(); ++p) samples.push_back(v.grid().value(p));
    std::vector<HNType> out;
    for (const auto& q : samples) {
        if (v.is_zero()) {
            out.emplace_back();
            continue;
        }
        std::vector<std::vector<Rational>> extra;
        for (const auto& c : q) extra.push_back({c});
        GridFunction g = add_coordinates(v.grid(), extra);
        auto u = pushforward(v, g);
        out.push_back(hn_type(u, pullback_Z(skyscraper_condition(q, beta), g), opt));
    }
    return out;
}

/// sup{ε ≥ 0 : s^θ(x - ε, x + ε) ≥ k}, by exact bisection to within tol.
template <Field K>
Rational landscape_eval(const FilteredRankInvariant<K>& inv, std::size_t k, const Point& x, const Rational& theta,
                        const Rational& tol) {
    require(tol > 0, "landscape tolerance must be positive");
    require(k >= 1, "landscape index starts at 1");
    auto value = [&](const Rational& eps) {
        Point lo = x, hi = x;
        for (std::size_t i = 0; i < x.size(); ++i) {
            lo[i] -= eps;
            hi[i] += eps;
        }
        return *inv.s_eval(theta, lo, hi);
    };
    if (value(Rational(0)) < k) return 0;
    const auto& g = inv.module().grid();
    Rational hi = x[0] - g.axis(0).front();
    for (std::size_t i = 1; i < x.size(); ++i) hi = std::min(hi, Rational(x[i] - g.axis(i).front()));
    if (value(hi) >= k) return hi;
    Rational lo = 0;
    while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        if (value(mid) >= k)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace hnpers
