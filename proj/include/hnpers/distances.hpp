#pragma once

#include <algorithm>
#include <atomic>
#include <climits>
#include <exception>
#include <memory>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "hnpers/invariants.hpp"

namespace hnpers {

/// Regular sampling lattice lo + k*h, k_i in [0, counts_i).
struct Lattice {
    Point lo;
    Rational h;
    GridPoset poset;

    Lattice() = default;
    Lattice(Point lo_, const Point& hi, Rational h_) : lo(std::move(lo_)), h(std::move(h_)) {
        require(h > 0, "resolution must be positive");
        require(lo.size() == hi.size() && !lo.empty(), "window corners must have equal positive dimension");
        std::vector<std::size_t> counts;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            require(lo[i] <= hi[i], "window must satisfy lo <= hi");
            counts.push_back(static_cast<std::size_t>(floor_div((hi[i] - lo[i]) / h).get_ui()) + 1);
        }
        poset = GridPoset(counts);
    }

    std::size_t n() const { return lo.size(); }
    std::size_t count() const { return poset.count(); }
    Point point(std::size_t idx) const {
        auto c = poset.coord(idx);
        Point p(n());
        for (std::size_t i = 0; i < n(); ++i) p[i] = lo[i] + h * Rational(static_cast<long>(c[i]));
        return p;
    }
    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.lo == b.lo && a.h == b.h && a.poset.sizes() == b.poset.sizes();
    }
};

/// Integer-valued functor on lattice pairs; pairs with a not below b hold kInf.
struct SampledFunctor {
    static constexpr int kInf = INT_MAX;
    Lattice lattice;
    std::vector<int> values;  // [a * count + b]

    int operator()(std::size_t a, std::size_t b) const { return values[a * lattice.count() + b]; }
};

namespace detail {

template <typename F>
void parallel_for(std::size_t count, F&& body) {
    std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            try {
                for (std::size_t i = next++; i < count; i = next++) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Filtered rank invariant sampled on a lattice, reusable across thresholds.
template <Field K>
class SampledHN {
public:
    SampledHN(const FilteredRankInvariant<K>& inv, Lattice lattice) : lattice_(std::move(lattice)) {
        require(lattice_.n() == inv.module().n(), "lattice and module dimensions differ");
        const std::size_t P = lattice_.count();
        shifted_.resize(P);
        detail::parallel_for(P, [&](std::size_t a) { shifted_[a] = inv.shifted(lattice_.point(a)); });
        target_.assign(P * P, -1);
        for (std::size_t a = 0; a < P; ++a) {
            Point pa = lattice_.point(a);
            for (std::size_t b = 0; b < P; ++b) {
                if (!lattice_.poset.leq(a, b)) continue;
                Point d = lattice_.point(b);
                for (std::size_t i = 0; i < d.size(); ++i) d[i] -= pa[i];
                target_[a * P + b] = static_cast<int>(*shifted_[a]->grid.floor_index(d));
            }
        }
    }

    const Lattice& lattice() const { return lattice_; }

    /// Distinct HN slopes over all lattice points, increasing.
    std::vector<Rational> slopes() const {
        std::set<Rational> s;
        for (const auto& sh : shifted_) s.insert(sh->filtration.slopes.begin(), sh->filtration.slopes.end());
        return {s.begin(), s.end()};
    }

    std::vector<std::size_t> signature(const Rational& theta) const {
        std::vector<std::size_t> out;
        for (const auto& sh : shifted_) out.push_back(sh->step_index(theta));
        return out;
    }

    SampledFunctor at(const Rational& theta) const {
        const std::size_t P = lattice_.count();
        SampledFunctor f{lattice_, std::vector<int>(P * P, SampledFunctor::kInf)};
        for (std::size_t a = 0; a < P; ++a) {
            auto& sh = *shifted_[a];
            std::size_t step = sh.step_index(theta);
            for (std::size_t b = 0; b < P; ++b) {
                int t = target_[a * P + b];
                if (t >= 0)
                    f.values[a * P + b] =
                        static_cast<int>(FilteredRankInvariant<K>::rank_at(sh, step, static_cast<std::size_t>(t)));
            }
        }
        return f;
    }

private:
    Lattice lattice_;
    std::vector<std::shared_ptr<ShiftedHN<K>>> shifted_;
    std::vector<int> target_;
};

template <Field K>
SampledFunctor sample_s(const FilteredRankInvariant<K>& inv, const Rational& theta, const Lattice& lattice) {
    return SampledHN<K>(inv, lattice).at(theta);
}

template <Field K>
SampledFunctor sample_rho(const GridModule<K>& v, const Lattice& lattice) {
    const std::size_t P = lattice.count();
    require(lattice.n() == v.n(), "lattice and module dimensions differ");
    std::vector<std::optional<std::size_t>> fl(P);
    for (std::size_t a = 0; a < P; ++a) fl[a] = v.grid().floor_index(lattice.point(a));
    std::map<std::pair<std::size_t, std::size_t>, int> cache;
    SampledFunctor f{lattice, std::vector<int>(P * P, SampledFunctor::kInf)};
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = 0; b < P; ++b) {
            if (!lattice.poset.leq(a, b)) continue;
            int r = 0;
            if (fl[a] && fl[b]) {
                auto key = std::make_pair(*fl[a], *fl[b]);
                auto it = cache.find(key);
                if (it == cache.end())
                    it = cache.emplace(key, static_cast<int>(rank(v.map(*fl[a], *fl[b])))).first;
                r = it->second;
            }
            f.values[a * P + b] = r;
        }
    return f;
}

/// Whether F(a - m, b + m) <= G(a, b) and symmetrically, at every lattice pair a <= b
/// whose inflated box stays inside the lattice.
inline bool erodes(const SampledFunctor& F, const SampledFunctor& G, std::size_t m) {
    const auto& lat = F.lattice;
    const auto& P = lat.poset;
    const std::size_t N = lat.count(), n = lat.n();
    const auto sizes = P.sizes();
    std::size_t diag = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (2 * m >= sizes[i]) return true;
        diag += m * P.stride(i);
    }
    std::vector<char> low(N, 1), high(N, 1);
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t c = P.axis_coord(x, i);
            if (c < m) low[x] = 0;
            if (c + m >= sizes[i]) high[x] = 0;
        }
    for (std::size_t a = 0; a < N; ++a) {
        if (!low[a]) continue;
        for (std::size_t b = a; b < N; ++b) {
            int fab = F(a, b);
            if (fab == SampledFunctor::kInf || !high[b]) continue;
            std::size_t a2 = a - diag, b2 = b + diag;
            if (F(a2, b2) > G(a, b) || G(a2, b2) > fab) return false;
        }
    }
    return true;
}

/// Least multiple of the resolution admitting an erosion on the lattice.
inline Rational erosion_distance(const SampledFunctor& F, const SampledFunctor& G) {
    if (!(F.lattice == G.lattice)) fail(ErrorKind::usage, "erosion needs functors sampled on the same lattice");
    std::size_t m = 0;
    while (!erodes(F, G, m)) ++m;
    return F.lattice.h * Rational(static_cast<long>(m));
}

struct HNDistance {
    Rational distance;
    Rational theta;  // a threshold realising the maximum
    std::size_t thresholds = 0;
};

/// Thresholds realising every distinct pair of sampled s^θ: the HN slopes at all
/// lattice points, midpoints between them and one value below theta_min.
template <Field K>
std::vector<Rational> hn_thresholds(const SampledHN<K>& sv, const SampledHN<K>& sw, const StabilityCondition& z) {
    std::set<Rational> cand;
    for (const auto* s : {&sv, &sw})
        for (const auto& t : s->slopes()) cand.insert(t);
    std::vector<Rational> sorted(cand.begin(), cand.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) cand.insert((sorted[i] + sorted[i + 1]) / 2);
    cand.insert(theta_min(z) - 1);
    if (!sorted.empty()) cand.insert(sorted.front() - 1);

    std::vector<Rational> out;
    std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen;
    for (const auto& theta : cand)
        if (seen.insert({sv.signature(theta), sw.signature(theta)}).second) out.push_back(theta);
    return out;
}

/// max over θ of the sampled erosion between s^θ_V and s^θ_W.
template <Field K>
HNDistance hn_distance(const SampledHN<K>& sv, const SampledHN<K>& sw, const StabilityCondition& z) {
    auto thetas = hn_thresholds(sv, sw, z);
    HNDistance out{Rational(0), thetas.front(), thetas.size()};
    for (const auto& theta : thetas) {
        Rational d = erosion_distance(sv.at(theta), sw.at(theta));
        if (d > out.distance) {
            out.distance = d;
            out.theta = theta;
        }
    }
    return out;
}

template <Field K>
HNDistance hn_distance(const GridModule<K>& v, const GridModule<K>& w, const StabilityCondition& z,
                       const Lattice& lattice, const InvariantOptions& opt = {}) {
    FilteredRankInvariant<K> iv(v, z, opt), iw(w, z, opt);
    return hn_distance(SampledHN<K>(iv, lattice), SampledHN<K>(iw, lattice), z);
}

/// λ(k, x) / h on the lattice: the largest m with x ± m inside and F(x - m, x + m) >= k.
inline std::vector<std::vector<std::size_t>> lattice_landscape(const SampledFunctor& F, std::size_t kmax) {
    const auto& P = F.lattice.poset;
    const auto sizes = P.sizes();
    std::size_t diag = 0;
    for (std::size_t i = 0; i < P.n(); ++i) diag += P.stride(i);
    std::vector<std::vector<std::size_t>> out(kmax, std::vector<std::size_t>(P.count(), 0));
    for (std::size_t x = 0; x < P.count(); ++x) {
        auto c = P.coord(x);
        std::size_t reach = SIZE_MAX;
        for (std::size_t i = 0; i < P.n(); ++i) reach = std::min({reach, c[i], sizes[i] - 1 - c[i]});
        for (std::size_t k = 1; k <= kmax; ++k) {
            std::size_t m = 0;
            while (m < reach && F(x - (m + 1) * diag, x + (m + 1) * diag) >= static_cast<int>(k)) ++m;
            out[k - 1][x] = F(x, x) >= static_cast<int>(k) ? m : 0;
        }
    }
    return out;
}

/// sup over k <= kmax and lattice x of |λ_F(k,x) - λ_G(k,x)|.
inline Rational landscape_distance(const SampledFunctor& F, const SampledFunctor& G, std::size_t kmax) {
    if (!(F.lattice == G.lattice)) fail(ErrorKind::usage, "landscapes need functors sampled on the same lattice");
    auto a = lattice_landscape(F, kmax), b = lattice_landscape(G, kmax);
    std::size_t best = 0;
    for (std::size_t k = 0; k < kmax; ++k)
        for (std::size_t x = 0; x < a[k].size(); ++x)
            best = std::max(best, a[k][x] > b[k][x] ? a[k][x] - b[k][x] : b[k][x] - a[k][x]);
    return F.lattice.h * Rational(static_cast<long>(best));
}

/// Largest value of a sampled functor on ordered pairs, the natural k range for landscapes.
inline std::size_t max_value(const SampledFunctor& F) {
    int best = 0;
    for (int v : F.values)
        if (v != SampledFunctor::kInf) best = std::max(best, v);
    return static_cast<std::size_t>(best);
}

/// f: V -> T_ε* W and g: W -> T_ε* V, both given over a common grid.
template <Field K>
struct InterleavingCertificate {
    Rational eps;
    GridFunction grid;
    std::vector<Matrix<K>> f;
    std::vector<Matrix<K>> g;
};

inline GridFunction interleaving_grid(const GridFunction& gv, const GridFunction& gw, const Rational& eps) {
    std::vector<std::vector<Rational>> axes(gv.n());
    for (std::size_t i = 0; i < gv.n(); ++i)
        for (const auto* g : {&gv, &gw})
            for (const auto& c : g->axis(i)) {
                axes[i].push_back(c);
                axes[i].push_back(c - eps);
            }
    return GridFunction::from_coordinates(axes);
}

/// First failure of the interleaving conditions, or nullopt.
template <Field K>
std::optional<std::string> interleaving_violation(const InterleavingCertificate<K>& cert, const GridModule<K>& v,
                                                  const GridModule<K>& w) {
    const std::size_t n = v.n();
    if (w.n() != n || cert.grid.n() != n) return "dimension mismatch";
    if (cert.eps < 0) return "negative shift";
    const GridFunction& H = cert.grid;
    if (!refines(H, interleaving_grid(v.grid(), w.grid(), cert.eps))) return "certificate grid is too coarse";
    Point shift(n, cert.eps);

    auto VH = pushforward(v, H), WH = pushforward(w, H);
    auto TVH = pushforward(shift_module(v, shift), H), TWH = pushforward(shift_module(w, shift), H);
    ModuleMap<K> f, g;
    f.source = VH, f.target = TWH, f.components = cert.f;
    g.source = WH, g.target = TVH, g.components = cert.g;
    if (auto bad = f.naturality_violation()) return "f: " + *bad;
    if (auto bad = g.naturality_violation()) return "g: " + *bad;

    std::vector<std::vector<Rational>> axes(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& c : H.axis(i))
            for (int k = 0; k <= 2; ++k) axes[i].push_back(c - cert.eps * Rational(k));
    GridFunction Q = GridFunction::from_coordinates(axes);

    auto plus = [&](Point q, int k) {
        for (auto& c : q) c += cert.eps * Rational(k);
        return q;
    };
    // A -> T_ε B -> T_2ε A must equal the structure map of A.
    auto check = [&](const GridModule<K>& A, const GridModule<K>& B, const std::vector<Matrix<K>>& fa,
                     const std::vector<Matrix<K>>& gb, const char* name) -> std::optional<std::string> {
        for (std::size_t idx = 0; idx < Q.poset().count(); ++idx) {
            Point q = Q.value(idx);
            auto a0 = A.grid().floor_index(q);
            if (!a0) continue;
            auto a2 = A.grid().floor_index(plus(q, 2));
            auto h1 = *H.floor_index(q);
            auto h2 = *H.floor_index(plus(q, 1));
            auto b_from = B.grid().floor_index(plus(H.value(h1), 1));
            auto b_to = B.grid().floor_index(plus(q, 1));
            Matrix<K> expected = A.map(*a0, *a2);
            Matrix<K> got(A.field(), expected.rows(), expected.cols());
            if (b_from && b_to) got = gb[h2] * (B.map(*b_from, *b_to) * fa[h1]);
            if (!(got == expected))
                return std::string(name) + " composite differs from the 2ε shift at " + Q.cube_of(Q.poset().coord(idx)).str();
        }
        return std::nullopt;
    };
    if (auto bad = check(v, w, cert.f, cert.g, "gf")) return bad;
    return check(w, v, cert.g, cert.f, "fg");
}

template <Field K>
bool verify_interleaving(const InterleavingCertificate<K>& cert, const GridModule<K>& v, const GridModule<K>& w) {
    return !interleaving_violation(cert, v, w);
}

/// Certificate sending generator j of one presentation to generator j of the other.
template <Field K>
InterleavingCertificate<K> shift_certificate(const PresentedModule<K>& pv, const PresentedModule<K>& pw,
                                             const Rational& eps) {
    require(pv.presentation.generators.size() == pw.presentation.generators.size(),
            "shift maps need matching generator counts");
    InterleavingCertificate<K> cert{eps, interleaving_grid(pv.module.grid(), pw.module.grid(), eps), {}, {}};
    const auto& H = cert.grid;
    auto component = [&](const PresentedModule<K>& from, const PresentedModule<K>& to, std::size_t h) {
        Point q = H.value(h);
        auto s = from.module.grid().floor_index(q);
        for (auto& c : q) c += eps;
        auto t = to.module.grid().floor_index(q);
        std::size_t rows = t ? to.module.dim(*t) : 0, cols = s ? from.module.dim(*s) : 0;
        Matrix<K> m(from.module.field(), rows, cols);
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& vd = from.vertices[*s];
            std::size_t j = vd.active[vd.free[c]];
            if (!t) fail(ErrorKind::invariant, "generator " + std::to_string(j) + " has no image after the shift");
            auto col = to.generator_vector(j, *t);
            for (std::size_t r = 0; r < rows; ++r) m(r, c) = col[r];
        }
        return m;
    };
    for (std::size_t h = 0; h < H.poset().count(); ++h) {
        cert.f.push_back(component(pv, pw, h));
        cert.g.push_back(component(pw, pv, h));
    }
    return cert;
}

/// Moves every generator and relation by a multiple of ε/4 of sup-norm at most ε.
/// Relations are raised to stay above the generators they involve.
inline Presentation perturb_presentation(const Presentation& p, const Rational& eps, std::uint64_t seed) {
    require(eps >= 0, "perturbation size must be nonnegative");
    p.validate();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> step(-4, 4);
    Rational quarter = eps / 4;
    Presentation out = p;
    for (auto& g : out.generators)
        for (auto& c : g) c += quarter * Rational(step(rng));
    for (std::size_t r = 0; r < out.relations.size(); ++r) {
        auto& rel = out.relations[r];
        for (auto& c : rel.point) c += quarter * Rational(step(rng));
        for (std::size_t j = 0; j < rel.coeffs.size(); ++j)
            if (rel.coeffs[j] != 0)
                for (std::size_t i = 0; i < p.n; ++i) rel.point[i] = std::max(rel.point[i], out.generators[j][i]);
    }
    return out;
}

template <Field K>
struct Perturbation {
    Presentation presentation;
    GridModule<K> original;
    GridModule<K> moved;
    InterleavingCertificate<K> certificate;
};

template <Field K>
Perturbation<K> perturb(const Presentation& p, const Rational& eps, std::uint64_t seed, K field) {
    Presentation moved = perturb_presentation(p, eps, seed);
    auto pv = present(p, field), pw = present(moved, field);
    return {moved, pv.module, pw.module, shift_certificate(pv, pw, eps)};
}

}  // namespace hnpers
