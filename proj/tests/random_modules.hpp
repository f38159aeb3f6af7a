#pragma once

#include <random>

#include "hnpers/hn.hpp"

namespace testutil {

/// Random presentation with integer coordinates in [0, side) and coefficients in {0,1}.
inline hnpers::Presentation random_presentation(std::mt19937& rng, std::size_t n, int side, int gens, int rels) {
    using hnpers::Rational;
    hnpers::Presentation p;
    p.n = n;
    for (int j = 0; j < gens; ++j) {
        hnpers::Point g;
        for (std::size_t i = 0; i < n; ++i) g.push_back(Rational(static_cast<long>(rng() % side)));
        p.generators.push_back(g);
    }
    for (int r = 0; r < rels; ++r) {
        hnpers::Point q;
        for (std::size_t i = 0; i < n; ++i) q.push_back(Rational(static_cast<long>(rng() % side)));
        std::vector<Rational> c;
        for (int j = 0; j < gens; ++j) c.push_back(hnpers::leq(p.generators[j], q) ? Rational(long(rng() % 2)) : Rational(0));
        p.relations.push_back({q, c});
    }
    return p;
}

inline hnpers::DiscreteStability random_discrete(std::mt19937& rng, const hnpers::GridPoset& P, int amax = 3) {
    hnpers::DiscreteStability ds{P, {}, {}};
    for (std::size_t v = 0; v < P.count(); ++v) {
        ds.alpha.push_back(hnpers::Rational(long(rng() % (amax + 1))));
        ds.beta.push_back(hnpers::make_rational(1 + long(rng() % 4), 1 + long(rng() % 3)));
    }
    return ds;
}

}  // namespace testutil
