#pragma once

#include <concepts>
#include <cstdint>
#include <string>

#include "hnpers/rational.hpp"

namespace hnpers {

/// The prime field F_p with p < 2^31. Elements are residues in [0, p).
struct PrimeField {
    using value_type = std::uint32_t;
    static constexpr bool is_finite = true;

    std::uint32_t p = 2;

    value_type zero() const { return 0; }
    value_type one() const { return 1 % p; }
    value_type add(value_type a, value_type b) const {
        std::uint64_t s = std::uint64_t(a) + b;
        return static_cast<value_type>(s >= p ? s - p : s);
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p - b; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type mul(value_type a, value_type b) const {
        return static_cast<value_type>((std::uint64_t(a) * b) % p);
    }
    value_type inv(value_type a) const {
        if (a == 0) fail(ErrorKind::usage, "division by zero in F_" + std::to_string(p));
        // Fermat: a^(p-2)
        std::uint64_t result = 1, base = a, e = p - 2;
        while (e) {
            if (e & 1) result = result * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return static_cast<value_type>(result);
    }
    bool is_zero(value_type a) const { return a == 0; }
    value_type from_rational(const Rational& r) const {
        mpz_class num = r.get_num() % p;
        if (num < 0) num += p;
        mpz_class den = r.get_den() % p;
        if (den == 0)
            fail(ErrorKind::validation, "coefficient " + r.get_str() +
                                            " has a denominator divisible by " + std::to_string(p));
        return mul(static_cast<value_type>(num.get_ui()), inv(static_cast<value_type>(den.get_ui())));
    }
    std::string str(value_type a) const { return std::to_string(a); }
    std::string name() const { return "F_" + std::to_string(p); }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;
};

/// The rationals.
struct RationalField {
    using value_type = Rational;
    static constexpr bool is_finite = false;

    value_type zero() const { return Rational(0); }
    value_type one() const { return Rational(1); }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const {
        if (a == 0) fail(ErrorKind::usage, "division by zero in Q");
        return 1 / a;
    }
    bool is_zero(const value_type& a) const { return a == 0; }
    value_type from_rational(const Rational& r) const { return r; }
    std::string str(const value_type& a) const { return a.get_str(); }
    std::string name() const { return "Q"; }

    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

template <class K>
concept Field = requires(const K k, const typename K::value_type a) {
    { k.zero() } -> std::convertible_to<typename K::value_type>;
    { k.one() } -> std::convertible_to<typename K::value_type>;
    { k.add(a, a) } -> std::convertible_to<typename K::value_type>;
    { k.mul(a, a) } -> std::convertible_to<typename K::value_type>;
    { k.inv(a) } -> std::convertible_to<typename K::value_type>;
    { k.is_zero(a) } -> std::convertible_to<bool>;
    { k.from_rational(Rational{}) } -> std::convertible_to<typename K::value_type>;
    { K::is_finite } -> std::convertible_to<bool>;
};

template <class K>
concept FiniteField = Field<K> && K::is_finite;

}  // namespace hnpers
