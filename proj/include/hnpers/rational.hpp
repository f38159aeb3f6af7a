#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hnpers/error.hpp"

namespace hnpers {

/// Exact rational numbers, always kept in canonical reduced form.
using Rational = mpq_class;
using Point = std::vector<Rational>;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p", "p/q" or "-p/q". Decimal points are rejected to keep inputs exact.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t start = s.find_first_not_of(" \t");
    if (start == std::string::npos) fail(ErrorKind::parse, "empty rational");
    s = s.substr(start);
    if (!s.empty() && s[0] == '+') s = s.substr(1);
    auto valid_int = [](std::string_view t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-')
        fail(ErrorKind::parse, "not a rational: '" + std::string(text) + "'");
    Rational r;
    r.get_num() = mpz_class(num);
    r.get_den() = mpz_class(den);
    if (r.get_den() == 0) fail(ErrorKind::parse, "zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline std::string to_string(const Point& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ",";
        out += p[i].get_str();
    }
    return out + ")";
}

inline mpz_class floor_div(const Rational& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline mpz_class ceil_div(const Rational& r) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Rational pow(const Rational& base, unsigned long e) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
    return r;
}

/// A rational extended by -inf and +inf, used for cube bounds.
class ExtRational {
public:
    enum class Kind : std::uint8_t { neg_inf, finite, pos_inf };

    ExtRational() : kind_(Kind::finite) {}
    ExtRational(Rational v) : kind_(Kind::finite), value_(std::move(v)) {}  // NOLINT: implicit by design of use sites
    static ExtRational neg_inf() { return ExtRational(Kind::neg_inf); }
    static ExtRational pos_inf() { return ExtRational(Kind::pos_inf); }

    bool finite() const { return kind_ == Kind::finite; }
    bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
    bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
    Kind kind() const { return kind_; }
    const Rational& value() const {
        if (!finite()) fail(ErrorKind::usage, "value() of an infinite bound");
        return value_;
    }

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.kind_ != b.kind_) return false;
        return !a.finite() || a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
        if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
        if (!a.finite()) return std::strong_ordering::equal;
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::string str() const {
        if (is_neg_inf()) return "-inf";
        if (is_pos_inf()) return "inf";
        return value_.get_str();
    }

private:
    explicit ExtRational(Kind k) : kind_(k) {}
    Kind kind_;
    Rational value_;
};

inline ExtRational parse_ext_rational(std::string_view text) {
    if (text == "inf" || text == "+inf") return ExtRational::pos_inf();
    if (text == "-inf") return ExtRational::neg_inf();
    return ExtRational(parse_rational(text));
}

}  // namespace hnpers
