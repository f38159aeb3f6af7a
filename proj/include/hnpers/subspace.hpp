#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hnpers/matrix.hpp"

namespace hnpers {

/// A linear subspace of K^ambient, stored as the reduced row echelon form of a
/// basis. Equality of subspaces is equality of the stored bases.
template <Field K>
class Subspace {
public:
    using value_type = typename K::value_type;
    using Vector = std::vector<value_type>;

    Subspace() = default;

    static Subspace zero(K field, std::size_t ambient) {
        Subspace s;
        s.basis_ = Matrix<K>(field, 0, ambient);
        return s;
    }
    static Subspace full(K field, std::size_t ambient) {
        Subspace s;
        s.basis_ = Matrix<K>::identity(field, ambient);
        for (std::size_t i = 0; i < ambient; ++i) s.pivots_.push_back(i);
        return s;
    }
    static Subspace span(Matrix<K> generators) {
        Subspace s;
        s.pivots_ = generators.rref();
        s.basis_ = std::move(generators);
        return s;
    }
    static Subspace span(K field, std::size_t ambient, const std::vector<Vector>& vectors) {
        return span(Matrix<K>::from_rows(field, ambient, vectors));
    }

    const K& field() const { return basis_.field(); }
    std::size_t ambient() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient(); }
    const Matrix<K>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    Vector basis_vector(std::size_t i) const { return basis_.row(i); }

    /// Columns that are not pivots; the standard vectors on these columns
    /// project onto a basis of K^ambient / this.
    std::vector<std::size_t> free_columns() const {
        std::vector<std::size_t> out;
        std::size_t k = 0;
        for (std::size_t c = 0; c < ambient(); ++c) {
            if (k < pivots_.size() && pivots_[k] == c) {
                ++k;
                continue;
            }
            out.push_back(c);
        }
        return out;
    }

    /// Reduces v modulo this subspace; the result is zero on pivot columns.
    Vector reduce(Vector v) const {
        const K& f = field();
        for (std::size_t i = 0; i < pivots_.size(); ++i) {
            value_type c = v[pivots_[i]];
            if (f.is_zero(c)) continue;
            for (std::size_t j = 0; j < ambient(); ++j)
                v[j] = f.sub(v[j], f.mul(c, basis_(i, j)));
        }
        return v;
    }

    bool contains(const Vector& v) const {
        require(v.size() == ambient(), "vector/subspace dimension mismatch");
        for (const auto& x : reduce(v))
            if (!field().is_zero(x)) return false;
        return true;
    }

    bool contains(const Subspace& other) const {
        require(other.ambient() == ambient(), "subspace dimension mismatch");
        for (std::size_t i = 0; i < other.dim(); ++i)
            if (!contains(other.basis_vector(i))) return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

    std::string str() const { return basis_.str(); }

private:
    Matrix<K> basis_;
    std::vector<std::size_t> pivots_;
};

template <Field K>
Subspace<K> kernel_basis(const Matrix<K>& m) {
    const K& f = m.field();
    Matrix<K> r = m;
    auto pivots = r.rref();
    std::vector<typename Subspace<K>::Vector> vectors;
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        typename Subspace<K>::Vector v(m.cols(), f.zero());
        v[c] = f.one();
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(r(i, c));
        vectors.push_back(std::move(v));
    }
    return Subspace<K>::span(f, m.cols(), vectors);
}

template <Field K>
Subspace<K> image_basis(const Matrix<K>& m) {
    return Subspace<K>::span(m.transpose());
}

template <Field K>
Subspace<K> subspace_sum(const Subspace<K>& a, const Subspace<K>& b) {
    require(a.ambient() == b.ambient(), "subspace_sum: ambient dimension mismatch");
    if (b.is_zero() || a.is_full()) return a;
    if (a.is_zero() || b.is_full()) return b;
    Matrix<K> stacked(a.field(), a.dim() + b.dim(), a.ambient());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.ambient(); ++j) stacked(i, j) = a.basis()(i, j);
    for (std::size_t i = 0; i < b.dim(); ++i)
        for (std::size_t j = 0; j < a.ambient(); ++j) stacked(a.dim() + i, j) = b.basis()(i, j);
    return Subspace<K>::span(std::move(stacked));
}

/// Annihilator with respect to the standard bilinear form.
template <Field K>
Subspace<K> annihilator(const Subspace<K>& s) {
    return kernel_basis(s.basis());
}

template <Field K>
Subspace<K> subspace_intersect(const Subspace<K>& a, const Subspace<K>& b) {
    require(a.ambient() == b.ambient(), "subspace_intersect: ambient dimension mismatch");
    if (a.is_zero() || b.is_full()) return a;
    if (b.is_zero() || a.is_full()) return b;
    return annihilator(subspace_sum(annihilator(a), annihilator(b)));
}

/// {v : m v in s}
template <Field K>
Subspace<K> preimage(const Matrix<K>& m, const Subspace<K>& s) {
    require(m.rows() == s.ambient(), "preimage: codomain dimension mismatch");
    if (s.is_full()) return Subspace<K>::full(m.field(), m.cols());
    Subspace<K> ann = annihilator(s);
    return kernel_basis(ann.basis() * m);
}

/// m(s)
template <Field K>
Subspace<K> push(const Matrix<K>& m, const Subspace<K>& s) {
    require(m.cols() == s.ambient(), "push: domain dimension mismatch");
    if (s.is_zero()) return Subspace<K>::zero(m.field(), m.rows());
    // rows of (m * basis^T)^T = basis * m^T
    return Subspace<K>::span(s.basis() * m.transpose());
}

/// Number of subspaces of F_q^n (sum of Gaussian binomials), saturating at UINT64_MAX.
inline std::uint64_t subspace_count(std::uint64_t q, std::size_t n) {
    // G(n,k) via the recurrence G(n,k) = G(n-1,k-1) + q^k G(n-1,k).
    std::vector<long double> row{1.0L};
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<long double> next(m + 1, 0.0L);
        long double qk = 1.0L;
        for (std::size_t k = 0; k <= m; ++k) {
            long double a = k >= 1 ? row[k - 1] : 0.0L;
            long double b = k < row.size() ? row[k] : 0.0L;
            next[k] = a + qk * b;
            qk *= static_cast<long double>(q);
        }
        row = std::move(next);
    }
    long double total = 0;
    for (auto v : row) total += v;
    return total >= 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(total + 0.5L);
}

/// Visits every subspace of F_p^ambient exactly once, in RREF enumeration order.
/// Refuses (budget error) when the subspace count exceeds `budget`.
template <FiniteField K>
void for_each_subspace(K field, std::size_t ambient, std::uint64_t budget,
                       const std::function<void(const Subspace<K>&)>& visit) {
    std::uint64_t total = subspace_count(field.p, ambient);
    if (total > budget)
        fail(ErrorKind::budget, "enumerating " + std::to_string(total) + " subspaces of " + field.name() +
                                    "^" + std::to_string(ambient) + " exceeds the budget of " +
                                    std::to_string(budget));
    using V = typename K::value_type;
    for (std::size_t k = 0; k <= ambient; ++k) {
        // choose pivot columns c_0 < ... < c_{k-1}
        std::vector<std::size_t> piv(k);
        for (std::size_t i = 0; i < k; ++i) piv[i] = i;
        while (true) {
            // free positions: (row i, col j) with j > piv[i] and j not a pivot
            std::vector<std::pair<std::size_t, std::size_t>> free_pos;
            std::vector<bool> is_pivot(ambient, false);
            for (auto c : piv) is_pivot[c] = true;
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = piv[i] + 1; j < ambient; ++j)
                    if (!is_pivot[j]) free_pos.emplace_back(i, j);
            std::vector<V> digits(free_pos.size(), 0);
            while (true) {
                Matrix<K> m(field, k, ambient);
                for (std::size_t i = 0; i < k; ++i) m(i, piv[i]) = field.one();
                for (std::size_t t = 0; t < free_pos.size(); ++t) m(free_pos[t].first, free_pos[t].second) = digits[t];
                visit(Subspace<K>::span(std::move(m)));
                std::size_t t = 0;
                while (t < digits.size()) {
                    if (++digits[t] < field.p) break;
                    digits[t] = 0;
                    ++t;
                }
                if (t == digits.size()) break;
            }
            // next combination
            std::size_t i = k;
            while (i > 0 && piv[i - 1] == ambient - k + i - 1) --i;
            if (i == 0) break;
            ++piv[i - 1];
            for (std::size_t j = i; j < k; ++j) piv[j] = piv[j - 1] + 1;
        }
    }
}

template <FiniteField K>
std::vector<Subspace<K>> enumerate_subspaces(K field, std::size_t ambient, std::uint64_t budget = 1u << 20) {
    std::vector<Subspace<K>> out;
    for_each_subspace<K>(field, ambient, budget, [&](const Subspace<K>& s) { out.push_back(s); });
    return out;
}

}  // namespace hnpers
