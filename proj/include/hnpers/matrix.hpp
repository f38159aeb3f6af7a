#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hnpers/field.hpp"

namespace hnpers {

/// Dense row-major matrix over a field. Maps act on column vectors, so a
/// matrix with `rows` rows and `cols` columns represents K^cols -> K^rows.
template <Field K>
class Matrix {
public:
    using value_type = typename K::value_type;
    using Vector = std::vector<value_type>;

    Matrix() = default;
    Matrix(K field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

    static Matrix identity(K field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    static Matrix from_rows(K field, std::size_t cols, const std::vector<Vector>& rows) {
        Matrix m(field, rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            require(rows[r].size() == cols, "row length mismatch");
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    const K& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector row(std::size_t r) const {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!field_.is_zero(v)) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    Vector apply(const Vector& v) const {
        require(v.size() == cols_, "matrix-vector dimension mismatch");
        Vector out(rows_, field_.zero());
        for (std::size_t r = 0; r < rows_; ++r) {
            value_type acc = field_.zero();
            for (std::size_t c = 0; c < cols_; ++c)
                if (!field_.is_zero(v[c])) acc = field_.add(acc, field_.mul((*this)(r, c), v[c]));
            out[r] = acc;
        }
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        require(a.cols_ == b.rows_, "matrix product dimension mismatch");
        Matrix out(a.field_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const value_type& aik = a(i, k);
                if (a.field_.is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    out(i, j) = a.field_.add(out(i, j), a.field_.mul(aik, b(k, j)));
            }
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    /// Zero rows are dropped, so afterwards rows() equals the rank.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t lead_row = 0;
        for (std::size_t c = 0; c < cols_ && lead_row < rows_; ++c) {
            std::size_t pr = lead_row;
            while (pr < rows_ && field_.is_zero((*this)(pr, c))) ++pr;
            if (pr == rows_) continue;
            swap_rows(pr, lead_row);
            value_type inv = field_.inv((*this)(lead_row, c));
            for (std::size_t j = c; j < cols_; ++j)
                (*this)(lead_row, j) = field_.mul((*this)(lead_row, j), inv);
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == lead_row) continue;
                value_type f = (*this)(r, c);
                if (field_.is_zero(f)) continue;
                for (std::size_t j = c; j < cols_; ++j)
                    (*this)(r, j) = field_.sub((*this)(r, j), field_.mul(f, (*this)(lead_row, j)));
            }
            pivots.push_back(c);
            ++lead_row;
        }
        data_.resize(lead_row * cols_);
        rows_ = lead_row;
        return pivots;
    }

    std::string str() const {
        std::string out = "[";
        for (std::size_t r = 0; r < rows_; ++r) {
            out += r ? ",[" : "[";
            for (std::size_t c = 0; c < cols_; ++c) out += (c ? "," : "") + field_.str((*this)(r, c));
            out += "]";
        }
        return out + "]";
    }

private:
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }

    K field_{};
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<value_type> data_;
};

template <Field K>
std::size_t rank(Matrix<K> m) {
    m.rref();
    return m.rows();
}

}  // namespace hnpers
