#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "hofa/common.hpp"
#include "hofa/field.hpp"
#include "hofa/rng.hpp"

namespace hofa {

/// An affine map F_p^m -> F_p^n: x |-> Mx + c with M an n-by-m matrix over
/// F_p and c in F_p^n. Immutable after construction; the matrix rank is
/// computed once and cached so embedding/bijection queries are free.
class AffineMap {
public:
    AffineMap(FieldSpec field, std::uint32_t out_dim, std::uint32_t in_dim,
              std::vector<std::uint8_t> matrix, std::vector<std::uint8_t> shift)
        : field_(field), out_(out_dim), in_(in_dim), mat_(std::move(matrix)), shift_(std::move(shift))
    {
        if (mat_.size() != static_cast<std::size_t>(out_) * in_)
            throw dimension_error("affine map matrix has " + std::to_string(mat_.size()) +
                                  " entries, expected " + std::to_string(out_ * in_));
        if (shift_.size() != out_)
            throw dimension_error("affine map shift has " + std::to_string(shift_.size()) +
                                  " entries, expected " + std::to_string(out_));
        for (auto v : mat_)
            if (v >= field_.p)
                throw value_error("matrix entry " + std::to_string(v) + " not reduced mod " +
                                  std::to_string(field_.p));
        for (auto v : shift_)
            if (v >= field_.p)
                throw value_error("shift entry " + std::to_string(v) + " not reduced mod " +
                                  std::to_string(field_.p));
        rank_ = matrix_rank(field_, out_, in_, mat_);
    }

    static AffineMap identity(FieldSpec field, std::uint32_t n)
    {
        std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
        for (std::uint32_t i = 0; i < n; ++i)
            m[static_cast<std::size_t>(i) * n + i] = 1;
        return AffineMap(field, n, n, std::move(m), std::vector<std::uint8_t>(n, 0));
    }

    std::uint32_t p() const { return field_.p; }
    const FieldSpec& field() const { return field_; }
    std::uint32_t in_dim() const { return in_; }
    std::uint32_t out_dim() const { return out_; }
    std::uint32_t rank() const { return rank_; }
    bool is_embedding() const { return rank_ == in_; }
    bool is_bijection() const { return in_ == out_ && rank_ == in_; }
    std::uint8_t entry(std::uint32_t row, std::uint32_t col) const
    {
        return mat_[static_cast<std::size_t>(row) * in_ + col];
    }
    const std::vector<std::uint8_t>& matrix() const { return mat_; }
    const std::vector<std::uint8_t>& shift() const { return shift_; }

    bool operator==(const AffineMap& o) const
    {
        return field_.p == o.field_.p && in_ == o.in_ && out_ == o.out_ && mat_ == o.mat_ &&
               shift_ == o.shift_;
    }

    Point apply(const Point& x) const
    {
        if (x.size() != in_)
            throw dimension_error("affine map expects " + std::to_string(in_) + " coordinates, got " +
                                  std::to_string(x.size()));
        Point y(shift_);
        for (std::uint32_t r = 0; r < out_; ++r) {
            std::uint32_t acc = y[r];
            for (std::uint32_t c = 0; c < in_; ++c)
                acc += static_cast<std::uint32_t>(entry(r, c)) * x[c];
            y[r] = static_cast<std::uint8_t>(acc % field_.p);
        }
        return y;
    }

    // Full index-level lookup table: table[x] = index of (Mx + c). The input
    // domain is walked once; columns contribute independently per digit, so
    // each step is a carry-free index addition.
    std::vector<std::uint64_t> index_table() const
    {
        Domain di(field_, in_), dout(field_, out_);
        // col_at[c][v] = index of v * (column c)
        std::vector<std::vector<std::uint64_t>> col_at(in_, std::vector<std::uint64_t>(field_.p, 0));
        for (std::uint32_t c = 0; c < in_; ++c) {
            Point column(out_, 0);
            for (std::uint32_t r = 0; r < out_; ++r)
                column[r] = entry(r, c);
            const std::uint64_t base = dout.index(column);
            for (std::uint32_t v = 1; v < field_.p; ++v)
                col_at[c][v] = dout.scale(v, base);
        }
        const std::uint64_t shift_idx = dout.index(shift_);
        std::vector<std::uint64_t> table(di.size());
        for (std::uint64_t x = 0; x < di.size(); ++x) {
            std::uint64_t y = shift_idx;
            std::uint64_t rest = x;
            for (std::uint32_t c = 0; c < in_; ++c) {
                const std::uint32_t v = static_cast<std::uint32_t>(rest % field_.p);
                rest /= field_.p;
                if (v)
                    y = dout.add(y, col_at[c][v]);
            }
            table[x] = y;
        }
        return table;
    }

    std::string serialize() const
    {
        std::ostringstream out;
        out << field_.p << ' ' << out_ << ' ' << in_ << '\n';
        for (std::uint32_t r = 0; r < out_; ++r) {
            for (std::uint32_t c = 0; c < in_; ++c)
                out << digit_char(entry(r, c));
            out << '\n';
        }
        out << digits_to_string(shift_) << '\n';
        return out.str();
    }

    static std::uint32_t matrix_rank(const FieldSpec& f, std::uint32_t rows, std::uint32_t cols,
                                     std::vector<std::uint8_t> m)
    {
        std::uint32_t rank = 0;
        for (std::uint32_t col = 0; col < cols && rank < rows; ++col) {
            std::uint32_t pivot = rank;
            while (pivot < rows && m[static_cast<std::size_t>(pivot) * cols + col] == 0)
                ++pivot;
            if (pivot == rows)
                continue;
            for (std::uint32_t c = 0; c < cols; ++c)
                std::swap(m[static_cast<std::size_t>(pivot) * cols + c],
                          m[static_cast<std::size_t>(rank) * cols + c]);
            const std::uint32_t inv = f.inv(m[static_cast<std::size_t>(rank) * cols + col]);
            for (std::uint32_t r = 0; r < rows; ++r) {
                if (r == rank)
                    continue;
                const std::uint32_t factor = m[static_cast<std::size_t>(r) * cols + col];
                if (factor == 0)
                    continue;
                const std::uint32_t scale = f.mul(factor, inv);
                for (std::uint32_t c = 0; c < cols; ++c) {
                    auto& cell = m[static_cast<std::size_t>(r) * cols + c];
                    cell = static_cast<std::uint8_t>(
                        f.sub(cell, f.mul(scale, m[static_cast<std::size_t>(rank) * cols + c])));
                }
            }
            ++rank;
        }
        return rank;
    }

private:
    FieldSpec field_;
    std::uint32_t out_, in_;
    std::vector<std::uint8_t> mat_;
    std::vector<std::uint8_t> shift_;
    std::uint32_t rank_ = 0;
};

/// Composition A . B : x |-> A(B(x)). Requires B.out_dim == A.in_dim.
inline AffineMap compose(const AffineMap& a, const AffineMap& b)
{
    if (a.p() != b.p())
        throw dimension_error("composing affine maps over different fields");
    if (a.in_dim() != b.out_dim())
        throw dimension_error("composing maps with mismatched dimensions: inner map lands in F^" +
                              std::to_string(b.out_dim()) + ", outer expects F^" +
                              std::to_string(a.in_dim()));
    const FieldSpec& f = a.field();
    const std::uint32_t rows = a.out_dim(), mid = a.in_dim(), cols = b.in_dim();
    std::vector<std::uint8_t> m(static_cast<std::size_t>(rows) * cols, 0);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c) {
            std::uint32_t acc = 0;
            for (std::uint32_t k = 0; k < mid; ++k)
                acc += static_cast<std::uint32_t>(a.entry(r, k)) * b.entry(k, c);
            m[static_cast<std::size_t>(r) * cols + c] = static_cast<std::uint8_t>(acc % f.p);
        }
    std::vector<std::uint8_t> shift(rows);
    for (std::uint32_t r = 0; r < rows; ++r) {
        std::uint32_t acc = a.shift()[r];
        for (std::uint32_t k = 0; k < mid; ++k)
            acc += static_cast<std::uint32_t>(a.entry(r, k)) * b.shift()[k];
        shift[r] = static_cast<std::uint8_t>(acc % f.p);
    }
    return AffineMap(f, rows, cols, std::move(m), std::move(shift));
}

/// Left inverse of an embedding A: an affine map A+ with A+ . A = identity.
/// Deterministic: Gauss-Jordan elimination with pivots chosen left-to-right,
/// first nonzero row. For A = (I_n ; B) this yields A+ = (I_n | 0).
inline AffineMap left_inverse(const AffineMap& a)
{
    if (!a.is_embedding())
        throw value_error("left inverse requires an embedding (full column rank)");
    const FieldSpec& f = a.field();
    const std::uint32_t rows = a.out_dim(), cols = a.in_dim();
    // Row-reduce [M | I]; the first `cols` rows of the transform give M+.
    std::vector<std::uint8_t> m(a.matrix());
    std::vector<std::uint8_t> e(static_cast<std::size_t>(rows) * rows, 0);
    for (std::uint32_t i = 0; i < rows; ++i)
        e[static_cast<std::size_t>(i) * rows + i] = 1;
    auto mat = [&](std::uint32_t r, std::uint32_t c) -> std::uint8_t& {
        return m[static_cast<std::size_t>(r) * cols + c];
    };
    auto trf = [&](std::uint32_t r, std::uint32_t c) -> std::uint8_t& {
        return e[static_cast<std::size_t>(r) * rows + c];
    };
    std::uint32_t done = 0;
    for (std::uint32_t col = 0; col < cols; ++col) {
        std::uint32_t pivot = done;
        while (mat(pivot, col) == 0)
            ++pivot; // full column rank: a pivot always exists
        if (pivot != done) {
            for (std::uint32_t c = 0; c < cols; ++c)
                std::swap(mat(pivot, c), mat(done, c));
            for (std::uint32_t c = 0; c < rows; ++c)
                std::swap(trf(pivot, c), trf(done, c));
        }
        const std::uint32_t inv = f.inv(mat(done, col));
        if (inv != 1) {
            for (std::uint32_t c = 0; c < cols; ++c)
                mat(done, c) = static_cast<std::uint8_t>(f.mul(mat(done, c), inv));
            for (std::uint32_t c = 0; c < rows; ++c)
                trf(done, c) = static_cast<std::uint8_t>(f.mul(trf(done, c), inv));
        }
        for (std::uint32_t r = 0; r < rows; ++r) {
            if (r == done || mat(r, col) == 0)
                continue;
            const std::uint32_t factor = mat(r, col);
            for (std::uint32_t c = 0; c < cols; ++c)
                mat(r, c) = static_cast<std::uint8_t>(f.sub(mat(r, c), f.mul(factor, mat(done, c))));
            for (std::uint32_t c = 0; c < rows; ++c)
                trf(r, c) = static_cast<std::uint8_t>(f.sub(trf(r, c), f.mul(factor, trf(done, c))));
        }
        ++done;
    }
    std::vector<std::uint8_t> pinv(static_cast<std::size_t>(cols) * rows);
    for (std::uint32_t r = 0; r < cols; ++r)
        for (std::uint32_t c = 0; c < rows; ++c)
            pinv[static_cast<std::size_t>(r) * rows + c] = trf(r, c);
    // Shift: A+(y) = M+ y - M+ c, so that A+(A(x)) = x exactly.
    std::vector<std::uint8_t> shift(cols);
    for (std::uint32_t r = 0; r < cols; ++r) {
        std::uint32_t acc = 0;
        for (std::uint32_t k = 0; k < rows; ++k)
            acc += static_cast<std::uint32_t>(pinv[static_cast<std::size_t>(r) * rows + k]) *
                   a.shift()[k];
        shift[r] = static_cast<std::uint8_t>(f.neg(acc % f.p));
    }
    return AffineMap(f, cols, rows, std::move(pinv), std::move(shift));
}

/// Projection F_p^N -> F_p^n keeping the first n coordinates.
inline AffineMap canonical_projection(FieldSpec field, std::uint32_t big_n, std::uint32_t small_n)
{
    if (small_n > big_n)
        throw value_error("canonical projection requires target dimension <= source dimension");
    std::vector<std::uint8_t> m(static_cast<std::size_t>(small_n) * big_n, 0);
    for (std::uint32_t i = 0; i < small_n; ++i)
        m[static_cast<std::size_t>(i) * big_n + i] = 1;
    return AffineMap(field, small_n, big_n, std::move(m), std::vector<std::uint8_t>(small_n, 0));
}

namespace detail {

inline AffineMap random_affine_with_rank(FieldSpec field, std::uint32_t out_dim, std::uint32_t in_dim,
                                         std::uint32_t want_rank, Rng& rng)
{
    // Rejection sampling keeps the distribution exactly uniform over the
    // target set; the acceptance probability is bounded away from 0 for
    // every p, so the loop terminates quickly in practice.
    for (;;) {
        std::vector<std::uint8_t> m(static_cast<std::size_t>(out_dim) * in_dim);
        for (auto& v : m)
            v = static_cast<std::uint8_t>(rng.below(field.p));
        std::vector<std::uint8_t> c(out_dim);
        for (auto& v : c)
            v = static_cast<std::uint8_t>(rng.below(field.p));
        AffineMap map(field, out_dim, in_dim, std::move(m), std::move(c));
        if (map.rank() == want_rank)
            return map;
    }
}

} // namespace detail

/// Uniformly random affine embedding F_p^k -> F_p^n (full column rank).
inline AffineMap random_affine_embedding(FieldSpec field, std::uint32_t k, std::uint32_t n, Rng& rng)
{
    if (k > n)
        throw value_error("no embedding F^" + std::to_string(k) + " -> F^" + std::to_string(n) +
                          " with k > n");
    return detail::random_affine_with_rank(field, n, k, k, rng);
}

/// Uniformly random affine bijection of F_p^n.
inline AffineMap random_affine_bijection(FieldSpec field, std::uint32_t n, Rng& rng)
{
    return detail::random_affine_with_rank(field, n, n, n, rng);
}

/// Uniformly random affine surjection F_p^N -> F_p^n (full row rank); this is
/// the map that blows a function on F_p^n up to F_p^N.
inline AffineMap random_affine_surjection(FieldSpec field, std::uint32_t big_n, std::uint32_t n,
                                          Rng& rng)
{
    if (n > big_n)
        throw value_error("no surjection F^" + std::to_string(big_n) + " -> F^" + std::to_string(n) +
                          " with n > N");
    return detail::random_affine_with_rank(field, n, big_n, n, rng);
}

namespace detail {

// Visit matrices in lexicographic order of their serialized digit string
// (row 0 first, leftmost column most significant), so "first hit" witnesses
// are the lexicographically smallest ones.
template <class F>
void for_each_matrix(FieldSpec field, std::uint32_t rows, std::uint32_t cols, F&& visit)
{
    const std::size_t len = static_cast<std::size_t>(rows) * cols;
    std::vector<std::uint8_t> m(len, 0);
    for (;;) {
        visit(m);
        std::size_t i = len;
        while (i > 0) {
            --i;
            if (++m[i] < field.p)
                break;
            m[i] = 0;
            if (i == 0)
                return;
        }
        if (len == 0)
            return;
    }
}

} // namespace detail

/// Visit every affine map F_p^in -> F_p^out of the given rank, in
/// lexicographic order of (matrix digits, shift digits). The full scan costs
/// p^(out*in + out) visits, which must fit the budget.
template <class F>
void for_each_affine_of_rank(FieldSpec field, std::uint32_t out_dim, std::uint32_t in_dim,
                             std::uint32_t want_rank, std::uint64_t budget, F&& visit)
{
    require_budget(field.p, static_cast<std::uint64_t>(out_dim) * in_dim + out_dim, budget,
                   "affine map enumeration");
    detail::for_each_matrix(field, out_dim, in_dim, [&](const std::vector<std::uint8_t>& m) {
        if (AffineMap::matrix_rank(field, out_dim, in_dim, m) != want_rank)
            return;
        detail::for_each_matrix(field, out_dim, 1, [&](const std::vector<std::uint8_t>& c) {
            visit(AffineMap(field, out_dim, in_dim, m, c));
        });
    });
}

/// All p^n-preserving affine bijections of F_p^n, lexicographic order.
template <class F>
void for_each_affine_bijection(FieldSpec field, std::uint32_t n, std::uint64_t budget, F&& visit)
{
    for_each_affine_of_rank(field, n, n, n, budget, std::forward<F>(visit));
}

/// All affine embeddings F_p^k -> F_p^n, lexicographic order.
template <class F>
void for_each_affine_embedding(FieldSpec field, std::uint32_t k, std::uint32_t n,
                               std::uint64_t budget, F&& visit)
{
    if (k > n)
        throw value_error("no embeddings F^" + std::to_string(k) + " -> F^" + std::to_string(n) +
                          " with k > n");
    for_each_affine_of_rank(field, n, k, k, budget, std::forward<F>(visit));
}

inline std::uint64_t count_affine_bijections(FieldSpec field, std::uint32_t n,
                                             std::uint64_t budget = default_budget)
{
    std::uint64_t count = 0;
    for_each_affine_bijection(field, n, budget, [&](const AffineMap&) { ++count; });
    return count;
}

inline AffineMap parse_affine_map(const std::string& text)
{
    std::istringstream in(text);
    std::uint32_t p, out_dim, in_dim;
    if (!(in >> p >> out_dim >> in_dim))
        throw parse_error("affine map header must be 'p out_dim in_dim'");
    FieldSpec field(p);
    std::vector<std::uint8_t> mat;
    mat.reserve(static_cast<std::size_t>(out_dim) * in_dim);
    std::string row;
    for (std::uint32_t r = 0; r < out_dim; ++r) {
        if (!(in >> row))
            throw parse_error("affine map: missing matrix row " + std::to_string(r));
        if (row.size() != in_dim)
            throw parse_error("affine map: row " + std::to_string(r) + " has " +
                              std::to_string(row.size()) + " digits, expected " + std::to_string(in_dim));
        for (char ch : row)
            mat.push_back(static_cast<std::uint8_t>(digit_value(ch, p)));
    }
    if (!(in >> row))
        throw parse_error("affine map: missing shift row");
    if (row.size() != out_dim)
        throw parse_error("affine map: shift has " + std::to_string(row.size()) +
                          " digits, expected " + std::to_string(out_dim));
    return AffineMap(field, out_dim, in_dim, std::move(mat), string_to_digits(row, p));
}

} // namespace hofa
