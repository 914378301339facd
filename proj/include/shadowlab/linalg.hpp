#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace shadowlab {

// mpq_class keeps values canonical (reduced, positive denominator) after
// every arithmetic operation.
using Rat = mpq_class;
using Vec = std::vector<Rat>;

// p/q in canonical form (mpq_class(p, q) alone does not reduce).
Rat ratio(long p, long q);
std::string to_string(const Rat& r);
Rat parse_rat(const std::string& text);
int sign(const Rat& r);

Vec zeros(std::size_t n);
Vec unit(std::size_t n, std::size_t i);
Rat dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const Rat& s);
// a + s * b
Vec axpy(const Vec& a, const Rat& s, const Vec& b);
bool is_zero(const Vec& v);

// Positive multiple of v with coprime integer entries; the first nonzero entry
// is made positive, so v and -v map to the same representative.
Vec canonical_direction(const Vec& v);

class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols);

    static Mat identity(std::size_t n);
    static Mat from_rows(const std::vector<Vec>& rows);
    static Mat from_columns(const std::vector<Vec>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec row(std::size_t i) const;
    Vec col(std::size_t j) const;
    std::vector<Vec> row_list() const;

    bool operator==(const Mat& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rat> data_;
};

Mat transpose(const Mat& m);
Mat multiply(const Mat& a, const Mat& b);
Vec mat_vec(const Mat& m, const Vec& v);

Rat det(const Mat& m);
std::size_t rank(const Mat& m);
std::size_t rank_of(const std::vector<Vec>& vectors);

struct Echelon {
    Mat reduced;
    std::vector<std::size_t> pivots;
};
Echelon rref(const Mat& m);

// Basis of {x : m x = 0}.
std::vector<Vec> kernel(const Mat& m);
Mat inverse(const Mat& m);
// Solves a x = b for square invertible a.
Vec solve(const Mat& a, const Vec& b);

class Subspace {
public:
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

    // Throws DegenerateBasisError when the vectors are dependent.
    static Subspace from_basis(std::vector<Vec> basis);
    // Span of arbitrary vectors; dependent ones are dropped.
    static Subspace span(const std::vector<Vec>& vectors, std::size_t ambient);
    static Subspace whole(std::size_t ambient);

    std::size_t dim() const { return basis_.size(); }
    std::size_t ambient() const { return ambient_; }
    const std::vector<Vec>& basis() const { return basis_; }

    // Reduced row echelon basis; equal subspaces have equal canonical bases.
    std::vector<Vec> canonical_basis() const;
    bool contains(const Vec& v) const;
    bool contains(const Subspace& other) const;
    bool operator==(const Subspace& other) const;

    Subspace orthogonal_complement() const;

private:
    std::size_t ambient_ = 0;
    std::vector<Vec> basis_;
};

Vec orth_project(const Vec& v, const Subspace& s);
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);

// (I - S)(I + S)^{-1}; rational orthogonal when S is skew-symmetric.
Mat cayley_orthogonal(const Mat& skew);
// Rotation in the coordinate plane (i, j) with Cayley parameter t.
Mat plane_rotation(std::size_t n, std::size_t i, std::size_t j, const Rat& t);

} // namespace shadowlab
