#include "shadowlab/linalg.hpp"

#include <utility>

#include "shadowlab/errors.hpp"

namespace shadowlab {

Rat ratio(long p, long q) {
    if (q == 0) throw ParameterError("zero denominator");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

Rat parse_rat(const std::string& text) {
    if (text.empty()) throw InputError("empty rational literal");
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    std::size_t slash = text.find('/');
    auto digits = [&](std::size_t from, std::size_t to) {
        if (from >= to) return false;
        for (std::size_t i = from; i < to; ++i)
            if (text[i] < '0' || text[i] > '9') return false;
        return true;
    };
    bool ok = slash == std::string::npos ? digits(start, text.size())
                                         : digits(start, slash) && digits(slash + 1, text.size());
    if (!ok) throw InputError("malformed rational literal '" + text + "'");
    std::string body = text[0] == '+' ? text.substr(1) : text;
    Rat r;
    if (r.set_str(body, 10) != 0) throw InputError("malformed rational literal '" + text + "'");
    if (r.get_den() == 0) throw InputError("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

int sign(const Rat& r) { return sgn(r); }

Vec zeros(std::size_t n) { return Vec(n, Rat(0)); }

Vec unit(std::size_t n, std::size_t i) {
    Vec v = zeros(n);
    v[i] = 1;
    return v;
}

static void same_length(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw DimensionError("vector lengths differ: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
}

Rat dot(const Vec& a, const Vec& b) {
    same_length(a, b);
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec add(const Vec& a, const Vec& b) {
    same_length(a, b);
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    same_length(a, b);
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scale(const Vec& a, const Rat& s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

Vec axpy(const Vec& a, const Rat& s, const Vec& b) {
    same_length(a, b);
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
}

bool is_zero(const Vec& v) {
    for (const Rat& x : v)
        if (x != 0) return false;
    return true;
}

Vec canonical_direction(const Vec& v) {
    if (is_zero(v)) throw DegenerateBasisError("zero vector has no direction");
    mpz_class l = 1;
    for (const Rat& x : v) l = lcm(l, mpz_class(x.get_den()));
    std::vector<mpz_class> ints(v.size());
    mpz_class g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rat scaled = v[i] * l;
        ints[i] = scaled.get_num();
        g = gcd(g, ints[i]);
    }
    int s = 0;
    for (const auto& x : ints) {
        if (x != 0) {
            s = sgn(x);
            break;
        }
    }
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(ints[i] * s / g);
    return r;
}

Mat::Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows) {
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    Mat m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c) throw DimensionError("ragged rows");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols) {
    return transpose(from_rows(cols));
}

Vec Mat::row(std::size_t i) const {
    return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
               data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vec Mat::col(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

std::vector<Vec> Mat::row_list() const {
    std::vector<Vec> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
}

Mat transpose(const Mat& m) {
    Mat t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

Mat multiply(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

Vec mat_vec(const Mat& m, const Vec& v) {
    if (m.cols() != v.size()) throw DimensionError("matrix-vector shape mismatch");
    Vec r = zeros(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j];
    return r;
}

// Bareiss elimination: every division below is exact.
Rat det(const Mat& m) {
    if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return Rat(1);
    Mat a = m;
    Rat prev = 1;
    int s = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && a(r, k) == 0) ++r;
            if (r == n) return Rat(0);
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
            s = -s;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return s > 0 ? a(n - 1, n - 1) : Rat(-a(n - 1, n - 1));
}

Echelon rref(const Mat& m) {
    Echelon e{m, {}};
    Mat& a = e.reduced;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && a(p, c) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
        Rat inv = 1 / a(r, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, c) == 0) continue;
            Rat f = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
        }
        e.pivots.push_back(c);
        ++r;
    }
    return e;
}

std::size_t rank(const Mat& m) { return rref(m).pivots.size(); }

std::size_t rank_of(const std::vector<Vec>& vectors) {
    if (vectors.empty()) return 0;
    return rank(Mat::from_rows(vectors));
}

std::vector<Vec> kernel(const Mat& m) {
    Echelon e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec v = zeros(m.cols());
        v[f] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

Mat inverse(const Mat& m) {
    if (m.rows() != m.cols()) throw DimensionError("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    Mat aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    Echelon e = rref(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw ParameterError("singular matrix");
    Mat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

Vec solve(const Mat& a, const Vec& b) { return mat_vec(inverse(a), b); }

Subspace Subspace::from_basis(std::vector<Vec> basis) {
    if (basis.empty()) throw DimensionError("from_basis needs at least one vector (use Subspace(n))");
    std::size_t n = basis[0].size();
    for (const auto& v : basis)
        if (v.size() != n) throw DimensionError("basis vectors of different lengths");
    if (rank_of(basis) != basis.size()) throw DegenerateBasisError("basis vectors are linearly dependent");
    Subspace s(n);
    s.basis_ = std::move(basis);
    return s;
}

Subspace Subspace::span(const std::vector<Vec>& vectors, std::size_t ambient) {
    Subspace s(ambient);
    if (vectors.empty()) return s;
    for (const auto& v : vectors)
        if (v.size() != ambient) throw DimensionError("vector length does not match ambient dimension");
    Echelon e = rref(Mat::from_rows(vectors));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) s.basis_.push_back(e.reduced.row(r));
    return s;
}

Subspace Subspace::whole(std::size_t ambient) {
    std::vector<Vec> b;
    for (std::size_t i = 0; i < ambient; ++i) b.push_back(unit(ambient, i));
    Subspace s(ambient);
    s.basis_ = std::move(b);
    return s;
}

std::vector<Vec> Subspace::canonical_basis() const { return span(basis_, ambient_).basis_; }

bool Subspace::contains(const Vec& v) const {
    if (v.size() != ambient_) throw DimensionError("vector length does not match ambient dimension");
    if (is_zero(v)) return true;
    std::vector<Vec> rows = basis_;
    rows.push_back(v);
    return rank_of(rows) == basis_.size();
}

bool Subspace::contains(const Subspace& other) const {
    for (const auto& v : other.basis_)
        if (!contains(v)) return false;
    return true;
}

bool Subspace::operator==(const Subspace& other) const {
    return ambient_ == other.ambient_ && dim() == other.dim() && contains(other);
}

Subspace Subspace::orthogonal_complement() const {
    if (basis_.empty()) return whole(ambient_);
    Subspace s(ambient_);
    s.basis_ = kernel(Mat::from_rows(basis_));
    return s;
}

Vec orth_project(const Vec& v, const Subspace& s) {
    const auto& b = s.basis();
    if (v.size() != s.ambient()) throw DimensionError("vector length does not match ambient dimension");
    if (b.empty()) return zeros(v.size());
    Mat gram(b.size(), b.size());
    Vec rhs(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) gram(i, j) = dot(b[i], b[j]);
        rhs[i] = dot(b[i], v);
    }
    if (det(gram) == 0) throw DegenerateBasisError("projection onto a dependent basis");
    Vec c = solve(gram, rhs);
    Vec out = zeros(v.size());
    for (std::size_t i = 0; i < b.size(); ++i) out = axpy(out, c[i], b[i]);
    return out;
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw DimensionError("intersect: ambient dimensions differ");
    const std::size_t n = a.ambient();
    if (a.dim() == 0 || b.dim() == 0) return Subspace(n);
    std::vector<Vec> cols = a.basis();
    for (const auto& v : b.basis()) cols.push_back(scale(v, -1));
    std::vector<Vec> found;
    for (const auto& z : kernel(Mat::from_columns(cols))) {
        Vec x = zeros(n);
        for (std::size_t i = 0; i < a.dim(); ++i) x = axpy(x, z[i], a.basis()[i]);
        found.push_back(std::move(x));
    }
    return Subspace::span(found, n);
}

Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw DimensionError("sum: ambient dimensions differ");
    std::vector<Vec> all = a.basis();
    all.insert(all.end(), b.basis().begin(), b.basis().end());
    return Subspace::span(all, a.ambient());
}

Mat cayley_orthogonal(const Mat& skew) {
    const std::size_t n = skew.rows();
    if (skew.cols() != n) throw DimensionError("cayley: matrix not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (skew(i, j) != -skew(j, i)) throw ParameterError("cayley: matrix not skew-symmetric");
    Mat minus = Mat::identity(n), plus = Mat::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            minus(i, j) -= skew(i, j);
            plus(i, j) += skew(i, j);
        }
    if (det(plus) == 0) throw ParameterError("cayley: I + S is singular");
    return multiply(minus, inverse(plus));
}

Mat plane_rotation(std::size_t n, std::size_t i, std::size_t j, const Rat& t) {
    Mat s(n, n);
    s(i, j) = t;
    s(j, i) = -t;
    return cayley_orthogonal(s);
}

} // namespace shadowlab
