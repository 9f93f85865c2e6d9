#include "lattika/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace lattika {

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
        for (long x : r) data_.emplace_back(x);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return m;
}

IntMatrix IntMatrix::diagonal(const IntVector& d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

IntVector IntMatrix::row(std::size_t i) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::col(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

void IntMatrix::set_row(std::size_t i, const IntVector& v) {
    if (v.size() != cols_) throw std::invalid_argument("IntMatrix::set_row: length mismatch");
    std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
}

void IntMatrix::append_row(const IntVector& v) {
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw std::invalid_argument("IntMatrix::append_row: length mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: product shape mismatch");
    IntMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Integer& a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
        }
    return p;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMatrix: sum shape mismatch");
    IntMatrix s = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] += o.data_[k];
    return s;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMatrix: difference shape mismatch");
    IntMatrix s = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] -= o.data_[k];
    return s;
}

IntMatrix IntMatrix::operator-() const { return scaled(Integer(-1)); }

IntMatrix IntMatrix::scaled(const Integer& c) const {
    IntMatrix s = *this;
    for (auto& x : s.data_) x *= c;
    return s;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

IntVector IntMatrix::left_mul(const IntVector& x) const {
    if (x.size() != rows_) throw std::invalid_argument("IntMatrix::left_mul: length mismatch");
    IntVector y(cols_, Integer(0));
    for (std::size_t i = 0; i < rows_; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < cols_; ++j) y[j] += x[i] * (*this)(i, j);
    }
    return y;
}

IntVector IntMatrix::right_mul(const IntVector& x) const {
    if (x.size() != cols_) throw std::invalid_argument("IntMatrix::right_mul: length mismatch");
    IntVector y(rows_, Integer(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

IntMatrix IntMatrix::select_rows(const std::vector<std::size_t>& idx) const {
    IntMatrix s(idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k) s.set_row(k, row(idx[k]));
    return s;
}

IntMatrix IntMatrix::vstack(const IntMatrix& below) const {
    if (rows_ == 0) return below;
    if (below.rows_ == 0) return *this;
    if (cols_ != below.cols_) throw std::invalid_argument("IntMatrix::vstack: column mismatch");
    IntMatrix s(rows_ + below.rows_, cols_);
    std::copy(data_.begin(), data_.end(), s.data_.begin());
    std::copy(below.data_.begin(), below.data_.end(), s.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
    return s;
}

bool IntMatrix::is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

Integer IntMatrix::determinant() const {
    if (!is_square()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    IntMatrix a = *this;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = t;
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

std::size_t IntMatrix::rank() const { return hnf_basis(*this).rows(); }

IntMatrix IntMatrix::unimodular_inverse() const {
    auto inv = RatMatrix(*this).inverse();
    if (!inv || !inv->is_integral()) throw std::invalid_argument("matrix is not unimodular");
    return inv->to_integer();
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) os << ',';
        os << '[';
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << m(i, j);
        }
        os << ']';
    }
    return os << ']';
}

// ---------------------------------------------------------------- RatMatrix

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

RatMatrix::RatMatrix(const IntMatrix& m) : RatMatrix(m.rows(), m.cols()) {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = Rational(m(i, j));
}

RatVector RatMatrix::row(std::size_t i) const {
    return RatVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("RatMatrix: product shape mismatch");
    RatMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
        }
    return p;
}

RatVector RatMatrix::right_mul(const RatVector& x) const {
    if (x.size() != cols_) throw std::invalid_argument("RatMatrix::right_mul: length mismatch");
    RatVector y(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

RatVector RatMatrix::left_mul(const RatVector& x) const {
    if (x.size() != rows_) throw std::invalid_argument("RatMatrix::left_mul: length mismatch");
    RatVector y(cols_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) y[j] += x[i] * (*this)(i, j);
    return y;
}

std::optional<RatMatrix> RatMatrix::inverse() const {
    if (rows_ != cols_) return std::nullopt;
    const std::size_t n = rows_;
    RatMatrix a = *this;
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        const Rational piv = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            const Rational f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

bool RatMatrix::is_integral() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q.get_den() == 1; });
}

IntMatrix RatMatrix::to_integer() const {
    if (!is_integral()) throw std::invalid_argument("RatMatrix::to_integer: non-integral entry");
    IntMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).get_num();
    return m;
}

// ---------------------------------------------------------------- scalars

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer mod_floor(const Integer& a, const Integer& b) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (r < 0) r += abs(b);
    return r;
}

Integer floor_rational(const Rational& q) { return floor_div(q.get_num(), q.get_den()); }

Integer ceil_rational(const Rational& q) { return -floor_div(-q.get_num(), q.get_den()); }

Rational mod_rational(const Rational& q, const Rational& m) {
    Rational t = q / m;
    Rational r = q - m * Rational(floor_rational(t));
    r.canonicalize();
    return r;
}

Integer content(const IntVector& v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

Integer dot(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

std::string to_string(const IntVector& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
}

std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------- normal forms

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row_dst -= q * row_src
void sub_row(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) -= q * m(src, j);
}

void sub_col(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) -= q * m(i, src);
}

void negate_row(IntMatrix& m, std::size_t r) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

}  // namespace

HermiteResult hermite_normal_form(const IntMatrix& m) {
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(m.rows());
    const std::size_t nr = m.rows();
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < nr; ++c) {
        while (true) {
            // smallest nonzero |entry| at or below row r moves up to the pivot slot
            std::size_t best = nr;
            for (std::size_t i = r; i < nr; ++i)
                if (h(i, c) != 0 && (best == nr || abs(h(i, c)) < abs(h(best, c)))) best = i;
            if (best == nr) break;
            swap_rows(h, r, best);
            swap_rows(u, r, best);
            bool clean = true;
            for (std::size_t i = r + 1; i < nr; ++i) {
                if (h(i, c) == 0) continue;
                Integer q = floor_div(h(i, c), h(r, c));
                sub_row(h, i, r, q);
                sub_row(u, i, r, q);
                if (h(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) {
            negate_row(h, r);
            negate_row(u, r);
        }
        for (std::size_t i = 0; i < r; ++i) {
            Integer q = floor_div(h(i, c), h(r, c));
            sub_row(h, i, r, q);
            sub_row(u, i, r, q);
        }
        ++r;
    }
    return {std::move(h), std::move(u)};
}

IntMatrix hnf_basis(const IntMatrix& m) {
    IntMatrix h = hermite_normal_form(m).h;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < h.rows(); ++i)
        if (!is_zero(h.row(i))) keep.push_back(i);
    IntMatrix b = h.select_rows(keep);
    if (keep.empty()) b = IntMatrix(0, m.cols());
    return b;
}

SmithResult smith_normal_form(const IntMatrix& m) {
    IntMatrix d = m;
    IntMatrix u = IntMatrix::identity(m.rows());
    IntMatrix v = IntMatrix::identity(m.cols());
    const std::size_t nr = m.rows(), nc = m.cols();
    for (std::size_t t = 0; t < std::min(nr, nc); ++t) {
        while (true) {
            // pivot on the minimal nonzero |entry| of the trailing block
            std::size_t bi = nr, bj = nc;
            for (std::size_t i = t; i < nr; ++i)
                for (std::size_t j = t; j < nc; ++j)
                    if (d(i, j) != 0 && (bi == nr || abs(d(i, j)) < abs(d(bi, bj)))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == nr) break;
            swap_rows(d, t, bi);
            swap_rows(u, t, bi);
            swap_cols(d, t, bj);
            swap_cols(v, t, bj);

            bool dirty = false;
            for (std::size_t i = t + 1; i < nr; ++i) {
                if (d(i, t) == 0) continue;
                Integer q = floor_div(d(i, t), d(t, t));
                sub_row(d, i, t, q);
                sub_row(u, i, t, q);
                if (d(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < nc; ++j) {
                if (d(t, j) == 0) continue;
                Integer q = floor_div(d(t, j), d(t, t));
                sub_col(d, j, t, q);
                sub_col(v, j, t, q);
                if (d(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // divisibility chain: fold an offending row into the pivot row
            std::size_t bad = nr;
            for (std::size_t i = t + 1; i < nr && bad == nr; ++i)
                for (std::size_t j = t + 1; j < nc; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == nr) break;
            sub_row(d, t, bad, Integer(-1));
            sub_row(u, t, bad, Integer(-1));
        }
        if (d(t, t) < 0) {
            negate_row(d, t);
            negate_row(u, t);
        }
    }
    return {std::move(d), std::move(u), std::move(v)};
}

IntVector elementary_divisors(const IntMatrix& m) {
    auto s = smith_normal_form(m);
    IntVector out;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
        if (s.d(i, i) != 0) out.push_back(s.d(i, i));
    return out;
}

IntMatrix integer_kernel(const IntMatrix& m) {
    auto hr = hermite_normal_form(m);
    std::vector<std::size_t> zero_rows;
    for (std::size_t i = 0; i < hr.h.rows(); ++i)
        if (is_zero(hr.h.row(i))) zero_rows.push_back(i);
    if (zero_rows.empty()) return IntMatrix(0, m.rows());
    return hnf_basis(hr.u.select_rows(zero_rows));
}

std::optional<IntVector> solve_integer(const IntMatrix& m, const IntVector& b) {
    if (b.size() != m.cols()) throw std::invalid_argument("solve_integer: length mismatch");
    auto hr = hermite_normal_form(m);
    const IntMatrix& h = hr.h;
    IntVector y(m.rows(), Integer(0));
    IntVector residual = b;
    std::size_t c = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        while (c < h.cols() && h(i, c) == 0) ++c;
        if (c == h.cols()) break;
        if (residual[c] % h(i, c) != 0) return std::nullopt;
        y[i] = residual[c] / h(i, c);
        for (std::size_t j = 0; j < h.cols(); ++j) residual[j] -= y[i] * h(i, j);
    }
    if (!is_zero(residual)) return std::nullopt;
    return hr.u.left_mul(y);
}

Signature rational_diagonalize_symmetric(const IntMatrix& g) {
    if (!g.is_symmetric()) throw std::invalid_argument("rational_diagonalize_symmetric: matrix not symmetric");
    const std::size_t n = g.rows();
    RatMatrix a(g);
    auto sym_swap = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
        for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
    };
    Signature sig;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, p) == 0) ++p;
        if (p == n) {
            // all remaining diagonal entries vanish: e_i += e_j creates 2 a_ij on the diagonal
            std::size_t pi = n, pj = n;
            for (std::size_t i = k; i < n && pi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (a(i, j) != 0) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi == n) {
                sig.n_zero += n - k;
                return sig;
            }
            for (std::size_t c = 0; c < n; ++c) a(pi, c) += a(pj, c);
            for (std::size_t r = 0; r < n; ++r) a(r, pi) += a(r, pj);
            p = pi;
        }
        sym_swap(k, p);
        const Rational piv = a(k, k);
        if (piv > 0)
            ++sig.n_plus;
        else
            ++sig.n_minus;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            const Rational f = a(i, k) / piv;
            for (std::size_t c = k; c < n; ++c) a(i, c) -= f * a(k, c);
            for (std::size_t r = k; r < n; ++r) a(r, i) -= f * a(r, k);
        }
    }
    return sig;
}

IntMatrix saturate_rows(const IntMatrix& m) {
    const std::size_t n = m.cols();
    if (m.rows() == 0) return IntMatrix(0, n);
    IntMatrix annihilator = integer_kernel(m.transpose());
    if (annihilator.rows() == 0) return IntMatrix::identity(n);
    return integer_kernel(annihilator.transpose());
}

}  // namespace lattika
