#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace lattika {

using Integer = mpz_class;
using Rational = mpq_class;  // gmp keeps mpq canonical: lowest terms, positive denominator

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

// Dense row-major matrix over the unbounded integers.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
    static IntMatrix diagonal(const IntVector& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVector row(std::size_t i) const;
    IntVector col(std::size_t j) const;
    void set_row(std::size_t i, const IntVector& v);
    void append_row(const IntVector& v);

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix operator-() const;
    IntMatrix scaled(const Integer& c) const;
    bool operator==(const IntMatrix& o) const;
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    // Row-vector times matrix and matrix times column vector.
    IntVector left_mul(const IntVector& x) const;
    IntVector right_mul(const IntVector& x) const;

    IntMatrix select_rows(const std::vector<std::size_t>& idx) const;
    IntMatrix vstack(const IntMatrix& below) const;

    bool is_square() const { return rows_ == cols_; }
    bool is_symmetric() const;
    bool is_zero() const;

    // Fraction-free (Bareiss) determinant.
    Integer determinant() const;
    std::size_t rank() const;

    // Inverse of a unimodular matrix; throws if |det| != 1.
    IntMatrix unimodular_inverse() const;

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

// Dense row-major matrix over the rationals.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols);
    explicit RatMatrix(const IntMatrix& m);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatVector row(std::size_t i) const;
    RatMatrix transpose() const;
    RatMatrix operator*(const RatMatrix& o) const;
    RatVector right_mul(const RatVector& x) const;
    RatVector left_mul(const RatVector& x) const;

    std::optional<RatMatrix> inverse() const;
    bool is_integral() const;
    IntMatrix to_integer() const;  // throws unless integral

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

struct HermiteResult {
    IntMatrix h;  // row-style HNF
    IntMatrix u;  // unimodular, u * m == h
};

struct SmithResult {
    IntMatrix d;  // diagonal with d_1 | d_2 | ... and nonnegative entries
    IntMatrix u;  // unimodular rows transform
    IntMatrix v;  // unimodular column transform, u * m * v == d
};

struct Signature {
    std::size_t n_plus = 0;
    std::size_t n_minus = 0;
    std::size_t n_zero = 0;
    bool operator==(const Signature&) const = default;
};

// Row-style Hermite normal form: nonzero rows on top, positive pivots with
// strictly increasing pivot columns, entries above each pivot reduced into
// [0, pivot).
HermiteResult hermite_normal_form(const IntMatrix& m);

// HNF rows only, with zero rows removed.
IntMatrix hnf_basis(const IntMatrix& m);

SmithResult smith_normal_form(const IntMatrix& m);

// Nonzero diagonal of the Smith form (the invariant factors, including 1s).
IntVector elementary_divisors(const IntMatrix& m);

// Saturated left kernel {x : x * m = 0} as an HNF-canonical row basis.
IntMatrix integer_kernel(const IntMatrix& m);

// Some integer row vector x with x * m == b, or nullopt.
std::optional<IntVector> solve_integer(const IntMatrix& m, const IntVector& b);

// Signature of a symmetric matrix by exact symmetric elimination over Q.
Signature rational_diagonalize_symmetric(const IntMatrix& g);

// Saturation of the row span inside Z^cols (HNF-canonical basis).
IntMatrix saturate_rows(const IntMatrix& m);

Integer content(const IntVector& v);  // gcd of entries, 0 for the zero vector
Integer dot(const IntVector& a, const IntVector& b);
bool is_zero(const IntVector& v);

// Floor/ceil division and canonical residues for Integer.
Integer floor_div(const Integer& a, const Integer& b);
Integer mod_floor(const Integer& a, const Integer& b);
Integer floor_rational(const Rational& q);
Integer ceil_rational(const Rational& q);

// Canonical representative of q in [0, m) for rational m > 0.
Rational mod_rational(const Rational& q, const Rational& m);

std::string to_string(const IntVector& v);
std::string to_string(const Rational& q);

}  // namespace lattika
