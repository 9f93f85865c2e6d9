#pragma once

#include <optional>

#include "lattika/lattice.hpp"

namespace lattika {

// Integer matrix acting on column coordinate vectors with g^T * gram * g == gram.
class Isometry {
public:
    Isometry(Lattice home, IntMatrix matrix);  // throws unless Gram-preserving
    static Isometry identity(const Lattice& l);

    const Lattice& home() const { return home_; }
    const IntMatrix& matrix() const { return matrix_; }

    IntVector apply(const IntVector& x) const { return matrix_.right_mul(x); }
    Isometry compose(const Isometry& inner) const;  // this after inner
    Isometry inverse() const;
    Isometry power(long k) const;
    bool is_identity() const;

    // Smallest k <= cap with g^k = 1, computed on first request.
    std::optional<long> order(long cap = 64) const;

    bool operator==(const Isometry& o) const { return matrix_ == o.matrix_; }

private:
    Lattice home_;
    IntMatrix matrix_;
    mutable std::optional<std::optional<long>> order_;
    mutable long order_cap_ = 0;
};

// Image of a sublattice: rows g * gen.
Sublattice apply(const Isometry& g, const Sublattice& s);

}  // namespace lattika
