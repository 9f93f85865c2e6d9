#include "lattika/isometry.hpp"

#include <stdexcept>

namespace lattika {

Isometry::Isometry(Lattice home, IntMatrix matrix) : home_(std::move(home)), matrix_(std::move(matrix)) {
    const std::size_t n = home_.rank();
    if (matrix_.rows() != n || matrix_.cols() != n) throw std::invalid_argument("isometry: matrix shape mismatch");
    if (matrix_.transpose() * home_.gram() * matrix_ != home_.gram())
        throw std::invalid_argument("isometry: matrix does not preserve the Gram matrix");
}

Isometry Isometry::identity(const Lattice& l) { return Isometry(l, IntMatrix::identity(l.rank())); }

Isometry Isometry::compose(const Isometry& inner) const {
    if (inner.home_.gram() != home_.gram()) throw std::invalid_argument("isometry: composing maps of different lattices");
    return Isometry(home_, matrix_ * inner.matrix_);
}

Isometry Isometry::inverse() const { return Isometry(home_, matrix_.unimodular_inverse()); }

Isometry Isometry::power(long k) const {
    if (k < 0) return inverse().power(-k);
    IntMatrix result = IntMatrix::identity(home_.rank()), base = matrix_;
    while (k > 0) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return Isometry(home_, result);
}

bool Isometry::is_identity() const { return matrix_ == IntMatrix::identity(home_.rank()); }

std::optional<long> Isometry::order(long cap) const {
    if (order_ && (order_->has_value() || order_cap_ >= cap)) {
        if (order_->has_value() && **order_ > cap) return std::nullopt;
        return *order_;
    }
    const IntMatrix id = IntMatrix::identity(home_.rank());
    IntMatrix p = matrix_;
    std::optional<long> found;
    for (long k = 1; k <= cap; ++k) {
        if (p == id) {
            found = k;
            break;
        }
        p = p * matrix_;
    }
    order_ = found;
    order_cap_ = cap;
    return found;
}

Sublattice apply(const Isometry& g, const Sublattice& s) {
    return Sublattice(s.ambient(), (g.matrix() * s.gens().transpose()).transpose());
}

}  // namespace lattika
