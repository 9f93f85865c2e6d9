#pragma once

#include <optional>
#include <vector>

#include "lattika/isometry.hpp"
#include "lattika/lattice.hpp"

namespace lattika {

// The invariant lattice of the standard swap inside L, with an isometry eta onto M.
struct M0Embedding {
    Sublattice m0;    // invariant lattice of the swap, ambient L coordinates
    IntMatrix eta;    // m0 coordinates -> M coordinates
    IntMatrix basis;  // row i: the vector of L sent to the i-th basis vector of M

    IntVector to_M(const IntVector& ambient) const;  // throws outside m0
    IntVector from_M(const IntVector& m_coords) const;
};

M0Embedding make_M0_in_L();
const M0Embedding& standard_M0();  // computed once

struct IsotropicDecomposition {
    IntVector w;
    Integer m;      // divisibility of w in M
    Sublattice t;   // contains w, nondegenerate
    IntVector p;    // norm -2, divisibility 2 in M, in r
    Sublattice r;   // t^perp in M
    IntVector e;    // standard basis of a U inside r orthogonal to p
    IntVector f;
    Sublattice r_prime;  // complement of U + <p> in r
    IntVector normal_form;   // g(w): e1 or 2e1 - (c/4) f1 + v
    std::optional<IntVector> v;  // the E8(-2) vector when m = 2
    Isometry g;
};

// For a primitive isotropic w of M; verifies every property before returning.
IsotropicDecomposition decompose_isotropic(const IntVector& w);

struct SequenceSpec {
    IntVector base_w;  // in L, inside M0
    long k = 0;
    std::size_t count = 1;
};

struct SequenceVector {
    IntVector coords;  // in L
    Integer norm;
    bool primitive = false;
    Integer div_M;
    Integer div_L;
    bool orthogonal_to_q = false;
};

struct SequenceResult {
    std::vector<SequenceVector> vectors;
    std::optional<IntVector> q;  // k = 0: eta^-1(p)
    IntVector p_in_L;
    bool p_splits_L = false;    // eta^-1(p) + its complement = L
    Rational convergence_constant;  // |w_n / s_n - w_0| <= C / n entrywise
};

// k even: eta^-1(n w + e + k f); k odd: eta^-1(2n w + p + 2e + ((k+1)/2) f), n = 1..count.
SequenceResult norm2k_sequence(const SequenceSpec& spec);

// x + x^perp = l, checked through determinants.
bool splits_orthogonally(const Lattice& l, const IntVector& x);

// Primitive, norm -2, divisibility 2 in L and inside M0.
bool is_exceptional(const IntVector& v);

}  // namespace lattika
