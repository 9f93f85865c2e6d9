#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lattika/discriminant.hpp"
#include "lattika/isometry.hpp"
#include "lattika/lattice.hpp"

namespace lattika {

// T_g = saturated kernel of g - 1, S_g = T_g^perp. Both require g of finite order.
Sublattice invariant_lattice(const Isometry& g);
Sublattice coinvariant_lattice(const Isometry& g);

// Intersection of the invariant lattices of all generators, saturated once.
Sublattice joint_invariant_lattice(const Lattice& l, const std::vector<Isometry>& gens);

// Restriction of g to a g-stable sublattice, in the sublattice's coordinates.
Isometry restrict_to(const Isometry& g, const Sublattice& s);

// Exchanges the two E8(-1) blocks of L, identity on U^3 + (-2).
Isometry standard_swap_involution_L();

struct EigenQuotient {
    IntVector invariants;  // elementary divisors > 1 of l / (T + S)
    Integer order;
    Integer exponent;
};
EigenQuotient eigen_quotient(const Isometry& g);

// Exponent of l / (T_g + S_g); throws for non-involutions, asserts that it divides 2.
Integer torsion_exponent_of_quotient(const Lattice& l, const Isometry& g);

inline constexpr std::size_t kDefiniteRankGuard = 12;
inline constexpr std::size_t kDefiniteNodeBudget = 5'000'000;

// u with u^T gram_b u = gram_a (columns: images of the basis of a in b), or nullopt.
// Throws for indefinite input and GuardExceeded above rank 12 or when the search budget runs out.
std::optional<IntMatrix> is_isometric_definite(const Lattice& a, const Lattice& b);

struct TSwapReport {
    bool matches = false;
    std::string reason;
    Sublattice t;
    Sublattice s;
    std::vector<IntMatrix> u_planes;     // rows e, f of each split plane, ambient coordinates
    IntMatrix rest;                      // rows of the definite rank-9 rest, ambient coordinates
    IntMatrix rest_witness;              // rest basis -> E8(-2) + (-2)
    IntMatrix m_basis;                   // rows: ambient vectors with Gram equal to that of M
    IntMatrix eta;                       // T coordinates -> M coordinates
    std::optional<IntMatrix> s_witness;  // S basis -> E8(-2)
};

// Splits U three times off T_g and matches the rest against E8(-2) + (-2).
TSwapReport identify_T_swap(const Lattice& l, const Isometry& g);

struct DiscriminantAction {
    DiscriminantForm disc;
    std::vector<Element> images;  // image of each generator of A
    bool is_identity() const;
};

DiscriminantAction induced_discriminant_action(const Isometry& g);

inline constexpr std::size_t kGroupClosureGuard = 10'000;

struct NikulinCertificate {
    bool passed = false;
    std::string reason;
    std::size_t group_order = 0;
    Sublattice s;
    Signature s_signature;
    bool negative_definite = false;
    std::vector<IntVector> roots;  // norm -2 vectors of S, ambient coordinates
    Integer minimal_norm = 0;      // of S, when definite and nonzero
    std::size_t minimal_count = 0;
    bool trivial_on_discriminant = false;
};

NikulinCertificate nikulin_conditions_report(const Lattice& l, const std::vector<Isometry>& gens);

}  // namespace lattika
