#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lattika/discriminant.hpp"
#include "lattika/isometry.hpp"
#include "lattika/lattice.hpp"

namespace lattika {

// Initial L1 radius of bounded searches; LATTIKA_SEARCH_RADIUS overrides the default 4.
long search_radius();
inline constexpr long kSearchRadiusCap = 64;
// Total candidate evaluations allowed across all radii of one search.
inline constexpr std::size_t kSearchCandidateCap = 4'000'000;

struct USplit {
    Sublattice u;     // rows e, f with Gram [[0,1],[1,0]]
    Sublattice rest;  // orthogonal complement of u
};

// Finds an internal decomposition l = U + rest; nullopt for definite lattices
// or when the bounded search is exhausted.
std::optional<USplit> split_off_U(const Lattice& l);

// x -> x - (a,x) e + (e,x) a - (a,a)/2 (e,x) e  for isotropic e and a orthogonal to e.
Isometry eichler_transvection(const Lattice& l, const IntVector& e, const IntVector& a);

struct Transvection {
    IntVector e;
    IntVector a;
};

struct OrbitDescriptor {
    Integer norm;
    Integer div;
    Element disc_class;  // class of v/div in discriminant_form(l)
    bool operator==(const OrbitDescriptor&) const = default;
};

OrbitDescriptor orbit_descriptor(const DiscriminantForm& d, const IntVector& v);

class InvariantMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EichlerMap {
    Isometry g;
    std::vector<Transvection> factors;  // g = t_k o ... o t_1, t_i = factors[i-1]
};

// Works with a fixed splitting l = U + U + N.
class EichlerEngine {
public:
    explicit EichlerEngine(const Lattice& l);  // throws if two U summands are not found

    const Lattice& lattice() const { return lattice_; }
    const DiscriminantForm& discriminant() const { return disc_; }
    const IntVector& e() const { return e_; }
    const IntVector& f() const { return f_; }
    const IntVector& e1() const { return e1_; }
    const IntVector& f1() const { return f1_; }
    const Sublattice& rest() const { return rest_; }

    // Isometry taking v to m e + c f + u with u a fixed representative of its class.
    EichlerMap to_normal_form(const IntVector& v) const;
    EichlerMap map(const IntVector& v, const IntVector& w) const;

    // A primitive vector with the given norm, divisibility and class, if one exists.
    std::optional<IntVector> realize(const Integer& norm, const Integer& div, const Element& cls) const;

private:
    Lattice lattice_;
    DiscriminantForm disc_;
    IntVector e_, f_, e1_, f1_;
    Sublattice rest_;
    DiscriminantForm rest_disc_;
    RatMatrix adapted_inverse_;  // inverse of the basis e, f, e1, f1, rest

    IntVector rest_part(const IntVector& v) const;  // coordinates in rest
    Element rest_class(const Element& cls) const;   // A_l -> A_rest
};

EichlerMap eichler_map(const Lattice& l, const IntVector& v, const IntVector& w);

// Orbits of O(q) on a list of elements: invariant prefilter, then pointed isometry search.
struct ElementOrbits {
    std::vector<std::size_t> orbit_of;  // per input element
    std::size_t count = 0;
    bool certified = true;  // false when some search ran out of budget
};
ElementOrbits element_orbits(const FiniteQuadraticForm& f, const std::vector<Element>& xs,
                             std::size_t max_order = std::size_t{1} << 10);

struct Classification {
    std::vector<OrbitDescriptor> descriptors;
    std::vector<IntVector> witnesses;
    std::vector<std::size_t> orbit_of;  // O(l)-orbit of each descriptor
    std::size_t num_orbits = 0;
    bool orbits_certified = true;
};

// All realizable (norm, divisibility, class) triples of primitive vectors.
Classification classify_primitive_vectors(const Lattice& l, const Integer& norm);

struct EmbeddingData {
    Subgroup h_s;
    Subgroup h_n;
    std::vector<std::pair<Element, Element>> gamma;  // generator of h_s -> image in h_n, q-preserving
    FiniteQuadraticForm delta;                       // (q_S + -q_N) on Gamma^perp / Gamma
    Signature k_signature;
    Tri k_status = Tri::unknown;                     // yes when a named complement was built
    std::optional<Lattice> k;
    std::string k_description;
    std::vector<Element> gamma_k;                    // isometry A_K -> -delta when k is set
};

struct EmbeddingList {
    std::vector<EmbeddingData> classes;
    bool orbits_certified = true;
};

// Embedding guard: |A_S| <= 2^8, |A_N| <= 2^10.
EmbeddingList enumerate_primitive_embeddings(const Lattice& s, const Lattice& n);

struct LambdaExtension {
    Lattice lambda;
    Sublattice emb;  // L inside lambda
    Isometry g_bar;
};

// Realizes the unimodular overlattice of L + (2) and extends g by the identity on (2).
LambdaExtension extend_isometry_L_to_Lambda(const Isometry& g);

}  // namespace lattika
