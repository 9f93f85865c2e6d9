#pragma once

#include <json.hpp>

#include "lattika/discriminant.hpp"
#include "lattika/embeddings.hpp"
#include "lattika/lattice.hpp"

namespace lattika {

using Json = nlohmann::json;

// Integers that fit in 64 bits are JSON numbers, larger ones decimal strings.
Json to_json(const Integer& z);
Integer integer_from_json(const Json& j);
Json to_json(const Rational& q);  // "p/q" or "p"
Rational rational_from_json(const Json& j);

Json to_json(const IntVector& v);
IntVector int_vector_from_json(const Json& j);
Json to_json(const IntMatrix& m);
IntMatrix int_matrix_from_json(const Json& j);
Json to_json(const RatVector& v);
RatVector rat_vector_from_json(const Json& j);

// {"label": str, "rank": int, "gram": [[int]]}; throws std::invalid_argument when malformed.
Json lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const Json& j);
Json vector_record(const IntVector& v);  // {"coords": [int]}
IntVector vector_from_record(const Json& j);

// {"orders", "q_num", "q_den", "b_num", "b_den"} over the generator list.
Json fqf_to_json(const FiniteQuadraticForm& f);
FiniteQuadraticForm fqf_from_json(const Json& j);

Json descriptor_to_json(const OrbitDescriptor& d);
Json embedding_to_json(const EmbeddingData& e);

}  // namespace lattika
