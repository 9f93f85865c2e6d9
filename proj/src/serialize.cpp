#include "lattika/serialize.hpp"

#include <stdexcept>

namespace lattika {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw std::invalid_argument("malformed JSON: " + what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

Json tri_json(Tri t) { return to_string(t); }

}  // namespace

Json to_json(const Integer& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

Integer integer_from_json(const Json& j) {
    if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        Integer z;
        if (z.set_str(j.get<std::string>(), 10) != 0) malformed("integer string");
        return z;
    }
    malformed("expected an integer");
}

Json to_json(const Rational& q) { return q.get_str(); }

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(integer_from_json(j));
    if (!j.is_string()) malformed("expected a rational");
    Rational q;
    if (q.set_str(j.get<std::string>(), 10) != 0 || q.get_den() == 0) malformed("rational string");
    q.canonicalize();
    return q;
}

Json to_json(const IntVector& v) {
    Json a = Json::array();
    for (const auto& z : v) a.push_back(to_json(z));
    return a;
}

IntVector int_vector_from_json(const Json& j) {
    if (!j.is_array()) malformed("expected an integer array");
    IntVector v;
    for (const auto& x : j) v.push_back(integer_from_json(x));
    return v;
}

Json to_json(const IntMatrix& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
    return a;
}

IntMatrix int_matrix_from_json(const Json& j) {
    if (!j.is_array()) malformed("expected a matrix");
    std::vector<IntVector> rows;
    for (const auto& r : j) rows.push_back(int_vector_from_json(r));
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (const auto& r : rows)
        if (r.size() != cols) malformed("ragged matrix");
    return IntMatrix::from_rows(rows, cols);
}

Json to_json(const RatVector& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_json(q));
    return a;
}

RatVector rat_vector_from_json(const Json& j) {
    if (!j.is_array()) malformed("expected a rational array");
    RatVector v;
    for (const auto& x : j) v.push_back(rational_from_json(x));
    return v;
}

Json lattice_to_json(const Lattice& l) {
    return Json{{"label", l.label()}, {"rank", l.rank()}, {"gram", to_json(l.gram())}};
}

Lattice lattice_from_json(const Json& j) {
    const auto& gram = field(j, "gram");
    IntMatrix g = int_matrix_from_json(gram);
    if (j.contains("rank")) {
        const auto& r = j.at("rank");
        if (!r.is_number_integer() || r.get<std::int64_t>() != static_cast<std::int64_t>(g.rows()))
            malformed("rank does not match the Gram matrix");
    }
    if (g.rows() != g.cols()) malformed("Gram matrix is not square");
    std::string label;
    if (j.contains("label")) {
        if (!j.at("label").is_string()) malformed("label must be a string");
        label = j.at("label").get<std::string>();
    }
    return Lattice(std::move(g), std::move(label));
}

Json vector_record(const IntVector& v) { return Json{{"coords", to_json(v)}}; }

IntVector vector_from_record(const Json& j) { return int_vector_from_json(field(j, "coords")); }

Json fqf_to_json(const FiniteQuadraticForm& f) {
    Json orders = Json::array(), qn = Json::array(), qd = Json::array(), bn = Json::array(), bd = Json::array();
    const std::size_t k = f.num_generators();
    for (std::size_t i = 0; i < k; ++i) {
        orders.push_back(f.orders()[i]);
        qn.push_back(to_json(Integer(f.values()(i, i).get_num())));
        qd.push_back(to_json(Integer(f.values()(i, i).get_den())));
        Json rn = Json::array(), rd = Json::array();
        for (std::size_t j = 0; j < k; ++j) {
            const Rational b = i == j ? mod_rational(f.values()(i, i), Rational(1)) : f.values()(i, j);
            rn.push_back(to_json(Integer(b.get_num())));
            rd.push_back(to_json(Integer(b.get_den())));
        }
        bn.push_back(rn);
        bd.push_back(rd);
    }
    return Json{{"orders", orders}, {"q_num", qn}, {"q_den", qd}, {"b_num", bn}, {"b_den", bd}};
}

FiniteQuadraticForm fqf_from_json(const Json& j) {
    const IntVector orders = int_vector_from_json(field(j, "orders"));
    const IntVector qn = int_vector_from_json(field(j, "q_num"));
    const IntVector qd = int_vector_from_json(field(j, "q_den"));
    const std::size_t k = orders.size();
    if (qn.size() != k || qd.size() != k) malformed("q arrays do not match orders");
    RatMatrix values(k, k);
    std::vector<long> ord;
    for (std::size_t i = 0; i < k; ++i) {
        if (!orders[i].fits_slong_p() || qd[i] == 0) malformed("orders or q denominators");
        ord.push_back(orders[i].get_si());
        values(i, i) = Rational(qn[i], qd[i]);
        values(i, i).canonicalize();
    }
    if (j.contains("b_num") || j.contains("b_den")) {
        const IntMatrix bn = int_matrix_from_json(field(j, "b_num"));
        const IntMatrix bd = int_matrix_from_json(field(j, "b_den"));
        if (bn.rows() != k || bd.rows() != k || (k > 0 && (bn.cols() != k || bd.cols() != k))) malformed("b matrices");
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                if (a == b) continue;
                if (bd(a, b) == 0) malformed("zero b denominator");
                values(a, b) = Rational(bn(a, b), bd(a, b));
                values(a, b).canonicalize();
            }
    } else if (k > 1) {
        malformed("b matrices required for more than one generator");
    }
    return FiniteQuadraticForm(std::move(ord), std::move(values));
}

Json descriptor_to_json(const OrbitDescriptor& d) {
    Json cls = Json::array();
    for (long c : d.disc_class) cls.push_back(c);
    return Json{{"norm", to_json(d.norm)}, {"div", to_json(d.div)}, {"class", cls}};
}

Json embedding_to_json(const EmbeddingData& e) {
    Json gamma = Json::array();
    for (const auto& [x, y] : e.gamma) gamma.push_back(Json{{"from", x}, {"to", y}});
    Json j{{"h_s_size", e.h_s.size()},
           {"h_n_size", e.h_n.size()},
           {"gamma", gamma},
           {"delta", fqf_to_json(e.delta)},
           {"k_signature", {e.k_signature.n_plus, e.k_signature.n_minus, e.k_signature.n_zero}},
           {"k_status", tri_json(e.k_status)},
           {"k_description", e.k_description}};
    if (e.k) j["k"] = lattice_to_json(*e.k);
    return j;
}

}  // namespace lattika
