#include "lattika/embeddings.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace lattika {

namespace {

IntVector scaled(const Integer& k, const IntVector& x) {
    IntVector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = k * x[i];
    return y;
}

IntVector plus(const IntVector& a, const IntVector& b) {
    IntVector y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] + b[i];
    return y;
}

IntVector minus(const IntVector& a, const IntVector& b) { return plus(a, scaled(-1, b)); }

RatVector to_rational(const IntVector& v) { return RatVector(v.begin(), v.end()); }

std::optional<IntVector> to_integral(const RatVector& v) {
    IntVector out;
    for (const auto& q : v) {
        if (q.get_den() != 1) return std::nullopt;
        out.push_back(q.get_num());
    }
    return out;
}

long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in a machine word");
    return z.get_si();
}

Rational mod2(const Rational& q) { return mod_rational(q, Rational(2)); }

}  // namespace

long search_radius() {
    const char* env = std::getenv("LATTIKA_SEARCH_RADIUS");
    if (!env) return 4;
    char* end = nullptr;
    long r = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || r < 1) return 4;
    return std::min(r, kSearchRadiusCap);
}

// ---------------------------------------------------------------- U splitting

std::optional<USplit> split_off_U(const Lattice& l) {
    const std::size_t n = l.rank();
    if (n < 2 || l.is_definite()) return std::nullopt;

    std::vector<std::vector<long>> g(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g[i][j] = to_long(l.gram()(i, j));

    std::vector<long> x(n, 0);
    std::vector<std::size_t> support;
    std::size_t evaluated = 0;
    std::optional<IntVector> found;

    auto test = [&]() {
        ++evaluated;
        long nrm = 0;
        for (std::size_t i : support)
            for (std::size_t j : support) nrm += x[i] * g[i][j] * x[j];
        if (nrm != 0) return;
        IntVector v(x.begin(), x.end());
        if (content(v) != 1 || l.divisibility(v) != 1) return;
        found = v;
    };
    // all vectors with L1 norm exactly rem on positions pos..n-1
    std::function<bool(std::size_t, long)> layer = [&](std::size_t pos, long rem) -> bool {
        if (rem == 0) {
            test();
            return found.has_value() || evaluated > kSearchCandidateCap;
        }
        if (pos == n) return false;
        if (layer(pos + 1, rem)) return true;
        support.push_back(pos);
        for (long a = 1; a <= rem; ++a)
            for (long sgn : {1L, -1L}) {
                x[pos] = sgn * a;
                if (layer(pos + 1, rem - a)) {
                    x[pos] = 0;
                    support.pop_back();
                    return true;
                }
            }
        x[pos] = 0;
        support.pop_back();
        return false;
    };

    long radius = search_radius(), covered = 0;
    while (!found) {
        for (long s = covered + 1; s <= radius && !found; ++s)
            if (layer(0, s) && !found) return std::nullopt;  // candidate cap reached
        covered = radius;
        if (found || radius >= kSearchRadiusCap) break;
        radius = std::min(2 * radius, kSearchRadiusCap);
    }
    if (!found) return std::nullopt;

    const IntVector& e = *found;
    IntMatrix ge(n, 1);
    IntVector gev = l.gram().right_mul(e);
    for (std::size_t i = 0; i < n; ++i) ge(i, 0) = gev[i];
    auto y = solve_integer(ge, IntVector{1});
    if (!y) return std::nullopt;
    IntVector f = minus(*y, scaled(l.norm(*y) / 2, e));

    IntMatrix ugens(2, n);
    ugens.set_row(0, e);
    ugens.set_row(1, f);
    Sublattice u(l, ugens);
    if (u.induced_gram() != IntMatrix{{0, 1}, {1, 0}}) throw std::logic_error("split_off_U: partner adjustment failed");
    Sublattice rest = orthogonal_complement(u);
    const Integer rest_det = rest.rank() == 0 ? Integer(1) : rest.induced_gram().determinant();
    if (-rest_det != l.determinant()) throw std::logic_error("split_off_U: U + complement has nontrivial index");
    return USplit{u, rest};
}

// ---------------------------------------------------------------- transvections

namespace {

// In place: m <- t(e,a) * m and v <- t(e,a) v, without re-verification.
void apply_transvection(const Lattice& l, const IntVector& e, const IntVector& a, IntMatrix& m, IntVector& v) {
    const IntVector ga = l.gram().right_mul(a), gev = l.gram().right_mul(e);
    const Integer half = l.norm(a) / 2;
    const std::size_t n = l.rank();
    // rows (Ga)^T m and (Ge)^T m
    IntVector ra(m.cols(), Integer(0)), re(m.cols(), Integer(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (ga[i] == 0 && gev[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (ga[i] != 0) ra[j] += ga[i] * m(i, j);
            if (gev[i] != 0) re[j] += gev[i] * m(i, j);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (e[i] == 0 && a[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += -e[i] * ra[j] + a[i] * re[j] - half * e[i] * re[j];
    }
    const Integer pa = dot(ga, v), pe = dot(gev, v);
    for (std::size_t i = 0; i < n; ++i) v[i] += -pa * e[i] + pe * a[i] - half * pe * e[i];
}

void check_transvection_input(const Lattice& l, const IntVector& e, const IntVector& a) {
    if (e.size() != l.rank() || a.size() != l.rank()) throw std::invalid_argument("transvection: vector length mismatch");
    if (l.norm(e) != 0) throw std::invalid_argument("transvection: e is not isotropic");
    if (l.pair(e, a) != 0) throw std::invalid_argument("transvection: a is not orthogonal to e");
}

}  // namespace

Isometry eichler_transvection(const Lattice& l, const IntVector& e, const IntVector& a) {
    check_transvection_input(l, e, a);
    IntMatrix m = IntMatrix::identity(l.rank());
    IntVector dummy(l.rank(), Integer(0));
    apply_transvection(l, e, a, m, dummy);
    return Isometry(l, m);
}

OrbitDescriptor orbit_descriptor(const DiscriminantForm& d, const IntVector& v) {
    OrbitDescriptor od;
    od.norm = d.lattice.norm(v);
    od.div = d.lattice.divisibility(v);
    RatVector y = to_rational(v);
    for (auto& c : y) c /= Rational(od.div);
    od.disc_class = d.class_of(y);
    return od;
}

// ---------------------------------------------------------------- Eichler engine

EichlerEngine::EichlerEngine(const Lattice& l)
    : lattice_(l), disc_(discriminant_form(l)), rest_(l, IntMatrix(0, l.rank())), rest_disc_(disc_) {
    auto s1 = split_off_U(l);
    if (!s1) throw std::invalid_argument("EichlerEngine: no hyperbolic plane found");
    const Lattice r1 = sublattice_as_lattice(s1->rest);
    auto s2 = split_off_U(r1);
    if (!s2) throw std::invalid_argument("EichlerEngine: no second hyperbolic plane found");
    e_ = s1->u.gens().row(0);
    f_ = s1->u.gens().row(1);
    e1_ = s1->rest.to_ambient(s2->u.gens().row(0));
    f1_ = s1->rest.to_ambient(s2->u.gens().row(1));
    rest_ = Sublattice(l, s2->rest.gens() * s1->rest.gens());
    rest_disc_ = discriminant_form(sublattice_as_lattice(rest_));

    IntMatrix p(0, l.rank());
    for (const auto* v : {&e_, &f_, &e1_, &f1_}) p.append_row(*v);
    for (std::size_t i = 0; i < rest_.rank(); ++i) p.append_row(rest_.gens().row(i));
    auto inv = RatMatrix(p).inverse();
    if (!inv || !inv->is_integral()) throw std::logic_error("EichlerEngine: adapted basis is not unimodular");
    adapted_inverse_ = *inv;
}

IntVector EichlerEngine::rest_part(const IntVector& v) const {
    RatVector c = adapted_inverse_.left_mul(to_rational(v));
    IntVector out;
    for (std::size_t i = 4; i < c.size(); ++i) out.push_back(c[i].get_num());
    return out;
}

Element EichlerEngine::rest_class(const Element& cls) const {
    RatVector c = adapted_inverse_.left_mul(disc_.lift(cls));
    return rest_disc_.class_of(RatVector(c.begin() + 4, c.end()));
}

EichlerMap EichlerEngine::to_normal_form(const IntVector& v) const {
    const Lattice& l = lattice_;
    if (is_zero(v)) throw std::invalid_argument("normal form of the zero vector");
    IntMatrix gm = IntMatrix::identity(l.rank());
    IntVector cur = v;
    std::vector<Transvection> factors;
    auto tv = [&](const IntVector& ep, const IntVector& a) {
        if (is_zero(a)) return;
        apply_transvection(l, ep, a, gm, cur);
        factors.push_back({ep, a});
    };
    // X = [[x00, x01], [x10, x11]] = [[(v,f), (v,f1)], [-(v,e1), (v,e)]]
    Integer x00, x01, x10, x11;
    auto read = [&] {
        x00 = l.pair(cur, f_);
        x01 = l.pair(cur, f1_);
        x10 = -l.pair(cur, e1_);
        x11 = l.pair(cur, e_);
    };
    auto col0_minus = [&](const Integer& k) { tv(e_, scaled(k, f1_)); read(); };   // col0 -= k col1
    auto col1_plus = [&](const Integer& k) { tv(f_, scaled(k, e1_)); read(); };    // col1 += k col0
    auto row0_plus = [&](const Integer& k) { tv(e_, scaled(k, e1_)); read(); };    // row0 += k row1
    auto row1_minus = [&](const Integer& k) { tv(f_, scaled(k, f1_)); read(); };   // row1 -= k row0

    auto reduce = [&] {
        read();
        while (true) {
            if (x01 != 0) {
                while (x01 != 0) {
                    if (x00 == 0) col0_minus(-1);
                    col1_plus(-floor_div(x01, x00));
                    if (x01 == 0) break;
                    col0_minus(floor_div(x00, x01));
                }
                continue;
            }
            if (x10 != 0) {
                while (x10 != 0) {
                    if (x00 == 0) row0_plus(1);
                    row1_minus(floor_div(x10, x00));
                    if (x10 == 0) break;
                    row0_plus(-floor_div(x00, x10));
                }
                continue;
            }
            if ((x00 == 0 && x11 != 0) || (x00 != 0 && x11 % x00 != 0)) {
                row0_plus(1);
                continue;
            }
            break;
        }
        if (x00 < 0) {
            for (int rep = 0; rep < 2; ++rep) {
                row0_plus(1);
                row1_minus(1);
                row0_plus(1);
            }
        }
    };

    reduce();
    IntVector vn = rest_part(cur);
    if (!is_zero(vn)) {
        const IntMatrix rg = rest_.induced_gram();
        IntVector pairings = rg.right_mul(vn);
        const Integer gamma = content(pairings);
        IntMatrix col(pairings.size(), 1);
        for (std::size_t i = 0; i < pairings.size(); ++i) col(i, 0) = pairings[i];
        auto c = solve_integer(col, IntVector{gamma});
        tv(e1_, scaled(-1, rest_.to_ambient(*c)));
        reduce();
    }
    const Integer m = x00;
    if (m != l.divisibility(v)) throw std::logic_error("normal form: leading coefficient differs from divisibility");

    vn = rest_part(cur);
    RatVector y = to_rational(vn);
    for (auto& q : y) q /= Rational(m);
    RatVector lift = rest_disc_.lift(rest_disc_.class_of(y));
    IntVector z(vn.size());
    for (std::size_t i = 0; i < vn.size(); ++i) {
        Rational uc = lift[i] * Rational(m);
        Rational zi = (Rational(vn[i]) - uc) / Rational(m);
        if (uc.get_den() != 1 || zi.get_den() != 1) throw std::logic_error("normal form: representative not integral");
        z[i] = zi.get_num();
    }
    tv(f_, scaled(-1, rest_.to_ambient(z)));
    return EichlerMap{Isometry(l, gm), factors};
}

EichlerMap EichlerEngine::map(const IntVector& v, const IntVector& w) const {
    const auto dv = orbit_descriptor(disc_, v), dw = orbit_descriptor(disc_, w);
    if (dv.norm != dw.norm)
        throw InvariantMismatch("norms differ: " + dv.norm.get_str() + " vs " + dw.norm.get_str());
    if (dv.div != dw.div)
        throw InvariantMismatch("divisibilities differ: " + dv.div.get_str() + " vs " + dw.div.get_str());
    if (dv.disc_class != dw.disc_class) throw InvariantMismatch("discriminant classes differ");
    if (!is_primitive_vector(v) || !is_primitive_vector(w)) throw InvariantMismatch("vectors must be primitive");

    auto nv = to_normal_form(v), nw = to_normal_form(w);
    if (nv.g.apply(v) != nw.g.apply(w)) throw std::logic_error("eichler_map: normal forms disagree");
    EichlerMap out{nw.g.inverse().compose(nv.g), nv.factors};
    for (auto it = nw.factors.rbegin(); it != nw.factors.rend(); ++it) out.factors.push_back({it->e, scaled(-1, it->a)});
    if (out.g.apply(v) != w) throw std::logic_error("eichler_map: composite does not send v to w");
    return out;
}

std::optional<IntVector> EichlerEngine::realize(const Integer& norm, const Integer& div, const Element& cls) const {
    if (div <= 0 || disc_.form.element_order(cls) != div) return std::nullopt;
    const Element xn = rest_class(cls);
    RatVector lift = rest_disc_.lift(xn);
    for (auto& q : lift) q *= Rational(div);
    auto u = to_integral(lift);
    if (!u) return std::nullopt;
    const Integer nu = dot(rest_.induced_gram().right_mul(*u), *u);
    const Integer num = norm - nu;
    if (num % (2 * div) != 0) return std::nullopt;
    const Integer c = num / (2 * div);
    if (c % div != 0) return std::nullopt;
    IntVector v = plus(plus(scaled(div, e_), scaled(c, f_)), rest_.to_ambient(*u));
    if (!is_primitive_vector(v)) return std::nullopt;
    if (!(orbit_descriptor(disc_, v) == OrbitDescriptor{norm, div, cls})) return std::nullopt;
    return v;
}

EichlerMap eichler_map(const Lattice& l, const IntVector& v, const IntVector& w) { return EichlerEngine(l).map(v, w); }

// ---------------------------------------------------------------- orbits and classification

ElementOrbits element_orbits(const FiniteQuadraticForm& f, const std::vector<Element>& xs, std::size_t max_order) {
    ElementOrbits out;
    out.orbit_of.assign(xs.size(), 0);
    InvariantTable table;
    const auto ids = element_invariant_ids(f, table);
    std::vector<int> invs;
    for (const auto& x : xs) invs.push_back(ids[f.index_of(f.reduce(x))]);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        bool placed = false;
        for (std::size_t r = 0; r < reps.size() && !placed; ++r) {
            const std::size_t j = reps[r];
            if (invs[i] != invs[j]) continue;
            if (xs[i] == xs[j]) {
                out.orbit_of[i] = r;
                placed = true;
                break;
            }
            FqfIsometry res;
            try {
                res = find_isometry(f, f, {{xs[j], xs[i]}}, max_order);
            } catch (const std::invalid_argument&) {
                res.status = Tri::unknown;
            }
            if (res.status == Tri::yes) {
                out.orbit_of[i] = r;
                placed = true;
            } else if (res.status == Tri::unknown) {
                out.certified = false;
            }
        }
        if (!placed) {
            out.orbit_of[i] = reps.size();
            reps.push_back(i);
        }
    }
    out.count = reps.size();
    return out;
}

Classification classify_primitive_vectors(const Lattice& l, const Integer& norm) {
    if (norm % 2 != 0) throw std::invalid_argument("classify: norms in an even lattice are even");
    EichlerEngine engine(l);
    const auto& f = engine.discriminant().form;
    const std::size_t n = f.order_checked();
    long exponent = 1;
    for (long o : f.orders()) exponent = std::lcm(exponent, o);

    Classification out;
    for (long m = 1; m <= exponent; ++m) {
        if (exponent % m) continue;
        std::vector<Element> classes;
        const Rational target = mod2(Rational(norm) / Rational(m * m));
        for (std::size_t i = 0; i < n; ++i) {
            Element x = f.element_at(i);
            if (f.element_order(x) != m || f.q(x) != target) continue;
            auto w = engine.realize(norm, m, x);
            if (!w) continue;
            classes.push_back(x);
            out.descriptors.push_back({norm, m, x});
            out.witnesses.push_back(*w);
        }
        if (classes.empty()) continue;
        auto orbits = element_orbits(f, classes);
        for (std::size_t idx : orbits.orbit_of) out.orbit_of.push_back(out.num_orbits + idx);
        out.num_orbits += orbits.count;
        out.orbits_certified = out.orbits_certified && orbits.certified;
    }
    return out;
}

// ---------------------------------------------------------------- Nikulin quintuples

namespace {

std::vector<Subgroup> all_subgroups(const FiniteQuadraticForm& f) {
    const std::size_t n = f.order_checked();
    std::set<std::vector<std::size_t>> seen;
    std::vector<Subgroup> out{trivial_subgroup(f)};
    seen.insert(out[0].elements);
    for (std::size_t head = 0; head < out.size(); ++head) {
        const Subgroup h = out[head];
        for (std::size_t i = 1; i < n; ++i) {
            if (h.contains(i)) continue;
            std::vector<Element> gens = h.generators;
            gens.push_back(f.element_at(i));
            Subgroup bigger = span(f, gens);
            if (seen.insert(bigger.elements).second) {
                if (out.size() >= kTableGuard) throw GuardExceeded("subgroup enumeration exceeds the guard");
                out.push_back(std::move(bigger));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.elements < b.elements;
    });
    return out;
}

// All injective q-preserving homomorphisms from the form with basis `src` into dst,
// as image lists of the basis.
std::vector<std::vector<Element>> injective_isometric_maps(const FiniteQuadraticForm& src, const FiniteQuadraticForm& dst,
                                                           std::size_t cap) {
    const std::size_t n = dst.order_checked();
    const std::size_t k = src.num_generators();
    std::vector<std::vector<Element>> out;
    std::vector<char> flag(n, 0);
    flag[0] = 1;
    std::vector<std::size_t> members{0};
    std::vector<Element> images;
    std::function<void(std::size_t)> rec = [&](std::size_t level) {
        if (level == k) {
            if (out.size() >= cap) throw GuardExceeded("too many isometric embeddings of a subgroup");
            out.push_back(images);
            return;
        }
        const long d = src.orders()[level];
        for (std::size_t i = 1; i < n; ++i) {
            Element y = dst.element_at(i);
            if (dst.element_order(y) != d || dst.q(y) != src.values()(level, level)) continue;
            bool ok = true;
            for (std::size_t j = 0; j < level && ok; ++j) ok = dst.b(y, images[j]) == src.values()(level, j);
            for (long t = 1; t < d && ok; ++t) ok = !flag[dst.index_of(dst.scale(t, y))];
            if (!ok) continue;
            const std::size_t mark = members.size();
            // extend the span by multiples of y
            std::vector<std::size_t> base(members.begin(), members.end());
            for (long t = 1; t < d; ++t) {
                Element ty = dst.scale(t, y);
                for (std::size_t b : base) {
                    std::size_t idx = dst.index_of(dst.add(dst.element_at(b), ty));
                    if (!flag[idx]) {
                        flag[idx] = 1;
                        members.push_back(idx);
                    }
                }
            }
            images.push_back(y);
            rec(level + 1);
            images.pop_back();
            for (std::size_t t = mark; t < members.size(); ++t) flag[members[t]] = 0;
            members.resize(mark);
        }
    };
    rec(0);
    return out;
}

struct Candidate {
    std::size_t subgroup;                 // index into the subgroup list of A_S
    std::vector<Element> images;          // images of the subgroup basis
};

std::string describe_parts(long a, long b, long c, long d, long e) {
    std::vector<std::string> parts;
    auto add = [&](long count, const std::string& name) {
        if (count == 1) parts.push_back(name);
        else if (count > 1) parts.push_back(name + "^" + std::to_string(count));
    };
    add(a, "U");
    add(b, "E8(-1)");
    add(c, "E8(-2)");
    add(d, "(2)");
    add(e, "(-2)");
    if (parts.empty()) return "0";
    std::string s = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) s += "+" + parts[i];
    return s;
}

// Searches direct sums of named lattices with the given signature and discriminant form.
void build_complement(EmbeddingData& data) {
    const FiniteQuadraticForm target = data.delta.negated();
    const long kp = static_cast<long>(data.k_signature.n_plus), km = static_cast<long>(data.k_signature.n_minus);
    if (kp + km == 0) {
        if (target.num_generators() == 0) {
            data.k = direct_sum({});
            data.k_description = "0";
            data.k_status = Tri::yes;
        }
        return;
    }
    Integer order = target.order();
    long log2 = 0;
    while (order > 1 && order % 2 == 0) {
        order /= 2;
        ++log2;
    }
    if (order != 1) return;
    const FqfInvariants want = fqf_invariants(target);
    for (long a = std::min(kp, km); a >= 0; --a) {
        const long d = kp - a;
        const long neg = km - a;
        for (long b = neg / 8; b >= 0; --b)
            for (long c = (neg - 8 * b) / 8; c >= 0; --c) {
                const long e = neg - 8 * b - 8 * c;
                if (8 * c + d + e != log2) continue;
                std::vector<Lattice> parts;
                for (long i = 0; i < a; ++i) parts.push_back(make_U());
                for (long i = 0; i < b; ++i) parts.push_back(make_E8(-1));
                for (long i = 0; i < c; ++i) parts.push_back(make_E8(-2));
                for (long i = 0; i < d; ++i) parts.push_back(make_rank_one(2));
                for (long i = 0; i < e; ++i) parts.push_back(make_rank_one(-2));
                Lattice k = direct_sum(parts, describe_parts(a, b, c, d, e));
                auto dk = discriminant_form(k);
                if (!(fqf_invariants(dk.form) == want)) continue;
                auto iso = find_isometry(dk.form, target, {}, std::size_t{1} << 10);
                if (iso.status != Tri::yes) continue;
                data.k = k;
                data.k_description = k.label();
                data.gamma_k = iso.images;
                data.k_status = Tri::yes;
                return;
            }
    }
}

}  // namespace

EmbeddingList enumerate_primitive_embeddings(const Lattice& s, const Lattice& n) {
    if (s.rank() > n.rank()) throw std::invalid_argument("embedding: source rank exceeds target rank");
    const auto ds = discriminant_form(s), dn = discriminant_form(n);
    const FiniteQuadraticForm& as = ds.form;
    const FiniteQuadraticForm& an = dn.form;
    if (as.order() > 256) throw GuardExceeded("embedding: |A_S| above 2^8");
    if (an.order() > 1024) throw GuardExceeded("embedding: |A_N| above 2^10");

    const Signature ss = s.signature(), sn = n.signature();
    EmbeddingList out;
    if (ss.n_plus > sn.n_plus || ss.n_minus > sn.n_minus) return out;

    const auto subgroups = all_subgroups(as);
    std::vector<Subquotient> bases;  // basis of each subgroup via subquotient by the trivial group
    for (const auto& h : subgroups) bases.push_back(subquotient(as, h, trivial_subgroup(as)));

    // O(q_S) as image lists of the generators of A_S
    std::vector<std::vector<Element>> aut_s;
    try {
        aut_s = injective_isometric_maps(as, as, 10'000);
    } catch (const GuardExceeded&) {
        aut_s = {};
        for (std::size_t i = 0; i < as.num_generators(); ++i) {
            if (aut_s.empty()) aut_s.emplace_back();
            aut_s[0].push_back(as.generator(i));
        }
        if (aut_s.empty()) aut_s.emplace_back();
        out.orbits_certified = false;
    }

    InvariantTable table;
    const auto an_ids = element_invariant_ids(an, table);
    auto inv_of = [&](const Element& y) { return an_ids[an.index_of(an.reduce(y))]; };

    std::vector<Candidate> reps;
    for (std::size_t hi = 0; hi < subgroups.size(); ++hi) {
        for (auto& images : injective_isometric_maps(bases[hi].form, an, 100'000)) {
            Candidate cand{hi, images};
            bool equivalent = false;
            for (const auto& rep : reps) {
                if (subgroups[rep.subgroup].size() != subgroups[hi].size()) continue;
                const auto& hb = bases[hi];
                const auto& rb = bases[rep.subgroup];
                for (const auto& lam : aut_s) {
                    // lam maps the subgroup of rep onto ours?
                    std::vector<std::size_t> moved;
                    for (std::size_t idx : subgroups[rep.subgroup].elements)
                        moved.push_back(as.index_of(apply_morphism(as, as, lam, as.element_at(idx))));
                    std::sort(moved.begin(), moved.end());
                    if (moved != subgroups[hi].elements) continue;
                    // need mu with mu(rep.gamma(b)) = cand.gamma(lam(b)) on the basis of rep
                    std::vector<std::pair<Element, Element>> fixed;
                    bool plausible = true;
                    for (std::size_t i = 0; i < rb.lifts.size() && plausible; ++i) {
                        Element coords = hb.project(apply_morphism(as, as, lam, rb.lifts[i]));
                        Element target = apply_morphism(hb.form, an, cand.images, coords);
                        plausible = inv_of(rep.images[i]) == inv_of(target);
                        fixed.emplace_back(rep.images[i], target);
                    }
                    if (!plausible) continue;
                    FqfIsometry res;
                    try {
                        res = find_isometry(an, an, fixed, std::size_t{1} << 10);
                    } catch (const std::invalid_argument&) {
                        res.status = Tri::unknown;
                    }
                    if (res.status == Tri::unknown) out.orbits_certified = false;
                    if (res.status == Tri::yes) {
                        equivalent = true;
                        break;
                    }
                }
                if (equivalent) break;
            }
            if (!equivalent) reps.push_back(std::move(cand));
        }
    }

    const FiniteQuadraticForm glue = fqf_direct_sum(as, an.negated());
    for (const auto& rep : reps) {
        EmbeddingData data;
        data.h_s = subgroups[rep.subgroup];
        const auto& basis = bases[rep.subgroup];
        data.h_n = span(an, rep.images);
        std::vector<Element> gamma_gens;
        for (std::size_t i = 0; i < basis.lifts.size(); ++i) {
            data.gamma.emplace_back(basis.lifts[i], rep.images[i]);
            Element g = basis.lifts[i];
            g.insert(g.end(), rep.images[i].begin(), rep.images[i].end());
            gamma_gens.push_back(g);
        }
        Subgroup graph = span(glue, gamma_gens);
        for (const auto& g : graph.generators)
            if (glue.q(g) != 0) throw std::logic_error("embedding: glue graph is not isotropic");
        data.delta = subquotient(glue, orthogonal_subgroup(glue, graph), graph).form;
        data.k_signature = Signature{sn.n_plus - ss.n_plus, sn.n_minus - ss.n_minus, 0};
        build_complement(data);
        out.classes.push_back(std::move(data));
    }
    return out;
}

// ---------------------------------------------------------------- L inside Lambda

LambdaExtension extend_isometry_L_to_Lambda(const Isometry& g) {
    const Lattice l = make_L();
    if (g.home().gram() != l.gram()) throw std::invalid_argument("extension: isometry does not act on L");
    const std::size_t n = l.rank();
    const Lattice lx = direct_sum({l, make_rank_one(2)}, "L+(2)");
    const auto d = discriminant_form(lx);
    RatVector glue(n + 1, Rational(0));
    glue[n - 1] = Rational(1, 2);  // v/2, v the generator of (-2)
    glue[n] = Rational(1, 2);      // x/2
    const Subgroup h = span(d.form, {d.class_of(glue)});
    const Overlattice ov = overlattice_from_isotropic(d, h);
    if (!ov.lattice.is_unimodular()) throw std::logic_error("extension: overlattice is not unimodular");

    IntMatrix gext = IntMatrix::identity(n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gext(i, j) = g.matrix()(i, j);
    const RatMatrix bt = ov.basis.transpose();
    auto bt_inv = bt.inverse();
    const RatMatrix gl = *bt_inv * RatMatrix(gext) * bt;
    if (!gl.is_integral()) throw std::invalid_argument("extension: g does not preserve the overlattice");

    const Lattice lambda = ov.lattice.with_label("Lambda");
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    Sublattice emb(lambda, ov.inclusion.gens().select_rows(rows));
    Isometry gbar(lambda, gl.to_integer());
    for (std::size_t i = 0; i < n; ++i)
        if (gbar.apply(emb.gens().row(i)) != emb.to_ambient(g.matrix().col(i)))
            throw std::logic_error("extension: restriction to L differs from g");
    return LambdaExtension{lambda, emb, gbar};
}

}  // namespace lattika
