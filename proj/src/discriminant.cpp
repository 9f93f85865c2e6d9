#include "lattika/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace lattika {

namespace {

const Rational kTwo(2);
const Rational kOne(1);

Rational mod2(const Rational& q) { return mod_rational(q, kTwo); }
Rational mod1(const Rational& q) { return mod_rational(q, kOne); }

long lmod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in a machine word");
    return z.get_si();
}

}  // namespace

// ---------------------------------------------------------------- FiniteQuadraticForm

FiniteQuadraticForm::FiniteQuadraticForm(std::vector<long> orders, RatMatrix values)
    : orders_(std::move(orders)), values_(std::move(values)) {
    const std::size_t k = orders_.size();
    if (values_.rows() != k || values_.cols() != k) throw std::invalid_argument("FQF: value matrix shape mismatch");
    for (std::size_t i = 0; i < k; ++i) {
        if (orders_[i] < 2) throw std::invalid_argument("FQF: generator orders must be at least 2");
        values_(i, i) = mod2(values_(i, i));
        for (std::size_t j = 0; j < k; ++j)
            if (i != j) values_(i, j) = mod1(values_(i, j));
    }
    for (std::size_t i = 0; i < k; ++i) {
        const Rational d(orders_[i]);
        if (Rational(d * values_(i, i)).get_den() != 1 || mod2(d * d * values_(i, i)) != 0)
            throw std::invalid_argument("FQF: q value incompatible with generator order");
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            if (values_(i, j) != values_(j, i)) throw std::invalid_argument("FQF: bilinear values not symmetric");
            if (Rational(d * values_(i, j)).get_den() != 1) throw std::invalid_argument("FQF: b value incompatible with generator order");
        }
    }
    Integer den = 1;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) den = lcm(den, Integer(values_(i, j).get_den()));
    den_ = to_long(den);
    num_.resize(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) num_[i * k + j] = to_long(Rational(values_(i, j) * den_).get_num());
}

Integer FiniteQuadraticForm::order() const {
    Integer n = 1;
    for (long d : orders_) n *= d;
    return n;
}

std::size_t FiniteQuadraticForm::order_checked(std::size_t guard) const {
    Integer n = order();
    if (n > Integer(static_cast<unsigned long>(guard)))
        throw GuardExceeded("finite quadratic form of order " + n.get_str() + " exceeds the table guard " + std::to_string(guard));
    return n.get_ui();
}

long FiniteQuadraticForm::q_num(const Element& x) const {
    const std::size_t k = orders_.size();
    const __int128 m = 2 * static_cast<__int128>(den_);
    __int128 s = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (x[i] == 0) continue;
        const __int128 xi = x[i];
        s = (s + xi * xi % m * num_[i * k + i]) % m;
        for (std::size_t j = i + 1; j < k; ++j)
            if (x[j] != 0) s = (s + 2 * xi * x[j] % m * num_[i * k + j]) % m;
    }
    return static_cast<long>((s + m) % m);
}

long FiniteQuadraticForm::b_num(const Element& x, const Element& y) const {
    const std::size_t k = orders_.size();
    const __int128 m = den_;
    __int128 s = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < k; ++j)
            if (y[j] != 0) s = (s + static_cast<__int128>(x[i]) * y[j] % m * num_[i * k + j]) % m;
    }
    return static_cast<long>((s + m) % m);
}

Rational FiniteQuadraticForm::q(const Element& x) const {
    Rational r(q_num(x), den_);
    r.canonicalize();
    return r;
}

Rational FiniteQuadraticForm::b(const Element& x, const Element& y) const {
    Rational r(b_num(x, y), den_);
    r.canonicalize();
    return r;
}

Element FiniteQuadraticForm::reduce(Element x) const {
    for (std::size_t i = 0; i < orders_.size(); ++i) x[i] = lmod(x[i], orders_[i]);
    return x;
}

Element FiniteQuadraticForm::add(const Element& x, const Element& y) const {
    Element z(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) z[i] = lmod(x[i] + y[i], orders_[i]);
    return z;
}

Element FiniteQuadraticForm::neg(const Element& x) const { return scale(-1, x); }

Element FiniteQuadraticForm::scale(long k, const Element& x) const {
    Element z(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) z[i] = lmod(k * x[i], orders_[i]);
    return z;
}

Element FiniteQuadraticForm::generator(std::size_t i) const {
    Element e = zero();
    e.at(i) = 1;
    return e;
}

long FiniteQuadraticForm::element_order(const Element& x) const {
    long ord = 1;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        long d = orders_[i] / std::gcd(lmod(x[i], orders_[i]), orders_[i]);
        ord = std::lcm(ord, d);
    }
    return ord;
}

std::size_t FiniteQuadraticForm::index_of(const Element& x) const {
    std::size_t idx = 0, mult = 1;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        idx += static_cast<std::size_t>(lmod(x[i], orders_[i])) * mult;
        mult *= static_cast<std::size_t>(orders_[i]);
    }
    return idx;
}

Element FiniteQuadraticForm::element_at(std::size_t index) const {
    Element x(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        x[i] = static_cast<long>(index % static_cast<std::size_t>(orders_[i]));
        index /= static_cast<std::size_t>(orders_[i]);
    }
    return x;
}

std::vector<Element> FiniteQuadraticForm::elements(std::size_t guard) const {
    const std::size_t n = order_checked(guard);
    std::vector<Element> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(element_at(i));
    return out;
}

FiniteQuadraticForm FiniteQuadraticForm::negated() const {
    RatMatrix v = values_;
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) v(i, j) = -v(i, j);
    return FiniteQuadraticForm(orders_, v);
}

bool FiniteQuadraticForm::is_two_elementary() const {
    return std::all_of(orders_.begin(), orders_.end(), [](long d) { return d == 2; });
}

bool FiniteQuadraticForm::operator==(const FiniteQuadraticForm& o) const {
    if (orders_ != o.orders_) return false;
    for (std::size_t i = 0; i < orders_.size(); ++i)
        for (std::size_t j = 0; j < orders_.size(); ++j)
            if (values_(i, j) != o.values_(i, j)) return false;
    return true;
}

// ---------------------------------------------------------------- subgroups

bool Subgroup::contains(std::size_t index) const { return std::binary_search(elements.begin(), elements.end(), index); }

namespace {

// Adds multiples of g to the flagged set; returns false if g is already inside.
bool extend_span(const FiniteQuadraticForm& f, std::vector<char>& flag, std::vector<std::size_t>& members, const Element& g) {
    const std::size_t gi = f.index_of(g);
    if (flag[gi]) return false;
    std::vector<std::size_t> base = members;
    Element mult = g;
    while (!flag[f.index_of(mult)]) {
        for (std::size_t m : base) {
            std::size_t idx = f.index_of(f.add(f.element_at(m), mult));
            if (!flag[idx]) {
                flag[idx] = 1;
                members.push_back(idx);
            }
        }
        mult = f.add(mult, g);
    }
    return true;
}

}  // namespace

Subgroup span(const FiniteQuadraticForm& f, const std::vector<Element>& gens) {
    const std::size_t n = f.order_checked();
    std::vector<char> flag(n, 0);
    std::vector<std::size_t> members{0};
    flag[0] = 1;
    Subgroup h;
    for (const auto& g : gens) {
        Element r = f.reduce(g);
        if (extend_span(f, flag, members, r)) h.generators.push_back(r);
    }
    std::sort(members.begin(), members.end());
    h.elements = std::move(members);
    return h;
}

Subgroup trivial_subgroup(const FiniteQuadraticForm&) {
    Subgroup h;
    h.elements = {0};
    return h;
}

Subgroup orthogonal_subgroup(const FiniteQuadraticForm& f, const Subgroup& h) {
    const std::size_t n = f.order_checked();
    std::vector<Element> perp;
    for (std::size_t i = 0; i < n; ++i) {
        Element x = f.element_at(i);
        bool ok = std::all_of(h.generators.begin(), h.generators.end(), [&](const Element& g) { return f.b(x, g) == 0; });
        if (ok) perp.push_back(x);
    }
    return span(f, perp);
}

Element Subquotient::project(const Element& ambient) const {
    RatVector x(ambient.size());
    for (std::size_t i = 0; i < ambient.size(); ++i) x[i] = Rational(lmod(ambient[i], ambient_orders[i]));
    RatVector c = basis_inverse.left_mul(x);
    // keep only the coordinates of the nontrivial quotient generators
    Element out;
    std::size_t k = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].get_den() != 1) throw std::invalid_argument("Subquotient::project: element not in the outer subgroup");
        if (selected[i]) out.push_back(lmod(to_long(c[i].get_num()), form.orders()[k++]));
    }
    return out;
}

Subquotient subquotient(const FiniteQuadraticForm& f, const Subgroup& outer, const Subgroup& inner) {
    const std::size_t k = f.num_generators();
    auto lattice_of = [&](const Subgroup& h) {
        IntMatrix m(h.generators.size() + k, k);
        for (std::size_t i = 0; i < h.generators.size(); ++i)
            for (std::size_t j = 0; j < k; ++j) m(i, j) = h.generators[i][j];
        for (std::size_t j = 0; j < k; ++j) m(h.generators.size() + j, j) = f.orders()[j];
        return hnf_basis(m);
    };
    const IntMatrix pb = lattice_of(outer), qb = lattice_of(inner);
    auto pinv = RatMatrix(pb).inverse();
    if (!pinv) throw std::logic_error("subquotient: degenerate outer basis");
    const RatMatrix c = RatMatrix(qb) * *pinv;
    if (!c.is_integral()) throw std::invalid_argument("subquotient: inner subgroup not contained in outer");
    const auto snf = smith_normal_form(c.to_integer());
    const IntMatrix pnew = snf.v.unimodular_inverse() * pb;

    Subquotient out;
    out.ambient_orders = f.orders();
    out.basis_inverse = *RatMatrix(pnew).inverse();
    out.selected.assign(k, 0);
    std::vector<long> orders;
    for (std::size_t i = 0; i < k; ++i) {
        const long e = to_long(snf.d(i, i));
        if (e <= 1) continue;
        out.selected[i] = 1;
        orders.push_back(e);
        Element lift(k);
        for (std::size_t j = 0; j < k; ++j) lift[j] = lmod(to_long(mod_floor(pnew(i, j), f.orders()[j])), f.orders()[j]);
        out.lifts.push_back(lift);
    }
    RatMatrix values(orders.size(), orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i)
        for (std::size_t j = 0; j < orders.size(); ++j)
            values(i, j) = i == j ? f.q(out.lifts[i]) : f.b(out.lifts[i], out.lifts[j]);
    out.form = FiniteQuadraticForm(orders, values);
    return out;
}

// ---------------------------------------------------------------- discriminant forms

bool DiscriminantForm::in_dual(const RatVector& y) const {
    RatVector gy = RatMatrix(lattice.gram()).right_mul(y);
    return std::all_of(gy.begin(), gy.end(), [](const Rational& q) { return q.get_den() == 1; });
}

Element DiscriminantForm::class_of(const RatVector& y) const {
    RatVector gy = RatMatrix(lattice.gram()).right_mul(y);
    IntVector w;
    for (const auto& q : gy) {
        if (q.get_den() != 1) throw std::invalid_argument("class_of: vector not in the dual lattice");
        w.push_back(q.get_num());
    }
    IntVector c = projection.right_mul(w);
    Element x(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) x[i] = to_long(mod_floor(c[i], form.orders()[i]));
    return x;
}

RatVector DiscriminantForm::lift(const Element& x) const {
    RatVector y(lattice.rank(), Rational(0));
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0)
            for (std::size_t j = 0; j < y.size(); ++j) y[j] += Rational(x[i]) * lifts(i, j);
    return y;
}

DiscriminantForm discriminant_form(const Lattice& l) {
    const IntMatrix& g = l.gram();
    const std::size_t n = l.rank();
    const auto snf = smith_normal_form(g);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (snf.d(i, i) > 1) keep.push_back(i);

    DiscriminantForm d{l, {}, RatMatrix(keep.size(), n), snf.u.select_rows(keep)};
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t j = 0; j < n; ++j) d.lifts(r, j) = Rational(snf.v(j, keep[r])) / Rational(snf.d(keep[r], keep[r]));

    const RatMatrix gr(g);
    RatMatrix values(keep.size(), keep.size());
    std::vector<long> orders;
    for (std::size_t r = 0; r < keep.size(); ++r) {
        orders.push_back(to_long(snf.d(keep[r], keep[r])));
        RatVector gy = gr.right_mul(d.lifts.row(r));
        for (std::size_t s = 0; s < keep.size(); ++s) {
            Rational v = 0;
            RatVector ys = d.lifts.row(s);
            for (std::size_t j = 0; j < n; ++j) v += ys[j] * gy[j];
            values(r, s) = v;
        }
    }
    d.form = FiniteQuadraticForm(orders, values);
    return d;
}

std::size_t min_generators(const FiniteQuadraticForm& f) {
    if (f.num_generators() == 0) return 0;
    IntVector diag;
    for (long o : f.orders()) diag.push_back(o);
    auto ed = elementary_divisors(IntMatrix::diagonal(diag));
    return static_cast<std::size_t>(std::count_if(ed.begin(), ed.end(), [](const Integer& e) { return e > 1; }));
}

FiniteQuadraticForm fqf_direct_sum(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b) {
    const std::size_t ka = a.num_generators(), kb = b.num_generators();
    std::vector<long> orders = a.orders();
    orders.insert(orders.end(), b.orders().begin(), b.orders().end());
    RatMatrix v(ka + kb, ka + kb);
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < ka; ++j) v(i, j) = a.values()(i, j);
    for (std::size_t i = 0; i < kb; ++i)
        for (std::size_t j = 0; j < kb; ++j) v(ka + i, ka + j) = b.values()(i, j);
    return FiniteQuadraticForm(orders, v);
}

std::vector<Element> direct_sum_witness(const Lattice& a, const Lattice& b) {
    const auto da = discriminant_form(a), db = discriminant_form(b);
    const auto dab = discriminant_form(direct_sum({a, b}));
    const std::size_t na = a.rank(), nb = b.rank();
    std::vector<Element> images;
    for (std::size_t i = 0; i < da.form.num_generators(); ++i) {
        RatVector y(na + nb, Rational(0));
        for (std::size_t j = 0; j < na; ++j) y[j] = da.lifts(i, j);
        images.push_back(dab.class_of(y));
    }
    for (std::size_t i = 0; i < db.form.num_generators(); ++i) {
        RatVector y(na + nb, Rational(0));
        for (std::size_t j = 0; j < nb; ++j) y[na + j] = db.lifts(i, j);
        images.push_back(dab.class_of(y));
    }
    return images;
}

// ---------------------------------------------------------------- isotropic subgroups, overlattices

std::vector<Subgroup> isotropic_subgroups(const FiniteQuadraticForm& f) {
    const std::size_t n = f.order_checked();
    std::vector<Element> isotropic;
    for (std::size_t i = 1; i < n; ++i) {
        Element x = f.element_at(i);
        if (f.q(x) == 0) isotropic.push_back(x);
    }
    std::set<std::vector<std::size_t>> seen;
    std::vector<Subgroup> out{trivial_subgroup(f)};
    seen.insert(out[0].elements);
    for (std::size_t head = 0; head < out.size(); ++head) {
        const Subgroup h = out[head];
        for (const auto& x : isotropic) {
            if (h.contains(f.index_of(x))) continue;
            bool orth = std::all_of(h.generators.begin(), h.generators.end(), [&](const Element& g) { return f.b(x, g) == 0; });
            if (!orth) continue;
            std::vector<Element> gens = h.generators;
            gens.push_back(x);
            Subgroup bigger = span(f, gens);
            if (seen.insert(bigger.elements).second) {
                if (out.size() >= kTableGuard) throw GuardExceeded("isotropic subgroup enumeration exceeds the guard");
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

Overlattice overlattice_from_isotropic(const DiscriminantForm& d, const Subgroup& h) {
    const std::size_t n = d.lattice.rank();
    for (const auto& g : h.generators)
        if (d.form.q(g) != 0) throw std::invalid_argument("overlattice: subgroup is not isotropic");

    std::vector<RatVector> rows;
    for (std::size_t i = 0; i < n; ++i) {
        RatVector e(n, Rational(0));
        e[i] = 1;
        rows.push_back(e);
    }
    for (const auto& g : h.generators) rows.push_back(d.lift(g));
    Integer den = 1;
    for (const auto& r : rows)
        for (const auto& q : r) den = lcm(den, Integer(q.get_den()));
    IntMatrix scaled(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) scaled(i, j) = Rational(rows[i][j] * den).get_num();
    const IntMatrix hb = hnf_basis(scaled);

    RatMatrix basis(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) basis(i, j) = Rational(hb(i, j)) / Rational(den);
    const RatMatrix gram2 = basis * RatMatrix(d.lattice.gram()) * basis.transpose();
    if (!gram2.is_integral()) throw std::logic_error("overlattice: Gram matrix not integral");
    Lattice big(gram2.to_integer());
    auto binv = basis.inverse();
    if (!binv || !binv->is_integral()) throw std::logic_error("overlattice: original lattice not contained");

    const Integer index(static_cast<unsigned long>(h.size()));
    if (big.determinant() * index * index != d.lattice.determinant())
        throw std::logic_error("overlattice: determinant does not match the subgroup order");
    return Overlattice{big, Sublattice(big, binv->to_integer()), basis};
}

Overlattice overlattice_from_isotropic(const Lattice& l, const Subgroup& h) {
    return overlattice_from_isotropic(discriminant_form(l), h);
}

// ---------------------------------------------------------------- invariants and Gauss sums

bool FqfInvariants::operator==(const FqfInvariants& o) const {
    return order == o.order && invariant_factors == o.invariant_factors && histogram == o.histogram &&
           signature_mod8 == o.signature_mod8;
}

FqfInvariants fqf_invariants(const FiniteQuadraticForm& f) {
    FqfInvariants inv;
    inv.order = f.order();
    if (f.num_generators() > 0) {
        IntVector diag;
        for (long o : f.orders()) diag.push_back(o);
        for (const auto& e : elementary_divisors(IntMatrix::diagonal(diag)))
            if (e > 1) inv.invariant_factors.push_back(e);
    }
    const std::size_t n = f.order_checked();
    for (std::size_t i = 0; i < n; ++i) ++inv.histogram[f.q(f.element_at(i))];
    inv.signature_mod8 = gauss_milgram_signature(f);
    return inv;
}

namespace {

void trim(IntVector& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder modulo a monic polynomial; coefficients low degree first.
IntVector poly_rem(IntVector a, const IntVector& m) {
    const std::size_t dm = m.size() - 1;
    trim(a);
    while (a.size() > dm) {
        const Integer lead = a.back();
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) a[shift + i] -= lead * m[i];
        trim(a);
    }
    return a;
}

IntVector cyclotomic(long n) {
    // x^n - 1 divided by every Phi_d with d a proper divisor of n
    IntVector p(static_cast<std::size_t>(n) + 1, Integer(0));
    p[0] = -1;
    p[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d) continue;
        IntVector q = cyclotomic(d);
        const std::size_t dq = q.size() - 1;
        IntVector quot(p.size() - dq, Integer(0));
        for (std::size_t i = p.size(); i-- > dq;) {
            const Integer c = p[i];
            quot[i - dq] = c;
            for (std::size_t j = 0; j <= dq; ++j) p[i - dq + j] -= c * q[j];
        }
        p = quot;
    }
    return p;
}

long gauss_level(const FiniteQuadraticForm& f) {
    long n = 16;
    for (std::size_t i = 0; i < f.num_generators(); ++i)
        for (std::size_t j = 0; j < f.num_generators(); ++j)
            n = std::lcm(n, 2 * to_long(Integer(f.values()(i, j).get_den())));
    return n;
}

// Unreduced sum as a length-n coefficient vector in Z[x]/(x^n - 1).
IntVector raw_gauss_sum(const FiniteQuadraticForm& f, long n) {
    IntVector c(static_cast<std::size_t>(n), Integer(0));
    const std::size_t size = f.order_checked();
    for (std::size_t i = 0; i < size; ++i) {
        Rational k = f.q(f.element_at(i)) * Rational(n) / 2;
        ++c[static_cast<std::size_t>(to_long(k.get_num()) % n)];
    }
    return c;
}

}  // namespace

GaussSum gauss_sum(const FiniteQuadraticForm& f) {
    const long n = gauss_level(f);
    IntVector red = poly_rem(raw_gauss_sum(f, n), cyclotomic(n));
    return GaussSum{n, red};
}

int gauss_milgram_signature(const FiniteQuadraticForm& f) {
    const long n = gauss_level(f);
    const IntVector c = raw_gauss_sum(f, n);
    const IntVector phi = cyclotomic(n);
    const double pi = std::acos(-1.0);
    for (int s = 0; s < 8; ++s) {
        const long shift = s * n / 8;
        IntVector t(c.size()), diff(c.size());
        for (long k = 0; k < n; ++k) t[k] = c[(k + shift) % n];
        for (long k = 0; k < n; ++k) diff[k] = t[k] - t[(n - k) % n];
        if (!poly_rem(diff, phi).empty()) continue;
        double value = 0;
        for (long k = 0; k < n; ++k) value += t[k].get_d() * std::cos(2 * pi * static_cast<double>(k) / static_cast<double>(n));
        if (value > 0) return s;
    }
    throw std::logic_error("Gauss sum has no admissible phase");
}

bool gauss_milgram_modulus_holds(const FiniteQuadraticForm& f) {
    const long n = gauss_level(f);
    const IntVector c = raw_gauss_sum(f, n);
    IntVector prod(c.size(), Integer(0));
    for (long i = 0; i < n; ++i) {
        if (c[i] == 0) continue;
        for (long j = 0; j < n; ++j)
            if (c[j] != 0) prod[(i - j + n) % n] += c[i] * c[j];
    }
    prod[0] -= f.order();
    return poly_rem(prod, cyclotomic(n)).empty();
}

// ---------------------------------------------------------------- isometries

std::string to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        default: return "unknown";
    }
}

Element apply_morphism(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b, const std::vector<Element>& images,
                       const Element& x) {
    Element y = b.zero();
    for (std::size_t i = 0; i < a.num_generators(); ++i)
        if (x[i] != 0) y = b.add(y, b.scale(x[i], images[i]));
    return y;
}

bool is_fqf_isometry(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b, const std::vector<Element>& images) {
    const std::size_t k = a.num_generators();
    if (images.size() != k || a.order() != b.order()) return false;
    for (std::size_t i = 0; i < k; ++i) {
        if (images[i].size() != b.num_generators()) return false;
        if (b.scale(a.orders()[i], images[i]) != b.zero()) return false;
        if (b.q(images[i]) != a.values()(i, i)) return false;
        for (std::size_t j = 0; j < k; ++j)
            if (i != j && b.b(images[i], images[j]) != a.values()(i, j)) return false;
    }
    return span(b, images).size() == b.order_checked();
}

std::vector<int> element_invariant_ids(const FiniteQuadraticForm& f, InvariantTable& table) {
    const std::size_t n = f.order_checked();
    const std::size_t k = f.num_generators();
    const long den = f.denominator();
    const auto& d = f.orders();
    std::vector<long> qtab(n);
    for (std::size_t i = 0; i < n; ++i) qtab[i] = f.q_num(f.element_at(i));
    const bool dense = 2 * den * den <= (1 << 16);
    std::vector<int> out(n);
    std::vector<long> c(k), y(k), bins;
    std::map<long, long> sparse;
    for (std::size_t i = 0; i < n; ++i) {
        const Element x = f.element_at(i);
        for (std::size_t j = 0; j < k; ++j) c[j] = f.b_num(x, f.generator(j));
        if (dense) bins.assign(static_cast<std::size_t>(2 * den * den), 0);
        sparse.clear();
        std::fill(y.begin(), y.end(), 0);
        long sum = 0;
        for (std::size_t idx = 0; idx < n; ++idx) {
            const long key = qtab[idx] * den + sum;
            if (dense) ++bins[static_cast<std::size_t>(key)];
            else ++sparse[key];
            for (std::size_t j = 0; j < k; ++j) {
                ++y[j];
                sum += c[j];
                if (y[j] < d[j]) break;
                sum -= d[j] * c[j];
                y[j] = 0;
            }
            sum = lmod(sum, den);
        }
        std::vector<long> sig{den, qtab[i], f.element_order(x)};
        if (dense) {
            sig.insert(sig.end(), bins.begin(), bins.end());
        } else {
            for (auto [key, cnt] : sparse) {
                sig.push_back(key);
                sig.push_back(cnt);
            }
        }
        out[i] = table.emplace(std::move(sig), static_cast<int>(table.size())).first->second;
    }
    return out;
}

namespace {

// Backtracking over images of the source basis. Every element of the partial span is checked
// against the element invariants, which also forces q to be preserved.
struct Search {
    const FiniteQuadraticForm& src;  // generators form a basis of the source group
    const FiniteQuadraticForm& dst;
    std::vector<std::optional<Element>> forced;
    std::function<bool(const std::vector<Element>&)> accept;
    std::size_t budget;
    std::size_t nodes = 0;
    bool exhausted = false;

    std::vector<int> inv_src, inv_dst;
    std::vector<std::size_t> strides;
    std::vector<std::vector<std::size_t>> candidates;
    std::vector<char> used;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (source index, image index)
    std::vector<Element> images;

    bool fits(std::size_t level, const Element& y) const {
        for (std::size_t j = 0; j < level; ++j)
            if (dst.b_num(y, images[j]) * src.denominator() != src.b_num(src.generator(level), src.generator(j)) * dst.denominator())
                return false;
        return true;
    }

    bool extend(std::size_t level, const Element& y) {
        const long d = src.orders()[level];
        const std::size_t base = pairs.size();
        Element ky = dst.zero();
        for (long k = 1; k < d; ++k) {
            ky = dst.add(ky, y);
            for (std::size_t p = 0; p < base; ++p) {
                const std::size_t s = pairs[p].first + static_cast<std::size_t>(k) * strides[level];
                const std::size_t t = dst.index_of(dst.add(dst.element_at(pairs[p].second), ky));
                if (used[t] || inv_src[s] != inv_dst[t]) return false;
                used[t] = 1;
                pairs.emplace_back(s, t);
            }
        }
        return true;
    }

    void retract(std::size_t mark) {
        for (std::size_t i = mark; i < pairs.size(); ++i) used[pairs[i].second] = 0;
        pairs.resize(mark);
    }

    bool run(std::size_t level) {
        if (level == src.num_generators()) return accept(images);
        std::vector<std::size_t> forced_list;
        const std::vector<std::size_t>* list = &candidates[level];
        if (forced[level]) {
            const std::size_t idx = dst.index_of(*forced[level]);
            if (inv_dst[idx] == inv_src[strides[level]]) forced_list.push_back(idx);
            list = &forced_list;
        }
        for (std::size_t idx : *list) {
            if (++nodes > budget) {
                exhausted = true;
                return false;
            }
            Element y = dst.element_at(idx);
            if (!fits(level, y)) continue;
            const std::size_t mark = pairs.size();
            if (!extend(level, y)) {
                retract(mark);
                continue;
            }
            images.push_back(y);
            if (run(level + 1)) return true;
            images.pop_back();
            retract(mark);
            if (exhausted) return false;
        }
        return false;
    }
};

}  // namespace

FqfIsometry find_isometry(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b,
                          const std::vector<std::pair<Element, Element>>& fixed, std::size_t max_order,
                          std::size_t node_budget) {
    FqfIsometry res;
    if (a.order() != b.order()) {
        res.status = Tri::no;
        res.reason = "group orders differ";
        return res;
    }
    if (a.order() > Integer(static_cast<unsigned long>(max_order))) {
        res.reason = "group order " + a.order().get_str() + " above the search guard " + std::to_string(max_order);
        return res;
    }
    const std::size_t n = a.order_checked(max_order);

    // New basis of the source: fixed sources first, then original generators.
    std::vector<Element> basis;
    std::vector<std::optional<Element>> forced;
    {
        std::vector<char> flag(n, 0);
        std::vector<std::size_t> members{0};
        flag[0] = 1;
        for (const auto& [x, y] : fixed)
            if (extend_span(a, flag, members, a.reduce(x))) {
                basis.push_back(a.reduce(x));
                forced.emplace_back(b.reduce(y));
            }
        for (std::size_t i = 0; i < a.num_generators(); ++i)
            if (extend_span(a, flag, members, a.generator(i))) {
                basis.push_back(a.generator(i));
                forced.emplace_back(std::nullopt);
            }
    }
    std::vector<long> orders;
    Integer prod = 1;
    for (const auto& g : basis) {
        orders.push_back(a.element_order(g));
        prod *= orders.back();
    }
    if (prod != a.order())
        throw std::invalid_argument("find_isometry: fixed sources do not extend to a basis of the source group");
    RatMatrix values(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
            values(i, j) = i == j ? a.q(basis[i]) : a.b(basis[i], basis[j]);
    const FiniteQuadraticForm src(orders, values);

    // source element index -> coordinates in the new basis
    std::vector<Element> coords(n);
    for (std::size_t i = 0; i < n; ++i) {
        Element c = src.element_at(i);
        Element x = a.zero();
        for (std::size_t j = 0; j < basis.size(); ++j) x = a.add(x, a.scale(c[j], basis[j]));
        coords[a.index_of(x)] = c;
    }

    Search s{src, b, forced, {}, node_budget, 0, false, {}, {}, {}, {}, {}, {}, {}};
    s.accept = [&](const std::vector<Element>& imgs) {
        for (const auto& [x, y] : fixed)
            if (apply_morphism(src, b, imgs, coords[a.index_of(x)]) != b.reduce(y)) return false;
        return true;
    };
    InvariantTable table;
    s.inv_src = element_invariant_ids(src, table);
    s.inv_dst = element_invariant_ids(b, table);
    s.used.assign(n, 0);
    s.used[0] = 1;
    s.pairs = {{0, 0}};
    std::size_t stride = 1;
    for (long d : src.orders()) {
        s.strides.push_back(stride);
        stride *= static_cast<std::size_t>(d);
    }
    s.candidates.resize(src.num_generators());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < src.num_generators(); ++l)
            if (s.inv_dst[i] == s.inv_src[s.strides[l]]) s.candidates[l].push_back(i);

    if (s.run(0)) {
        res.status = Tri::yes;
        for (std::size_t i = 0; i < a.num_generators(); ++i)
            res.images.push_back(apply_morphism(src, b, s.images, coords[a.index_of(a.generator(i))]));
        if (!is_fqf_isometry(a, b, res.images)) throw std::logic_error("find_isometry: produced map fails verification");
        return res;
    }
    if (s.exhausted) {
        res.reason = "node budget of " + std::to_string(node_budget) + " exhausted";
        return res;
    }
    res.status = Tri::no;
    res.reason = "exhaustive search found no isometry";
    return res;
}

FqfIsometry fqf_isometry_exists(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b) {
    FqfIsometry res;
    auto fail = [&](std::string why) {
        res.status = Tri::no;
        res.reason = std::move(why);
        return res;
    };
    if (a.order() != b.order()) return fail("group orders differ");
    if (a.order() > Integer(static_cast<unsigned long>(kTableGuard))) {
        res.reason = "group order above the table guard";
        return res;
    }
    const auto ia = fqf_invariants(a), ib = fqf_invariants(b);
    if (ia.invariant_factors != ib.invariant_factors) return fail("invariant factors differ");
    if (ia.histogram != ib.histogram) return fail("value histograms of q differ");
    if (ia.signature_mod8 != ib.signature_mod8) return fail("Gauss sum signatures differ");
    if (a.order() > Integer(static_cast<unsigned long>(kIsometrySearchGuard))) {
        res.reason = "invariants agree; group order above the isometry search guard";
        return res;
    }
    return find_isometry(a, b, {}, kIsometrySearchGuard);
}

bool halfness_check(const FiniteQuadraticForm& f) {
    const std::size_t n = f.order_checked();
    const Rational half(1, 2), three_halves(3, 2);
    for (std::size_t i = 0; i < n; ++i) {
        Rational v = f.q(f.element_at(i));
        if (v == half || v == three_halves) return true;
    }
    return false;
}

}  // namespace lattika
