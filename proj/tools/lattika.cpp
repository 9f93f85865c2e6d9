#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lattika/checks.hpp"
#include "lattika/density.hpp"
#include "lattika/involutions.hpp"

using namespace lattika;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, guard = 3 };

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("malformed JSON: " + std::string(e.what()));
    }
}

Lattice resolve_lattice(const std::string& what) {
    for (const auto& n : named_lattice_names())
        if (n == what) return named_lattice(n);
    return lattice_from_json(read_json_file(what));
}

IntVector parse_vector(const std::string& s) {
    IntVector v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        Integer z;
        if (tok.empty() || z.set_str(tok, 10) != 0) throw std::invalid_argument("bad vector entry \"" + tok + "\"");
        v.push_back(z);
    }
    return v;
}

Json signature_json(const Signature& s) { return Json{s.n_plus, s.n_minus, s.n_zero}; }

// representative of q in (-1, 1]
Rational centered(Rational q) {
    q = mod_rational(q, Rational(2));
    if (q > 1) q -= 2;
    return q;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_info(const std::string& input) {
    const Lattice l = resolve_lattice(input);
    const auto d = discriminant_form(l);
    Json qs = Json::array();
    for (std::size_t i = 0; i < d.form.num_generators(); ++i) qs.push_back(to_json(centered(d.form.values()(i, i))));
    Json out{{"label", l.label()},
             {"rank", l.rank()},
             {"signature", signature_json(l.signature())},
             {"determinant", to_json(l.determinant())},
             {"even", true},
             {"unimodular", l.is_unimodular()},
             {"discriminant", {{"order", to_json(Integer(abs(l.determinant())))}, {"form", fqf_to_json(d.form)}, {"generator_q", qs}}}};
    emit(out);
    return ok;
}

int cmd_verify(const std::vector<std::string>& ids, bool json, bool timing, bool list) {
    const auto& reg = check_registry();
    if (list) {
        for (const auto& c : reg) std::cout << c.id << '\t' << c.criterion << '\t' << c.title << '\n';
        return ok;
    }
    std::vector<const CheckInfo*> todo;
    if (ids.empty()) {
        for (const auto& c : reg) todo.push_back(&c);
    } else {
        for (const auto& c : reg)
            for (const auto& id : ids)
                if (c.id == id) todo.push_back(&c);
        for (const auto& id : ids)
            if (!find_check(id)) {
                std::cerr << "unknown check id: " << id << " (see --list)\n";
                return usage;
            }
    }
    Json reports = Json::array();
    bool any_fail = false, any_unknown = false;
    for (const auto* c : todo) {
        auto r = run_check(*c);
        any_fail |= r.status == CheckStatus::fail;
        any_unknown |= r.status == CheckStatus::unknown;
        if (json) {
            reports.push_back(report_to_json(r, timing));
        } else {
            std::cout << to_string(r.status) << ' ' << r.id;
            if (timing) std::cout << " (" << static_cast<long>(r.millis) << " ms)";
            std::cout << ": " << r.detail << '\n';
        }
        if (r.status == CheckStatus::fail) std::cerr << "check failed: " << r.id << '\n';
    }
    if (json) emit(reports);
    return any_fail ? failed : any_unknown ? guard : ok;
}

int cmd_classify(const std::string& input, long norm) {
    const Lattice l = resolve_lattice(input);
    const auto cl = classify_primitive_vectors(l, norm);
    Json ds = Json::array();
    for (std::size_t i = 0; i < cl.descriptors.size(); ++i) {
        Json d = descriptor_to_json(cl.descriptors[i]);
        d["orbit"] = cl.orbit_of[i];
        d["witness"] = to_json(cl.witnesses[i]);
        ds.push_back(d);
    }
    emit(Json{{"lattice", l.label()},
              {"norm", norm},
              {"num_orbits", cl.num_orbits},
              {"orbits_certified", cl.orbits_certified},
              {"descriptors", ds}});
    return ok;
}

int cmd_eichler(const std::string& input, const std::string& from, const std::string& to) {
    const Lattice l = resolve_lattice(input);
    const IntVector v = parse_vector(from), w = parse_vector(to);
    if (v.size() != l.rank() || w.size() != l.rank()) throw std::invalid_argument("vector length differs from the rank");
    EichlerEngine engine(l);
    const auto res = engine.map(v, w);
    emit(Json{{"lattice", l.label()},
              {"from", to_json(v)},
              {"to", to_json(w)},
              {"matrix", to_json(res.g.matrix())},
              {"transvections", res.factors.size()},
              {"sends", res.g.apply(v) == w}});
    return ok;
}

int cmd_swap(const std::string& target) {
    if (target != "L") throw std::invalid_argument("swap is available for target L only");
    const Lattice l = make_L();
    const auto g = standard_swap_involution_L();
    const auto rep = identify_T_swap(l, g);
    emit(Json{{"target", target},
              {"matrix", to_json(g.matrix())},
              {"t_rank", rep.t.rank()},
              {"s_rank", rep.s.rank()},
              {"t_signature", signature_json(rational_diagonalize_symmetric(rep.t.induced_gram()))},
              {"s_signature", signature_json(rational_diagonalize_symmetric(rep.s.induced_gram()))},
              {"t_basis", to_json(rep.t.gens())},
              {"s_basis", to_json(rep.s.gens())},
              {"matches", rep.matches},
              {"reason", rep.reason}});
    return rep.matches ? ok : failed;
}

int cmd_sequence(long k, std::size_t count, const std::string& base) {
    const auto& m0 = standard_M0();
    IntVector w_m(15, Integer(0));
    w_m[0] = 1;
    if (!base.empty()) w_m = parse_vector(base);
    if (w_m.size() != 15) throw std::invalid_argument("base vector must have 15 coordinates in M");
    const auto res = norm2k_sequence({m0.from_M(w_m), k, count});
    Json vs = Json::array();
    for (const auto& sv : res.vectors) {
        Json j{{"coords", to_json(sv.coords)},
               {"norm", to_json(sv.norm)},
               {"primitive", sv.primitive},
               {"div_M", to_json(sv.div_M)},
               {"div_L", to_json(sv.div_L)}};
        if (k == 0) j["orthogonal_to_q"] = sv.orthogonal_to_q;
        vs.push_back(j);
    }
    Json out{{"k", k},
             {"count", count},
             {"base_M", to_json(w_m)},
             {"vectors", vs},
             {"p", to_json(res.p_in_L)},
             {"p_splits_L", res.p_splits_L},
             {"convergence_constant", to_json(res.convergence_constant)}};
    if (res.q) out["q"] = to_json(*res.q);
    emit(out);
    return ok;
}

int cmd_recheck(const std::string& path) {
    const auto s = recheck_reports(read_json_file(path));
    emit(Json{{"claims", s.claims}, {"failed", s.failed}, {"failures", s.failures}});
    return s.failed == 0 ? ok : failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattika: exact computations with even lattices"};
    app.require_subcommand(1);

    std::string input, from, to, base, target = "L", recheck_file;
    std::vector<std::string> check_ids;
    long norm = 0, k = 0;
    std::size_t count = 10;
    bool json = false, timing = false, list = false;

    auto* info = app.add_subcommand("info", "rank, signature, determinant and discriminant form");
    info->add_option("lattice", input, "built-in name or JSON file")->required();

    auto* verify = app.add_subcommand("verify", "run the verification checks");
    verify->add_option("--check", check_ids, "check id (repeatable)");
    verify->add_flag("--json", json, "emit JSON reports");
    verify->add_flag("--timing", timing, "include timings");
    verify->add_flag("--list", list, "list check ids");

    auto* classify = app.add_subcommand("classify", "orbits of primitive vectors of a given norm");
    classify->add_option("lattice", input, "built-in name or JSON file")->required();
    classify->add_option("--norm", norm, "norm")->required();

    auto* eichler = app.add_subcommand("eichler", "isometry between two vectors with equal invariants");
    eichler->add_option("lattice", input, "built-in name or JSON file")->required();
    eichler->add_option("--from", from, "comma-separated coordinates")->required();
    eichler->add_option("--to", to, "comma-separated coordinates")->required();

    auto* swap = app.add_subcommand("swap", "the E8 block swap and its eigenlattices");
    swap->add_option("--target", target, "target lattice");

    auto* sequence = app.add_subcommand("sequence", "norm 2k vectors approaching an isotropic direction");
    sequence->add_option("--k", k, "half the norm")->required();
    sequence->add_option("--count", count, "number of vectors");
    sequence->add_option("--base", base, "isotropic base vector in M coordinates (default e1)");

    auto* recheck = app.add_subcommand("recheck", "re-verify the witnesses of saved JSON reports");
    recheck->add_option("file", recheck_file, "JSON report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*info) return cmd_info(input);
        if (*verify) return cmd_verify(check_ids, json, timing, list);
        if (*classify) return cmd_classify(input, norm);
        if (*eichler) return cmd_eichler(input, from, to);
        if (*swap) return cmd_swap(target);
        if (*sequence) return cmd_sequence(k, count, base);
        if (*recheck) return cmd_recheck(recheck_file);
    } catch (const GuardExceeded& e) {
        std::cerr << "guard exceeded: " << e.what() << '\n';
        return guard;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failed;
    }
    return usage;
}
