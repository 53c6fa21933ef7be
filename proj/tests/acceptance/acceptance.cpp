// One PASS/FAIL line per acceptance criterion. Run with no arguments for all nine, or with a
// criterion number for one of them (that is how ctest registers them).

#include "../unit/support.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sys/wait.h>

#ifndef RSTARK_CLI
#define RSTARK_CLI "rstark"
#endif

using namespace testsupport;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "ok " : "FAILED ") + what);
    }
    void note(const std::string& what) { notes.push_back(what); }
};

std::string sci(const Real& x) { return format_residual(x); }

const ReportCheck* find(const VerificationReport& r, const std::string& section, const std::string& id,
                        const std::string& kind) {
    const ReportSection* s = r.section(section);
    if (!s) return nullptr;
    for (const auto& c : s->checks)
        if (c.id == id && c.kind == kind) return &c;
    return nullptr;
}

std::string describe(const ReportCheck* c) {
    if (!c) return "missing";
    std::string out = c->passed ? "holds" : "fails";
    if (c->residual) out += ", residual " + sci(*c->residual);
    return out;
}

// 1: the index formula as stated, at 100 digits, in under 10 s
Outcome flagship() {
    Outcome o;
    for (const std::string file : {"q-sqrt5.json", "q-sqrt2.json"}) {
        auto t0 = std::chrono::steady_clock::now();
        FieldInstance fi = load_field_instance(data_path(file), PrecisionContext(100));
        VerificationReport r = verify_instance(fi);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const ReportCheck* stated = find(r, "index_formula", "equality", "stated");
        const ReportCheck* amended = find(r, "index_formula", "equality", "amended");
        bool ok = stated && stated->passed && stated->residual && *stated->residual < Real("1e-80");
        o.require(ok, file + ": stated index formula " + describe(stated));
        o.note(file + ": amended index formula " + describe(amended));
        o.require(secs < 10, file + ": runtime " + std::to_string(secs) + " s");
    }
    return o;
}

// 2: L'(0, chi) against fundamental units
Outcome l_oracle() {
    Outcome o;
    Real self_residual;
    for (unsigned digits : {50u, 100u}) {
        PrecisionContext ctx(digits);
        ScopedPrecision guard(ctx);
        Real r5 = mp::abs(l_derivative_at_0(*quadratic_character(5), ctx).re - mp::log((1 + mp::sqrt(Real(5))) / 2));
        Real r8 = mp::abs(l_derivative_at_0(*quadratic_character(8), ctx).re - mp::log(1 + mp::sqrt(Real(2))));
        if (digits == 50) {
            o.require(r5 < Real("1e-40"), "chi_5 at 50 digits, residual " + sci(r5));
            o.require(r8 < Real("1e-40"), "chi_8 at 50 digits, residual " + sci(r8));
        } else {
            self_residual = std::max(r5, r8);
        }
    }
    o.require(self_residual < Real("1e-90"), "at 100 digits, residual " + sci(self_residual));
    return o;
}

// 3: L'_{S,T}(0, 1) with S = {inf, 5}, T = {3}
Outcome trivial_leading() {
    Outcome o;
    PrecisionContext ctx(60);
    ScopedPrecision guard(ctx);
    FiniteAbelianGroup c2({2});
    Subgroup all = Subgroup::whole(c2), one = Subgroup::trivial(c2);
    ExtensionData e;
    e.group = c2;
    e.ramified = {{"5", Integer(5), all, all, {0}}};
    e.t = {{"3", Integer(3), one, all, {1}}};
    DirichletLValues src(ResidueClassGroup(5, {1, 4}), ctx);
    LContext lc{&src, nullptr};
    Real v = l_ST_leading(enumerate_characters(c2)[0], e, lc, ctx).re;
    // product rule: zeta(0) (log 5) (1 - 3) = log 5
    Real res = mp::abs(v - mp::log(Real(5)));
    o.require(res < Real("1e-40"), "residual " + sci(res));
    return o;
}

// 4: pi_F R_w = |H|^r R_w' on 100 random wedge inputs per subgroup and instance
Outcome restriction() {
    Outcome o;
    for (const std::string file : {"q-sqrt5.json", "q-sqrt2.json", "synthetic-c2xc2-r2.json"}) {
        const FieldInstance& fi = instance(file);
        std::mt19937_64 rng(0xacce5501);
        Real worst = 0;
        for (const auto& h : all_subgroups(fi.group())) {
            RestrictionCheck c = restricted_regulator_check(fi, h, 100, rng);
            worst = std::max(worst, c.residual);
        }
        o.require(worst < fi.ctx.tolerance(), file + ": worst residual " + sci(worst));
    }
    return o;
}

// 5: exact algebra properties
Outcome exact_suite() {
    Outcome o;
    {
        bool ok = true;
        for (const auto& g : abelian_groups_up_to(24)) {
            std::vector<CyclotomicGroupRing> e;
            for (const auto& c : enumerate_characters(g)) e.push_back(idempotent(c));
            CyclotomicGroupRing sum(g, Cyclotomic(g.exponent())), one(g, Cyclotomic(g.exponent()));
            one[0] = Cyclotomic(g.exponent(), Rational(1));
            for (const auto& x : e) sum += x;
            ok = ok && sum == one;
            for (std::size_t i = 0; i < e.size() && ok; ++i)
                for (std::size_t j = 0; j < e.size() && ok; ++j) {
                    CyclotomicGroupRing p = e[i] * e[j];
                    ok = i == j ? p == e[i]
                                : std::all_of(p.coefficients().begin(), p.coefficients().end(),
                                              [](const Cyclotomic& c) { return c.is_zero(); });
                }
        }
        o.require(ok, "idempotents orthogonal and complete for |G| <= 24");
    }
    Rng rng(0x5eed5);
    {
        int bad = 0;
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
            RationalLattice l(n, rng.full_rank(n, 6, 4)), m(n, rng.full_rank(n, 6, 4)), k(n, rng.full_rank(n, 6, 4));
            if (sinnott_index(l, k) != sinnott_index(l, m) * sinnott_index(m, k)) ++bad;
        }
        o.require(bad == 0, "index multiplicative on 200 triples (" + std::to_string(bad) + " bad)");
    }
    {
        int bad = 0;
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 5));
            RationalLattice m(n, rng.full_rank(n, 5, 3));
            RatMatrix gamma = rng.full_rank(n, 7, t % 2 ? 3 : 1);
            if (sinnott_index(m, m.image(gamma)) != mp::abs(rational_det(gamma))) ++bad;
        }
        o.require(bad == 0, "(M : gamma M) = |det gamma| on 200 gamma (" + std::to_string(bad) + " bad)");
    }
    std::vector<FiniteAbelianGroup> small{FiniteAbelianGroup({2}), FiniteAbelianGroup({3}), FiniteAbelianGroup({4}),
                                          FiniteAbelianGroup({2, 2})};
    {
        int bad = 0;
        for (int t = 0; t < 50; ++t) {
            const auto& g = small[static_cast<std::size_t>(t) % small.size()];
            GModuleLattice m = random_small_module(rng, g);
            auto subs = all_subgroups(g);
            const Subgroup& h = subs[rng.uniform(0, subs.size() - 1)];
            if (tate_h0(h, m) != brute_force_h0(h, m)) ++bad;
        }
        o.require(bad == 0, "tate H^0 matches enumeration on 50 modules (" + std::to_string(bad) + " bad)");
    }
    {
        int bad = 0;
        for (int t = 0; t < 50; ++t) {
            const auto& g = small[static_cast<std::size_t>(t) % small.size()];
            GModuleLattice m = t % 2 ? random_small_module(rng, g) : random_module(rng, g, 1 + t % 3 / 2);
            Rational idx = semisimplify(m).index;
            Integer bound = mp::pow(Integer(g.order()), static_cast<unsigned>(m.rank()));
            if (mp::denominator(idx) != 1 || bound % mp::numerator(idx) != 0) ++bad;
        }
        o.require(bad == 0, "(S(M) : M) divides |G|^rank on 50 lattices (" + std::to_string(bad) + " bad)");
    }
    {
        int bad = 0;
        std::vector<std::pair<FiniteAbelianGroup, std::size_t>> shapes{
            {FiniteAbelianGroup({2}), 2}, {FiniteAbelianGroup({3}), 1}, {FiniteAbelianGroup({4}), 1},
            {FiniteAbelianGroup({2, 2}), 1}, {FiniteAbelianGroup(), 4}};
        for (int t = 0; t < 30; ++t) {
            const auto& [g, copies] = shapes[static_cast<std::size_t>(t) % shapes.size()];
            GModuleLattice m = random_module(rng, g, copies, 2);
            GModuleLattice n;
            do n = m.submodule(rng.int_matrix(copies + 1, m.rank(), 3) * m.lattice().basis());
            while (n.rank() != m.rank());
            WedgeCoordinates coords(m, copies);
            if (sinnott_index(m.lattice(), n.lattice()) !=
                sinnott_index(wedge_image(coords, m).wedge_lattice.lattice(), wedge_image(coords, n).wedge_lattice.lattice()))
                ++bad;
        }
        o.require(bad == 0, "index survives the top wedge on 30 pairs (" + std::to_string(bad) + " bad)");
    }
    return o;
}

// 6: Rubin lattices
Outcome rubin() {
    Outcome o;
    bool ok = true;
    for (const auto& g : abelian_groups_up_to(12)) {
        GModuleLattice m = GModuleLattice::regular(g);
        ok = ok && rubin_lattice(m, 1).lattice() == wedge_image(m, 1).wedge_lattice.lattice() &&
             rubin_vs_wedge_index(m, 1, group_ring_one(g)) == 1;
    }
    o.require(ok, "degree-one Rubin lattice of Z[G] is Z[G] for |G| <= 12");
    Rng rng(0x0b1);
    int bad = 0;
    Integer smallest = -1, largest = 0;
    for (int t = 0; t < 30; ++t) {
        auto [m, r] = constructed_module(rng, t);
        WedgeSpace w = wedge_image(m, r);
        Rational idx = rubin_vs_wedge_index(m, r, group_ring_one(m.group()));
        Integer oracle = rubin_index_oracle(w);
        if (smallest < 0 || oracle < smallest) smallest = oracle;
        largest = std::max(largest, oracle);
        if (!rubin_lattice(w).lattice().contains(w.wedge_lattice.lattice()) || idx < 1 || idx != Rational(oracle)) ++bad;
    }
    o.require(bad == 0, "index matches the minors oracle on 30 constructed modules (" + std::to_string(bad) +
                            " bad, indices from " + smallest.str() + " to " + largest.str() + ")");
    return o;
}

// 7: inclusion-exclusion and the two zeta* branches on the genuine instances
Outcome inclusion_exclusion() {
    Outcome o;
    const Real bound("1e-40");
    for (const std::string file : {"q-sqrt5.json", "q-sqrt2.json"}) {
        VerificationReport r = partial_report(instance(file), "lvalue");
        const ReportSection* s = r.section("lvalues");
        if (!s) {
            o.require(false, file + ": no L-value section");
            continue;
        }
        for (const auto& c : s->checks) {
            if (c.id != "inclusion_exclusion" && c.id.rfind("zeta_branches", 0) != 0) continue;
            o.require(c.passed && c.residual && *c.residual < bound, file + ": " + c.id + " " + describe(&c));
        }
    }
    return o;
}

// 8: Stark elements are integral and obey the image law
Outcome stark() {
    Outcome o;
    for (const std::string file : {"q-sqrt5.json", "q-sqrt2.json"}) {
        const FieldInstance& fi = instance(file);
        for (const auto& g : divisors_of_radical(fi.ext)) {
            StarkElement eta = solve_stark_element(fi, g);
            o.require(eta.exact && eta.rounding_distance < Real("1e-50"),
                      file + ": eta " + g.str() + " rounding distance " + sci(eta.rounding_distance));
        }
        VerificationReport r = verify_instance(fi);
        for (const auto& g : divisors_of_radical(fi.ext)) {
            const ReportCheck* stated = find(r, "stark", "image law " + g.str(), "stated");
            const ReportCheck* amended = find(r, "stark", "image law " + g.str(), "amended");
            o.require(stated && stated->passed, file + ": image law " + g.str() + " as stated " + describe(stated));
            o.note(file + ": image law " + g.str() + " amended " + describe(amended));
        }
    }
    return o;
}

int run_cli(const std::string& args, const std::string& out) {
    std::string cmd = std::string(RSTARK_CLI) + " " + args + " > " + out + " 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9: byte-identical reports and the torsion failure mode
Outcome determinism() {
    Outcome o;
    const FieldInstance& fi = instance("q-sqrt5.json");
    o.require(verify_instance(fi).to_json() == verify_instance(fi).to_json(), "in-process JSON identical");
    const std::string a = "acceptance_run_a.json", b = "acceptance_run_b.json", t = "acceptance_torsion.txt";
    const std::string field = "--field " + data_path("q-sqrt5.json") + " --format json";
    int ca = run_cli("verify " + field, a), cb = run_cli("verify " + field, b);
    std::string ja = slurp(a), jb = slurp(b);
    o.require(!ja.empty() && ja == jb && ca == cb, "two CLI runs byte-identical (" + std::to_string(ja.size()) + " bytes)");
    int ct = run_cli("verify --field " + data_path("bad-torsion.json"), t);
    std::string text = slurp(t);
    o.require(ct == 1, "bad-torsion exit code " + std::to_string(ct));
    o.require(text.find("hypothesis (4)") != std::string::npos, "bad-torsion names hypothesis (4)");
    std::remove(a.c_str());
    std::remove(b.c_str());
    std::remove(t.c_str());
    return o;
}

} // namespace

int main(int argc, char** argv) {
    using Fn = Outcome (*)();
    const std::vector<std::pair<std::string, Fn>> criteria{
        {"flagship index formula at 100 digits", flagship},
        {"L'(0, chi) against log of fundamental units", l_oracle},
        {"trivial-character leading term equals log 5", trivial_leading},
        {"regulator restriction identity", restriction},
        {"exact algebra suite", exact_suite},
        {"Rubin lattice", rubin},
        {"inclusion-exclusion and zeta* branches", inclusion_exclusion},
        {"Stark recognition and image law", stark},
        {"determinism and failure modes", determinism},
    };
    std::size_t first = 0, last = criteria.size();
    if (argc > 1) {
        first = std::strtoul(argv[1], nullptr, 10);
        if (first < 1 || first > criteria.size()) {
            std::cerr << "usage: rstark_acceptance [1-" << criteria.size() << "]\n";
            return 2;
        }
        last = first--;
    }
    bool all = true;
    for (std::size_t i = first; i < last; ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        all = all && o.pass;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << "\n";
        for (const auto& n : o.notes) std::cout << "    " << n << "\n";
        std::cout.flush();
    }
    return all ? 0 : 1;
}
