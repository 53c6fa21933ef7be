#pragma once
// Shared helpers and independent oracles for the unit tests. The oracles deliberately avoid
// the library's own HNF/Smith/index code: determinants by fraction-free elimination,
// indices by gcd of maximal minors, cohomology by enumeration.

#include "rstark/verify.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#ifndef RSTARK_DATA_DIR
#define RSTARK_DATA_DIR "data"
#endif

namespace testsupport {

using namespace rstark;
namespace mp = boost::multiprecision;

inline std::string data_path(const std::string& name) { return std::string(RSTARK_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// cached instances at 100 digits
inline const FieldInstance& instance(const std::string& file, unsigned digits = 100) {
    static std::map<std::pair<std::string, unsigned>, std::unique_ptr<FieldInstance>> cache;
    auto key = std::make_pair(file, digits);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<FieldInstance>(load_field_instance(data_path(file), PrecisionContext(digits))))
                 .first;
    return *it->second;
}

// every finite abelian group of order <= n, by invariant factors d1 | d2 | ...
inline std::vector<FiniteAbelianGroup> abelian_groups_up_to(std::int64_t n) {
    std::vector<FiniteAbelianGroup> out;
    std::function<void(const std::vector<std::int64_t>&, std::int64_t)> rec = [&](const std::vector<std::int64_t>& inv,
                                                                                 std::int64_t ord) {
        out.emplace_back(inv);
        for (std::int64_t d = 2; ord * d <= n; ++d) {
            if (!inv.empty() && d % inv.back() != 0) continue;
            auto next = inv;
            next.push_back(d);
            rec(next, ord * d);
        }
    };
    rec({}, 1);
    return out;
}

// fraction-free determinant of an integer matrix
inline Integer bareiss_det(std::vector<std::vector<Integer>> a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline Rational rational_det(const RatMatrix& m) {
    // scale rows to integers, then Bareiss
    const std::size_t n = m.rows();
    std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
    Rational scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Integer den = 1;
        for (std::size_t j = 0; j < n; ++j) den = lcm(den, Integer(mp::denominator(m(i, j))));
        scale /= Rational(den);
        for (std::size_t j = 0; j < n; ++j) a[i][j] = mp::numerator(m(i, j) * Rational(den));
    }
    return Rational(bareiss_det(a)) * scale;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    if (k > n) return;
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// for independent integer rows: (saturation : row lattice) = gcd of the maximal minors
inline Integer gcd_of_maximal_minors(const std::vector<std::vector<Integer>>& rows) {
    const std::size_t k = rows.size();
    if (k == 0) return 1;
    const std::size_t n = rows[0].size();
    Integer g = 0;
    for_each_subset(n, k, [&](const std::vector<std::size_t>& cols) {
        if (g == 1) return;
        std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sub[i][j] = rows[i][cols[j]];
        g = mp::gcd(g, Integer(mp::abs(bareiss_det(sub))));
    });
    return g;
}

// greedy choice of linearly independent rows, by exact rank (rank() is plain Gaussian elimination)
inline std::vector<std::vector<Integer>> independent_rows(const RatMatrix& m) {
    RatMatrix acc(0, m.cols());
    std::vector<std::vector<Integer>> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        RatMatrix trial = acc;
        trial.append_row(m.row(i));
        if (rank(trial) == trial.rows()) {
            acc = trial;
            std::vector<Integer> r;
            for (const auto& q : m.row(i)) r.push_back(mp::numerator(q));
            out.push_back(r);
        }
    }
    return out;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen); }
    RatMatrix int_matrix(std::size_t r, std::size_t c, std::int64_t bound) {
        RatMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform(-bound, bound);
        return m;
    }
    RatMatrix full_rank(std::size_t n, std::int64_t bound, std::int64_t den = 1) {
        while (true) {
            RatMatrix m = int_matrix(n, n, bound);
            if (den > 1)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) m(i, j) /= uniform(1, den);
            if (rank(m) == n) return m;
        }
    }
};

// brute-force |H^0(H, M)| = |M^H / N_H M| by enumeration: the map (Z/h)^k -> M^H / N_H M,
// c -> c . basis(M^H), is onto because h M^H lies in N_H M
inline Integer brute_force_h0(const Subgroup& h, const GModuleLattice& m) {
    const std::size_t n = m.ambient();
    std::vector<RatMatrix> acts;
    for (const auto& a : h.elements()) acts.push_back(m.action(a));
    // M^H in lattice coordinates: c . B fixed iff c . B (A_g - I) = 0 for the generators
    const RatMatrix& b = m.lattice().basis();
    RatMatrix fixed = b;
    if (!h.generators().empty()) {
        RatMatrix big(n, n * h.generators().size());
        for (std::size_t gi = 0; gi < h.generators().size(); ++gi) {
            RatMatrix a = m.action(h.generators()[gi]);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) big(i, gi * n + j) = a(i, j) - (i == j ? 1 : 0);
        }
        IntMatrix ker = integer_left_kernel(clear_denominators(b * big).second);
        fixed = convert<Rational>(ker) * b;
    }
    RatMatrix norm(n, n);
    for (const auto& a : acts)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) norm(i, j) += a(i, j);
    RationalLattice nm = m.lattice().image(norm);
    const std::int64_t ho = static_cast<std::int64_t>(h.order());
    const std::size_t k = fixed.rows();
    std::int64_t total = 1, kernel = 0;
    for (std::size_t i = 0; i < k; ++i) total *= ho;
    std::vector<std::int64_t> c(k, 0);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t t = idx;
        RatVector v(n, Rational(0));
        for (std::size_t i = 0; i < k; ++i) {
            c[i] = t % ho;
            t /= ho;
            for (std::size_t j = 0; j < n; ++j) v[j] += Rational(c[i]) * fixed(i, j);
        }
        if (nm.contains(v)) ++kernel;
    }
    return Integer(total / kernel);
}

// a random G-stable full-rank sublattice of Z[G]^copies, generated by a few random elements
inline GModuleLattice random_module(Rng& rng, const FiniteAbelianGroup& g, std::size_t copies, std::int64_t bound = 2) {
    GModuleLattice free = GModuleLattice::regular(g, copies);
    const std::size_t n = free.ambient();
    while (true) {
        RatMatrix gens = rng.int_matrix(copies + 1, n, bound);
        GModuleLattice m = free.submodule(gens);
        if (m.rank() == n) return m;
    }
}

// Z[G/K] with G acting on cosets
inline GModuleLattice permutation_module(const FiniteAbelianGroup& g, const Subgroup& k) {
    Quotient q = quotient_and_projection(g, k);
    const std::size_t n = static_cast<std::size_t>(q.target.order());
    std::vector<RatMatrix> acts;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        Element s = q.project(g.generator(i));
        RatMatrix a(n, n);
        for (std::size_t c = 0; c < n; ++c) a(c, q.target.index_of(q.target.add(q.target.element_at(c), s))) = 1;
        acts.push_back(a);
    }
    return GModuleLattice(g, acts, RationalLattice::standard(n));
}

// twist of Z by a character of order <= 2
inline GModuleLattice sign_module(const FiniteAbelianGroup& g, const Character& chi) {
    std::vector<RatMatrix> acts;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        RatMatrix a(1, 1);
        a(0, 0) = chi.exponent_at(g.generator(i)) == 0 ? 1 : -1;
        acts.push_back(a);
    }
    return GModuleLattice(g, acts, RationalLattice::standard(1));
}

inline GModuleLattice direct_sum(const std::vector<GModuleLattice>& ms) {
    const auto& g = ms[0].group();
    std::size_t n = 0;
    for (const auto& m : ms) n += m.ambient();
    std::vector<RatMatrix> acts(g.rank(), RatMatrix(n, n));
    RatMatrix basis(0, n);
    std::size_t off = 0;
    for (const auto& m : ms) {
        for (std::size_t i = 0; i < g.rank(); ++i) {
            const RatMatrix& a = m.actions()[i];
            for (std::size_t r = 0; r < m.ambient(); ++r)
                for (std::size_t c = 0; c < m.ambient(); ++c) acts[i](off + r, off + c) = a(r, c);
        }
        for (std::size_t r = 0; r < m.rank(); ++r) {
            RatVector v(n, Rational(0));
            for (std::size_t c = 0; c < m.ambient(); ++c) v[off + c] = m.lattice().basis()(r, c);
            basis.append_row(v);
        }
        off += m.ambient();
    }
    return GModuleLattice(g, acts, RationalLattice(n, basis));
}

inline GModuleLattice random_small_module(Rng& rng, const FiniteAbelianGroup& g) {
    std::vector<GModuleLattice> parts;
    auto subs = all_subgroups(g);
    auto chars = enumerate_characters(g);
    const int pieces = static_cast<int>(rng.uniform(1, 2));
    for (int i = 0; i < pieces; ++i) {
        switch (rng.uniform(0, 2)) {
        case 0: parts.push_back(permutation_module(g, subs[rng.uniform(0, subs.size() - 1)])); break;
        case 1: {
            std::vector<Character> real;
            for (const auto& c : chars)
                if (c.order() <= 2) real.push_back(c);
            parts.push_back(sign_module(g, real[rng.uniform(0, real.size() - 1)]));
            break;
        }
        default: parts.push_back(GModuleLattice::regular(g)); break;
        }
    }
    GModuleLattice m = direct_sum(parts);
    // a random G-stable sublattice of full rank
    while (true) {
        RatMatrix gens = rng.int_matrix(2, m.ambient(), 2);
        GModuleLattice sub = m.submodule(gens);
        if (sub.rank() == m.ambient()) return sub;
    }
}


// G-lattices built from trivial and sign summands, where the Rubin lattice is strictly larger
// than the wedge lattice; a random G-stable sublattice of full rank on top. Returns (M, r).
inline std::pair<GModuleLattice, std::size_t> constructed_module(Rng& rng, int t) {
    static const std::vector<FiniteAbelianGroup> groups{FiniteAbelianGroup({2}), FiniteAbelianGroup({3}),
                                                        FiniteAbelianGroup({2, 2})};
    const FiniteAbelianGroup& g = groups[static_cast<std::size_t>(t) % groups.size()];
    auto chars = enumerate_characters(g);
    std::vector<Character> real;
    for (const auto& c : chars)
        if (c.order() <= 2) real.push_back(c);
    GModuleLattice piece = (t / 3) % 2 ? sign_module(g, real[rng.uniform(0, real.size() - 1)])
                                       : permutation_module(g, Subgroup::whole(g));
    std::vector<GModuleLattice> parts(2, piece);
    if (t % 4 == 3) parts.push_back(piece);
    GModuleLattice m = direct_sum(parts);
    while (true) {
        GModuleLattice sub = m.submodule(rng.int_matrix(m.ambient(), m.ambient(), 3));
        if (sub.rank() == m.ambient()) return {sub, 2};
    }
}

// brute force over all minors of the full Psi generator matrix: the gcd of rho x rho minors
// does not depend on the generating set, and equals (Rubin : wedge) since the Rubin lattice
// is the saturation
inline Integer rubin_index_oracle(const WedgeSpace& w) {
    const std::size_t rho = w.dimension;
    std::vector<std::vector<Integer>> gens;
    for (std::size_t i = 0; i < w.generators.rows(); ++i) {
        std::vector<Integer> row;
        for (const auto& q : w.generators.row(i)) {
            if (mp::denominator(q) != 1) throw std::logic_error("Psi generators must be integral");
            row.push_back(mp::numerator(q));
        }
        gens.push_back(row);
    }
    Integer g = 0;
    for_each_subset(gens.size(), rho, [&](const std::vector<std::size_t>& ri) {
        if (g == 1) return;
        std::vector<std::vector<Integer>> sub;
        for (auto i : ri) sub.push_back(gens[i]);
        g = mp::gcd(g, gcd_of_maximal_minors(sub));
    });
    return g;
}

} // namespace testsupport
