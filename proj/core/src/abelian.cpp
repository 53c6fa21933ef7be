#include "rstark/abelian.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rstark {

namespace {
constexpr std::int64_t kMaxOrder = 1000000;
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> invariants) : inv_(std::move(invariants)) {
    for (std::size_t i = 0; i < inv_.size(); ++i) {
        if (inv_[i] < 2) throw std::invalid_argument("invariant factors must be >= 2");
        if (i > 0 && inv_[i] % inv_[i - 1] != 0) throw std::invalid_argument("invariant factors must form a divisibility chain");
        order_ *= inv_[i];
        if (order_ > kMaxOrder) throw std::length_error("group order exceeds 10^6");
    }
}

FiniteAbelianGroup::Presentation FiniteAbelianGroup::from_relations(std::size_t generators, const IntMatrix& relations) {
    if (relations.cols() != generators) throw std::invalid_argument("relation width mismatch");
    auto s = smith_form(relations);
    if (s.diagonal.size() < generators) throw std::invalid_argument("relations do not define a finite group");
    std::vector<std::int64_t> inv;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
        if (s.diagonal[i] == 1) continue;
        inv.push_back(to_int64(s.diagonal[i]));
        kept.push_back(i);
    }
    Presentation p;
    p.group = FiniteAbelianGroup(inv);
    p.to_group = s.v.select_cols(kept);
    for (std::size_t i = 0; i < generators; ++i) p.gen_images.push_back(p.group.reduce(p.to_group.row(i)));
    return p;
}

FiniteAbelianGroup::Presentation FiniteAbelianGroup::from_orders(const std::vector<std::int64_t>& orders) {
    IntMatrix rel(orders.size(), orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) rel(i, i) = orders[i];
    return from_relations(orders.size(), rel);
}

Element FiniteAbelianGroup::add(const Element& a, const Element& b) const {
    Element c(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) c[i] = mod(a[i] + b[i], inv_[i]);
    return c;
}

Element FiniteAbelianGroup::negate(const Element& a) const {
    Element c(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) c[i] = mod(-a[i], inv_[i]);
    return c;
}

Element FiniteAbelianGroup::scale(const Element& a, std::int64_t k) const {
    Element c(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) c[i] = mod(mod(a[i], inv_[i]) * mod(k, inv_[i]), inv_[i]);
    return c;
}

Element FiniteAbelianGroup::reduce(const std::vector<Integer>& v) const {
    if (v.size() != inv_.size()) throw std::invalid_argument("element length mismatch");
    Element c(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) {
        Integer r = v[i] % inv_[i];
        if (r < 0) r += inv_[i];
        c[i] = to_int64(r);
    }
    return c;
}

Element FiniteAbelianGroup::generator(std::size_t i) const {
    Element e = identity();
    e[i] = 1;
    return e;
}

std::int64_t FiniteAbelianGroup::element_order(const Element& a) const {
    std::int64_t o = 1;
    for (std::size_t i = 0; i < inv_.size(); ++i) o = lcm64(o, inv_[i] / gcd64(mod(a[i], inv_[i]), inv_[i]));
    return o;
}

bool FiniteAbelianGroup::is_identity(const Element& a) const {
    for (std::size_t i = 0; i < inv_.size(); ++i)
        if (mod(a[i], inv_[i]) != 0) return false;
    return true;
}

std::size_t FiniteAbelianGroup::index_of(const Element& a) const {
    std::size_t idx = 0, radix = 1;
    for (std::size_t i = 0; i < inv_.size(); ++i) {
        idx += static_cast<std::size_t>(mod(a[i], inv_[i])) * radix;
        radix *= static_cast<std::size_t>(inv_[i]);
    }
    return idx;
}

Element FiniteAbelianGroup::element_at(std::size_t index) const {
    Element e(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) {
        e[i] = static_cast<std::int64_t>(index % static_cast<std::size_t>(inv_[i]));
        index /= static_cast<std::size_t>(inv_[i]);
    }
    return e;
}

std::vector<Element> FiniteAbelianGroup::elements() const {
    std::vector<Element> out;
    out.reserve(static_cast<std::size_t>(order_));
    for (std::size_t i = 0; i < static_cast<std::size_t>(order_); ++i) out.push_back(element_at(i));
    return out;
}

// ---------------- subgroups ----------------

Subgroup::Subgroup(const FiniteAbelianGroup& parent, std::vector<Element> generators)
    : parent_(parent), gens_(std::move(generators)) {
    std::set<std::size_t> seen{parent_.index_of(parent_.identity())};
    std::vector<Element> frontier{parent_.identity()};
    for (std::size_t head = 0; head < frontier.size(); ++head)
        for (const auto& g : gens_) {
            if (g.size() != parent_.rank()) throw std::invalid_argument("subgroup generator has wrong length");
            Element y = parent_.add(frontier[head], g);
            if (seen.insert(parent_.index_of(y)).second) frontier.push_back(y);
        }
    members_.assign(seen.begin(), seen.end());
}

Subgroup Subgroup::whole(const FiniteAbelianGroup& parent) {
    std::vector<Element> gens;
    for (std::size_t i = 0; i < parent.rank(); ++i) gens.push_back(parent.generator(i));
    return Subgroup(parent, gens);
}

std::vector<Element> Subgroup::elements() const {
    std::vector<Element> out;
    for (auto i : members_) out.push_back(parent_.element_at(i));
    return out;
}

bool Subgroup::contains(const Element& a) const {
    return std::binary_search(members_.begin(), members_.end(), parent_.index_of(a));
}

bool Subgroup::contains(const Subgroup& h) const {
    return std::includes(members_.begin(), members_.end(), h.members_.begin(), h.members_.end());
}

Subgroup Subgroup::join(const Subgroup& o) const {
    std::vector<Element> gens = gens_;
    gens.insert(gens.end(), o.gens_.begin(), o.gens_.end());
    return Subgroup(parent_, gens);
}

// ---------------- characters ----------------

Character::Character(const FiniteAbelianGroup& g, std::vector<std::int64_t> values)
    : group_(g), values_(std::move(values)) {
    if (values_.size() != g.rank()) throw std::invalid_argument("character value vector has wrong length");
    const std::int64_t m = g.exponent();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] = mod(values_[i], m);
        if (mod(values_[i] * g.invariants()[i], m) != 0) throw std::invalid_argument("character value violates a relation");
    }
}

std::int64_t Character::exponent_at(const Element& a) const {
    const std::int64_t m = modulus();
    std::int64_t e = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) e = mod(e + mod(a[i], m) * values_[i], m);
    return e;
}

Complex Character::evaluate(const Element& a) const { return root_of_unity(exponent_at(a), modulus()); }

std::int64_t Character::order() const {
    const std::int64_t m = modulus();
    std::int64_t o = 1;
    for (auto v : values_) o = lcm64(o, m / gcd64(v, m));
    return o;
}

bool Character::is_trivial() const {
    return std::all_of(values_.begin(), values_.end(), [](std::int64_t v) { return v == 0; });
}

bool Character::trivial_on(const Subgroup& h) const {
    for (const auto& g : h.generators())
        if (exponent_at(g) != 0) return false;
    return true;
}

Character Character::power(std::int64_t k) const {
    std::vector<std::int64_t> v(values_.size());
    const std::int64_t m = modulus();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod(values_[i] * mod(k, m), m);
    return Character(group_, v);
}

Character Character::operator*(const Character& o) const {
    if (!(group_ == o.group_)) throw std::invalid_argument("characters of different groups");
    std::vector<std::int64_t> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + o.values_[i];
    return Character(group_, v);
}

std::size_t Character::index() const {
    Element k(values_.size());
    const std::int64_t m = modulus();
    for (std::size_t i = 0; i < values_.size(); ++i) k[i] = values_[i] / (m / group_.invariants()[i]);
    return group_.index_of(k);
}

std::vector<Character> enumerate_characters(const FiniteAbelianGroup& g) {
    std::vector<Character> out;
    const std::int64_t m = g.exponent();
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(g.order()); ++idx) {
        Element k = g.element_at(idx);
        for (std::size_t i = 0; i < k.size(); ++i) k[i] *= m / g.invariants()[i];
        out.emplace_back(g, k);
    }
    return out;
}

std::vector<RationalCharacterOrbit> rational_orbits(const FiniteAbelianGroup& g) {
    std::vector<RationalCharacterOrbit> out;
    std::vector<bool> done(static_cast<std::size_t>(g.order()), false);
    for (const auto& chi : enumerate_characters(g)) {
        if (done[chi.index()]) continue;
        RationalCharacterOrbit orbit{chi, {}};
        const std::int64_t o = chi.order();
        for (std::int64_t k = 1; k <= o; ++k) {
            if (gcd64(k, o) != 1) continue;
            Character c = chi.power(k);
            if (!done[c.index()]) {
                done[c.index()] = true;
                orbit.members.push_back(c);
            }
        }
        out.push_back(std::move(orbit));
    }
    return out;
}

// ---------------- quotients ----------------

Element Quotient::project(const Element& a) const {
    std::vector<Integer> x(a.begin(), a.end());
    std::vector<Integer> y(target.rank(), Integer(0));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < target.rank(); ++j) y[j] += x[i] * projection(i, j);
    return target.reduce(y);
}

Character Quotient::inflate(const Character& psi) const {
    const std::int64_t scale = source.exponent() / target.exponent();
    std::vector<std::int64_t> v(source.rank());
    for (std::size_t i = 0; i < source.rank(); ++i) v[i] = psi.exponent_at(project(source.generator(i))) * scale;
    return Character(source, v);
}

Character Quotient::deflate(const Character& chi) const {
    if (!chi.trivial_on(kernel)) throw std::invalid_argument("character is not trivial on the kernel");
    const std::int64_t scale = source.exponent() / target.exponent();
    std::vector<std::int64_t> v(target.rank());
    for (std::size_t j = 0; j < target.rank(); ++j) {
        std::int64_t e = chi.exponent_at(coset_reps[target.index_of(target.generator(j))]);
        if (e % scale != 0) throw std::logic_error("deflated character value outside mu(exp(target))");
        v[j] = e / scale;
    }
    return Character(target, v);
}

Quotient quotient_and_projection(const FiniteAbelianGroup& g, const Subgroup& h) {
    if (!(h.parent() == g)) throw std::invalid_argument("subgroup of a different group");
    const std::size_t k = g.rank();
    IntMatrix rel(0, k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Integer> r(k, Integer(0));
        r[i] = g.invariants()[i];
        rel.append_row(r);
    }
    for (const auto& x : h.generators()) rel.append_row(std::vector<Integer>(x.begin(), x.end()));
    Quotient q;
    q.source = g;
    q.kernel = h;
    if (k == 0) {
        q.target = FiniteAbelianGroup();
        q.projection = IntMatrix(0, 0);
        q.coset_reps = {g.identity()};
        return q;
    }
    auto p = FiniteAbelianGroup::from_relations(k, rel);
    q.target = p.group;
    q.projection = p.to_group;
    q.coset_reps.assign(static_cast<std::size_t>(q.target.order()), Element());
    std::vector<bool> filled(q.coset_reps.size(), false);
    for (const auto& a : g.elements()) {
        std::size_t t = q.target.index_of(q.project(a));
        if (!filled[t]) {
            filled[t] = true;
            q.coset_reps[t] = a;
        }
    }
    if (static_cast<std::int64_t>(h.order()) * q.target.order() != g.order()) throw std::logic_error("quotient order mismatch");
    return q;
}

std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& g) {
    std::vector<Subgroup> out{Subgroup::trivial(g)};
    for (const auto& a : g.elements()) {
        Subgroup c(g, {a});
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) {
            Subgroup j = out[i].join(c);
            if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Subgroup& x, const Subgroup& y) {
        if (x.order() != y.order()) return x.order() < y.order();
        return x.element_indices() < y.element_indices();
    });
    return out;
}

} // namespace rstark
