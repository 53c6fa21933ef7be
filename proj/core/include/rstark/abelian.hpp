#pragma once

#include "rstark/matrix.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace rstark {

using Element = std::vector<std::int64_t>;

class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;
    // invariants must already form a divisibility chain of factors >= 2
    explicit FiniteAbelianGroup(std::vector<std::int64_t> invariants);

    // Z^n modulo the row lattice of relations, normalized by SNF. gen_images row i is
    // the image of the i-th free generator.
    struct Presentation;
    static Presentation from_relations(std::size_t generators, const IntMatrix& relations);
    static Presentation from_orders(const std::vector<std::int64_t>& orders);

    const std::vector<std::int64_t>& invariants() const { return inv_; }
    std::size_t rank() const { return inv_.size(); }
    std::int64_t order() const { return order_; }
    std::int64_t exponent() const { return inv_.empty() ? 1 : inv_.back(); }

    Element identity() const { return Element(inv_.size(), 0); }
    Element add(const Element& a, const Element& b) const;
    Element negate(const Element& a) const;
    Element scale(const Element& a, std::int64_t k) const;
    Element reduce(const std::vector<Integer>& v) const;
    Element generator(std::size_t i) const;
    std::int64_t element_order(const Element& a) const;
    bool is_identity(const Element& a) const;

    // mixed radix enumeration, identity first
    std::size_t index_of(const Element& a) const;
    Element element_at(std::size_t index) const;
    std::vector<Element> elements() const;

    bool operator==(const FiniteAbelianGroup& o) const { return inv_ == o.inv_; }

private:
    std::vector<std::int64_t> inv_;
    std::int64_t order_ = 1;
};

struct FiniteAbelianGroup::Presentation {
    FiniteAbelianGroup group;
    std::vector<Element> gen_images;
    IntMatrix to_group;  // x (row, free coordinates) -> x * to_group reduced mod invariants
};

class Subgroup {
public:
    Subgroup() = default;
    Subgroup(const FiniteAbelianGroup& parent, std::vector<Element> generators);
    static Subgroup trivial(const FiniteAbelianGroup& parent) { return Subgroup(parent, {}); }
    static Subgroup whole(const FiniteAbelianGroup& parent);

    const FiniteAbelianGroup& parent() const { return parent_; }
    const std::vector<Element>& generators() const { return gens_; }
    const std::vector<std::size_t>& element_indices() const { return members_; }
    std::vector<Element> elements() const;
    std::size_t order() const { return members_.size(); }
    bool contains(const Element& a) const;
    bool is_trivial() const { return members_.size() == 1; }
    bool contains(const Subgroup& h) const;
    Subgroup join(const Subgroup& o) const;

    bool operator==(const Subgroup& o) const { return members_ == o.members_; }

private:
    FiniteAbelianGroup parent_;
    std::vector<Element> gens_;
    std::vector<std::size_t> members_;  // sorted enumeration indices
};

// Values are exponents j of zeta_m with m = exp(G): chi(gen_i) = zeta_m^{values[i]}.
class Character {
public:
    Character() = default;
    Character(const FiniteAbelianGroup& g, std::vector<std::int64_t> values);
    static Character trivial(const FiniteAbelianGroup& g) { return Character(g, Element(g.rank(), 0)); }

    const FiniteAbelianGroup& group() const { return group_; }
    const std::vector<std::int64_t>& values() const { return values_; }
    std::int64_t modulus() const { return group_.exponent(); }

    // exponent j with chi(a) = zeta_m^j
    std::int64_t exponent_at(const Element& a) const;
    Complex evaluate(const Element& a) const;  // at the active precision
    std::int64_t order() const;
    bool is_trivial() const;
    bool is_real() const { return power(-1) == *this; }
    bool trivial_on(const Subgroup& h) const;

    Character power(std::int64_t k) const;
    Character conj() const { return power(-1); }
    Character operator*(const Character& o) const;

    // position among enumerate_characters
    std::size_t index() const;

    bool operator==(const Character& o) const { return group_ == o.group_ && values_ == o.values_; }
    bool operator<(const Character& o) const { return index() < o.index(); }

private:
    FiniteAbelianGroup group_;
    std::vector<std::int64_t> values_;
};

std::vector<Character> enumerate_characters(const FiniteAbelianGroup& g);
// every subgroup, ordered by size then by members
std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& g);

struct RationalCharacterOrbit {
    Character representative;
    std::vector<Character> members;
    std::size_t size() const { return members.size(); }
};
std::vector<RationalCharacterOrbit> rational_orbits(const FiniteAbelianGroup& g);

struct Quotient {
    FiniteAbelianGroup source;
    FiniteAbelianGroup target;
    IntMatrix projection;            // source exponent row * projection, reduced mod target invariants
    std::vector<Element> coset_reps; // indexed by target enumeration; first is identity
    Subgroup kernel;

    Element project(const Element& a) const;
    // chi on target pulled back to source
    Character inflate(const Character& psi) const;
    // chi on source trivial on the kernel pushed down
    Character deflate(const Character& chi) const;
};
Quotient quotient_and_projection(const FiniteAbelianGroup& g, const Subgroup& h);

// Presentation of an abstract finite abelian group given by generators and a
// multiplication; the relation lattice is the kernel of Z^k -> group.
struct EnumeratedPresentation {
    FiniteAbelianGroup::Presentation presentation;
    IntMatrix relation_lattice;  // HNF basis of the kernel of Z^k -> A
    std::size_t order = 0;
};

template <class T, class Mul, class Key>
EnumeratedPresentation present_by_enumeration(const std::vector<T>& gens, const T& identity, Mul mul, Key key,
                                              std::size_t limit = 1000000) {
    using K = decltype(key(identity));
    const std::size_t k = gens.size();
    std::map<K, std::vector<Integer>> seen;
    std::vector<std::pair<T, std::vector<Integer>>> queue;
    std::vector<Integer> zero(k, Integer(0));
    seen.emplace(key(identity), zero);
    queue.emplace_back(identity, zero);
    IntMatrix rel(0, k);
    auto compress = [&] {
        if (rel.rows() > 2 * k + 4) rel = hermite_form(rel).basis;
    };
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (std::size_t j = 0; j < k; ++j) {
            T y = mul(queue[head].first, gens[j]);
            std::vector<Integer> vy = queue[head].second;
            vy[j] += 1;
            auto kk = key(y);
            auto it = seen.find(kk);
            if (it != seen.end()) {
                std::vector<Integer> d(k);
                bool nonzero = false;
                for (std::size_t t = 0; t < k; ++t) {
                    d[t] = vy[t] - it->second[t];
                    if (d[t] != 0) nonzero = true;
                }
                if (nonzero) {
                    rel.append_row(d);
                    compress();
                }
            } else {
                if (seen.size() >= limit) throw std::length_error("enumerated group exceeds size limit");
                seen.emplace(kk, vy);
                queue.emplace_back(std::move(y), std::move(vy));
            }
        }
    }
    EnumeratedPresentation out;
    out.relation_lattice = rel.rows() ? hermite_form(rel).basis : IntMatrix(0, k);
    out.presentation = FiniteAbelianGroup::from_relations(k, out.relation_lattice);
    out.order = seen.size();
    if (static_cast<std::int64_t>(out.order) != out.presentation.group.order())
        throw std::logic_error("enumeration and relation lattice disagree");
    return out;
}

} // namespace rstark
