#pragma once

#include "rstark/abelian.hpp"
#include "rstark/cyclotomic.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rstark {

// Formal sum over G with coefficients in S, indexed by the group enumeration order.
// S is one of Rational, Cyclotomic, Real, Complex.
template <class S>
class GroupRingElement {
public:
    GroupRingElement() = default;
    GroupRingElement(const FiniteAbelianGroup& g, const S& zero)
        : g_(g), c_(static_cast<std::size_t>(g.order()), zero) {}
    GroupRingElement(const FiniteAbelianGroup& g, std::vector<S> coeffs) : g_(g), c_(std::move(coeffs)) {
        if (c_.size() != static_cast<std::size_t>(g.order())) throw std::invalid_argument("coefficient count != |G|");
    }

    const FiniteAbelianGroup& group() const { return g_; }
    const std::vector<S>& coefficients() const { return c_; }
    S& operator[](std::size_t i) { return c_[i]; }
    const S& operator[](std::size_t i) const { return c_[i]; }
    S& at(const Element& a) { return c_[g_.index_of(a)]; }
    const S& at(const Element& a) const { return c_[g_.index_of(a)]; }

    GroupRingElement& operator+=(const GroupRingElement& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    GroupRingElement& operator-=(const GroupRingElement& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    template <class T>
    GroupRingElement& scale(const T& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
    friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
    friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
        a.check(b);
        GroupRingElement p(a.g_, a.c_.empty() ? S() : a.c_[0] - a.c_[0]);
        const auto elems = a.g_.elements();
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j] == 0) continue;
                p.c_[a.g_.index_of(a.g_.add(elems[i], elems[j]))] += a.c_[i] * b.c_[j];
            }
        }
        return p;
    }
    bool operator==(const GroupRingElement& o) const { return g_ == o.g_ && c_ == o.c_; }
    bool operator!=(const GroupRingElement& o) const { return !(*this == o); }

    // sigma -> sigma^{-1} on the support
    GroupRingElement involution() const {
        GroupRingElement out = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) out.c_[g_.index_of(g_.negate(g_.element_at(i)))] = c_[i];
        return out;
    }

    template <class T, class F>
    GroupRingElement<T> map(F f) const {
        std::vector<T> v;
        v.reserve(c_.size());
        for (const auto& x : c_) v.push_back(f(x));
        return GroupRingElement<T>(g_, std::move(v));
    }

private:
    void check(const GroupRingElement& o) const {
        if (!(g_ == o.g_)) throw std::invalid_argument("group ring elements over different groups");
    }
    FiniteAbelianGroup g_;
    std::vector<S> c_;
};

using RationalGroupRing = GroupRingElement<Rational>;
using CyclotomicGroupRing = GroupRingElement<Cyclotomic>;
using RealGroupRing = GroupRingElement<Real>;
using ComplexGroupRing = GroupRingElement<Complex>;

RationalGroupRing group_ring_zero(const FiniteAbelianGroup& g);
RationalGroupRing group_ring_one(const FiniteAbelianGroup& g);
RationalGroupRing group_element(const FiniteAbelianGroup& g, const Element& a);

// e_chi = (1/|G|) sum chi(sigma) sigma^{-1}
CyclotomicGroupRing idempotent(const Character& chi);
// sum of e_chi over a Galois-stable set, descended to Q
RationalGroupRing orbit_idempotent(const RationalCharacterOrbit& orbit);
RationalGroupRing rational_part(const CyclotomicGroupRing& x);

RationalGroupRing inertia_idempotent(const Subgroup& i);
RationalGroupRing norm_element(const Subgroup& t);

// chi(x) = sum x_sigma chi(sigma)
Cyclotomic character_value(const RationalGroupRing& x, const Character& chi);
Cyclotomic character_value(const CyclotomicGroupRing& x, const Character& chi);
Complex character_value(const RealGroupRing& x, const Character& chi);

// x = sum_chi chi(x) e_chi; the inverse exists iff no character kills x
RationalGroupRing inverse(const RationalGroupRing& x);

template <class S>
GroupRingElement<S> project_to_quotient(const GroupRingElement<S>& x, const Quotient& q) {
    GroupRingElement<S> out(q.target, x.coefficients().empty() ? S() : x[0] - x[0]);
    const auto& g = x.group();
    for (std::size_t i = 0; i < static_cast<std::size_t>(g.order()); ++i)
        out.at(q.project(g.element_at(i))) += x[i];
    return out;
}

RealGroupRing to_real(const RationalGroupRing& x);
// multiplication by x on Q[G], rows indexed by basis group elements (row-vector convention)
RatMatrix multiplication_matrix(const RationalGroupRing& x);
RealMatrix multiplication_matrix(const RealGroupRing& x);

std::string to_string(const RationalGroupRing& x);
std::string to_string(const RealGroupRing& x, unsigned digits);

} // namespace rstark
