#pragma once

#include "rstark/matrix.hpp"

#include <vector>

namespace rstark {

// Q(theta) with theta a root of a monic rational polynomial; elements are coordinate
// vectors in the power basis 1, theta, ..., theta^{n-1}.
class NumberField {
public:
    using Elt = std::vector<Rational>;

    NumberField() = default;
    // coefficients c_0..c_n of the minimal polynomial, c_n = 1
    explicit NumberField(std::vector<Rational> minpoly);

    std::size_t degree() const { return n_; }
    const std::vector<Rational>& minimal_polynomial() const { return f_; }

    Elt zero() const { return Elt(n_, Rational(0)); }
    Elt one() const;
    Elt theta() const;
    Elt from_rational(const Rational& q) const;

    Elt add(const Elt& a, const Elt& b) const;
    Elt sub(const Elt& a, const Elt& b) const;
    Elt mul(const Elt& a, const Elt& b) const;
    Elt pow(const Elt& a, std::int64_t e) const;  // negative e needs a != 0
    Elt inverse(const Elt& a) const;
    // p(a) for a polynomial p in the power basis, e.g. substituting sigma(theta)
    Elt compose(const Elt& p, const Elt& a) const;
    bool is_zero(const Elt& a) const;

    RatMatrix multiplication_matrix(const Elt& a) const;  // row i = theta^i * a
    Rational norm(const Elt& a) const;
    Rational trace(const Elt& a) const;
    // characteristic polynomial c_0..c_n of multiplication by a
    std::vector<Rational> charpoly(const Elt& a) const;
    Rational discriminant() const;  // of the minimal polynomial

    Real embed(const Elt& a, const Real& theta_value) const;

private:
    std::vector<Rational> f_;
    std::size_t n_ = 0;
    std::vector<Elt> reduction_;  // theta^{n+k} in the power basis, k = 0..n-2
};

// polynomial value at a real point, coefficients low to high
Real evaluate_polynomial(const std::vector<Rational>& p, const Real& x);

} // namespace rstark
