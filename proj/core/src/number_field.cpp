#include "rstark/number_field.hpp"

#include <stdexcept>

namespace rstark {

NumberField::NumberField(std::vector<Rational> minpoly) : f_(std::move(minpoly)) {
    if (f_.size() < 2) throw std::invalid_argument("minimal polynomial must have degree >= 1");
    if (f_.back() != 1) throw std::invalid_argument("minimal polynomial must be monic");
    n_ = f_.size() - 1;
    // theta^n = -sum c_i theta^i, then shift upward
    Elt top(n_);
    for (std::size_t i = 0; i < n_; ++i) top[i] = -f_[i];
    reduction_.push_back(top);
    for (std::size_t k = 1; k + 1 < n_; ++k) {
        const Elt& prev = reduction_.back();
        Elt next(n_, Rational(0));
        for (std::size_t i = 0; i + 1 < n_; ++i) next[i + 1] = prev[i];
        for (std::size_t i = 0; i < n_; ++i) next[i] += prev[n_ - 1] * top[i];
        reduction_.push_back(next);
    }
}

NumberField::Elt NumberField::one() const { return from_rational(1); }

NumberField::Elt NumberField::theta() const {
    Elt t = zero();
    if (n_ == 1) t[0] = -f_[0];
    else t[1] = 1;
    return t;
}

NumberField::Elt NumberField::from_rational(const Rational& q) const {
    Elt e = zero();
    e[0] = q;
    return e;
}

NumberField::Elt NumberField::add(const Elt& a, const Elt& b) const {
    Elt c = a;
    for (std::size_t i = 0; i < n_; ++i) c[i] += b[i];
    return c;
}

NumberField::Elt NumberField::sub(const Elt& a, const Elt& b) const {
    Elt c = a;
    for (std::size_t i = 0; i < n_; ++i) c[i] -= b[i];
    return c;
}

NumberField::Elt NumberField::mul(const Elt& a, const Elt& b) const {
    if (a.size() != n_ || b.size() != n_) throw std::invalid_argument("element of the wrong degree");
    std::vector<Rational> prod(2 * n_ - 1, Rational(0));
    for (std::size_t i = 0; i < n_; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < n_; ++j)
            if (b[j] != 0) prod[i + j] += a[i] * b[j];
    }
    Elt c(prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t k = n_; k < prod.size(); ++k) {
        if (prod[k] == 0) continue;
        const Elt& red = reduction_[k - n_];
        for (std::size_t i = 0; i < n_; ++i) c[i] += prod[k] * red[i];
    }
    return c;
}

NumberField::Elt NumberField::pow(const Elt& a, std::int64_t e) const {
    Elt base = e < 0 ? inverse(a) : a;
    std::uint64_t k = static_cast<std::uint64_t>(e < 0 ? -e : e);
    Elt acc = one();
    while (k) {
        if (k & 1) acc = mul(acc, base);
        base = mul(base, base);
        k >>= 1;
    }
    return acc;
}

NumberField::Elt NumberField::inverse(const Elt& a) const {
    RatMatrix m = multiplication_matrix(a);
    if (rank(m) < n_) throw std::domain_error("inverse of zero");
    // x * a = 1  <=>  x_row * M = e_0
    RatMatrix rhs(1, n_);
    rhs(0, 0) = 1;
    return solve_left(m, rhs).row(0);
}

NumberField::Elt NumberField::compose(const Elt& p, const Elt& a) const {
    Elt acc = zero();
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = mul(acc, a);
        acc[0] += p[i];
    }
    return acc;
}

bool NumberField::is_zero(const Elt& a) const {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

RatMatrix NumberField::multiplication_matrix(const Elt& a) const {
    RatMatrix m(n_, n_);
    Elt row = a;
    for (std::size_t i = 0; i < n_; ++i) {
        m.set_row(i, row);
        row = mul(row, theta());
    }
    return m;
}

Rational NumberField::norm(const Elt& a) const { return determinant(multiplication_matrix(a)); }

Rational NumberField::trace(const Elt& a) const {
    RatMatrix m = multiplication_matrix(a);
    Rational t = 0;
    for (std::size_t i = 0; i < n_; ++i) t += m(i, i);
    return t;
}

std::vector<Rational> NumberField::charpoly(const Elt& a) const {
    // Faddeev-LeVerrier
    RatMatrix m = multiplication_matrix(a);
    std::vector<Rational> c(n_ + 1, Rational(0));
    c[n_] = 1;
    RatMatrix mk(n_, n_);
    RatMatrix id = RatMatrix::identity(n_);
    for (std::size_t k = 1; k <= n_; ++k) {
        mk = m * (mk + id.scaled(c[n_ - k + 1]));
        Rational tr = 0;
        for (std::size_t i = 0; i < n_; ++i) tr += mk(i, i);
        c[n_ - k] = -tr / static_cast<long>(k);
    }
    return c;
}

Rational NumberField::discriminant() const {
    Elt deriv = zero();
    for (std::size_t i = 1; i <= n_; ++i) deriv[i - 1] = f_[i] * static_cast<long>(i);
    Rational d = norm(deriv);  // N(f'(theta))
    if ((n_ * (n_ - 1) / 2) % 2) d = -d;
    return d;
}

Real NumberField::embed(const Elt& a, const Real& theta_value) const { return evaluate_polynomial(a, theta_value); }

Real evaluate_polynomial(const std::vector<Rational>& p, const Real& x) {
    Real acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + to_real(p[i]);
    return acc;
}

} // namespace rstark
