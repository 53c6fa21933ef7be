#include "rstark/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace rstark {

namespace {

std::vector<Integer> poly_div_exact(std::vector<Integer> num, const std::vector<Integer>& den) {
    // den monic
    const std::size_t dn = den.size() - 1;
    std::vector<Integer> q(num.size() - dn, Integer(0));
    for (std::size_t i = num.size(); i-- > dn;) {
        Integer c = num[i];
        q[i - dn] = c;
        for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    for (std::size_t i = 0; i < dn; ++i)
        if (num[i] != 0) throw std::logic_error("cyclotomic division not exact");
    return q;
}

} // namespace

const std::vector<Integer>& cyclotomic_polynomial(std::int64_t m) {
    static std::mutex lock;
    static std::map<std::int64_t, std::vector<Integer>> cache;
    if (m < 1) throw std::invalid_argument("cyclotomic index must be positive");
    {
        std::lock_guard<std::mutex> g(lock);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
    }
    std::vector<Integer> p(static_cast<std::size_t>(m) + 1, Integer(0));
    p[0] = -1;
    p[static_cast<std::size_t>(m)] = 1;
    for (std::int64_t d = 1; d < m; ++d)
        if (m % d == 0) p = poly_div_exact(p, cyclotomic_polynomial(d));
    std::lock_guard<std::mutex> g(lock);
    return cache.emplace(m, std::move(p)).first->second;
}

Cyclotomic::Cyclotomic(std::int64_t m) : m_(m), c_(cyclotomic_polynomial(m).size() - 1, Rational(0)) {}

Cyclotomic::Cyclotomic(std::int64_t m, const Rational& q) : Cyclotomic(m) { c_[0] = q; }

Cyclotomic Cyclotomic::zeta_power(std::int64_t m, std::int64_t j) {
    Cyclotomic z(m);
    std::vector<Rational> poly(static_cast<std::size_t>(m), Rational(0));
    poly[static_cast<std::size_t>(mod(j, m))] = 1;
    z.reduce(poly);
    z.c_ = std::move(poly);
    return z;
}

void Cyclotomic::reduce(std::vector<Rational>& poly) const {
    const auto& phi = cyclotomic_polynomial(m_);
    const std::size_t n = phi.size() - 1;
    for (std::size_t i = poly.size(); i-- > n;) {
        if (poly[i] == 0) continue;
        Rational c = poly[i];
        for (std::size_t j = 0; j <= n; ++j) poly[i - n + j] -= c * Rational(phi[j]);
    }
    poly.resize(n, Rational(0));
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
    if (m_ != o.m_) throw std::invalid_argument("cyclotomic fields differ");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
    if (m_ != o.m_) throw std::invalid_argument("cyclotomic fields differ");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
    if (m_ != o.m_) throw std::invalid_argument("cyclotomic fields differ");
    std::vector<Rational> prod(c_.size() + o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) prod[i + j] += c_[i] * o.c_[j];
    }
    reduce(prod);
    c_ = std::move(prod);
    return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Rational& q) {
    for (auto& x : c_) x *= q;
    return *this;
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic n = *this;
    for (auto& x : n.c_) x = -x;
    return n;
}

bool Cyclotomic::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rational Cyclotomic::to_rational() const {
    if (!is_rational()) throw std::domain_error("cyclotomic number is not rational: " + str());
    return c_.empty() ? Rational(0) : c_[0];
}

Cyclotomic Cyclotomic::conj() const {
    std::vector<Rational> poly(static_cast<std::size_t>(m_) + 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) poly[static_cast<std::size_t>(mod(-static_cast<std::int64_t>(i), m_))] += c_[i];
    Cyclotomic out(m_);
    out.reduce(poly);
    out.c_ = std::move(poly);
    return out;
}

Complex Cyclotomic::evaluate() const {
    Complex s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        Complex z = root_of_unity(static_cast<std::int64_t>(i), m_);
        Real q = to_real(c_[i]);
        s += Complex(z.re * q, z.im * q);
    }
    return s;
}

std::string Cyclotomic::str() const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!out.empty()) out += " + ";
        out += "(" + to_string(c_[i]) + ")";
        if (i == 1) out += "*z" + std::to_string(m_);
        else if (i > 1) out += "*z" + std::to_string(m_) + "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
}

} // namespace rstark
