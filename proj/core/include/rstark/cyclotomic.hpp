#pragma once

#include "rstark/numeric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rstark {

// Integer coefficients of the m-th cyclotomic polynomial, constant term first.
const std::vector<Integer>& cyclotomic_polynomial(std::int64_t m);

// Element of Q(zeta_m) as a rational polynomial in zeta_m of degree < phi(m).
class Cyclotomic {
public:
    Cyclotomic() : Cyclotomic(1) {}
    explicit Cyclotomic(std::int64_t m);
    Cyclotomic(std::int64_t m, const Rational& q);
    static Cyclotomic zeta_power(std::int64_t m, std::int64_t j);

    std::int64_t conductor() const { return m_; }
    const std::vector<Rational>& coefficients() const { return c_; }

    Cyclotomic& operator+=(const Cyclotomic& o);
    Cyclotomic& operator-=(const Cyclotomic& o);
    Cyclotomic& operator*=(const Cyclotomic& o);
    Cyclotomic& operator*=(const Rational& q);
    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Rational& q) { return a *= q; }
    Cyclotomic operator-() const;

    bool operator==(const Cyclotomic& o) const { return m_ == o.m_ && c_ == o.c_; }
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }
    bool operator==(int z) const { return is_rational() && to_rational() == z; }
    bool operator!=(int z) const { return !(*this == z); }

    bool is_zero() const;
    bool is_rational() const;
    Rational to_rational() const;  // throws unless rational
    Cyclotomic conj() const;       // zeta -> zeta^{-1}
    Complex evaluate() const;      // at the active precision, zeta_m = e^{2 pi i/m}
    std::string str() const;

private:
    void reduce(std::vector<Rational>& poly) const;
    std::int64_t m_;
    std::vector<Rational> c_;
};

} // namespace rstark
