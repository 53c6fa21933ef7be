#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace rstark {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

// Decimal digits requested by the caller plus the guard digits used internally.
// tau is the comparison tolerance 10^-(p-10).
struct PrecisionContext {
    unsigned digits = 50;
    unsigned guard = 20;

    explicit PrecisionContext(unsigned p = 50);
    unsigned working_digits() const { return digits + guard; }
    Real tolerance() const;
};

// MPFR's default precision is process wide in this Boost version; every numeric
// entry point installs its context through this guard and restores on exit.
class ScopedPrecision {
public:
    explicit ScopedPrecision(const PrecisionContext& ctx);
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned previous_;
};

struct Complex {
    Real re;
    Real im;

    Complex() : re(0), im(0) {}
    Complex(Real r) : re(std::move(r)), im(0) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o);
    Complex conj() const { return {re, -im}; }
    Real abs() const;
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator-(const Complex& a);
Complex operator*(Complex a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
inline bool operator==(const Complex& a, int z) { return a.re == z && a.im == 0; }
inline bool operator!=(const Complex& a, int z) { return !(a == z); }
inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

Real pi();
// e^{2 pi i j / m}
Complex root_of_unity(std::int64_t j, std::int64_t m);

Rational rational_from_string(const std::string& s);
std::string to_string(const Rational& q);
std::string to_string(const Real& x, unsigned digits);
Real to_real(const Rational& q);

// floor division and nonnegative remainder on machine integers
std::int64_t mod(std::int64_t a, std::int64_t m);
std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);
std::int64_t euler_phi(std::int64_t n);
std::int64_t to_int64(const Integer& z);
Integer lcm(const Integer& a, const Integer& b);

// p-adic valuation of a nonzero rational
int valuation(const Rational& q, const Integer& p);

// Continued-fraction rationalization: the convergent with denominator <= max_den
// within tol of x, if any.
std::optional<Rational> rationalize(const Real& x, const Real& tol, const Integer& max_den = Integer(1000000));

// integer nearest to x and |x - round(x)|
Integer round_to_integer(const Real& x);

} // namespace rstark
