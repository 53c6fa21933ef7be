#include "rstark/numeric.hpp"

#include <mpfr.h>

#include <sstream>
#include <stdexcept>

namespace rstark {

PrecisionContext::PrecisionContext(unsigned p) : digits(p) {
    if (p < 30) throw std::invalid_argument("precision below 30 digits");
}

Real PrecisionContext::tolerance() const {
    ScopedPrecision guard(*this);
    return boost::multiprecision::pow(Real(10), -static_cast<int>(digits - 10));
}

ScopedPrecision::ScopedPrecision(const PrecisionContext& ctx) : previous_(Real::default_precision()) {
    Real::default_precision(ctx.working_digits());
}

ScopedPrecision::~ScopedPrecision() { Real::default_precision(previous_); }

Complex& Complex::operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Real Complex::abs() const { return boost::multiprecision::sqrt(re * re + im * im); }

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator/(const Complex& a, const Complex& b) {
    Real d = b.re * b.re + b.im * b.im;
    if (d == 0) throw std::domain_error("complex division by zero");
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

Real pi() {
    Real x;
    mpfr_const_pi(x.backend().data(), MPFR_RNDN);
    return x;
}

Complex root_of_unity(std::int64_t j, std::int64_t m) {
    j = mod(j, m);
    if (j == 0) return Complex(Real(1), Real(0));
    if (2 * j == m) return Complex(Real(-1), Real(0));
    Real t = 2 * pi() * Real(j) / Real(m);
    return {boost::multiprecision::cos(t), boost::multiprecision::sin(t)};
}

Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(num, den);
}

std::string to_string(const Rational& q) {
    auto n = boost::multiprecision::numerator(q);
    auto d = boost::multiprecision::denominator(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

std::string to_string(const Real& x, unsigned digits) {
    std::ostringstream os;
    os << std::scientific;
    os.precision(digits);
    os << x;
    return os.str();
}

Real to_real(const Rational& q) {
    return Real(boost::multiprecision::numerator(q)) / Real(boost::multiprecision::denominator(q));
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd64(a, b) * b;
}

std::int64_t euler_phi(std::int64_t n) {
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

std::int64_t to_int64(const Integer& z) {
    if (z > Integer(INT64_MAX) || z < Integer(INT64_MIN)) throw std::overflow_error("integer exceeds 64 bits");
    return z.convert_to<std::int64_t>();
}

Integer lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

int valuation(const Rational& q, const Integer& p) {
    if (q == 0) throw std::domain_error("valuation of zero");
    auto count = [&](Integer z) {
        int v = 0;
        z = boost::multiprecision::abs(z);
        while (z % p == 0) {
            z /= p;
            ++v;
        }
        return v;
    };
    return count(boost::multiprecision::numerator(q)) - count(boost::multiprecision::denominator(q));
}

namespace {
Integer exact_integer(const Real& x, mpfr_rnd_t mode) {
    Integer z;
    mpfr_get_z(z.backend().data(), x.backend().data(), mode);
    return z;
}
} // namespace

Integer round_to_integer(const Real& x) { return exact_integer(x, MPFR_RNDN); }


std::optional<Rational> rationalize(const Real& x, const Real& tol, const Integer& max_den) {
    // convergents h/k of the simple continued fraction of x
    Integer h_prev = 1, h = 0, k_prev = 0, k = 1;
    Real rest = x;
    for (int step = 0; step < 200; ++step) {
        Integer a = exact_integer(rest, MPFR_RNDD);
        Integer h_next = a * h_prev + h;
        Integer k_next = a * k_prev + k;
        h = h_prev;
        k = k_prev;
        h_prev = h_next;
        k_prev = k_next;
        if (k_prev > max_den) break;
        Rational cand(h_prev, k_prev);
        if (boost::multiprecision::abs(x - to_real(cand)) < tol) return cand;
        Real frac = rest - Real(a);
        if (frac == 0) break;
        rest = 1 / frac;
    }
    return std::nullopt;
}

} // namespace rstark
