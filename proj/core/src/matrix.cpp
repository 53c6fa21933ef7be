#include "rstark/matrix.hpp"

#include <algorithm>

namespace rstark {

namespace mp = boost::multiprecision;

RealMatrix to_real(const RatMatrix& m) {
    RealMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_real(m(i, j));
    return out;
}

// ---------------- rational ----------------

RowEchelon rref(const RatMatrix& input) {
    RatMatrix m = input;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return {m.submatrix_rows(0, r), pivots};
}

std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }

Rational determinant(RatMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    Rational det = 1;
    const std::size_t n = m.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            m.swap_rows(p, c);
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rational f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

RatMatrix inverse(const RatMatrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto e = rref(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

RatMatrix solve_left(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("solve_left shape mismatch");
    if (a.rows() == 0) {
        if (!b.is_zero()) throw std::domain_error("vector outside the row space");
        return RatMatrix(b.rows(), 0);
    }
    auto e = rref(a);
    if (e.pivots.size() != a.rows()) throw std::domain_error("solve_left needs independent rows");
    RatMatrix x = b.select_cols(e.pivots) * inverse(a.select_cols(e.pivots));
    if (!(x * a == b)) throw std::domain_error("vector outside the row space");
    return x;
}

RatMatrix left_kernel(const RatMatrix& m) {
    // x m = 0  <=>  m^T x^T = 0
    auto e = rref(m.transpose());
    const std::size_t k = m.rows();
    std::vector<bool> is_pivot(k, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    RatMatrix basis(0, k);
    for (std::size_t f = 0; f < k; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(k, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
        basis.append_row(v);
    }
    return basis;
}

// ---------------- integer ----------------

namespace {

// g = x a + y b, g >= 0
void extended_gcd(const Integer& a, const Integer& b, Integer& g, Integer& x, Integer& y) {
    Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        Integer q = r0 / r1;
        Integer tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    g = r0;
    x = s0;
    y = t0;
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void row_combine(IntMatrix& m, std::size_t r, std::size_t i, const Integer& x, const Integer& y, const Integer& u,
                 const Integer& v) {
    // (row_r, row_i) <- (x row_r + y row_i, u row_r + v row_i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Integer a = m(r, j), b = m(i, j);
        m(r, j) = x * a + y * b;
        m(i, j) = u * a + v * b;
    }
}

void row_axpy(IntMatrix& m, std::size_t target, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < m.cols(); ++j) m(target, j) -= q * m(src, j);
}

void col_axpy(IntMatrix& m, std::size_t target, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, target) -= q * m(i, src);
}

} // namespace

HermiteForm hermite_form(const IntMatrix& a, bool with_transform) {
    IntMatrix h = a;
    IntMatrix u = with_transform ? IntMatrix::identity(a.rows()) : IntMatrix();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
        for (std::size_t i = r + 1; i < h.rows(); ++i) {
            if (h(i, c) == 0) continue;
            Integer av = h(r, c), bv = h(i, c), g, x, y;
            extended_gcd(av, bv, g, x, y);
            Integer p = -bv / g, q = av / g;
            row_combine(h, r, i, x, y, p, q);
            if (with_transform) row_combine(u, r, i, x, y, p, q);
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) {
            for (std::size_t j = 0; j < h.cols(); ++j) h(r, j) = -h(r, j);
            if (with_transform)
                for (std::size_t j = 0; j < u.cols(); ++j) u(r, j) = -u(r, j);
        }
        for (std::size_t i = 0; i < r; ++i) {
            Integer q = floor_div(h(i, c), h(r, c));
            row_axpy(h, i, r, q);
            if (with_transform) row_axpy(u, i, r, q);
        }
        pivots.push_back(c);
        ++r;
    }
    return {h.submatrix_rows(0, r), u, pivots};
}

SmithForm smith_form(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix d = a;
    IntMatrix u = IntMatrix::identity(m);
    IntMatrix v = IntMatrix::identity(n);
    IntMatrix vinv = IntMatrix::identity(n);

    auto swap_cols = [&](std::size_t x, std::size_t y) {
        d.swap_cols(x, y);
        v.swap_cols(x, y);
        vinv.swap_rows(x, y);
    };
    auto col_sub = [&](std::size_t target, std::size_t src, const Integer& q) {
        // col_target -= q col_src ; V^{-1}: row_src += q row_target
        col_axpy(d, target, src, q);
        col_axpy(v, target, src, q);
        row_axpy(vinv, src, target, -q);
    };

    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        // smallest nonzero entry of the trailing block
        bool found = false;
        std::size_t pi = t, pj = t;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (d(i, j) != 0 && (!found || mp::abs(d(i, j)) < mp::abs(d(pi, pj)))) {
                    found = true;
                    pi = i;
                    pj = j;
                }
        if (!found) break;
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        swap_cols(t, pj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (d(i, t) == 0) continue;
                Integer q = floor_div(d(i, t), d(t, t));
                row_axpy(d, i, t, q);
                row_axpy(u, i, t, q);
                if (d(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (d(t, j) == 0) continue;
                Integer q = floor_div(d(t, j), d(t, t));
                col_sub(j, t, q);
                if (d(t, j) != 0) clean = false;
            }
            if (!clean) {
                // bring the smallest remainder of row/column t into the pivot
                std::size_t bi = t, bj = t;
                for (std::size_t i = t + 1; i < m; ++i)
                    if (d(i, t) != 0 && mp::abs(d(i, t)) < mp::abs(d(bi, bj))) {
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < n; ++j)
                    if (d(t, j) != 0 && mp::abs(d(t, j)) < mp::abs(d(bi, bj))) {
                        bi = t;
                        bj = j;
                    }
                if (bi != t) {
                    d.swap_rows(t, bi);
                    u.swap_rows(t, bi);
                }
                if (bj != t) swap_cols(t, bj);
                continue;
            }
            // divisibility of the trailing block
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            row_axpy(d, t, bad, Integer(-1));
            row_axpy(u, t, bad, Integer(-1));
        }
        if (d(t, t) < 0) {
            for (std::size_t j = 0; j < n; ++j) d(t, j) = -d(t, j);
            for (std::size_t j = 0; j < m; ++j) u(t, j) = -u(t, j);
        }
    }
    SmithForm s;
    for (std::size_t i = 0; i < t; ++i) s.diagonal.push_back(d(i, i));
    s.u = std::move(u);
    s.v = std::move(v);
    s.v_inverse = std::move(vinv);
    return s;
}

IntMatrix integer_left_kernel(const IntMatrix& m) {
    auto h = hermite_form(m, true);
    const std::size_t r = h.basis.rows();
    IntMatrix k = h.transform.submatrix_rows(r, m.rows());
    if (k.rows() == 0) return IntMatrix(0, m.rows());
    return hermite_form(k).basis;
}

std::pair<Integer, IntMatrix> clear_denominators(const RatMatrix& m) {
    Integer d = 1;
    for (const auto& x : m.raw()) d = lcm(d, mp::denominator(x));
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Rational s = m(i, j) * d;
            out(i, j) = mp::numerator(s);
        }
    return {d, out};
}

// ---------------- numeric ----------------

Real determinant(RealMatrix m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    Real det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (mp::abs(m(i, c)) > mp::abs(m(p, c))) p = i;
        if (m(p, c) == 0) return Real(0);
        if (p != c) {
            m.swap_rows(p, c);
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            Real f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

namespace {

Real dot(const RealMatrix& a, std::size_t i, const RealMatrix& b, std::size_t j) {
    Real s = 0;
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(j, k);
    return s;
}

// eigenvalues of a small symmetric matrix by cyclic Jacobi rotations
std::vector<Real> symmetric_eigenvalues(RealMatrix a) {
    const std::size_t n = a.rows();
    Real eps = mp::pow(Real(10), -static_cast<int>(Real::default_precision()));
    for (int sweep = 0; sweep < 100; ++sweep) {
        Real off = 0, total = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                total += a(i, j) * a(i, j);
                if (i != j) off += a(i, j) * a(i, j);
            }
        if (off <= eps * eps * total) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0) continue;
                Real theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                Real t = (theta >= 0 ? Real(1) : Real(-1)) / (mp::abs(theta) + mp::sqrt(theta * theta + 1));
                Real c = 1 / mp::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    Real akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    Real apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<Real> ev;
    for (std::size_t i = 0; i < n; ++i) ev.push_back(a(i, i));
    std::sort(ev.begin(), ev.end(), [](const Real& x, const Real& y) { return x > y; });
    return ev;
}

} // namespace

std::vector<Real> singular_values(const RealMatrix& m) {
    RealMatrix gram(m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.rows(); ++j) gram(i, j) = gram(j, i) = dot(m, i, m, j);
    auto ev = symmetric_eigenvalues(gram);
    for (auto& x : ev) x = x > 0 ? Real(mp::sqrt(x)) : Real(0);
    return ev;
}

OrthonormalFrame row_space_frame(const RealMatrix& m, const Real& rel_tol) {
    RealMatrix work = m;
    Real scale = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) scale = mp::max(scale, Real(mp::sqrt(dot(m, i, m, i))));
    OrthonormalFrame frame;
    frame.q = RealMatrix(0, m.cols());
    std::vector<bool> used(m.rows(), false);
    for (;;) {
        // pick the remaining row with the largest residual norm
        std::size_t best = m.rows();
        Real best_norm = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (used[i]) continue;
            Real nrm = mp::sqrt(dot(work, i, work, i));
            if (best == m.rows() || nrm > best_norm) {
                best = i;
                best_norm = nrm;
            }
        }
        if (best == m.rows() || best_norm <= rel_tol * scale) break;
        used[best] = true;
        std::vector<Real> v = work.row(best);
        // second Gram-Schmidt pass for stability
        for (std::size_t k = 0; k < frame.q.rows(); ++k) {
            Real c = 0;
            for (std::size_t j = 0; j < v.size(); ++j) c += v[j] * frame.q(k, j);
            for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * frame.q(k, j);
        }
        Real nrm = 0;
        for (const auto& x : v) nrm += x * x;
        nrm = mp::sqrt(nrm);
        for (auto& x : v) x /= nrm;
        frame.q.append_row(v);
        frame.singular_values.push_back(best_norm);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (used[i]) continue;
            Real c = 0;
            for (std::size_t j = 0; j < v.size(); ++j) c += work(i, j) * v[j];
            for (std::size_t j = 0; j < v.size(); ++j) work(i, j) -= c * v[j];
        }
    }
    return frame;
}

std::vector<Real> least_squares_left(const RealMatrix& a, const std::vector<Real>& b) {
    const std::size_t k = a.rows(), n = a.cols();
    RealMatrix q(k, n), l(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Real> v = a.row(i);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t j = 0; j < i; ++j) {
                Real c = 0;
                for (std::size_t t = 0; t < n; ++t) c += v[t] * q(j, t);
                for (std::size_t t = 0; t < n; ++t) v[t] -= c * q(j, t);
                l(i, j) += c;
            }
        Real nrm = 0;
        for (const auto& x : v) nrm += x * x;
        nrm = mp::sqrt(nrm);
        if (nrm == 0) throw std::domain_error("least squares: dependent rows");
        l(i, i) = nrm;
        for (std::size_t t = 0; t < n; ++t) q(i, t) = v[t] / nrm;
    }
    std::vector<Real> c(k, Real(0)), x(k, Real(0));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t t = 0; t < n; ++t) c[j] += b[t] * q(j, t);
    for (std::size_t jj = k; jj-- > 0;) {
        Real s = c[jj];
        for (std::size_t i = jj + 1; i < k; ++i) s -= x[i] * l(i, jj);
        x[jj] = s / l(jj, jj);
    }
    return x;
}

} // namespace rstark
