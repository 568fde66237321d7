#pragma once

// Exact arithmetic in Q(sqrt(93), theta) with theta^2 = 27 - 2 sqrt(93),
// the field all thirteen scheme coefficients live in. Everything here is
// test-only and independent of the library's numeric expansion path: the
// factorization is verified level by level as exact rational identities.

#include <array>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using rational = boost::multiprecision::cpp_rational;

/// a + b*sqrt(93)
struct Q93 {
    rational a{0}, b{0};

    Q93() = default;
    Q93(long n) : a(n) {}
    Q93(rational x) : a(std::move(x)) {}
    Q93(rational x, rational y) : a(std::move(x)), b(std::move(y)) {}

    friend Q93 operator+(const Q93& x, const Q93& y) { return {x.a + y.a, x.b + y.b}; }
    friend Q93 operator-(const Q93& x, const Q93& y) { return {x.a - y.a, x.b - y.b}; }
    friend Q93 operator-(const Q93& x) { return {-x.a, -x.b}; }
    friend Q93 operator*(const Q93& x, const Q93& y) {
        return {x.a * y.a + 93 * x.b * y.b, x.a * y.b + x.b * y.a};
    }
    friend bool operator==(const Q93& x, const Q93& y) { return x.a == y.a && x.b == y.b; }
};

/// u + v*theta over Q93
struct Tower {
    Q93 u, v;

    Tower() = default;
    Tower(long n) : u(n) {}
    Tower(Q93 x) : u(std::move(x)) {}
    Tower(Q93 x, Q93 y) : u(std::move(x)), v(std::move(y)) {}

    static Q93 theta_sq() { return Q93{27, -2}; }

    friend Tower operator+(const Tower& x, const Tower& y) { return {x.u + y.u, x.v + y.v}; }
    friend Tower operator-(const Tower& x, const Tower& y) { return {x.u - y.u, x.v - y.v}; }
    friend Tower operator*(const Tower& x, const Tower& y) {
        return {x.u * y.u + theta_sq() * (x.v * y.v), x.u * y.v + x.v * y.u};
    }
    friend bool operator==(const Tower& x, const Tower& y) { return x.u == y.u && x.v == y.v; }
};

struct ExactCoefficients {
    Q93 a1, a2, a3, b1, b2, b3, mu, psi, c3, d1, d2;
    Tower c1, c2;
};

inline ExactCoefficients exact_coefficients() {
    ExactCoefficients k;
    k.a1 = Q93{rational(155, 496), rational(5, 496)};
    k.a2 = Q93{rational(3, 8), rational(1, 8)};
    k.a3 = Q93{rational(1, 2), 0};
    k.b1 = Q93{rational(155, 496), rational(-5, 496)};
    k.b2 = Q93{rational(3, 8), rational(-1, 8)};
    k.b3 = k.a3;
    k.mu = Q93{rational(3, 8), 0};
    k.psi = Q93{rational(321, 1984), 0};
    k.c1 = Tower{Q93{rational(1, 4), 0}, Q93{rational(1, 4), 0}};
    k.c2 = Tower{Q93{rational(1, 4), 0}, Q93{rational(-1, 4), 0}};
    k.c3 = Q93{rational(-93, 496), rational(5, 496)};
    k.d1 = Q93{rational(-93, 496), rational(-5, 496)};
    k.d2 = Q93{0, rational(-1, 4)};
    return k;
}

template <class F>
std::vector<F> poly_mul(const std::vector<F>& p, const std::vector<F>& q) {
    std::vector<F> out(p.size() + q.size() - 1, F(0));
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) out[i + j] = out[i + j] + p[i] * q[j];
    return out;
}

template <class F>
std::vector<F> poly_add(std::vector<F> p, const std::vector<F>& q) {
    if (q.size() > p.size()) p.resize(q.size(), F(0));
    for (std::size_t i = 0; i < q.size(); ++i) p[i] = p[i] + q[i];
    return p;
}

/// The seven equations the even-part parameters were solved from; every
/// entry must be exactly zero.
inline std::array<Q93, 7> even_system_defects(const ExactCoefficients& k) {
    const Q93 one{1};
    const Q93 two{2};
    return {
        k.mu + k.a1 + k.b1 - one,
        k.a2 + k.psi + k.a1 * k.b1 + k.b2 - one,
        two * k.a3 + k.a2 * k.b1 + k.a1 * k.b2 - one,
        two + k.a1 * k.a3 + k.a3 * k.b1 + k.a2 * k.b2 - one,
        k.a1 + k.a2 * k.a3 + k.b1 + k.a3 * k.b2 - one,
        k.a2 + k.a3 * k.a3 + k.b2 - one,
        two * k.a3 - one,
    };
}

/// poly_a(t) = 1 + a1 t^2 + a2 t^4 + a3 t^6 + t^8 as a degree-8 vector.
inline std::vector<Q93> poly_a(const ExactCoefficients& k) {
    return {Q93{1}, Q93{0}, k.a1, Q93{0}, k.a2, Q93{0}, k.a3, Q93{0}, Q93{1}};
}

inline std::vector<Q93> poly_b(const ExactCoefficients& k) {
    return {Q93{1}, Q93{0}, k.b1, Q93{0}, k.b2, Q93{0}, k.b3, Q93{0}, Q93{1}};
}

/// (1 + c1 t^2 + t^4)(1 + c2 t^2 + t^4) + extra, expanded over the tower.
inline std::vector<Tower> quartic_product_plus(const ExactCoefficients& k,
                                               const std::vector<Tower>& extra) {
    const std::vector<Tower> f1{Tower{1}, Tower{0}, k.c1, Tower{0}, Tower{1}};
    const std::vector<Tower> f2{Tower{1}, Tower{0}, k.c2, Tower{0}, Tower{1}};
    return poly_add(poly_mul(f1, f2), extra);
}

inline std::vector<Tower> to_tower(const std::vector<Q93>& p) {
    std::vector<Tower> out;
    out.reserve(p.size());
    for (const auto& c : p) out.emplace_back(c);
    return out;
}

/// Full left side of the order-18 identity expanded exactly:
/// (1+t) * [ poly_a * poly_b + mu t^2 + psi t^4 ].
inline std::vector<Q93> full_expansion(const ExactCoefficients& k) {
    auto prod = poly_mul(poly_a(k), poly_b(k));
    prod = poly_add(std::move(prod), {Q93{0}, Q93{0}, k.mu, Q93{0}, k.psi});
    return poly_mul(std::vector<Q93>{Q93{1}, Q93{1}}, prod);
}

}  // namespace oracle
