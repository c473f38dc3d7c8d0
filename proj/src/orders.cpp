#include "chm/orders.hpp"

#include <map>

namespace chm {

namespace {

void require_unit(const Nat& a, const Nat& q) {
    if (q.is_even() || q < Nat(3)) throw DomainError("order: component prime must be odd, got " + q.str());
    if ((a % q).is_zero()) throw DomainError("order: " + a.str() + " is not a unit modulo " + q.str());
}

std::uint64_t squarings_to_one(std::uint64_t b, std::uint64_t modulus, std::uint64_t limit) {
    std::uint64_t k = 0;
    while (b != 1) {
        if (k == limit) throw ConsistencyError("order: 2-power part did not reach 1");
        b = word::mulmod(b, b, modulus);
        ++k;
    }
    return k;
}

}  // namespace

OrderEvidence order_v2_mod_prime_power(const Nat& a, const Nat& q, std::uint32_t e) {
    if (e == 0) throw DomainError("order: exponent must be positive");
    require_unit(a, q);

    OrderEvidence ev;
    ev.component_prime = q;
    ev.component_exponent = e;
    const Nat q_minus_1 = q - Nat(1);
    ev.group_order = pow(q, e - 1) * q_minus_1;

    // The group order is 2^v * u with v = v2(q - 1), since q is odd.
    const std::uint64_t v = v2(q_minus_1);
    const Nat u = ev.group_order >> v;
    const Nat modulus = pow(q, e);

    if (modulus.fits_u64()) {
        const std::uint64_t mw = modulus.to_u64();
        const std::uint64_t b = powmod(a, u, modulus).to_u64();
        ev.order_v2 = squarings_to_one(b, mw, v);
    } else {
        Nat b = powmod(a, u, modulus);
        std::uint64_t k = 0;
        while (b != Nat(1)) {
            if (k == v) throw ConsistencyError("order: 2-power part did not reach 1");
            b = mulmod(b, b, modulus);
            ++k;
        }
        ev.order_v2 = k;
    }
    ev.order_is_odd = ev.order_v2 == 0;
    return ev;
}

Nat full_order_mod_prime_power(const Nat& a, const Nat& q, std::uint32_t e, const FactorConfig& config) {
    if (e == 0) throw DomainError("order: exponent must be positive");
    require_unit(a, q);

    const Nat modulus = pow(q, e);
    const Nat one(1);
    Nat order = pow(q, e - 1) * (q - one);

    std::map<Nat, std::uint32_t> group_factors;
    for (const auto& f : factorize(q - one, config).factors) group_factors[f.prime] += f.exponent;
    if (e > 1) group_factors[q] += e - 1;

    for (const auto& [f, k] : group_factors) {
        for (std::uint32_t i = 0; i < k; ++i) {
            const Nat candidate = order / f;
            if (powmod(a, candidate, modulus) != one) break;
            order = candidate;
        }
    }
    return order;
}

OrderParity order_parity_mod_m(const Nat& p, const Factorization& s, bool with_full_orders,
                               const FactorConfig& config) {
    if (p.is_even()) throw DomainError("order: " + p.str() + " is not a unit modulo 2");
    OrderParity out;
    out.evidence.reserve(s.omega());
    for (const auto& [q, b] : s.factors) {
        if ((p % q).is_zero()) throw DomainError("order: " + p.str() + " divides s");
        OrderEvidence ev = order_v2_mod_prime_power(p, q, 2 * b);
        if (with_full_orders) ev.full_order = full_order_mod_prime_power(p, q, 2 * b, config);
        out.is_odd = out.is_odd && ev.order_is_odd;
        out.evidence.push_back(std::move(ev));
    }
    return out;
}

bool is_self_conjugate(std::span<const OrderEvidence> evidence) {
    if (evidence.empty()) return true;
    const std::uint64_t v = evidence.front().order_v2;
    if (v == 0) return false;
    for (const auto& ev : evidence) {
        if (ev.order_v2 != v) return false;
    }
    return true;
}

bool is_self_conjugate(const Nat& p, const Factorization& s) {
    const OrderParity parity = order_parity_mod_m(p, s);
    return is_self_conjugate(parity.evidence);
}

Nat combined_order(std::span<const OrderEvidence> evidence) {
    Nat out(1);
    for (const auto& ev : evidence) {
        if (!ev.full_order) throw DomainError("combined order: component without full order");
        out = lcm(out, *ev.full_order);
    }
    return out;
}

}  // namespace chm
