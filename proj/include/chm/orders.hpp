#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chm/bigmod.hpp"
#include "chm/factorizer.hpp"

namespace chm {

// Order data for one component (Z/q^e)* of a unit group.
struct OrderEvidence {
    Nat component_prime;
    std::uint32_t component_exponent = 0;
    Nat group_order;  // q^(e-1) (q-1)
    std::uint64_t order_v2 = 0;
    bool order_is_odd = true;
    std::optional<Nat> full_order;

    friend bool operator==(const OrderEvidence&, const OrderEvidence&) = default;
};

// 2-adic valuation of the order of a modulo q^e, q an odd prime, computed as
// the number of squarings that take a^u to 1 where u is the odd part of the
// group order. q - 1 is never factored.
OrderEvidence order_v2_mod_prime_power(const Nat& a, const Nat& q, std::uint32_t e);

// Least t >= 1 with a^t = 1 (mod q^e). Factors q - 1; may throw
// FactorizationStalled.
Nat full_order_mod_prime_power(const Nat& a, const Nat& q, std::uint32_t e, const FactorConfig& config = {});

struct OrderParity {
    bool is_odd = true;
    std::vector<OrderEvidence> evidence;  // one entry per prime of s, modulus exponent 2b
};

// Parity of the order of p modulo m = 2 s^2, evaluated component-wise over
// the odd prime powers q^(2b) of s^2. The factor 2 contributes order 1.
OrderParity order_parity_mod_m(const Nat& p, const Factorization& s, bool with_full_orders = false,
                               const FactorConfig& config = {});

// True iff p^t = -1 (mod 2 s^2) for some t: every component order has the
// same 2-adic valuation and it is at least 1. s = 1 gives true.
bool is_self_conjugate(const Nat& p, const Factorization& s);
bool is_self_conjugate(std::span<const OrderEvidence> evidence);

// lcm of the component full orders; every entry must carry full_order.
Nat combined_order(std::span<const OrderEvidence> evidence);

}  // namespace chm
