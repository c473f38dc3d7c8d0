#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "chm/errors.hpp"

namespace chm {

// Nonnegative arbitrary-precision integer. Storage is a GMP integer; every
// operation that could leave the nonnegative range throws DomainError.
class Nat {
public:
    Nat() = default;

    template <std::integral T>
    Nat(T v) {  // NOLINT(google-explicit-constructor)
        if constexpr (std::is_signed_v<T>) {
            if (v < 0) throw DomainError("Nat: negative value");
        }
        v_ = static_cast<unsigned long>(v);
    }

    explicit Nat(mpz_class v);

    // Decimal digits only: no sign, no separators, no whitespace.
    static Nat parse(std::string_view text);
    std::string str() const { return v_.get_str(10); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_odd() const { return mpz_odd_p(v_.get_mpz_t()) != 0; }
    bool is_even() const { return !is_odd(); }
    bool fits_u64() const { return mpz_sizeinbase(v_.get_mpz_t(), 2) <= 64; }
    std::uint64_t to_u64() const;  // throws DomainError when !fits_u64()
    std::size_t bit_length() const;

    // Remainder modulo a machine word, without allocating.
    std::uint64_t mod_u64(std::uint64_t m) const;

    const mpz_class& mpz() const { return v_; }

    friend Nat operator+(const Nat& a, const Nat& b) { return Nat(mpz_class(a.v_ + b.v_)); }
    friend Nat operator-(const Nat& a, const Nat& b);
    friend Nat operator*(const Nat& a, const Nat& b) { return Nat(mpz_class(a.v_ * b.v_)); }
    friend Nat operator/(const Nat& a, const Nat& b);
    friend Nat operator%(const Nat& a, const Nat& b);
    friend Nat operator<<(const Nat& a, std::uint64_t k) { return Nat(mpz_class(a.v_ << k)); }
    friend Nat operator>>(const Nat& a, std::uint64_t k) { return Nat(mpz_class(a.v_ >> k)); }

    Nat& operator+=(const Nat& b) { v_ += b.v_; return *this; }
    Nat& operator*=(const Nat& b) { v_ *= b.v_; return *this; }
    Nat& operator-=(const Nat& b) { return *this = *this - b; }
    Nat& operator/=(const Nat& b) { return *this = *this / b; }
    Nat& operator%=(const Nat& b) { return *this = *this % b; }

    friend bool operator==(const Nat& a, const Nat& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const Nat& a, const Nat& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

private:
    mpz_class v_;
};

std::ostream& operator<<(std::ostream& os, const Nat& n);

Nat pow(const Nat& base, std::uint64_t exponent);
// floor(sqrt(n))
Nat isqrt(const Nat& n);

enum class Sign3 : int { Minus = -1, Zero = 0, Plus = 1 };

inline int to_int(Sign3 s) { return static_cast<int>(s); }

Nat mulmod(const Nat& a, const Nat& b, const Nat& m);
Nat powmod(const Nat& a, const Nat& e, const Nat& m);
Nat gcd(const Nat& a, const Nat& b);
Nat lcm(const Nat& a, const Nat& b);
std::uint64_t v2(const Nat& n);
Nat odd_part(const Nat& n);
Sign3 jacobi(const Nat& a, const Nat& n);

// Single-word kernel. Products go through unsigned __int128, so every
// modulus below 2^64 is supported.
namespace word {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
Sign3 jacobi(std::uint64_t a, std::uint64_t n);

}  // namespace word

}  // namespace chm
