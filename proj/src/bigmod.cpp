#include "chm/bigmod.hpp"

#include <ostream>
#include <utility>

namespace chm {

Nat::Nat(mpz_class v) : v_(std::move(v)) {
    if (sgn(v_) < 0) throw DomainError("Nat: negative value");
}

Nat Nat::parse(std::string_view text) {
    if (text.empty()) throw ParseError("empty integer");
    for (char c : text) {
        if (c < '0' || c > '9') throw ParseError("invalid decimal integer '" + std::string(text) + "'");
    }
    Nat out;
    out.v_.set_str(std::string(text), 10);
    return out;
}

std::uint64_t Nat::to_u64() const {
    if (!fits_u64()) throw DomainError("Nat: value exceeds 64 bits");
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v_.get_mpz_t());
    return out;
}

std::size_t Nat::bit_length() const {
    return is_zero() ? 0 : mpz_sizeinbase(v_.get_mpz_t(), 2);
}

std::uint64_t Nat::mod_u64(std::uint64_t m) const {
    if (m == 0) throw DomainError("modulus must be positive");
    return mpz_fdiv_ui(v_.get_mpz_t(), m);
}

Nat operator-(const Nat& a, const Nat& b) {
    if (a < b) throw DomainError("Nat: subtraction underflow");
    return Nat(mpz_class(a.v_ - b.v_));
}

Nat operator/(const Nat& a, const Nat& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
    return Nat(std::move(q));
}

Nat operator%(const Nat& a, const Nat& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
    return Nat(std::move(r));
}

std::ostream& operator<<(std::ostream& os, const Nat& n) { return os << n.str(); }

Nat pow(const Nat& base, std::uint64_t exponent) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.mpz().get_mpz_t(), exponent);
    return Nat(std::move(out));
}

Nat isqrt(const Nat& n) {
    mpz_class out;
    mpz_sqrt(out.get_mpz_t(), n.mpz().get_mpz_t());
    return Nat(std::move(out));
}

namespace word {

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    a %= m;
    while (e != 0) {
        if (e & 1) result = mulmod(result, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return result;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

Sign3 jacobi(std::uint64_t a, std::uint64_t n) {
    if (n == 0 || (n & 1) == 0) throw DomainError("jacobi: modulus must be odd and positive");
    a %= n;
    int t = 1;
    while (a != 0) {
        const int z = __builtin_ctzll(a);
        a >>= z;
        const std::uint64_t r = n & 7;
        if ((z & 1) && (r == 3 || r == 5)) t = -t;
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? static_cast<Sign3>(t) : Sign3::Zero;
}

}  // namespace word

Nat mulmod(const Nat& a, const Nat& b, const Nat& m) {
    if (m.is_zero()) throw DomainError("mulmod: modulus must be positive");
    if (m.fits_u64()) {
        const std::uint64_t mw = m.to_u64();
        return word::mulmod(a.mod_u64(mw), b.mod_u64(mw), mw);
    }
    mpz_class r = a.mpz() * b.mpz();
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.mpz().get_mpz_t());
    return Nat(std::move(r));
}

Nat powmod(const Nat& a, const Nat& e, const Nat& m) {
    if (m.is_zero()) throw DomainError("powmod: modulus must be positive");
    if (m.fits_u64() && e.fits_u64()) {
        const std::uint64_t mw = m.to_u64();
        return word::powmod(a.mod_u64(mw), e.to_u64(), mw);
    }

    // Left-to-right square-and-multiply.
    const mpz_srcptr mod = m.mpz().get_mpz_t();
    mpz_class base;
    mpz_fdiv_r(base.get_mpz_t(), a.mpz().get_mpz_t(), mod);
    mpz_class result = 1;
    mpz_fdiv_r(result.get_mpz_t(), result.get_mpz_t(), mod);
    const mpz_srcptr exp = e.mpz().get_mpz_t();
    for (std::size_t i = e.bit_length(); i-- > 0;) {
        result *= result;
        mpz_fdiv_r(result.get_mpz_t(), result.get_mpz_t(), mod);
        if (mpz_tstbit(exp, i)) {
            result *= base;
            mpz_fdiv_r(result.get_mpz_t(), result.get_mpz_t(), mod);
        }
    }
    return Nat(std::move(result));
}

Nat gcd(const Nat& a, const Nat& b) {
    mpz_class out;
    mpz_gcd(out.get_mpz_t(), a.mpz().get_mpz_t(), b.mpz().get_mpz_t());
    return Nat(std::move(out));
}

Nat lcm(const Nat& a, const Nat& b) {
    if (a.is_zero() || b.is_zero()) return Nat{};
    return a / gcd(a, b) * b;
}

std::uint64_t v2(const Nat& n) {
    if (n.is_zero()) throw DomainError("v2: argument must be positive");
    return mpz_scan1(n.mpz().get_mpz_t(), 0);
}

Nat odd_part(const Nat& n) { return n >> v2(n); }

Sign3 jacobi(const Nat& a, const Nat& n) {
    if (n.is_zero() || n.is_even()) throw DomainError("jacobi: modulus must be odd and positive");
    if (n.fits_u64()) return word::jacobi(a.mod_u64(n.to_u64()), n.to_u64());

    mpz_class x = (a % n).mpz();
    mpz_class y = n.mpz();
    int t = 1;
    while (sgn(x) != 0) {
        const mp_bitcnt_t z = mpz_scan1(x.get_mpz_t(), 0);
        mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), z);
        const unsigned long r = mpz_fdiv_ui(y.get_mpz_t(), 8);
        if ((z & 1) && (r == 3 || r == 5)) t = -t;
        mpz_swap(x.get_mpz_t(), y.get_mpz_t());
        if (mpz_fdiv_ui(x.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(y.get_mpz_t(), 4) == 3) t = -t;
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    }
    return y == 1 ? static_cast<Sign3>(t) : Sign3::Zero;
}

}  // namespace chm
