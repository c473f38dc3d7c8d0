#include "chm/factorizer.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace chm {

namespace {

constexpr std::uint64_t kMillerRabinBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// Miller-Rabin with the first 13 prime bases is deterministic below this.
const Nat& deterministic_mr_limit() {
    static const Nat limit = Nat::parse("3317044064679887385961981");
    return limit;
}

bool strong_probable_prime(std::uint64_t n, std::uint64_t base) {
    std::uint64_t d = n - 1;
    const int s = __builtin_ctzll(d);
    d >>= s;
    std::uint64_t x = word::powmod(base % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int r = 1; r < s; ++r) {
        x = word::mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool strong_probable_prime(const mpz_class& n, unsigned long base) {
    const mpz_class n_minus_1 = n - 1;
    const mp_bitcnt_t s = mpz_scan1(n_minus_1.get_mpz_t(), 0);
    mpz_class d;
    mpz_fdiv_q_2exp(d.get_mpz_t(), n_minus_1.get_mpz_t(), s);
    mpz_class x = powmod(Nat(base), Nat(d), Nat(n)).mpz();
    if (x == 1 || x == n_minus_1) return true;
    for (mp_bitcnt_t r = 1; r < s; ++r) {
        x *= x;
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
        if (x == n_minus_1) return true;
    }
    return false;
}

void reduce(mpz_class& x, const mpz_class& n) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t()); }

void halve_mod(mpz_class& x, const mpz_class& n) {
    if (mpz_odd_p(x.get_mpz_t())) x += n;
    mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), 1);
}

// Strong Lucas probable-prime test with Selfridge's parameter choice
// (P = 1, Q = (1 - D) / 4, D the first of 5, -7, 9, -11, ... with (D|n) = -1).
bool strong_lucas_probable_prime(const mpz_class& n) {
    if (mpz_perfect_square_p(n.get_mpz_t())) return false;

    const Nat nn(n);
    long d_abs = 5;
    long d_sign = 1;
    for (;; d_abs += 2, d_sign = -d_sign) {
        mpz_class d = d_sign * d_abs;
        reduce(d, n);
        const Sign3 j = jacobi(Nat(d), nn);
        if (j == Sign3::Minus) break;
        if (j == Sign3::Zero && cmp(n, d_abs) != 0) return false;
    }
    const long disc = d_sign * d_abs;
    mpz_class q = (1 - disc) / 4;
    reduce(q, n);
    mpz_class dm = disc;
    reduce(dm, n);

    const mpz_class n_plus_1 = n + 1;
    const mp_bitcnt_t s = mpz_scan1(n_plus_1.get_mpz_t(), 0);
    mpz_class k;
    mpz_fdiv_q_2exp(k.get_mpz_t(), n_plus_1.get_mpz_t(), s);

    mpz_class u = 1, v = 1, qk = q;
    for (std::size_t i = mpz_sizeinbase(k.get_mpz_t(), 2) - 1; i-- > 0;) {
        u = u * v;
        reduce(u, n);
        v = v * v - 2 * qk;
        reduce(v, n);
        qk *= qk;
        reduce(qk, n);
        if (mpz_tstbit(k.get_mpz_t(), i)) {
            mpz_class u_next = u + v;
            reduce(u_next, n);
            halve_mod(u_next, n);
            mpz_class v_next = dm * u + v;
            reduce(v_next, n);
            halve_mod(v_next, n);
            u = std::move(u_next);
            v = std::move(v_next);
            qk *= q;
            reduce(qk, n);
        }
    }
    if (sgn(u) == 0 || sgn(v) == 0) return true;
    for (mp_bitcnt_t r = 1; r < s; ++r) {
        v = v * v - 2 * qk;
        reduce(v, n);
        if (sgn(v) == 0) return true;
        qk *= qk;
        reduce(qk, n);
    }
    return false;
}

std::uint64_t rho_step(std::uint64_t y, std::uint64_t c, std::uint64_t n) {
    const std::uint64_t sq = word::mulmod(y, y, n);
    return sq >= n - c ? sq - (n - c) : sq + c;
}

std::uint64_t abs_diff(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

bool spend(std::uint64_t& budget, std::uint64_t steps) {
    if (budget < steps) {
        budget = 0;
        return false;
    }
    budget -= steps;
    return true;
}

// Brent's cycle-finding variant of Pollard rho with batched gcds. Returns a
// nontrivial divisor, or n when this polynomial failed or the budget ran out.
std::uint64_t brent_rho(std::uint64_t n, std::uint64_t c, std::uint64_t& budget) {
    constexpr std::uint64_t batch = 128;
    std::uint64_t y = 2, x = 2, ys = 2, q = 1, g = 1;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) y = rho_step(y, c, n);
        if (!spend(budget, r)) return n;
        for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
            ys = y;
            const std::uint64_t steps = std::min(batch, r - k);
            for (std::uint64_t i = 0; i < steps; ++i) {
                y = rho_step(y, c, n);
                q = word::mulmod(q, abs_diff(x, y), n);
            }
            g = word::gcd(q, n);
            if (!spend(budget, steps)) return n;
        }
    }
    if (g == n) {
        do {
            ys = rho_step(ys, c, n);
            g = word::gcd(abs_diff(x, ys), n);
        } while (g == 1);
    }
    return g;
}

mpz_class brent_rho(const mpz_class& n, unsigned long c, std::uint64_t& budget) {
    constexpr std::uint64_t batch = 128;
    auto step = [&](mpz_class& y) {
        y *= y;
        y += c;
        reduce(y, n);
    };
    mpz_class y = 2, x = 2, ys = 2, q = 1, g = 1, diff;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) step(y);
        if (!spend(budget, r)) return n;
        for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
            ys = y;
            const std::uint64_t steps = std::min(batch, r - k);
            for (std::uint64_t i = 0; i < steps; ++i) {
                step(y);
                diff = x - y;
                q *= diff;
                reduce(q, n);
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            if (!spend(budget, steps)) return n;
        }
    }
    if (g == n) {
        do {
            step(ys);
            diff = x - ys;
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g;
}

[[noreturn]] void stalled(const Nat& n, const char* why) {
    throw FactorizationStalled("factorization stalled on " + n.str() + ": " + why);
}

Nat find_divisor(const Nat& n, const FactorConfig& config) {
    std::uint64_t budget = config.iteration_budget;
    for (int attempt = 0; attempt <= config.max_restarts; ++attempt) {
        const unsigned long c = 1 + static_cast<unsigned long>(attempt);
        if (n.fits_u64()) {
            const std::uint64_t nw = n.to_u64();
            const std::uint64_t d = brent_rho(nw, c % nw, budget);
            if (d != 1 && d != nw) return Nat(d);
        } else {
            mpz_class d = brent_rho(n.mpz(), c, budget);
            if (d != 1 && d != n.mpz()) return Nat(std::move(d));
        }
        if (budget == 0) stalled(n, "iteration budget exhausted");
    }
    stalled(n, "restart limit reached");
}

}  // namespace

Nat Factorization::value() const {
    Nat out(1);
    for (const auto& f : factors) out *= pow(f.prime, f.exponent);
    return out;
}

std::string Factorization::str() const {
    if (factors.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) os << " * ";
        os << factors[i].prime;
        if (factors[i].exponent > 1) os << '^' << factors[i].exponent;
    }
    return os.str();
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : kMillerRabinBases) {
        if (n % p == 0) return n == p;
    }
    if (n < 43 * 43) return true;
    for (std::uint64_t base : kMillerRabinBases) {
        if (!strong_probable_prime(n, base)) return false;
    }
    return true;
}

bool is_prime(const Nat& n) {
    if (n.fits_u64()) return is_prime(n.to_u64());
    for (std::uint32_t p : primes_up_to(1000)) {
        if (n.mod_u64(p) == 0) return false;
    }
    if (n < deterministic_mr_limit()) {
        for (std::uint64_t base : kMillerRabinBases) {
            if (!strong_probable_prime(n.mpz(), static_cast<unsigned long>(base))) return false;
        }
        return true;
    }
    // Baillie-PSW.
    return strong_probable_prime(n.mpz(), 2) && strong_lucas_probable_prime(n.mpz());
}

std::span<const std::uint32_t> primes_up_to(std::uint64_t bound) {
    if (bound > 0xFFFFFFFFull) throw ConfigError("prime table bound exceeds 2^32");
    static std::mutex mutex;
    static std::map<std::uint64_t, std::unique_ptr<std::vector<std::uint32_t>>> cache;

    std::lock_guard lock(mutex);
    auto& slot = cache[bound];
    if (!slot) {
        slot = std::make_unique<std::vector<std::uint32_t>>();
        if (bound >= 2) {
            std::vector<bool> composite(bound + 1, false);
            for (std::uint64_t i = 2; i <= bound; ++i) {
                if (composite[i]) continue;
                slot->push_back(static_cast<std::uint32_t>(i));
                for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
            }
        }
    }
    return *slot;
}

Factorization factorize(const Nat& n, const FactorConfig& config) {
    if (n.is_zero()) throw DomainError("factorize: argument must be positive");

    std::map<Nat, std::uint32_t> found;
    mpz_class rest = n.mpz();

    for (std::uint32_t p : primes_up_to(std::max<std::uint64_t>(config.trial_bound, 2))) {
        if (cmp(rest, static_cast<unsigned long>(p) * p) < 0) break;
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
        std::uint32_t e = 0;
        do {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        } while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0);
        found[Nat(p)] += e;
    }

    std::vector<Nat> pending;
    if (rest != 1) pending.emplace_back(std::move(rest));
    while (!pending.empty()) {
        Nat x = std::move(pending.back());
        pending.pop_back();
        if (is_prime(x)) {
            found[x] += 1;
            continue;
        }
        const Nat d = x.is_even() ? Nat(2) : find_divisor(x, config);
        pending.push_back(x / d);
        pending.push_back(d);
    }

    Factorization out;
    out.factors.reserve(found.size());
    for (auto& [p, e] : found) out.factors.push_back({p, e});
    return out;
}

std::size_t SpfTable::index(std::uint64_t n) const {
    if (n < lo_ || n > hi_ || (n & 1) == 0) {
        throw DomainError("spf table: " + std::to_string(n) + " is outside the odd range [" +
                          std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    }
    return static_cast<std::size_t>((n - lo_) / 2);
}

std::uint64_t SpfTable::spf(std::uint64_t n) const { return entries_[index(n)].factors.front().first; }

const SpfTable::Entry& SpfTable::entry(std::uint64_t n) const { return entries_[index(n)]; }

Factorization SpfTable::factorization(std::uint64_t n) const {
    Factorization out;
    for (const auto& [p, e] : entry(n).factors) out.factors.push_back({Nat(p), e});
    return out;
}

Factorization SpfTable::factor_by_lookup(std::uint64_t n) const {
    Factorization out;
    while (n > 1) {
        const std::uint64_t p = spf(n);
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.factors.push_back({Nat(p), e});
    }
    return out;
}

SpfTable spf_table(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_odd_values) {
    if (lo < 3) throw DomainError("spf table: lower bound must be at least 3");
    if (lo > hi) throw DomainError("spf table: empty range");
    if ((lo & 1) == 0) ++lo;
    if ((hi & 1) == 0) --hi;

    SpfTable table;
    table.lo_ = lo;
    table.hi_ = hi;
    if (lo > hi) return table;

    const std::uint64_t count = (hi - lo) / 2 + 1;
    if (count > max_odd_values) {
        throw ConfigError("spf table: segment of " + std::to_string(count) +
                          " odd values exceeds the configured limit " + std::to_string(max_odd_values));
    }

    const std::uint64_t root = isqrt(Nat(hi)).to_u64();
    std::vector<std::uint64_t> rest(count);
    for (std::uint64_t i = 0; i < count; ++i) rest[i] = lo + 2 * i;
    table.entries_.resize(count);

    for (std::uint32_t p32 : primes_up_to(root)) {
        const std::uint64_t p = p32;
        if (p == 2) continue;
        std::uint64_t start = (lo + p - 1) / p * p;
        if ((start & 1) == 0) start += p;
        for (std::uint64_t m = start; m <= hi; m += 2 * p) {
            const std::size_t i = static_cast<std::size_t>((m - lo) / 2);
            std::uint32_t e = 0;
            do {
                rest[i] /= p;
                ++e;
            } while (rest[i] % p == 0);
            table.entries_[i].factors.emplace_back(p, e);
            if (m > hi - 2 * p) break;
        }
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        if (rest[i] > 1) table.entries_[i].factors.emplace_back(rest[i], 1);
    }
    return table;
}

}  // namespace chm
