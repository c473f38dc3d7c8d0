#include "chm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>
#include <thread>

#include "chm/errors.hpp"

namespace chm {

SignVector::SignVector(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_) {
        if (e != 1 && e != -1) throw DomainError("sign vector entries must be +1 or -1");
    }
}

SignVector SignVector::parse(std::string_view text) {
    std::vector<int> out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '+') out.push_back(1);
        else if (c == '-') out.push_back(-1);
        else throw ParseError("sign vector: unexpected character '" + std::string(1, c) + "'");
    }
    if (out.empty()) throw ParseError("sign vector: empty");
    return SignVector(std::move(out));
}

std::string SignVector::str() const {
    std::string out;
    out.reserve(entries_.size());
    for (int e : entries_) out.push_back(e > 0 ? '+' : '-');
    return out;
}

Matrix realize_circulant(const CirculantSpec& spec) {
    const std::size_t n = spec.first_row.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = spec.first_row[(j + n - i) % n];
    }
    return m;
}

std::vector<long> periodic_autocorrelations(std::span<const int> row) {
    const std::size_t n = row.size();
    std::vector<long> out(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        long sum = 0;
        for (std::size_t i = 0; i < n; ++i) sum += long{row[i]} * row[(i + j) % n];
        out[j] = sum;
    }
    return out;
}

bool is_hadamard(const SignVector& first_row) {
    const auto corr = periodic_autocorrelations(first_row.entries());
    return std::all_of(corr.begin() + 1, corr.end(), [](long c) { return c == 0; });
}

bool is_weighing(const CirculantSpec& first_row, std::uint64_t k) {
    std::uint64_t weight = 0;
    for (int e : first_row.first_row) {
        if (e < -1 || e > 1) throw DomainError("weighing matrix entries must lie in {-1, 0, 1}");
        weight += e != 0;
    }
    if (weight != k) return false;
    const auto corr = periodic_autocorrelations(first_row.first_row);
    return std::all_of(corr.begin() + (corr.empty() ? 0 : 1), corr.end(), [](long c) { return c == 0; });
}

BlockPair split_blocks(const SignVector& first_row) {
    const std::size_t n = first_row.size();
    if (n % 2 != 0) throw DomainError("block decomposition needs even order, got " + std::to_string(n));
    const std::size_t half = n / 2;
    const Matrix h = realize_circulant(CirculantSpec::from(first_row));

    BlockPair out{Matrix(half), Matrix(half)};
    for (std::size_t i = 0; i < half; ++i) {
        for (std::size_t j = 0; j < half; ++j) {
            out.a(i, j) = h(i, j);
            out.b(i, j) = h(i, j + half);
            if (h(i + half, j) != out.b(i, j) || h(i + half, j + half) != out.a(i, j)) {
                throw ConsistencyError("circulant does not have the [[A, B], [B, A]] block form");
            }
        }
    }
    for (std::size_t i = 0; i < half; ++i) {
        for (std::size_t j = 0; j < half; ++j) {
            const int k = out.a(i, j) + out.b(i, j);
            if (k != -2 && k != 0 && k != 2) throw ConsistencyError("A + B has an entry outside {-2, 0, 2}");
            const int k0 = out.a(0, (j + half - i) % half) + out.b(0, (j + half - i) % half);
            if (k != k0) throw ConsistencyError("A + B is not circulant");
        }
    }
    return out;
}

CirculantSpec derived_weighing(const SignVector& first_row, bool require_hadamard) {
    const std::size_t n = first_row.size();
    if (n % 4 != 0) throw DomainError("derived weighing matrix needs order divisible by 4, got " + std::to_string(n));
    if (require_hadamard && !is_hadamard(first_row)) throw DomainError("input is not a circulant Hadamard matrix");

    const BlockPair blocks = split_blocks(first_row);
    const std::size_t half = n / 2;
    CirculantSpec c;
    c.first_row.resize(half);
    for (std::size_t j = 0; j < half; ++j) {
        const int k = blocks.a(0, j) + blocks.b(0, j);
        if (k % 2 != 0) throw ConsistencyError("A + B has an odd entry");
        c.first_row[j] = k / 2;
    }
    return c;
}

std::vector<int> barker_autocorrelations(const SignVector& x) {
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("aperiodic autocorrelation needs length at least 2");
    std::vector<int> out(n - 1, 0);
    for (std::size_t j = 1; j < n; ++j) {
        int sum = 0;
        for (std::size_t i = 0; i + j < n; ++i) sum += x[i] * x[i + j];
        out[j - 1] = sum;
    }
    return out;
}

bool is_barker(const SignVector& x) {
    const auto c = barker_autocorrelations(x);
    return std::all_of(c.begin(), c.end(), [](int v) { return v >= -1 && v <= 1; });
}

namespace {

// Candidate word w encodes entry i as bit (n - 1 - i), +1 <-> 1.
SignVector decode(std::uint64_t w, int n) {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = (w >> (n - 1 - i)) & 1 ? 1 : -1;
    return SignVector(std::move(out));
}

bool word_is_barker(std::uint64_t w, int n) {
    for (int j = 1; j < n; ++j) {
        const std::uint64_t mask = (std::uint64_t{1} << (n - j)) - 1;
        const int c = (n - j) - 2 * std::popcount((w ^ (w >> j)) & mask);
        if (c < -1 || c > 1) return false;
    }
    return true;
}

bool word_is_hadamard(std::uint64_t w, int n) {
    const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (int j = 1; j < n; ++j) {
        const std::uint64_t rotated = ((w << j) | (w >> (n - j))) & mask;
        if (n != 2 * std::popcount(w ^ rotated)) return false;
    }
    return true;
}

template <class Pred>
std::vector<SignVector> exhaustive(int n, int workers, Pred pred) {
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(total, std::uint64_t(workers) * 8));
    std::vector<std::vector<std::uint64_t>> hits(chunks);

    auto run = [&](std::uint64_t chunk) {
        const std::uint64_t begin = total / chunks * chunk;
        const std::uint64_t end = chunk + 1 == chunks ? total : total / chunks * (chunk + 1);
        for (std::uint64_t w = begin; w < end; ++w) {
            if (pred(w)) hits[chunk].push_back(w);
        }
    };

    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run(c);
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (std::uint64_t c = std::uint64_t(t); c < chunks; c += std::uint64_t(workers)) run(c);
            });
        }
    }

    std::vector<SignVector> out;
    for (const auto& chunk : hits) {
        for (std::uint64_t w : chunk) out.push_back(decode(w, n));
    }
    return out;
}

void check_length(int n, int minimum, int bound, const char* what) {
    if (n < minimum) throw DomainError(std::string(what) + ": length must be at least " + std::to_string(minimum));
    if (n > bound || n > 62) {
        throw ConfigError(std::string(what) + ": length " + std::to_string(n) + " exceeds the exhaustive bound " +
                          std::to_string(std::min(bound, 62)));
    }
}

}  // namespace

std::vector<SignVector> search_barker(int n, const SearchConfig& config) {
    check_length(n, 2, config.barker_bound, "barker search");
    auto out = exhaustive(n, config.workers, [n](std::uint64_t w) { return word_is_barker(w, n); });
    for (const auto& x : out) {
        if (!is_barker(x)) throw ConsistencyError("barker search hit " + x.str() + " fails the direct check");
    }
    return out;
}

std::vector<SignVector> search_circulant_hadamard(int n, const SearchConfig& config) {
    check_length(n, 1, config.hadamard_bound, "circulant Hadamard search");
    auto out = exhaustive(n, config.workers, [n](std::uint64_t w) { return word_is_hadamard(w, n); });
    for (const auto& x : out) {
        if (!is_hadamard(x)) throw ConsistencyError("hadamard search hit " + x.str() + " fails the direct check");
    }
    return out;
}

std::size_t count_classes(std::span<const SignVector> found, bool with_rotation) {
    std::set<SignVector> canon;
    for (const auto& x : found) {
        const std::vector<int> base(x.entries().begin(), x.entries().end());
        const std::size_t n = base.size();
        SignVector best = x;
        for (std::size_t shift = 0; shift < (with_rotation ? n : 1); ++shift) {
            std::vector<int> r(n);
            for (std::size_t i = 0; i < n; ++i) r[i] = base[(i + shift) % n];
            for (int reverse = 0; reverse < 2; ++reverse) {
                std::vector<int> t = r;
                if (reverse) std::reverse(t.begin(), t.end());
                for (int negate = 0; negate < 2; ++negate) {
                    if (negate) {
                        for (int& e : t) e = -e;
                    }
                    best = std::min(best, SignVector(t));
                }
            }
        }
        canon.insert(best);
    }
    return canon.size();
}

}  // namespace chm
