#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chm {

// A sequence of +1/-1 entries. Text form is a string over {'+', '-'}.
class SignVector {
public:
    SignVector() = default;
    explicit SignVector(std::vector<int> entries);  // throws DomainError on non +-1 entries

    static SignVector parse(std::string_view text);
    std::string str() const;

    std::size_t size() const { return entries_.size(); }
    int operator[](std::size_t i) const { return entries_[i]; }
    std::span<const int> entries() const { return entries_; }

    friend bool operator==(const SignVector&, const SignVector&) = default;
    friend auto operator<=>(const SignVector&, const SignVector&) = default;

private:
    std::vector<int> entries_;
};

// First row of a circulant matrix with entries in {-2, ..., 2}.
struct CirculantSpec {
    std::vector<int> first_row;

    static CirculantSpec from(const SignVector& x) { return {{x.entries().begin(), x.entries().end()}}; }
    friend bool operator==(const CirculantSpec&, const CirculantSpec&) = default;
};

// Dense square integer matrix, row major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0) {}

    std::size_t order() const { return n_; }
    int& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    int operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<int> data_;
};

struct BlockPair {
    Matrix a;
    Matrix b;
};

// Row i is the first row shifted i places to the right, so row 2 of
// circ(h1, ..., hn) is [hn, h1, ..., h(n-1)].
Matrix realize_circulant(const CirculantSpec& spec);

// Sum_i x_i x_(i+j mod n) for j = 0 .. n-1.
std::vector<long> periodic_autocorrelations(std::span<const int> row);

bool is_hadamard(const SignVector& first_row);
bool is_weighing(const CirculantSpec& first_row, std::uint64_t k);

// H = [[A, B], [B, A]] for the circulant H built from first_row; checks that
// A + B is circulant with entries in {-2, 0, 2}.
BlockPair split_blocks(const SignVector& first_row);

// C = (A + B) / 2 as a circulant of order n/2.
CirculantSpec derived_weighing(const SignVector& first_row, bool require_hadamard);

// c_j = sum_{i=1}^{n-j} x_i x_(i+j), j = 1 .. n-1.
std::vector<int> barker_autocorrelations(const SignVector& x);
bool is_barker(const SignVector& x);

struct SearchConfig {
    int barker_bound = 20;
    int hadamard_bound = 24;
    int workers = 1;
};

// Exhaustive searches. Results are in lexicographic order of the first row
// read as a binary word with -1 -> 0, +1 -> 1.
std::vector<SignVector> search_barker(int n, const SearchConfig& config = {});
std::vector<SignVector> search_circulant_hadamard(int n, const SearchConfig& config = {});

// Number of classes of `found` under negation and reversal, and also under
// cyclic rotation when with_rotation is set.
std::size_t count_classes(std::span<const SignVector> found, bool with_rotation);

}  // namespace chm
