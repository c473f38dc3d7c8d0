#include "chm/sieve.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <thread>

namespace chm {

namespace {

using Batch = std::vector<StreamItem>;

// Produces chunks on `workers` threads and hands them to `consume` on the
// calling thread in chunk order. At most `window` chunks are buffered.
void ordered_parallel(std::uint64_t chunks, int workers, const std::function<Batch(std::uint64_t)>& produce,
                      const std::function<void(Batch&)>& consume) {
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) {
            Batch b = produce(c);
            consume(b);
        }
        return;
    }

    const std::uint64_t window = static_cast<std::uint64_t>(workers) * 4;
    std::mutex mutex;
    std::condition_variable cv;
    std::map<std::uint64_t, Batch> ready;
    std::uint64_t next_take = 0;
    std::uint64_t next_emit = 0;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::uint64_t c = 0;
            {
                std::unique_lock lock(mutex);
                cv.wait(lock, [&] { return failure || next_take >= chunks || next_take < next_emit + window; });
                if (failure || next_take >= chunks) return;
                c = next_take++;
            }
            Batch b;
            try {
                b = produce(c);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                cv.notify_all();
                return;
            }
            std::lock_guard lock(mutex);
            ready.emplace(c, std::move(b));
            cv.notify_all();
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);

    for (std::uint64_t c = 0; c < chunks; ++c) {
        Batch b;
        {
            std::unique_lock lock(mutex);
            cv.wait(lock, [&] { return failure || ready.contains(c); });
            if (failure) break;
            b = std::move(ready.at(c));
            ready.erase(c);
            ++next_emit;
            cv.notify_all();
        }
        try {
            consume(b);
        } catch (...) {
            std::lock_guard lock(mutex);
            if (!failure) failure = std::current_exception();
            cv.notify_all();
            break;
        }
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

class ReportBuilder {
public:
    explicit ReportBuilder(std::string descriptor, const CertificateSink& sink) : sink_(sink) {
        report_.descriptor = std::move(descriptor);
    }

    void add(Batch& batch) {
        for (const auto& item : batch) {
            if (const auto* cert = std::get_if<Certificate>(&item)) {
                add(*cert);
            } else {
                const auto& err = std::get<ItemError>(item);
                ++report_.errors;
                if (!err.input.empty() && (err.input.back() - '0') % 2 == 1) ++report_.odd_values;
            }
            if (sink_) sink_(item);
        }
    }

    SieveReport finish(std::chrono::steady_clock::time_point start) {
        std::sort(report_.survivors.begin(), report_.survivors.end());
        report_.wall_time = std::chrono::steady_clock::now() - start;
        return std::move(report_);
    }

private:
    static void count(VerdictCounts& c, VerdictKind k) {
        switch (k) {
            case VerdictKind::Inapplicable: ++c.inapplicable; break;
            case VerdictKind::Certified: ++c.certified; break;
            case VerdictKind::Undecided: ++c.undecided; break;
        }
    }

    void add(const Certificate& cert) {
        ++report_.processed;
        ++report_.odd_values;
        if (cert.omega >= 2) ++report_.composite;
        if (cert.parity) {
            count(report_.parity, cert.parity->kind);
            if (cert.parity->kind == VerdictKind::Undecided) report_.survivors.push_back(cert.h);
        }
        if (cert.strict) count(report_.strict, cert.strict->kind);
        if (cert.divergent()) report_.divergences.push_back(cert.h);
    }

    const CertificateSink& sink_;
    SieveReport report_;
};

TestOptions test_options(const SieveConfig& config) {
    TestOptions opt;
    opt.mode = config.mode;
    opt.full_orders = config.full_orders;
    opt.timed = config.timings;
    opt.factor = config.factor;
    return opt;
}

// Runs one h; recoverable per-item failures become ItemError entries.
StreamItem test_one(const Nat& h, std::size_t line, const std::string& text,
                    const std::function<Certificate()>& run) {
    try {
        if (h.is_even() || h <= Nat(1)) throw DomainError("h must be odd and greater than 1");
        return run();
    } catch (const DomainError& e) {
        return ItemError{line, text, e.what()};
    } catch (const FactorizationStalled& e) {
        return ItemError{line, text, e.what()};
    }
}

const Nat& spf_limit() {
    static const Nat limit(std::uint64_t{1'000'000'000'000});
    return limit;
}

}  // namespace

double SieveReport::throughput() const {
    const double seconds = std::chrono::duration<double>(wall_time).count();
    return seconds > 0 ? static_cast<double>(processed) / seconds : 0.0;
}

double SieveReport::survivor_fraction_all_odd() const {
    return odd_values ? static_cast<double>(survivors.size()) / static_cast<double>(odd_values) : 0.0;
}

double SieveReport::survivor_fraction_composite() const {
    return composite ? static_cast<double>(survivors.size()) / static_cast<double>(composite) : 0.0;
}

double SieveReport::survivor_fraction_tested() const {
    return processed ? static_cast<double>(survivors.size()) / static_cast<double>(processed) : 0.0;
}

SieveReport sieve_range(const Nat& lo_in, const Nat& hi_in, const SieveConfig& config, const CertificateSink& sink) {
    if (lo_in > hi_in) throw DomainError("sieve range: lower bound " + lo_in.str() + " exceeds upper bound " + hi_in.str());
    if (lo_in < Nat(3)) throw DomainError("sieve range: lower bound must be at least 3");
    if (config.segment_odd_values == 0) throw ConfigError("sieve range: segment size must be positive");

    const auto start = std::chrono::steady_clock::now();
    const Nat lo = lo_in.is_odd() ? lo_in : lo_in + Nat(1);
    const Nat hi = hi_in.is_odd() ? hi_in : hi_in - Nat(1);
    ReportBuilder builder("range [" + lo_in.str() + ", " + hi_in.str() + "]", sink);
    if (lo > hi) return builder.finish(start);

    const TestOptions opt = test_options(config);
    const Nat count = (hi - lo) / Nat(2) + Nat(1);
    const std::uint64_t seg = config.segment_odd_values;
    const std::uint64_t chunks = ((count + Nat(seg - 1)) / Nat(seg)).to_u64();

    std::function<Batch(std::uint64_t)> produce;
    if (hi < spf_limit()) {
        const std::uint64_t lo_w = lo.to_u64();
        const std::uint64_t hi_w = hi.to_u64();
        produce = [=](std::uint64_t c) {
            const std::uint64_t a = lo_w + 2 * seg * c;
            const std::uint64_t b = std::min(hi_w, a + 2 * (seg - 1));
            const SpfTable table = spf_table(a, b, seg);
            Batch out;
            out.reserve(table.size());
            for (std::uint64_t n = a; n <= b; n += 2) {
                const Nat h(n);
                out.push_back(test_one(h, 0, {}, [&] { return ryser_test(h, table.factorization(n), opt); }));
            }
            return out;
        };
    } else {
        produce = [=](std::uint64_t c) {
            const Nat a = lo + Nat(2) * Nat(seg) * Nat(c);
            const Nat b = std::min(hi, a + Nat(2) * Nat(seg - 1));
            Batch out;
            for (Nat h = a; h <= b; h += Nat(2)) {
                out.push_back(test_one(h, 0, h.str(), [&] { return ryser_test(h, opt); }));
            }
            return out;
        };
    }

    ordered_parallel(chunks, config.workers, produce, [&](Batch& b) { builder.add(b); });
    return builder.finish(start);
}

std::vector<ListEntry> read_h_list(std::istream& in) {
    std::vector<ListEntry> out;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        std::string text = line.substr(first, last - first + 1);
        try {
            Nat::parse(text);
        } catch (const ParseError&) {
            throw ParseError("line " + std::to_string(number) + ": not a decimal integer: '" + text + "'");
        }
        out.push_back({number, std::move(text)});
    }
    return out;
}

SieveReport sieve_list(const std::vector<ListEntry>& entries, const SieveConfig& config, const CertificateSink& sink,
                       std::string descriptor) {
    const auto start = std::chrono::steady_clock::now();
    ReportBuilder builder(std::move(descriptor), sink);
    const TestOptions opt = test_options(config);
    const std::uint64_t per_chunk = std::max<std::uint64_t>(1, config.list_chunk);
    const std::uint64_t chunks = (entries.size() + per_chunk - 1) / per_chunk;

    auto produce = [&](std::uint64_t c) {
        Batch out;
        const std::size_t begin = static_cast<std::size_t>(c * per_chunk);
        const std::size_t end = std::min(entries.size(), static_cast<std::size_t>(begin + per_chunk));
        for (std::size_t i = begin; i < end; ++i) {
            const Nat h = Nat::parse(entries[i].text);
            out.push_back(test_one(h, entries[i].line, entries[i].text, [&] { return ryser_test(h, opt); }));
        }
        return out;
    };
    ordered_parallel(chunks, config.workers, produce, [&](Batch& b) { builder.add(b); });
    return builder.finish(start);
}

SieveReport sieve_list(const std::filesystem::path& path, const SieveConfig& config, const CertificateSink& sink) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open list file " + path.string());
    return sieve_list(read_h_list(in), config, sink, "list " + path.string());
}

}  // namespace chm
