#include "chm/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "chm/criterion.hpp"
#include "chm/factorizer.hpp"
#include "chm/oracle.hpp"
#include "chm/orders.hpp"
#include "chm/record.hpp"
#include "chm/sieve.hpp"

namespace chm::cli {

namespace {

int exit_code(VerdictKind k) {
    switch (k) {
        case VerdictKind::Certified: return kExitCertified;
        case VerdictKind::Undecided: return kExitUndecided;
        case VerdictKind::Inapplicable: return kExitInapplicable;
    }
    return kExitInputError;
}

std::string format_row(const std::vector<int>& row) {
    std::string out = "(";
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(row[i]);
    }
    return out + ")";
}

std::string read_sign_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        return line.substr(first, last - first + 1);
    }
    throw ParseError(path + ": no sign vector found");
}

struct TestArgs {
    std::string h;
    std::string mode = "both";
    bool full_orders = false;
};

struct SieveArgs {
    std::vector<std::string> range;
    std::string list;
    std::string out;
    std::string mode = "both";
    int workers = 1;
    std::uint64_t segment = std::uint64_t{1} << 16;
    bool full_orders = false;
    bool timings = false;
};

int cmd_test(const TestArgs& a, const FactorConfig& fc, std::ostream& out) {
    TestOptions opt;
    opt.mode = parse_mode(a.mode);
    opt.full_orders = a.full_orders;
    opt.factor = fc;
    const Certificate cert = ryser_test(Nat::parse(a.h), opt);
    out << to_json(cert).dump() << '\n';
    return exit_code(cert.primary().kind);
}

int cmd_sieve(const SieveArgs& a, const FactorConfig& fc, std::ostream& out, std::ostream& err) {
    if (a.range.empty() == a.list.empty()) throw DomainError("sieve: give exactly one of --range or --list");
    if (a.workers < 1) throw DomainError("sieve: --workers must be at least 1");

    SieveConfig config;
    config.mode = parse_mode(a.mode);
    config.workers = a.workers;
    config.segment_odd_values = a.segment;
    config.full_orders = a.full_orders;
    config.timings = a.timings;
    config.factor = fc;

    std::ofstream file;
    std::ostream* sink_stream = &out;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw ParseError("cannot open " + a.out + " for writing");
        sink_stream = &file;
    }
    const CertificateSink sink = [&](const StreamItem& item) { *sink_stream << to_jsonl(item) << '\n'; };

    const SieveReport report = a.list.empty()
                                   ? sieve_range(Nat::parse(a.range[0]), Nat::parse(a.range[1]), config, sink)
                                   : sieve_list(std::filesystem::path(a.list), config, sink);
    sink_stream->flush();
    err << to_json(report).dump() << '\n';
    return report.errors ? kExitInputError : kExitOk;
}

int cmd_factor(const std::string& n, const FactorConfig& fc, std::ostream& out) {
    const Nat value = Nat::parse(n);
    out << value << " = " << factorize(value, fc).str() << '\n';
    return kExitOk;
}

int cmd_order(const std::string& a_text, const std::string& s_text, const FactorConfig& fc, std::ostream& out) {
    const Nat a = Nat::parse(a_text);
    const Nat s = Nat::parse(s_text);
    if (s.is_zero()) throw DomainError("order: s must be positive");
    if (s.is_even()) throw DomainError("order: s must be odd");
    if (a.is_even() || gcd(a, s) != Nat(1)) throw DomainError("order: a must be odd and coprime to s");

    const Nat m = Nat(2) * s * s;
    OrderParity parity = order_parity_mod_m(a, factorize(s, fc));
    std::optional<std::string> full_error;
    try {
        for (auto& ev : parity.evidence) {
            ev.full_order = full_order_mod_prime_power(a, ev.component_prime, ev.component_exponent, fc);
        }
    } catch (const FactorizationStalled& e) {
        full_error = e.what();
    }

    out << "modulus 2*s^2 = " << m << '\n';
    for (const auto& ev : parity.evidence) {
        out << "component " << ev.component_prime << '^' << ev.component_exponent << ": group order "
            << ev.group_order << ", order v2 " << ev.order_v2 << (ev.order_is_odd ? " (odd)" : " (even)");
        if (ev.full_order) out << ", order " << *ev.full_order;
        out << '\n';
    }
    out << "order of " << a << " mod " << m << ": ";
    if (full_error) {
        out << "unavailable (" << *full_error << ")";
    } else {
        out << combined_order(parity.evidence);
    }
    out << (parity.is_odd ? " (odd)" : " (even)") << '\n';
    out << "self-conjugate: " << (is_self_conjugate(parity.evidence) ? "yes" : "no") << '\n';
    return kExitOk;
}

int cmd_jacobi(const std::string& a, const std::string& n, std::ostream& out) {
    const int j = to_int(jacobi(Nat::parse(a), Nat::parse(n)));
    out << (j > 0 ? "+1" : j < 0 ? "-1" : "0") << '\n';
    return kExitOk;
}

int print_sequences(const std::vector<SignVector>& found, bool classes, bool with_rotation, std::ostream& out,
                    std::ostream& err, const std::string& what) {
    for (const auto& x : found) out << x.str() << '\n';
    err << found.size() << ' ' << what << '\n';
    if (classes) out << "classes: " << count_classes(found, with_rotation) << '\n';
    return kExitOk;
}

int cmd_verify_matrix(const std::string& row_text, std::ostream& out) {
    const SignVector row = SignVector::parse(row_text);
    const std::size_t n = row.size();
    const bool hadamard = is_hadamard(row);
    out << "row: " << row.str() << '\n';
    out << "order: " << n << '\n';
    out << "hadamard: " << (hadamard ? "true" : "false") << '\n';

    if (n % 2 != 0) {
        out << "blocks: skipped (odd order)\n";
    } else {
        const BlockPair blocks = split_blocks(row);
        std::vector<int> k(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j) k[j] = blocks.a(0, j) + blocks.b(0, j);
        out << "blocks: ok, K = A + B circulant with first row " << format_row(k) << '\n';
    }
    if (n % 4 != 0) {
        out << "weighing: skipped (order not divisible by 4)\n";
    } else {
        const CirculantSpec c = derived_weighing(row, false);
        const bool weighing = is_weighing(c, n / 4);
        out << "weighing: " << (weighing ? "true" : "false") << ", C = " << format_row(c.first_row) << ", order "
            << n / 2 << ", weight " << n / 4 << '\n';
        if (hadamard && !weighing) throw ConsistencyError("Hadamard input produced a non-weighing C");
    }
    return hadamard ? kExitOk : kExitNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Circulant Hadamard nonexistence certifier for orders 4h^2"};
    app.require_subcommand(1);

    FactorConfig fc;
    app.add_option("--trial-bound", fc.trial_bound, "Trial division bound before Pollard rho")
        ->capture_default_str();
    app.add_option("--rho-budget", fc.iteration_budget, "Pollard rho iteration budget per cofactor")
        ->capture_default_str();

    TestArgs test_args;
    auto* test = app.add_subcommand("test", "Test one odd h > 1; exit 0 Certified, 10 Undecided, 11 Inapplicable");
    test->add_option("h_value", test_args.h, "Odd integer h > 1")->required();
    test->add_option("--mode", test_args.mode, "parity | strict | both")->capture_default_str();
    test->add_flag("--full-orders", test_args.full_orders, "Attach full component orders to witnesses");

    SieveArgs sieve_args;
    auto* sieve = app.add_subcommand("sieve", "Test every odd h of a range or of a list file (JSON Lines)");
    auto* range_opt = sieve->add_option("--range", sieve_args.range, "lo hi")->expected(2);
    auto* list_opt = sieve->add_option("--list", sieve_args.list, "File with one decimal h per line");
    range_opt->excludes(list_opt);
    sieve->add_option("--workers", sieve_args.workers, "Worker threads")->capture_default_str();
    sieve->add_option("--out", sieve_args.out, "Write the certificate stream here instead of stdout");
    sieve->add_option("--mode", sieve_args.mode, "parity | strict | both")->capture_default_str();
    sieve->add_option("--segment", sieve_args.segment, "Odd values per range segment")->capture_default_str();
    sieve->add_flag("--full-orders", sieve_args.full_orders, "Attach full component orders to witnesses");
    sieve->add_flag("--timings", sieve_args.timings, "Include per-certificate elapsed_ms");

    std::string factor_n;
    auto* factor = app.add_subcommand("factor", "Prime factorization");
    factor->add_option("n", factor_n)->required();

    std::string order_a, order_s;
    auto* order = app.add_subcommand("order", "Order of a modulo 2 s^2, component by component");
    order->add_option("a", order_a)->required();
    order->add_option("--modulus-s", order_s, "s, the modulus being 2 s^2")->required();

    std::string jac_a, jac_n;
    auto* jac = app.add_subcommand("jacobi", "Jacobi symbol (a|n), n odd");
    jac->add_option("a", jac_a)->required();
    jac->add_option("n", jac_n)->required();

    SearchConfig search;
    int search_n = 0;
    bool classes = false;
    auto* barker = app.add_subcommand("barker", "All Barker sequences of length n, exhaustively");
    barker->add_option("n", search_n)->required();
    barker->add_option("--bound", search.barker_bound, "Exhaustive length bound")->capture_default_str();
    barker->add_option("--workers", search.workers)->capture_default_str();
    barker->add_flag("--classes", classes, "Also count classes under negation and reversal");

    auto* chm = app.add_subcommand("chm-search", "All circulant Hadamard first rows of order n, exhaustively");
    chm->add_option("n", search_n)->required();
    chm->add_option("--bound", search.hadamard_bound, "Exhaustive order bound")->capture_default_str();
    chm->add_option("--workers", search.workers)->capture_default_str();
    chm->add_flag("--classes", classes, "Also count classes under negation, reversal and rotation");

    int witness_k = 0;
    std::string witness_floor = "3";
    auto* witness = app.add_subcommand("witness", "Squarefree h with k primes that the parity test certifies");
    witness->add_option("--k", witness_k, "Number of distinct primes, at least 2")->required();
    witness->add_option("--floor", witness_floor, "Lower bound for every prime")->capture_default_str();

    std::string matrix_file, matrix_row;
    auto* verify = app.add_subcommand("verify-matrix", "Check a circulant first row given as a '+'/'-' string");
    auto* file_opt = verify->add_option("file", matrix_file, "File holding the sign string");
    auto* row_opt = verify->add_option("--row", matrix_row, "Sign string given inline");
    file_opt->excludes(row_opt);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*test) return cmd_test(test_args, fc, out);
        if (*sieve) return cmd_sieve(sieve_args, fc, out, err);
        if (*factor) return cmd_factor(factor_n, fc, out);
        if (*order) return cmd_order(order_a, order_s, fc, out);
        if (*jac) return cmd_jacobi(jac_a, jac_n, out);
        if (*barker) {
            return print_sequences(search_barker(search_n, search), classes, false, out, err, "Barker sequences");
        }
        if (*chm) {
            return print_sequences(search_circulant_hadamard(search_n, search), classes, true, out, err,
                                   "circulant Hadamard first rows");
        }
        if (*witness) {
            out << construct_witness_h(witness_k, Nat::parse(witness_floor)) << '\n';
            return kExitOk;
        }
        if (*verify) {
            if (matrix_file.empty() && matrix_row.empty()) throw DomainError("verify-matrix: give a file or --row");
            return cmd_verify_matrix(matrix_row.empty() ? read_sign_file(matrix_file) : matrix_row, out);
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const FactorizationStalled& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace chm::cli
