#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chm/cli.hpp"
#include "chm/record.hpp"

using chm::Nat;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "chmcert");
    std::ostringstream out, err;
    const int code = chm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

chm::TestOptions untimed(bool full_orders) {
    chm::TestOptions opt;
    opt.full_orders = full_orders;
    opt.timed = false;
    return opt;
}

}  // namespace

TEST_CASE("test subcommand exit codes") {
    auto r = run({"test", "33"});
    CHECK(r.code == chm::cli::kExitCertified);
    const json j = json::parse(r.out);
    CHECK(j["h"] == "33");
    CHECK(j["n"] == "4356");
    CHECK(j["verdict_parity"] == "Certified");
    CHECK(j["witness"]["p"] == "11");
    CHECK(j["witness"]["arasu"]["m"] == "18");
    CHECK(j.contains("elapsed_ms"));

    CHECK(run({"test", "55"}).code == chm::cli::kExitUndecided);
    CHECK(run({"test", "5"}).code == chm::cli::kExitInapplicable);
    CHECK(run({"test", "9", "--mode", "strict"}).code == chm::cli::kExitInapplicable);

    for (const char* bad : {"10", "1", "abc", "-7"}) {
        r = run({"test", bad});
        CHECK(r.code == chm::cli::kExitInputError);
        CHECK(r.err.find("error") != std::string::npos);
    }
    CHECK(run({"test", "33", "--mode", "sideways"}).code == chm::cli::kExitInputError);
    CHECK(run({}).code == chm::cli::kExitInputError);
    CHECK(run({"--help"}).code == chm::cli::kExitOk);
}

TEST_CASE("test subcommand mode selection") {
    json j = json::parse(run({"test", "33", "--mode", "parity"}).out);
    CHECK(j["verdict_strict"].is_null());
    CHECK(j["verdict_parity"] == "Certified");
    j = json::parse(run({"test", "33", "--mode", "strict"}).out);
    CHECK(j["verdict_parity"].is_null());
    CHECK(j["witness"]["mode"] == "strict");
}

TEST_CASE("certificate JSON round trip") {
    for (std::uint64_t h = 3; h < 3000; h += 2) {
        const chm::Certificate cert = chm::ryser_test(h, untimed(h % 3 == 0));
        const chm::Certificate back = chm::certificate_from_json(json::parse(chm::to_json(cert).dump()));
        if (!(back == cert)) FAIL("round trip changed certificate for h = " << h);
    }
    const chm::Certificate big = chm::ryser_test(Nat::parse("84093154364356137325"), untimed(true));
    CHECK(chm::certificate_from_json(json::parse(chm::to_json(big).dump())) == big);
    CHECK_NOTHROW(chm::validate(big, true));
}

TEST_CASE("validate detects tampered certificates") {
    const json good = chm::to_json(chm::ryser_test(33, untimed(true)));
    CHECK_NOTHROW(chm::validate(chm::certificate_from_json(good), true));

    auto tampered = [&](auto&& edit) {
        json j = good;
        edit(j);
        return j;
    };
    const std::vector<json> bad = {
        tampered([](json& j) { j["n"] = "4357"; }),
        tampered([](json& j) { j["h"] = "35"; }),
        tampered([](json& j) { j["witness"]["p"] = "3"; }),
        tampered([](json& j) { j["witness"]["s"] = "9"; }),
        tampered([](json& j) { j["witness"]["arasu"]["m"] = "19"; }),
        tampered([](json& j) { j["witness"]["components"][0]["order_v2"] = 0; }),
        tampered([](json& j) { j["witness"]["components"][0]["full_order"] = "3"; }),
        tampered([](json& j) { j["verdict_parity"] = "Undecided"; }),
        tampered([](json& j) { j["verdict_parity"] = "Maybe"; }),
        tampered([](json& j) { j.erase("omega"); }),
    };
    for (const auto& j : bad) {
        CHECK_THROWS_AS(chm::validate(chm::certificate_from_json(j), true), chm::ValidationError);
    }
}

TEST_CASE("sieve subcommand streams JSON lines and a report") {
    auto r = run({"sieve", "--range", "3", "99"});
    CHECK(r.code == chm::cli::kExitOk);
    const auto out = lines(r.out);
    CHECK(out.size() == 49);
    CHECK(json::parse(out[0])["h"] == "3");
    CHECK_FALSE(json::parse(out[0]).contains("elapsed_ms"));
    const json report = json::parse(r.err);
    CHECK(report["processed"] == 49);
    CHECK(report["survivors"] == json::array({"39", "55"}));

    const auto r2 = run({"sieve", "--range", "3", "99", "--workers", "4", "--segment", "5"});
    CHECK(r2.out == r.out);

    const auto timed = run({"sieve", "--range", "3", "9", "--timings"});
    CHECK(json::parse(lines(timed.out)[0]).contains("elapsed_ms"));
}

TEST_CASE("sieve subcommand list mode and --out") {
    const auto list = temp_file("chm_cli_list.txt", "33\n10\n\n55\n");
    const auto target = std::filesystem::temp_directory_path() / "chm_cli_out.jsonl";
    auto r = run({"sieve", "--list", list.string(), "--out", target.string()});
    CHECK(r.code == chm::cli::kExitInputError);  // line 2 is even
    CHECK(r.out.empty());
    std::ifstream in(target);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto out = lines(buf.str());
    REQUIRE(out.size() == 3);
    CHECK(json::parse(out[1])["line"] == 2);
    CHECK(json::parse(out[1]).contains("error"));
    CHECK(json::parse(out[2])["verdict_parity"] == "Undecided");

    const auto bad = temp_file("chm_cli_bad.txt", "33\nx\n");
    r = run({"sieve", "--list", bad.string()});
    CHECK(r.code == chm::cli::kExitInputError);
    CHECK(r.err.find("line 2") != std::string::npos);

    CHECK(run({"sieve"}).code == chm::cli::kExitInputError);
    CHECK(run({"sieve", "--range", "9", "3"}).code == chm::cli::kExitInputError);
    CHECK(run({"sieve", "--range", "3", "9", "--list", list.string()}).code == chm::cli::kExitInputError);
    std::filesystem::remove(list);
    std::filesystem::remove(bad);
    std::filesystem::remove(target);
}

TEST_CASE("factor, order and jacobi subcommands") {
    CHECK(run({"factor", "561"}).out == "561 = 3 * 11 * 17\n");
    CHECK(run({"factor", "84093154364356137325"}).out ==
          "84093154364356137325 = 5^2 * 13 * 53 * 97 * 193 * 4877 * 53471161\n");
    CHECK(run({"factor", "0"}).code == chm::cli::kExitInputError);

    auto r = run({"order", "11", "--modulus-s", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("order of 11 mod 18: 6 (even)") != std::string::npos);
    CHECK(r.out.find("self-conjugate: yes") != std::string::npos);
    r = run({"order", "5", "--modulus-s", "11"});
    CHECK(r.out.find("order of 5 mod 242: 55 (odd)") != std::string::npos);
    CHECK(run({"order", "3", "--modulus-s", "33"}).code == chm::cli::kExitInputError);

    CHECK(run({"jacobi", "3", "11"}).out == "+1\n");
    CHECK(run({"jacobi", "11", "3"}).out == "-1\n");
    CHECK(run({"jacobi", "6", "9"}).out == "0\n");
    CHECK(run({"jacobi", "3", "10"}).code == chm::cli::kExitInputError);
}

TEST_CASE("barker, chm-search and witness subcommands") {
    auto r = run({"barker", "13", "--classes"});
    CHECK(r.code == 0);
    CHECK(r.out.find("+++++--++-+-+") != std::string::npos);
    CHECK(r.out.find("classes: 1") != std::string::npos);
    CHECK(r.err == "4 Barker sequences\n");
    CHECK(run({"barker", "30"}).code == chm::cli::kExitInputError);
    CHECK(run({"barker", "6"}).out.empty());

    r = run({"chm-search", "4", "--workers", "2"});
    CHECK(lines(r.out).size() == 8);
    CHECK(run({"chm-search", "30"}).code == chm::cli::kExitInputError);

    CHECK(run({"witness", "--k", "2"}).out == "33\n");
    CHECK(run({"witness", "--k", "3"}).out == "165\n");
    CHECK(run({"witness", "--k", "1"}).code == chm::cli::kExitInputError);
    const Nat h = Nat::parse(lines(run({"witness", "--k", "4", "--floor", "1000"}).out)[0]);
    CHECK(run({"test", h.str()}).code == chm::cli::kExitCertified);
}

TEST_CASE("verify-matrix subcommand") {
    auto r = run({"verify-matrix", "--row", "+++-"});
    CHECK(r.code == chm::cli::kExitOk);
    CHECK(r.out.find("hadamard: true") != std::string::npos);
    CHECK(r.out.find("weighing: true, C = (1, 0)") != std::string::npos);

    r = run({"verify-matrix", "--row", "++++"});
    CHECK(r.code == chm::cli::kExitNegative);
    CHECK(r.out.find("hadamard: false") != std::string::npos);

    const auto file = temp_file("chm_cli_row.txt", "\n  +++-\n");
    CHECK(run({"verify-matrix", file.string()}).code == chm::cli::kExitOk);
    std::filesystem::remove(file);

    CHECK(run({"verify-matrix", "--row", "+0+-"}).code == chm::cli::kExitInputError);
    CHECK(run({"verify-matrix"}).code == chm::cli::kExitInputError);
    CHECK(run({"verify-matrix", "/nonexistent/row.txt"}).code == chm::cli::kExitInputError);
}
