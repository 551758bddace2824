#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

using namespace std::string_literals;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI with a shell-quoted argument string; stderr is discarded.
Run run(const std::string& args) {
    std::string cmd = "\""s + ABC_CLI + "\" " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string corpus_file(const std::string& name) { return "\""s + ABC_CORPUS_DIR + "/" + name + ".abc\""; }

}  // namespace

TEST_CASE("check exit codes follow the verdict") {
    CHECK(run("check @fig1c --ltl 'G(<a> => F <d!>)'").code == 0);
    CHECK(run("check @fig1b --ltl 'G(<a> => F <d!>)'").code == 1);
    CHECK(run("check @scheduler --ltl 'G(<r1> => F <t1!>)' --max-states 3").code == 2);
}

TEST_CASE("spec files and bundled names are interchangeable") {
    Run a = run("parse " + corpus_file("ex1"));
    Run b = run("parse @ex1");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("fairness file") {
    std::string path = (std::filesystem::temp_directory_path() / "abc_cli_fair.txt").string();
    {
        std::ofstream f(path);
        f << "GF <i!> => GF <j!>\n";
    }
    CHECK(run("check @fig1b_ij --ltl 'G(<a> => F <d!>)' --fair " + path).code == 0);
    CHECK(run("check @fig1b_ij --ltl 'G(<a> => F <d!>)'").code == 1);
    std::remove(path.c_str());
}

TEST_CASE("json verdict") {
    Run r = run("check @fig1b --ltl 'G(<a> => F <d!>)' --format json");
    CHECK(r.code == 1);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "fails");
    CHECK(j["counterexample"]["literal"] == "0 -a-> 1 ; 1 -tau-> 1");
}

TEST_CASE("lts of inaction is a single node") {
    Run r = run("lts @nil");
    CHECK(r.code == 0);
    CHECK(r.out.find("digraph") != std::string::npos);
    CHECK(r.out.find("s0 [") != std::string::npos);
    CHECK(r.out.find("s1") == std::string::npos);
    Run j = run("lts @b1b2 --format json");
    CHECK(nlohmann::json::parse(j.out)["states"].size() == 3);
}

TEST_CASE("justness of a literal") {
    CHECK(run("just @C '; 0 -c-> 0'").code == 1);
    CHECK(run("just @B '; 0 -c-> 0'").code == 0);
    CHECK(run("just @CB '; 0 -c-> 0'").code == 0);
}

TEST_CASE("derivations and concurrency") {
    Run d = run("derivations @ex1 --tables");
    CHECK(d.code == 0);
    CHECK(d.out.find("tau") != std::string::npos);
    CHECK(run("conc @ex5 '#0' '#1'").code <= 1);
    CHECK(run("abstract @C").code == 0);
}

TEST_CASE("lassos") {
    Run r = run("lassos @b1b2 --format json");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["paths"].size() == 1);
}

TEST_CASE("bisimilarity") {
    CHECK(run("bisim @nil 'a.0 + a.0' 'a.0'").code == 0);
    CHECK(run("bisim @nil 'a.(b.0 + c.0)' 'a.b.0 + a.c.0'").code == 1);
}

TEST_CASE("input errors") {
    CHECK(run("parse /nonexistent/file.abc").code == 3);
    CHECK(run("parse @no_such_example").code == 3);
    CHECK(run("check @fig1c --ltl 'G(<zz>)'").code == 3);
    CHECK(run("check @fig1c --ltl 'G('").code == 3);
    CHECK(run("just @C '0 -c->'").code == 3);
    CHECK(run("bisim @nil 'a.' '0'").code == 3);
    CHECK(run("").code == 3);
    CHECK(run("check @fig1c").code == 3);
}

TEST_CASE("scheduler demo") {
    Run r = run("demo-scheduler");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    std::size_t passes = 0;
    for (std::size_t at = r.out.find("PASS"); at != std::string::npos; at = r.out.find("PASS", at + 1)) ++passes;
    CHECK(passes == 4);
}
