#include <doctest.h>

#include <algorithm>

#include "abc/analysis.hpp"
#include "abc/corpus.hpp"
#include "abc/justness.hpp"
#include "abc/parser.hpp"
#include "gen.hpp"

using namespace abc;

namespace {

Spec load(std::string_view name) { return parse_spec(corpus_text(name)); }

struct Fixture {
    explicit Fixture(Spec s) : spec(std::move(s)), sem(spec), g(reachable(spec.init, sem)) {}
    SPath path(std::string_view lit) const { return parse_s_path(lit, g); }
    Spec spec;
    Semantics sem;
    LtsGraph g;
};

Truth def1(const Fixture& f, std::string_view lit) { return just_def1(f.path(lit), f.sem).just; }
Truth lifted(const Fixture& f, std::string_view lit) { return just_s_via_lifts(f.path(lit), f.sem).just; }

// Random lassos: a stem of up to 3 steps into each simple cycle of up to 3.
std::vector<SPath> sample_lassos(const Spec& s, const Semantics& sem) {
    std::vector<SPath> out;
    STransitions st = s_transitions(s.init, sem);
    auto stems = finite_paths(s.init, sem, 3);
    for (const auto& cyc : simple_cycles(st, 3)) {
        const Process& entry = std::get<Process>(cyc.cycle.front());
        for (const auto& stem : stems) {
            if (!(stem.last() == SState(entry))) continue;
            SPath p{stem.stem, cyc.cycle};
            p.stem.pop_back();
            out.push_back(canonical(p));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("a choice between a loop and a broadcast: looping is just") {
    Fixture f(load("B"));
    CHECK(def1(f, "; 0 -c-> 0") == Truth::True);
    CHECK(lifted(f, "; 0 -c-> 0") == Truth::True);
}

TEST_CASE("a loop beside a pending broadcast is unjust") {
    Fixture f(load("C"));
    JustnessVerdict v = just_def1(f.path("; 0 -c-> 0"), f.sem);
    CHECK(v.just == Truth::False);
    CHECK_FALSE(v.witness.empty());
    CHECK(lifted(f, "; 0 -c-> 0") == Truth::False);
    CHECK(def1(f, "0 -b!-> 1 ; 1 -c-> 1") == Truth::True);
}

TEST_CASE("a loop beside a loop-or-broadcast is just") {
    Fixture f(load("CB"));
    CHECK(def1(f, "; 0 -c-> 0") == Truth::True);
    CHECK(lifted(f, "; 0 -c-> 0") == Truth::True);
}

TEST_CASE("a listener cycling away from the broadcast is unjust") {
    Fixture f(load("bD"));
    CHECK(def1(f, "; 0 -c-> 2 -e-> 0") == Truth::False);
    CHECK(lifted(f, "; 0 -c-> 2 -e-> 0") == Truth::False);
    CHECK(def1(f, "0 -b!-> 1 ; 1 -c-> 3 -e-> 1") == Truth::True);
}

TEST_CASE("stopping before a pending broadcast is not complete") {
    Fixture f(load("b1b2"));
    SPath stop = f.path("0 -b1!-> 1");
    CHECK_FALSE(progressing(stop, f.sem));
    CHECK(just_def1(stop, f.sem).just == Truth::False);
    CHECK(complete(stop, {}, f.sem) == Truth::False);
    CHECK(complete(f.path("0 -b1!-> 1 -b2!-> 2"), {}, f.sem) == Truth::True);
}

TEST_CASE("stopping at a handshake is complete") {
    Fixture f(parse_spec("init a.c.0"));
    SPath p = f.path("0 -a-> 1");
    REQUIRE(std::get<Process>(p.last()) == Process::prefix(Label::hand("c"), Process::nil()));
    CHECK(progressing(p, f.sem));
    CHECK(def1(f, "0 -a-> 1") == Truth::True);
    CHECK(complete(p, {}, f.sem) == Truth::True);
    // Only an environment blocking c makes the stop realizable.
    CHECK(y_just_def1(p, {Label::hand("c")}, f.sem) == Truth::True);
    CHECK(y_just_def1(p, {}, f.sem) == Truth::False);
}

TEST_CASE("a stop waiting for a handshake partner under restriction") {
    Fixture f(load("res"));
    CHECK(def1(f, "0") == Truth::False);
    CHECK(def1(f, "0 -tau-> 1") == Truth::True);
}

TEST_CASE("fairness filters complete paths") {
    Fixture f(load("fig1b_ij"));
    auto fs = parse_fairness("GF <i!> => GF <j!>", f.spec);
    SPath loop = f.path("0 -a-> 1 ; 1 -i!-> 1");
    CHECK(just_def1(loop, f.sem).just == Truth::True);
    CHECK(complete(loop, {}, f.sem) == Truth::True);
    CHECK(complete(loop, fs, f.sem) == Truth::False);
}

TEST_CASE("the handshake i/j variant admits a just stop") {
    // With handshakes instead of broadcasts the environment may refuse both
    // i and j, so stopping before them is complete and d! need not occur.
    Spec s = parse_spec("agent Q = i.Q + j.d!.0\ninit a.Q");
    Semantics sem(s);
    auto fs = parse_fairness("GF <i> => GF <j>", s);
    Verdict v = check(s.init, sem, parse_ltl("G(<a> => F <d!>)", s), fs, Bounds{});
    CHECK(v.status == Status::Fails);
    REQUIRE(v.counterexample);
    CHECK(v.counterexample->finite());
}

TEST_CASE("abstract transitions enabled along a path") {
    Fixture f(load("C"));
    auto nu = AbstractTransition::par_r(AbstractTransition::prefix(Label::send("b"), Process::nil()));
    for (const auto& u : lifts(f.path("; 0 -c-> 0"), 1, f.sem)) {
        CHECK(nu_enabled(u, nu, f.sem));
        std::string w;
        CHECK_FALSE(just_thm3_u(u, f.sem, &w));
        CHECK_FALSE(w.empty());
    }
    Fixture b(load("B"));
    auto bsend = AbstractTransition::prefix(Label::send("b"), Process::nil());
    for (const auto& u : lifts(b.path("; 0 -c-> 0"), 1, b.sem)) {
        CHECK_FALSE(nu_enabled(u, bsend, b.sem));
        CHECK(just_thm3_u(u, b.sem));
    }
}

TEST_CASE("progressing and just coincide on finite paths") {
    for (const auto& e : corpus()) {
        CAPTURE(e.name);
        Spec s = parse_spec(e.text);
        Semantics sem(s);
        Def1Checker checker(sem);
        for (const auto& p : finite_paths(s.init, sem, 4)) {
            CAPTURE(to_string(p));
            CHECK((checker.just(p).just == Truth::True) == progressing(p, sem));
        }
    }
}

TEST_CASE("justness depends only on the tail and is closed under suffixes") {
    testing::Gen gen(55);
    int checked = 0;
    for (int i = 0; i < 25; ++i) {
        Spec s = gen.spec(4, 40);
        Semantics sem(s);
        Def1Checker checker(sem);
        for (const auto& p : sample_lassos(s, sem)) {
            CAPTURE(to_string(p));
            Truth whole = checker.just(p).just;
            REQUIRE(whole != Truth::Unknown);
            for (const auto& suf : suffix_classes(p)) {
                if (!is_process(suf.first())) continue;
                CAPTURE(to_string(suf));
                CHECK(checker.just(canonical(suf)).just == whole);
            }
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("a larger blocking set admits more paths") {
    testing::Gen gen(66);
    int checked = 0;
    for (int i = 0; i < 25; ++i) {
        Spec s = gen.spec(4, 40);
        Semantics sem(s);
        Def1Checker checker(sem);
        const HandshakeIndex& hx = checker.handshakes();
        auto paths = sample_lassos(s, sem);
        auto fin = finite_paths(s.init, sem, 3);
        paths.insert(paths.end(), fin.begin(), fin.end());
        for (const auto& p : paths) {
            YMask full = hx.full();
            // Walk up a chain of subsets of the full mask.
            std::vector<YMask> chain{0};
            for (YMask bit = 1; bit && bit <= full; bit <<= 1)
                if (full & bit) chain.push_back(chain.back() | bit);
            bool seen_true = false;
            for (YMask y : chain) {
                Truth t = checker.y_just(p, y);
                REQUIRE(t != Truth::Unknown);
                if (seen_true) CHECK(t == Truth::True);
                seen_true = seen_true || t == Truth::True;
                ++checked;
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("a U path is just only if its S projection is") {
    testing::Gen gen(77);
    int checked = 0;
    for (int i = 0; i < 25; ++i) {
        Spec s = gen.spec(4, 40);
        Semantics sem(s);
        Def1Checker checker(sem);
        for (const auto& p : sample_lassos(s, sem)) {
            Truth t = checker.just(p).just;
            for (const auto& u : lifts(p, 2, sem)) {
                if (just_thm3_u(u, sem)) CHECK(t == Truth::True);
                ++checked;
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("node bound yields unknown") {
    Fixture f(load("scheduler"));
    JustnessOptions opt;
    opt.max_nodes = 1;
    SPath p = f.path("0 -#0-> " + std::to_string(f.g.edges[f.g.out[0][0]].tgt));
    CHECK(just_def1(p, f.sem, opt).just == Truth::Unknown);
}

TEST_CASE("paths must start at a process") {
    Fixture f(load("C"));
    SPath p = f.path("; 0 -c-> 0");
    std::rotate(p.cycle.begin(), p.cycle.begin() + 1, p.cycle.end());
    CHECK_THROWS_AS(just_def1(p, f.sem), std::invalid_argument);
}

TEST_CASE("truth rendering") {
    CHECK(to_string(Truth::True) == "true");
    CHECK(to_string(Truth::False) == "false");
    CHECK(to_string(Truth::Unknown) == "unknown");
}
