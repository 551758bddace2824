#include <doctest.h>

#include <set>
#include <tuple>

#include <json.hpp>

#include "abc/corpus.hpp"
#include "abc/parser.hpp"
#include "abc/sos.hpp"
#include "gen.hpp"

using namespace abc;

namespace {

using Triple = std::tuple<Process, Label, Process>;

std::set<Triple> triples(const std::vector<Derivation>& ds, bool drop_discards) {
    std::set<Triple> out;
    for (const auto& d : ds)
        if (!(drop_discards && d.label().is_discard())) out.emplace(d.source(), d.label(), d.target());
    return out;
}

Spec load(std::string_view name) { return parse_spec(corpus_text(name)); }

// Both semantics agree on triples; a discard is a self-loop present exactly when no receive is.
void check_semantics(const Spec& s) {
    Semantics sem(s);
    for (const auto& p : reachable(s.init, sem).states) {
        CAPTURE(to_string(p));
        CHECK(triples(sem.step_discard(p), true) == triples(sem.step_original(p), false));
        for (const auto& b : s.broadcast_names) {
            CAPTURE(b);
            std::vector<Derivation> dis;
            for (const auto& d : sem.step_discard(p))
                if (d.label() == Label::discard(b)) dis.push_back(d);
            CHECK(dis.size() <= 1);
            for (const auto& d : dis) CHECK(d.target() == p);
            CHECK(dis.empty() == sem.admits(p, Label::receive(b)));
        }
        for (const auto& d : sem.step_original(p)) {
            CHECK(!d.label().is_discard());
            CHECK(d.source() == p);
        }
    }
}

}  // namespace

TEST_CASE("no transitions from 0 or from a restricted handshake") {
    Spec s = parse_spec("init (c.0)\\c");
    Semantics sem(s);
    CHECK(sem.step_original(s.init).empty());
    CHECK(sem.step_original(Process::nil()).empty());
    CHECK_FALSE(sem.admits(s.init, Label::hand("c")));
}

TEST_CASE("broadcast with a listener that could also do c") {
    Spec s = load("ex5");
    Semantics sem(s);
    const auto& ds = sem.step_original(s.init);
    REQUIRE(ds.size() == 3);
    Process zero = Process::nil();
    Process bsend = Process::prefix(Label::send("b"), zero);
    std::set<Triple> expect{{s.init, Label::send("b"), Process::par(zero, zero)},
                            {s.init, Label::hand("c"), Process::par(bsend, zero)},
                            {s.init, Label::receive("b"), Process::par(bsend, zero)}};
    CHECK(triples(ds, false) == expect);
    for (const auto& d : ds) {
        if (d.label().is_send()) CHECK(d.kind() == DerivKind::Sync);
        if (d.label().is_handshake()) {
            CHECK(d.kind() == DerivKind::ParR);
            CHECK(d.sub().kind() == DerivKind::SumR);
        }
        if (d.label().is_receive()) CHECK(d.kind() == DerivKind::ParR);
    }
}

TEST_CASE("discards") {
    Spec s = parse_spec("broadcast b e;\ninit b?.0");
    Semantics sem(s);
    auto nil = triples(sem.step_discard(Process::nil()), false);
    CHECK(nil.count({Process::nil(), Label::discard("b"), Process::nil()}));
    CHECK(nil.count({Process::nil(), Label::discard("e"), Process::nil()}));
    for (const auto& d : sem.step_discard(Process::nil())) CHECK(d.kind() == DerivKind::Dis0);
    auto recv = triples(sem.step_discard(s.init), false);
    CHECK_FALSE(recv.count({s.init, Label::discard("b"), s.init}));
    CHECK(recv.count({s.init, Label::discard("e"), s.init}));
}

TEST_CASE("admits") {
    Spec s = parse_spec("broadcast b;\ninit b?.0");
    Semantics sem(s);
    CHECK(sem.admits(s.init, Label::receive("b")));
    CHECK_FALSE(sem.admits(Process::nil(), Label::receive("b")));
}

TEST_CASE("reachable state counts") {
    Spec a = load("b1b2");
    Semantics sa(a);
    LtsGraph ga = reachable(a.init, sa);
    CHECK(ga.states.size() == 3);
    CHECK(ga.edges.size() == 2);

    Spec n = load("nil");
    Semantics sn(n);
    LtsGraph gn = reachable(n.init, sn);
    CHECK(gn.states.size() == 1);
    CHECK(gn.edges.empty());

    Spec c = parse_spec("agent A = c.A\ninit A");
    Semantics sc(c);
    LtsGraph gc = reachable(c.init, sc);
    CHECK(gc.states.size() == 1);
    REQUIRE(gc.edges.size() == 1);
    CHECK(gc.edges[0].src == gc.edges[0].tgt);
}

TEST_CASE("distinct derivations of one triple are distinct edges") {
    Spec s = load("ex1");
    Semantics sem(s);
    LtsGraph g = reachable(s.init, sem);
    int taus = 0;
    for (const auto& e : g.edges)
        if (e.src == g.init && e.tgt == g.init && e.label().is_tau()) ++taus;
    CHECK(taus == 2);
}

TEST_CASE("state bound") {
    Spec s = load("scheduler");
    Semantics sem(s);
    CHECK_THROWS_AS(reachable(s.init, sem, 3), StateBoundExceeded);
}

TEST_CASE("semantics agree and discards follow receives on the corpus") {
    for (const auto& e : corpus()) {
        CAPTURE(e.name);
        check_semantics(parse_spec(e.text));
    }
}

TEST_CASE("semantics agree and discards follow receives on random specs") {
    testing::Gen g(101);
    for (int i = 0; i < 100; ++i) check_semantics(g.spec());
}

TEST_CASE("non-injective broadcast relabelling keeps discards consistent") {
    Spec s = load("relabel");
    check_semantics(s);
    Semantics sem(s);
    // R listens on both b and c, so the image d is received, never discarded.
    for (const auto& d : sem.step_discard(s.init)) CHECK(d.label() != Label::discard("d"));
}

TEST_CASE("a component offering b! makes the composition offer b!") {
    testing::Gen g(5);
    auto walk = [](const Spec& s) {
        Semantics sem(s);
        for (const auto& p : reachable(s.init, sem).states) {
            if (p.kind() != ProcKind::Par) continue;
            for (const auto& d : sem.step_original(p.left()))
                if (d.label().is_send()) CHECK(sem.admits(p, d.label()));
            for (const auto& d : sem.step_original(p.right()))
                if (d.label().is_send()) CHECK(sem.admits(p, d.label()));
        }
    };
    for (const auto& e : corpus()) walk(parse_spec(e.text));
    for (int i = 0; i < 50; ++i) walk(g.spec());
}

TEST_CASE("step order is deterministic") {
    testing::Gen g(9);
    for (int i = 0; i < 30; ++i) {
        Spec s = g.spec();
        Semantics a(s);
        Semantics b(s);
        for (const auto& p : reachable(s.init, a).states) {
            CHECK(a.step_original(p) == b.step_original(p));
            CHECK(a.step_discard(p) == b.step_discard(p));
        }
    }
}

TEST_CASE("broadcast composition table") {
    using K = LabelKind;
    CHECK(compose_broadcast(K::Send, K::Receive) == K::Send);
    CHECK(compose_broadcast(K::Receive, K::Send) == K::Send);
    CHECK(compose_broadcast(K::Receive, K::Receive) == K::Receive);
    CHECK(compose_broadcast(K::Discard, K::Send) == K::Send);
    CHECK(compose_broadcast(K::Send, K::Discard) == K::Send);
    CHECK(compose_broadcast(K::Discard, K::Receive) == K::Receive);
    CHECK(compose_broadcast(K::Receive, K::Discard) == K::Receive);
    CHECK(compose_broadcast(K::Discard, K::Discard) == K::Discard);
    CHECK_FALSE(compose_broadcast(K::Send, K::Send).has_value());
}

TEST_CASE("non-blocking labels") {
    CHECK(non_blocking(Label::tau()));
    CHECK(non_blocking(Label::send("b")));
    CHECK_FALSE(non_blocking(Label::hand("c")));
    CHECK_FALSE(non_blocking(Label::cohand("c")));
    CHECK_FALSE(non_blocking(Label::receive("b")));
}

TEST_CASE("exporters") {
    Spec s = load("nil");
    Semantics sem(s);
    LtsGraph g = reachable(s.init, sem);
    std::string dot = to_dot(g);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("s0 [") != std::string::npos);
    CHECK(dot.find("s1") == std::string::npos);
    CHECK(dot.find("s0 ->") == std::string::npos);

    Spec b = load("b1b2");
    Semantics sb(b);
    auto j = nlohmann::json::parse(to_json(reachable(b.init, sb)));
    CHECK(j["states"].size() == 3);
    REQUIRE(j["edges"].size() == 2);
    CHECK(j["edges"][0]["label"] == "b1!");
    CHECK(j["edges"][0]["src"] == 0);
    CHECK(j["init"] == 0);
    CHECK(j["edges"][0].contains("derivation"));
}
