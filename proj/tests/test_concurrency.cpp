#include <doctest.h>

#include "abc/concurrency.hpp"
#include "abc/corpus.hpp"
#include "abc/parser.hpp"
#include "gen.hpp"
#include "properties.hpp"

using namespace abc;

namespace {

Spec load(std::string_view name) { return parse_spec(corpus_text(name)); }

// The single derivation from p satisfying pred.
Derivation only(const Semantics& sem, const Process& p, const std::function<bool(const Derivation&)>& pred) {
    std::vector<Derivation> hits;
    for (const auto& d : sem.step_original(p))
        if (pred(d)) hits.push_back(d);
    REQUIRE(hits.size() == 1);
    return hits[0];
}

std::function<bool(const Derivation&)> labelled(Label l) {
    return [l](const Derivation& d) { return d.label() == l; };
}

AbstractTransition prefix(Label l, Process p = Process::nil()) { return AbstractTransition::prefix(l, p); }

}  // namespace

TEST_CASE("independent components are concurrent both ways") {
    Spec s = parse_spec("init a.0 | c.0");
    Semantics sem(s);
    Derivation chi = only(sem, s.init, labelled(Label::hand("a")));
    Derivation zeta = only(sem, s.init, labelled(Label::hand("c")));
    CHECK(concurrent_oneway(chi, zeta));
    CHECK(concurrent_oneway(zeta, chi));
    CHECK(concurrent(chi, zeta));
}

TEST_CASE("alternatives of one choice are not concurrent") {
    Spec s = parse_spec("agent A = a.A + c.A\ninit A");
    Semantics sem(s);
    Derivation chi = only(sem, s.init, labelled(Label::hand("a")));
    Derivation zeta = only(sem, s.init, labelled(Label::hand("c")));
    CHECK_FALSE(concurrent_oneway(chi, zeta));
    CHECK_FALSE(concurrent_oneway(zeta, chi));
}

TEST_CASE("a broadcast is unaffected by the listener's alternative but not conversely") {
    Spec s = load("ex5");
    Semantics sem(s);
    Derivation chi = only(sem, s.init, labelled(Label::send("b")));
    Derivation zeta = only(sem, s.init, labelled(Label::hand("c")));
    CHECK(concurrent_oneway(chi, zeta));
    CHECK_FALSE(concurrent_oneway(zeta, chi));
    CHECK_FALSE(concurrent(chi, zeta));
}

TEST_CASE("the relation is irreflexive") {
    for (const auto& e : corpus()) {
        Spec s = parse_spec(e.text);
        Semantics sem(s);
        for (const auto& p : reachable(s.init, sem).states)
            for (const auto& d : sem.step_original(p)) CHECK_FALSE(concurrent_oneway(d, d));
    }
}

TEST_CASE("only one of the two tau derivations is concurrent with the c step") {
    Spec s = load("ex1");
    Semantics sem(s);
    Derivation c = only(sem, s.init, labelled(Label::hand("c")));
    std::vector<Derivation> taus;
    for (const auto& d : sem.step_original(s.init))
        if (d.label().is_tau() && d.target() == s.init) taus.push_back(d);
    REQUIRE(taus.size() == 2);
    int conc = 0;
    for (const auto& t : taus) conc += concurrent(t, c);
    CHECK(conc == 1);
    for (const auto& t : taus)
        if (concurrent(t, c)) CHECK(t.kind() == DerivKind::ParR);
    CHECK_FALSE(equiv(taus[0], taus[1]));
    // The c step is par_l of <c>A; exactly one representative.
    auto nu = AbstractTransition::par_l(prefix(Label::hand("c"), Process::agent("A")));
    CHECK(abstract_of(c) == nu);
    CHECK(representatives(nu, s.init, sem).size() == 1);
}

TEST_CASE("concurrency through relabelling and choice") {
    Spec s = load("ex2");
    Semantics sem(s);
    Derivation chi = only(sem, s.init, labelled(Label::hand("x")));
    Derivation zeta = only(sem, s.init, labelled(Label::hand("c")));
    CHECK(concurrent(chi, zeta));
}

TEST_CASE("two synchronisations of disjoint pairs") {
    Spec s = load("ex3");
    Semantics sem(s);
    auto on = [](const std::string& n) {
        return [n](const Derivation& d) { return d.label().is_tau() && d.sub().label().name == n; };
    };
    Derivation chi = only(sem, s.init, on("a"));
    Derivation zeta = only(sem, s.init, on("c"));
    CHECK(concurrent(chi, zeta));
}

TEST_CASE("a synchronisation and an independent step") {
    Spec s = load("ex4");
    Semantics sem(s);
    Derivation chi = only(sem, s.init, labelled(Label::tau()));
    Derivation zeta = only(sem, s.init, labelled(Label::hand("c")));
    CHECK(concurrent(chi, zeta));
}

TEST_CASE("a broadcast is unaffected by a synchronisation that consumes its listener") {
    Spec s = load("ex6");
    Semantics sem(s);
    Derivation chi = only(sem, s.init, labelled(Label::send("b")));
    Derivation zeta = only(sem, s.init, labelled(Label::tau()));
    CHECK(concurrent_oneway(chi, zeta));
    CHECK_FALSE(concurrent_oneway(zeta, chi));
}

TEST_CASE("abstraction forgets idle context") {
    Label c = Label::hand("c");
    Derivation hat_c = Derivation::act(c, Process::nil());
    Process d0 = Process::prefix(Label::hand("d"), Process::nil());
    Derivation a = Derivation::par_l(hat_c, d0);
    Derivation b = Derivation::par_l(hat_c, Process::nil());
    CHECK(abstract_of(a) == abstract_of(b));
    CHECK(abstract_of(a) == AbstractTransition::par_l(prefix(c)));
    CHECK(equiv(a, b));
    CHECK(equiv(a, a));
    CHECK(abstract_of(Derivation::sum_l(hat_c, d0)) == abstract_of(hat_c));
    CHECK(abstract_of(Derivation::sum_r(d0, hat_c)) == abstract_of(hat_c));
}

TEST_CASE("abstraction of a broadcast absorbs the receivers") {
    Spec s = load("ex5");
    Semantics sem(s);
    Derivation d = only(sem, s.init, labelled(Label::send("b")));
    auto nu = AbstractTransition::par_l(prefix(Label::send("b")));
    CHECK(abstract_of(d) == nu);
    auto reps = representatives(nu, s.init, sem);
    REQUIRE(reps.size() == 1);
    CHECK(reps[0] == d);
    CHECK(representatives(prefix(Label::tau()), Process::nil(), sem).empty());
    Derivation r = only(sem, s.init, labelled(Label::receive("b")));
    CHECK_THROWS_AS(abstract_of(r), ReceiveLabel);
}

TEST_CASE("abstract transition labels") {
    auto nu = AbstractTransition::sync(prefix(Label::hand("c")), prefix(Label::cohand("c")));
    CHECK(nu.label().is_tau());
    CHECK(AbstractTransition::res(prefix(Label::hand("d")), "c").label() == Label::hand("d"));
    Relabelling f;
    f.handshake["d"] = "e";
    CHECK(AbstractTransition::rel(prefix(Label::hand("d")), f).label() == Label::hand("e"));
}

TEST_CASE("a pending broadcast stays enabled while an independent loop runs") {
    Spec s = load("C");
    Semantics sem(s);
    Derivation loop = only(sem, s.init, labelled(Label::hand("c")));
    auto nu = AbstractTransition::par_r(prefix(Label::send("b")));
    CHECK(enabled(nu, s.init, sem));
    CHECK(enabled(nu, loop, sem));
}

TEST_CASE("a choice interrupts its alternative") {
    Spec s = load("B");
    Semantics sem(s);
    Derivation loop = only(sem, s.init, labelled(Label::hand("c")));
    auto nu = prefix(Label::send("b"));
    CHECK(enabled(nu, s.init, sem));
    CHECK_FALSE(enabled(nu, loop, sem));
}

TEST_CASE("enabled during a step inside a choice") {
    Spec s = load("choice_enabling");
    Semantics sem(s);
    Derivation zeta = only(sem, s.init, labelled(Label::hand("e")));
    auto nu = AbstractTransition::par_r(prefix(Label::hand("c")));
    CHECK(enabled(nu, zeta, sem));
    CHECK(enabled(nu, zeta.source(), sem));
    CHECK(enabled(nu, zeta.target(), sem));
}

TEST_CASE("enabled during a step inside an agent") {
    Spec s = load("agent_enabling");
    Semantics sem(s);
    Derivation zeta = only(sem, s.init, labelled(Label::hand("e")));
    auto nu = AbstractTransition::par_r(AbstractTransition::par_l(prefix(Label::hand("d"))));
    CHECK(enabled(nu, zeta, sem));
    CHECK(enabled(nu, zeta.source(), sem));
    CHECK(enabled(nu, zeta.target(), sem));
}

TEST_CASE("renderings") {
    Spec s = load("ex5");
    Semantics sem(s);
    Derivation d = only(sem, s.init, labelled(Label::send("b")));
    CHECK(to_string(abstract_of(d)) == "(<b!>0)|_");
    CHECK(to_string(d) == "(<b!>0)|((<b?>0)+c.0)");
}

TEST_CASE("concurrency and enabling laws on the corpus") {
    std::size_t total = 0;
    for (const auto& e : corpus()) {
        CAPTURE(e.name);
        testing::PropertyReport r;
        testing::check_concurrency_laws(parse_spec(e.text), r);
        std::string first = r.violations.empty() ? "" : r.violations.front();
        CAPTURE(first);
        CHECK(r.failures == 0);
        total += r.checks;
    }
    CHECK(total > 1000);
}

TEST_CASE("concurrency and enabling laws on random specs") {
    testing::Gen g(77);
    for (int i = 0; i < 40; ++i) {
        Spec s = g.spec(4, 60);
        CAPTURE(to_string(s));
        testing::PropertyReport r;
        testing::check_concurrency_laws(s, r);
        std::string first = r.violations.empty() ? "" : r.violations.front();
        CAPTURE(first);
        CHECK(r.failures == 0);
    }
}
