#pragma once

// Exhaustive checks of the concurrency and enabling laws over every reachable
// state of a spec (and the static subterms of those states).

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "abc/concurrency.hpp"
#include "abc/paths.hpp"

namespace abc::testing {

struct PropertyReport {
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::vector<std::string> violations;  // the first few

    void expect(bool ok, const std::function<std::string()>& what) {
        ++checks;
        if (ok) return;
        ++failures;
        if (violations.size() < 20) violations.push_back(what());
    }
};

inline void static_subterms(const Process& p, std::set<Process>& out) {
    if (!out.insert(p).second) return;
    switch (p.kind()) {
        case ProcKind::Par:
            static_subterms(p.left(), out);
            static_subterms(p.right(), out);
            break;
        case ProcKind::Restrict:
        case ProcKind::Relabel: static_subterms(p.body(), out); break;
        default: break;
    }
}

inline std::vector<AbstractTransition> candidates(const UState& u, const Semantics& sem) {
    const Process& src = is_process(u) ? std::get<Process>(u) : std::get<Derivation>(u).source();
    return abstract_transitions(src, sem);
}

// The two components of a U-state of the form u|v, if it has that form.
inline std::optional<std::pair<UState, UState>> par_parts(const UState& s) {
    if (is_process(s)) {
        const Process& p = std::get<Process>(s);
        if (p.kind() != ProcKind::Par) return std::nullopt;
        return std::make_pair(UState(p.left()), UState(p.right()));
    }
    const Derivation& d = std::get<Derivation>(s);
    switch (d.kind()) {
        case DerivKind::ParL: return std::make_pair(UState(d.sub()), UState(d.operand()));
        case DerivKind::ParR: return std::make_pair(UState(d.operand()), UState(d.sub()));
        case DerivKind::Sync: return std::make_pair(UState(d.sub()), UState(d.sub2()));
        default: return std::nullopt;
    }
}

inline std::string show(const AbstractTransition& nu, const UState& u) {
    return to_string(nu) + " at " + to_string(u);
}

inline void check_concurrency_laws(const Spec& spec, PropertyReport& r) {
    Semantics sem(spec);
    std::set<Process> states;
    for (const auto& p : reachable(spec.init, sem).states) static_subterms(p, states);

    std::vector<Derivation> all;
    for (const auto& p : states)
        for (const auto& d : sem.step_original(p)) all.push_back(d);

    // Irreflexive, source preserving, and never relating equivalent derivations.
    for (const auto& chi : all) {
        r.expect(!concurrent_oneway(chi, chi), [&] { return "reflexive: " + to_string(chi); });
        for (const auto& zeta : all) {
            if (!concurrent_oneway(chi, zeta)) continue;
            r.expect(chi.source() == zeta.source(),
                     [&] { return "sources differ: " + to_string(chi) + " / " + to_string(zeta); });
            if (!chi.label().is_receive() && !zeta.label().is_receive())
                r.expect(!equiv(chi, zeta), [&] { return "concurrent but equivalent: " + to_string(chi); });
        }
    }

    std::vector<UState> ustates;
    for (const auto& p : states) ustates.emplace_back(p);
    for (const auto& d : all) ustates.emplace_back(d);

    for (const auto& d : all) {
        // Enabled during a derivation means enabled before and after it.
        for (const auto& nu : abstract_transitions(d.source(), sem)) {
            if (!enabled(nu, d, sem)) continue;
            r.expect(enabled(nu, d.source(), sem), [&] { return "not enabled at source: " + show(nu, d); });
            r.expect(enabled(nu, d.target(), sem), [&] { return "not enabled at target: " + show(nu, d); });
        }
        // A transition is never enabled during its own occurrence.
        if (!d.label().is_receive())
            r.expect(!enabled(abstract_of(d), d, sem), [&] { return "occurs and enabled: " + to_string(d); });
    }

    for (const auto& s : ustates) {
        if (auto parts = par_parts(s)) {
            const auto& [u, v] = *parts;
            auto nl = candidates(u, sem);
            auto nr = candidates(v, sem);
            std::vector<char> el, er;
            for (const auto& nu : nl) el.push_back(enabled(nu, u, sem));
            for (const auto& nu : nr) er.push_back(enabled(nu, v, sem));
            for (std::size_t i = 0; i < nl.size(); ++i)
                if (el[i])
                    r.expect(enabled(AbstractTransition::par_l(nl[i]), s, sem),
                             [&] { return "left lift lost: " + show(nl[i], s); });
            for (std::size_t j = 0; j < nr.size(); ++j)
                if (er[j])
                    r.expect(enabled(AbstractTransition::par_r(nr[j]), s, sem),
                             [&] { return "right lift lost: " + show(nr[j], s); });
            for (std::size_t i = 0; i < nl.size(); ++i)
                for (std::size_t j = 0; j < nr.size(); ++j) {
                    const Label& a = nl[i].label();
                    if (!el[i] || !er[j] || !a.is_handshake() || nr[j].label() != complement(a)) continue;
                    auto sync = AbstractTransition::sync(nl[i], nr[j]);
                    r.expect(enabled(sync, s, sem), [&] { return "sync lost: " + show(sync, s); });
                }
            continue;
        }
        bool res = is_process(s) ? std::get<Process>(s).kind() == ProcKind::Restrict
                                 : std::get<Derivation>(s).kind() == DerivKind::Res;
        bool rel = is_process(s) ? std::get<Process>(s).kind() == ProcKind::Relabel
                                 : std::get<Derivation>(s).kind() == DerivKind::Rel;
        if (!res && !rel) continue;
        UState inner = is_process(s) ? UState(std::get<Process>(s).body()) : UState(std::get<Derivation>(s).sub());
        for (const auto& nu : candidates(inner, sem)) {
            if (!enabled(nu, inner, sem)) continue;
            if (res) {
                const std::string& c = is_process(s) ? std::get<Process>(s).name() : std::get<Derivation>(s).name();
                if (nu.label().is_handshake() && nu.label().name == c) continue;
                auto lifted = AbstractTransition::res(nu, c);
                r.expect(enabled(lifted, s, sem), [&] { return "restriction lost: " + show(lifted, s); });
            } else {
                const Relabelling& f = is_process(s) ? std::get<Process>(s).relabelling()
                                                     : std::get<Derivation>(s).relabelling();
                auto lifted = AbstractTransition::rel(nu, f);
                r.expect(enabled(lifted, s, sem), [&] { return "relabelling lost: " + show(lifted, s); });
            }
        }
    }
}

}  // namespace abc::testing
