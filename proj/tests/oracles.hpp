#pragma once

// Reference implementations used only as test oracles. They follow the
// definitions directly and share no code with the library's evaluators.

#include <functional>
#include <map>
#include <set>

#include "abc/ltl.hpp"
#include "abc/paths.hpp"

namespace abc::testing {

// LTL on a finite path or lasso by direct recursion over positions. Lasso
// positions past the stem are folded into the cycle.
class NaiveLtl {
public:
    explicit NaiveLtl(const SPath& p) : p_(p) {}

    bool holds(const LtlFormula& f) { return eval(f, 0); }

private:
    std::size_t fold(std::size_t i) const {
        if (i < p_.stem.size()) return i;
        return p_.stem.size() + (i - p_.stem.size()) % p_.cycle.size();
    }
    bool has(std::size_t i) const { return !p_.finite() || i < p_.stem.size(); }
    // Distinct positions reachable from i, in order.
    std::vector<std::size_t> future(std::size_t i) const {
        std::vector<std::size_t> out;
        std::set<std::size_t> seen;
        for (std::size_t j = i; has(j); ++j) {
            std::size_t k = fold(j);
            if (!seen.insert(k).second) break;
            out.push_back(k);
        }
        return out;
    }

    bool eval(const LtlFormula& f, std::size_t i) {
        switch (f.kind()) {
            case LtlKind::True: return true;
            case LtlKind::False: return false;
            case LtlKind::Label: {
                const SState& s = p_.at(i);
                return !is_process(s) && std::get<Transition>(s).label == f.atom_label();
            }
            case LtlKind::Nu:
            case LtlKind::En: throw std::invalid_argument("U-level atom");
            case LtlKind::Not: return !eval(f.lhs(), i);
            case LtlKind::And: return eval(f.lhs(), i) && eval(f.rhs(), i);
            case LtlKind::Or: return eval(f.lhs(), i) || eval(f.rhs(), i);
            case LtlKind::Implies: return !eval(f.lhs(), i) || eval(f.rhs(), i);
            case LtlKind::Next: return has(i + 1) && eval(f.lhs(), fold(i + 1));
            case LtlKind::Until:
                for (std::size_t j : future(i)) {
                    if (eval(f.rhs(), j)) return true;
                    if (!eval(f.lhs(), j)) return false;
                }
                return false;
            case LtlKind::Globally:
                for (std::size_t j : future(i))
                    if (!eval(f.lhs(), j)) return false;
                return true;
            case LtlKind::Finally:
                for (std::size_t j : future(i))
                    if (eval(f.lhs(), j)) return true;
                return false;
        }
        return false;
    }

    const SPath& p_;
};

inline bool naive_ltl(const SPath& p, const LtlFormula& f) { return NaiveLtl(p).holds(f); }

// Greatest bisimulation by deleting violating pairs until stable.
inline bool naive_bisimilar(const Process& p, const Process& q, const Semantics& sem) {
    LtsGraph gp = reachable(p, sem);
    LtsGraph gq = reachable(q, sem);
    auto succ = [](const LtsGraph& g, int s) {
        std::vector<std::pair<Label, int>> out;
        for (int e : g.out[s]) out.emplace_back(g.edges[e].label(), g.edges[e].tgt);
        return out;
    };
    std::set<std::pair<int, int>> rel;
    for (std::size_t i = 0; i < gp.states.size(); ++i)
        for (std::size_t j = 0; j < gq.states.size(); ++j) rel.emplace(i, j);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = rel.begin(); it != rel.end();) {
            auto [i, j] = *it;
            auto matched = [&](const auto& from, const auto& to, bool left) {
                for (const auto& [l, t] : from) {
                    bool ok = false;
                    for (const auto& [l2, t2] : to)
                        if (l == l2 && rel.count(left ? std::make_pair(t, t2) : std::make_pair(t2, t))) ok = true;
                    if (!ok) return false;
                }
                return true;
            };
            auto sp = succ(gp, i);
            auto sq = succ(gq, j);
            if (!matched(sp, sq, true) || !matched(sq, sp, false)) {
                it = rel.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    return rel.count({gp.init, gq.init}) > 0;
}

}  // namespace abc::testing
