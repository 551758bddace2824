#include "abc/analysis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace abc {

std::string to_string(Status s) {
    switch (s) {
        case Status::Holds: return "holds";
        case Status::Fails: return "fails";
        case Status::Unknown: return "unknown";
    }
    return {};
}

namespace {

Status status_from(const std::string& s) {
    if (s == "holds") return Status::Holds;
    if (s == "fails") return Status::Fails;
    if (s == "unknown") return Status::Unknown;
    throw std::invalid_argument("bad status " + s);
}

std::string bounds_text(const Bounds& b) {
    std::ostringstream os;
    os << "stem " << b.stem << ", cycle " << b.cycle << ", lift " << b.lift << ", finlen " << b.finlen
       << ", max-states " << b.max_states;
    return os.str();
}

bool path_less(const SPath& a, const SPath& b) {
    auto lex = [](const std::vector<SState>& x, const std::vector<SState>& y) {
        return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end(),
                                                      [](const SState& s, const SState& t) { return compare_states(s, t); });
    };
    if (a.finite() != b.finite()) return a.finite();
    if (a.size() != b.size()) return a.size() < b.size();
    if (auto c = lex(a.stem, b.stem); c != 0) return c < 0;
    return lex(a.cycle, b.cycle) < 0;
}

SPath build_path(const STransitions& st, const std::vector<int>& procs, const std::vector<Label>& labels,
                 std::size_t cycle_from) {
    SPath p;
    auto& g = st.graph;
    const std::size_t L = labels.size();
    for (std::size_t i = 0; i < cycle_from; ++i) {
        p.stem.emplace_back(g.states[procs[i]]);
        p.stem.emplace_back(Transition{g.states[procs[i]], labels[i], g.states[procs[i + 1]]});
    }
    if (cycle_from == L) {
        p.stem.emplace_back(g.states[procs[L]]);
        return p;
    }
    for (std::size_t i = cycle_from; i < L; ++i) {
        p.cycle.emplace_back(g.states[procs[i]]);
        p.cycle.emplace_back(Transition{g.states[procs[i]], labels[i], g.states[procs[i + 1]]});
    }
    return p;
}

}  // namespace

std::string verdict_text(const Verdict& v) {
    std::ostringstream os;
    os << "status: " << to_string(v.status) << " (" << bounds_text(v.bounds) << ")\n";
    if (v.counterexample) {
        os << "counterexample: " << to_string(*v.counterexample) << '\n';
        if (!v.counterexample_literal.empty()) os << "literal: " << v.counterexample_literal << '\n';
    }
    if (!v.reason.empty()) os << "reason: " << v.reason << '\n';
    return os.str();
}

std::string verdict_json(const Verdict& v) {
    nlohmann::json j;
    j["status"] = to_string(v.status);
    j["bounds"] = {{"stem", v.bounds.stem},
                   {"cycle", v.bounds.cycle},
                   {"lift", v.bounds.lift},
                   {"finlen", v.bounds.finlen},
                   {"max_states", v.bounds.max_states}};
    if (v.counterexample)
        j["counterexample"] = {{"path", to_string(*v.counterexample)}, {"literal", v.counterexample_literal}};
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j.dump(2);
}

Verdict verdict_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Verdict v;
    v.status = status_from(j.at("status").get<std::string>());
    const auto& b = j.at("bounds");
    v.bounds.stem = b.at("stem").get<int>();
    v.bounds.cycle = b.at("cycle").get<int>();
    v.bounds.lift = b.at("lift").get<int>();
    v.bounds.finlen = b.at("finlen").get<int>();
    v.bounds.max_states = b.at("max_states").get<std::size_t>();
    if (j.contains("counterexample")) v.counterexample_literal = j["counterexample"].at("literal").get<std::string>();
    if (j.contains("reason")) v.reason = j["reason"].get<std::string>();
    return v;
}

// ---------------------------------------------------------------- S transitions

STransitions s_transitions(const Process& init, const Semantics& sem, std::size_t max_states) {
    STransitions st;
    st.graph = reachable(init, sem, max_states);
    const auto& g = st.graph;
    st.out.resize(g.states.size());
    st.in.resize(g.states.size());
    for (std::size_t s = 0; s < g.states.size(); ++s) {
        for (int e : g.out[s]) {
            std::pair<Label, int> t{g.edges[e].label(), g.edges[e].tgt};
            if (std::find(st.out[s].begin(), st.out[s].end(), t) != st.out[s].end()) continue;
            st.out[s].push_back(t);
            st.in[t.second].emplace_back(static_cast<int>(s), t.first);
        }
    }
    return st;
}

// ---------------------------------------------------------------- finite paths

void enumerate_finite_paths(const Process& init, const Semantics& sem, int maxlen,
                            const std::function<bool(const SPath&)>& fn, std::size_t max_states) {
    enumerate_finite_paths_if(init, sem, maxlen, [](const Label&) { return true; }, fn, max_states);
}

void enumerate_finite_paths_if(const Process& init, const Semantics& sem, int maxlen,
                               const std::function<bool(const Label&)>& allow,
                               const std::function<bool(const SPath&)>& fn, std::size_t max_states) {
    STransitions st = s_transitions(init, sem, max_states);
    const auto& g = st.graph;
    SPath cur;
    cur.stem.emplace_back(g.states[g.init]);
    std::vector<int> at{g.init};
    bool stop = false;
    std::function<void(int)> dfs = [&](int depth) {
        if (stop) return;
        if (!fn(cur)) {
            stop = true;
            return;
        }
        if (depth == maxlen) return;
        int s = at.back();
        for (const auto& [l, t] : st.out[s]) {
            if (!allow(l)) continue;
            cur.stem.emplace_back(Transition{g.states[s], l, g.states[t]});
            cur.stem.emplace_back(g.states[t]);
            at.push_back(t);
            dfs(depth + 1);
            at.pop_back();
            cur.stem.pop_back();
            cur.stem.pop_back();
            if (stop) return;
        }
    };
    dfs(0);
}

std::vector<SPath> finite_paths(const Process& init, const Semantics& sem, int maxlen, std::size_t max_states) {
    std::vector<SPath> out;
    enumerate_finite_paths(
        init, sem, maxlen,
        [&](const SPath& p) {
            out.push_back(p);
            return true;
        },
        max_states);
    return out;
}

// ---------------------------------------------------------------- cycles

std::vector<SPath> simple_cycles(const STransitions& st, int max_len) {
    std::vector<SPath> out;
    const int n = static_cast<int>(st.graph.states.size());
    std::vector<int> procs;
    std::vector<Label> labels;
    std::vector<char> on_path(n, 0);
    for (int root = 0; root < n; ++root) {
        std::function<void(int)> dfs = [&](int s) {
            for (const auto& [l, t] : st.out[s]) {
                if (t == root) {
                    procs.push_back(t);
                    labels.push_back(l);
                    out.push_back(build_path(st, procs, labels, 0));
                    procs.pop_back();
                    labels.pop_back();
                    continue;
                }
                if (t < root || on_path[t] || static_cast<int>(labels.size()) + 2 > max_len) continue;
                on_path[t] = 1;
                procs.push_back(t);
                labels.push_back(l);
                dfs(t);
                procs.pop_back();
                labels.pop_back();
                on_path[t] = 0;
            }
        };
        procs = {root};
        labels.clear();
        on_path[root] = 1;
        dfs(root);
        on_path[root] = 0;
    }
    return out;
}

// ---------------------------------------------------------------- complete paths

namespace {

// Def1 verdict, downgraded to unknown when the lift route disagrees.
Truth cross_checked_just(Def1Checker& def1, const SPath& p, const Semantics& sem, const Bounds& b,
                         std::string& reason) {
    JustnessVerdict d = def1.just(p);
    if (d.just == Truth::Unknown) {
        reason = "justness undecided for " + to_string(p) + ": " + d.witness;
        return Truth::Unknown;
    }
    JustnessOptions opt;
    opt.lift_bound = b.lift;
    JustnessVerdict l = just_s_via_lifts(p, sem, opt);
    if (l.just != Truth::Unknown && l.just != d.just) {
        reason = "justness checkers disagree on " + to_string(p);
        return Truth::Unknown;
    }
    return d.just;
}

}  // namespace

CompletePaths enumerate_complete(const Process& init, const Semantics& sem, const std::vector<LtlFormula>& fairness,
                                 const Bounds& b) {
    STransitions st = s_transitions(init, sem, b.max_states);
    const auto& g = st.graph;
    JustnessOptions opt;
    opt.lift_bound = b.lift;
    Def1Checker def1(sem, opt);
    CompletePaths res;
    std::unordered_set<SPath, PathHash<SState>> seen;

    auto consider = [&](SPath p) {
        p = canonical(std::move(p));
        if (!seen.insert(p).second) return;
        if (!progressing(p, sem)) return;
        std::string why;
        Truth j = cross_checked_just(def1, p, sem, b, why);
        if (j == Truth::Unknown) {
            ++res.undecided;
            if (res.reason.empty()) res.reason = why;
            return;
        }
        if (j == Truth::False) return;
        for (const auto& f : fairness)
            if (!eval_ltl(p, f)) return;
        res.paths.push_back(std::move(p));
    };

    std::vector<int> procs{g.init};
    std::vector<Label> labels;
    const int max_depth = std::max(b.finlen, b.stem + b.cycle);
    std::function<void()> dfs = [&]() {
        const int L = static_cast<int>(labels.size());
        if (L <= b.finlen) consider(build_path(st, procs, labels, labels.size()));
        if (L > 0) {
            for (int j = L - 1; j >= 0; --j) {
                if (procs[j] != procs[L]) continue;
                if (L - j > b.cycle || j > b.stem) break;
                std::set<int> inside(procs.begin() + j + 1, procs.begin() + L);
                if (static_cast<int>(inside.size()) != L - j - 1 || inside.count(procs[L])) break;
                if (j > 0 && procs[j - 1] == procs[L - 1] && labels[j - 1] == labels[L - 1]) break;
                consider(build_path(st, procs, labels, j));
                break;
            }
        }
        if (L == max_depth) return;
        for (const auto& [l, t] : st.out[procs.back()]) {
            procs.push_back(t);
            labels.push_back(l);
            dfs();
            procs.pop_back();
            labels.pop_back();
        }
    };
    dfs();
    std::sort(res.paths.begin(), res.paths.end(), path_less);
    return res;
}

// ---------------------------------------------------------------- bounded check

namespace {

struct ProductKey {
    int state;
    Valuation v;
    friend bool operator==(const ProductKey&, const ProductKey&) = default;
};

struct ProductKeyHash {
    std::size_t operator()(const ProductKey& k) const {
        return std::hash<Valuation>{}(k.v) * 1000003 ^ static_cast<std::size_t>(k.state);
    }
};

struct Searcher {
    const STransitions& st;
    const LtlClosure& closure;
    std::size_t phi_index;
    std::vector<std::size_t> fair_index;
    std::vector<std::vector<char>> proc_atoms;

    Searcher(const STransitions& s, const LtlClosure& c, std::size_t phi, std::vector<std::size_t> fair)
        : st(s), closure(c), phi_index(phi), fair_index(std::move(fair)) {
        for (const auto& p : st.graph.states) proc_atoms.push_back(closure.atoms(SState(p)));
    }

    bool violating(const Valuation& v) const {
        if (v[phi_index]) return false;
        return std::all_of(fair_index.begin(), fair_index.end(), [&](std::size_t i) { return static_cast<bool>(v[i]); });
    }

    Valuation back_step(int src, const Label& l, int tgt, const Valuation& next) const {
        const auto& g = st.graph;
        Valuation mid = closure.step(closure.atoms(SState(Transition{g.states[src], l, g.states[tgt]})), &next);
        return closure.step(proc_atoms[src], &mid);
    }

    // Breadth-first from the seeds backwards to init; returns the stem as
    // (states, labels) ending at a seed state.
    std::optional<std::pair<std::vector<int>, std::vector<Label>>> search(const std::vector<ProductKey>& seeds,
                                                                          int max_depth) const {
        struct Parent {
            ProductKey next;
            Label label;
            bool root;
        };
        std::unordered_map<ProductKey, Parent, ProductKeyHash> parent;
        std::vector<ProductKey> frontier;
        for (const auto& s : seeds)
            if (parent.emplace(s, Parent{s, Label{}, true}).second) frontier.push_back(s);
        for (int depth = 0;; ++depth) {
            for (const auto& k : frontier) {
                if (k.state != st.graph.init || !violating(k.v)) continue;
                std::vector<int> states{k.state};
                std::vector<Label> labels;
                ProductKey cur = k;
                while (!parent.at(cur).root) {
                    const Parent& p = parent.at(cur);
                    labels.push_back(p.label);
                    states.push_back(p.next.state);
                    cur = p.next;
                }
                return std::make_pair(states, labels);
            }
            if (depth == max_depth) return std::nullopt;
            std::vector<ProductKey> next;
            for (const auto& k : frontier) {
                for (const auto& [src, l] : st.in[k.state]) {
                    ProductKey pk{src, back_step(src, l, k.state, k.v)};
                    if (parent.emplace(pk, Parent{k, l, false}).second) next.push_back(std::move(pk));
                }
            }
            if (next.empty()) return std::nullopt;
            frontier = std::move(next);
        }
    }
};

std::vector<int> distances_from(const STransitions& st, int from) {
    std::vector<int> dist(st.graph.states.size(), -1);
    std::deque<int> q{from};
    dist[from] = 0;
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        for (const auto& [l, t] : st.out[s])
            if (dist[t] < 0) {
                dist[t] = dist[s] + 1;
                q.push_back(t);
            }
    }
    return dist;
}

}  // namespace

Verdict check(const Process& init, const Semantics& sem, const LtlFormula& phi, const std::vector<LtlFormula>& fairness,
              const Bounds& b) {
    Verdict v;
    v.bounds = b;
    std::optional<STransitions> stx;
    try {
        stx.emplace(s_transitions(init, sem, b.max_states));
    } catch (const StateBoundExceeded& e) {
        v.status = Status::Unknown;
        v.reason = e.what();
        return v;
    }
    const STransitions& st = *stx;
    const auto& g = st.graph;

    std::vector<LtlFormula> roots{phi};
    roots.insert(roots.end(), fairness.begin(), fairness.end());
    LtlClosure closure(roots);
    std::vector<std::size_t> fair_index;
    for (std::size_t i = 1; i < roots.size(); ++i) fair_index.push_back(closure.index_of_root(i));
    Searcher searcher(st, closure, closure.index_of_root(0), fair_index);

    JustnessOptions opt;
    opt.lift_bound = b.lift;
    Def1Checker def1(sem, opt);
    std::string undecided;

    auto finish = [&](std::vector<int> states, std::vector<Label> labels, std::size_t cycle_from) -> bool {
        SPath p = canonical(build_path(st, states, labels, cycle_from));
        // Re-validate against the path-level evaluators before reporting.
        Truth c = complete(p, fairness, sem, opt);
        if (c == Truth::True && !eval_ltl(p, phi)) {
            v.status = Status::Fails;
            v.counterexample = p;
            v.counterexample_literal = to_literal(p, g);
            return true;
        }
        if (undecided.empty()) undecided = "counterexample candidate failed re-validation: " + to_string(p);
        return false;
    };

    // Finite complete paths: progressing end states, searched backwards.
    for (std::size_t e = 0; e < g.states.size(); ++e) {
        if (sem.admits_nonblocking(g.states[e])) continue;
        ProductKey seed{static_cast<int>(e), closure.step(searcher.proc_atoms[e], nullptr)};
        auto found = searcher.search({seed}, b.finlen);
        if (!found) continue;
        auto [states, labels] = *found;
        if (finish(states, labels, labels.size())) return v;
    }

    // Lassos: each simple cycle entered within the stem bound.
    std::vector<int> dist = distances_from(st, g.init);
    for (const SPath& cyc : simple_cycles(st, b.cycle)) {
        std::vector<int> cstates;
        std::vector<Label> clabels;
        std::vector<std::vector<char>> atoms;
        int nearest = -1;
        for (std::size_t i = 0; i < cyc.cycle.size(); ++i) {
            atoms.push_back(closure.atoms(cyc.cycle[i]));
            if (i % 2 == 0) {
                int s = g.find(std::get<Process>(cyc.cycle[i]));
                cstates.push_back(s);
                if (dist[s] >= 0 && (nearest < 0 || dist[s] < nearest)) nearest = dist[s];
            } else {
                clabels.push_back(std::get<Transition>(cyc.cycle[i]).label);
            }
        }
        if (nearest < 0 || nearest > b.stem) continue;
        auto vals = closure.cycle(atoms);
        std::vector<ProductKey> seeds;
        for (std::size_t q = 0; q < cstates.size(); ++q) seeds.push_back({cstates[q], vals[2 * q]});
        auto found = searcher.search(seeds, b.stem);
        if (!found) continue;
        std::string why;
        Truth j = cross_checked_just(def1, cyc, sem, b, why);
        if (j == Truth::False) continue;
        if (j == Truth::Unknown) {
            if (undecided.empty()) undecided = why;
            continue;
        }
        auto [states, labels] = *found;
        std::size_t q = std::find(cstates.begin(), cstates.end(), states.back()) - cstates.begin();
        std::size_t cycle_from = labels.size();
        for (std::size_t i = 0; i < cstates.size(); ++i) {
            labels.push_back(clabels[(q + i) % cstates.size()]);
            states.push_back(cstates[(q + i + 1) % cstates.size()]);
        }
        if (finish(states, labels, cycle_from)) return v;
    }

    if (!undecided.empty()) {
        v.status = Status::Unknown;
        v.reason = undecided;
    } else {
        v.status = Status::Holds;
    }
    return v;
}

// ---------------------------------------------------------------- bisimilarity

bool bisimilar(const Process& p, const Process& q, const Semantics& sem, std::size_t max_states) {
    LtsGraph gp = reachable(p, sem, max_states);
    LtsGraph gq = reachable(q, sem, max_states);
    const int np = static_cast<int>(gp.states.size());
    const int n = np + static_cast<int>(gq.states.size());
    std::vector<std::vector<std::pair<Label, int>>> succ(n);
    for (const auto& e : gp.edges) succ[e.src].emplace_back(e.label(), e.tgt);
    for (const auto& e : gq.edges) succ[np + e.src].emplace_back(e.label(), np + e.tgt);

    std::vector<int> block(n, 0);
    std::size_t count = 1;
    for (;;) {
        std::map<std::pair<int, std::vector<std::pair<Label, int>>>, int> ids;
        std::vector<int> next(n);
        for (int s = 0; s < n; ++s) {
            std::vector<std::pair<Label, int>> sig;
            for (const auto& [l, t] : succ[s]) sig.emplace_back(l, block[t]);
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto [it, fresh] = ids.emplace(std::make_pair(block[s], std::move(sig)), static_cast<int>(ids.size()));
            next[s] = it->second;
        }
        block = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
    }
    return block[gp.init] == block[np + gq.init];
}

}  // namespace abc
