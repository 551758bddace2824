#include "abc/paths.hpp"

#include <cctype>
#include <charconv>
#include <unordered_set>

namespace abc {

std::size_t hash_value(const SState& s) {
    if (s.index() == 0) return std::get<0>(s).hash();
    const auto& t = std::get<1>(s);
    return (t.source.hash() * 31 + hash_value(t.label)) * 31 + t.target.hash() + 7;
}

std::size_t hash_value(const UState& s) {
    if (s.index() == 0) return std::get<0>(s).hash();
    return std::get<1>(s).hash() + 7;
}

SState hat(const UState& u) {
    if (u.index() == 0) return std::get<0>(u);
    const Derivation& d = std::get<1>(u);
    return Transition{d.source(), d.label(), d.target()};
}

SPath hat(const UPath& p) {
    SPath out;
    out.stem.reserve(p.stem.size());
    out.cycle.reserve(p.cycle.size());
    for (const auto& u : p.stem) out.stem.push_back(hat(u));
    for (const auto& u : p.cycle) out.cycle.push_back(hat(u));
    return out;
}

// ---------------------------------------------------------------- lifts

namespace {

std::vector<Derivation> derivations_of(const Transition& t, const Semantics& sem) {
    std::vector<Derivation> out;
    for (const auto& d : sem.step_original(t.source))
        if (d.label() == t.label && d.target() == t.target) out.push_back(d);
    return out;
}

}  // namespace

void for_each_lift(const SPath& rho, int k, const Semantics& sem, const std::function<bool(const UPath&)>& fn,
                   std::size_t max_lifts) {
    std::unordered_set<UPath, PathHash<UState>> seen;
    std::size_t count = 0;
    const int max_m = rho.finite() ? 1 : std::max(1, k);
    for (int m = 1; m <= max_m; ++m) {
        std::vector<SState> seq(rho.stem);
        for (int r = 0; r < m; ++r) seq.insert(seq.end(), rho.cycle.begin(), rho.cycle.end());
        std::vector<std::size_t> mids;
        std::vector<std::vector<Derivation>> options;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (is_process(seq[i])) continue;
            auto ds = derivations_of(std::get<Transition>(seq[i]), sem);
            if (ds.empty()) throw std::invalid_argument("not a transition: " + to_string(seq[i]));
            mids.push_back(i);
            options.push_back(std::move(ds));
        }
        std::vector<std::size_t> choice(mids.size(), 0);
        for (;;) {
            if (++count > max_lifts)
                throw LiftBoundExceeded("more than " + std::to_string(max_lifts) + " lifts of " + to_string(rho));
            UPath u;
            std::size_t mi = 0;
            for (std::size_t i = 0; i < seq.size(); ++i) {
                UState s = is_process(seq[i]) ? UState(std::get<Process>(seq[i]))
                                              : UState(options[mi][choice[mi]]);
                if (!is_process(seq[i])) ++mi;
                (i < rho.stem.size() ? u.stem : u.cycle).push_back(std::move(s));
            }
            if (seen.insert(canonical(u)).second && !fn(u)) return;
            std::size_t j = 0;
            while (j < choice.size() && ++choice[j] == options[j].size()) choice[j++] = 0;
            if (j == choice.size()) break;
        }
    }
}

std::vector<UPath> lifts(const SPath& rho, int k, const Semantics& sem, std::size_t max_lifts) {
    std::vector<UPath> out;
    for_each_lift(
        rho, k, sem,
        [&](const UPath& u) {
            out.push_back(u);
            return true;
        },
        max_lifts);
    return out;
}

// ---------------------------------------------------------------- decomposition

namespace {

UState project(const UState& s, bool left) {
    if (s.index() == 0) {
        const Process& p = std::get<Process>(s);
        if (p.kind() != ProcKind::Par) throw std::invalid_argument("not a parallel state: " + to_string(p));
        return left ? p.left() : p.right();
    }
    const Derivation& d = std::get<Derivation>(s);
    switch (d.kind()) {
        case DerivKind::ParL: return left ? UState(d.sub()) : UState(d.operand());
        case DerivKind::ParR: return left ? UState(d.operand()) : UState(d.sub());
        case DerivKind::Sync: return left ? UState(d.sub()) : UState(d.sub2());
        default: throw std::invalid_argument("not a parallel derivation: " + to_string(d));
    }
}

// Drop elements equal to their predecessor.
std::vector<UState> contract(const std::vector<UState>& xs) {
    std::vector<UState> out;
    for (const auto& x : xs)
        if (out.empty() || !(out.back() == x)) out.push_back(x);
    return out;
}

UPath project_path(const UPath& pi, bool left) {
    std::vector<UState> s1, c1;
    for (const auto& s : pi.stem) s1.push_back(project(s, left));
    for (const auto& s : pi.cycle) c1.push_back(project(s, left));
    if (c1.empty()) return UPath{contract(s1), {}};
    bool constant = std::all_of(c1.begin(), c1.end(), [&](const UState& x) { return x == c1.front(); });
    if (constant) {
        s1.push_back(c1.front());
        return UPath{contract(s1), {}};
    }
    std::vector<UState> head(s1);
    head.insert(head.end(), c1.begin(), c1.end());
    UPath out{contract(head), {}};
    const std::size_t n = c1.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!(c1[i] == c1[(i + n - 1) % n])) out.cycle.push_back(c1[i]);
    return canonical(std::move(out));
}

UPath strip(const UPath& pi, ProcKind pk, DerivKind dk) {
    auto one = [&](const UState& s) -> UState {
        if (s.index() == 0) {
            const Process& p = std::get<Process>(s);
            if (p.kind() != pk) throw std::invalid_argument("unexpected state " + to_string(p));
            return p.body();
        }
        const Derivation& d = std::get<Derivation>(s);
        if (d.kind() != dk) throw std::invalid_argument("unexpected derivation " + to_string(d));
        return d.sub();
    };
    UPath out;
    for (const auto& s : pi.stem) out.stem.push_back(one(s));
    for (const auto& s : pi.cycle) out.cycle.push_back(one(s));
    return out;
}

struct SPairHash {
    std::size_t operator()(const std::pair<SPath, SPath>& p) const {
        PathHash<SState> h;
        return h(p.first) * 1000003 ^ h(p.second);
    }
};

}  // namespace

std::pair<UPath, UPath> decompose_par_u(const UPath& pi) { return {project_path(pi, true), project_path(pi, false)}; }

UPath decompose_res_u(const UPath& pi) { return strip(pi, ProcKind::Restrict, DerivKind::Res); }
UPath decompose_rel_u(const UPath& pi) { return strip(pi, ProcKind::Relabel, DerivKind::Rel); }

std::vector<std::pair<SPath, SPath>> decompose_par_s(const SPath& rho, int k, const Semantics& sem) {
    std::vector<std::pair<SPath, SPath>> out;
    std::unordered_set<std::pair<SPath, SPath>, SPairHash> seen;
    for_each_lift(rho, k, sem, [&](const UPath& u) {
        auto [l, r] = decompose_par_u(u);
        std::pair<SPath, SPath> d{canonical(hat(l)), canonical(hat(r))};
        if (seen.insert(d).second) out.push_back(std::move(d));
        return true;
    });
    return out;
}

namespace {

std::vector<SPath> decompose_unary_s(const SPath& rho, int k, const Semantics& sem, bool res) {
    std::vector<SPath> out;
    std::unordered_set<SPath, PathHash<SState>> seen;
    for_each_lift(rho, k, sem, [&](const UPath& u) {
        SPath d = canonical(hat(res ? decompose_res_u(u) : decompose_rel_u(u)));
        if (seen.insert(d).second) out.push_back(std::move(d));
        return true;
    });
    return out;
}

}  // namespace

std::vector<SPath> decompose_res_s(const SPath& rho, int k, const Semantics& sem) {
    return decompose_unary_s(rho, k, sem, true);
}
std::vector<SPath> decompose_rel_s(const SPath& rho, int k, const Semantics& sem) {
    return decompose_unary_s(rho, k, sem, false);
}

bool enabled(const AbstractTransition& nu, const UState& u, const Semantics& sem) {
    if (u.index() == 0) return enabled(nu, std::get<Process>(u), sem);
    return enabled(nu, std::get<Derivation>(u), sem);
}

// ---------------------------------------------------------------- rendering

std::string to_string(const SState& s) {
    if (s.index() == 0) return to_string(std::get<Process>(s));
    const auto& t = std::get<Transition>(s);
    return "(" + to_string(t.source) + " -" + to_string(t.label) + "-> " + to_string(t.target) + ")";
}

std::string to_string(const UState& s) {
    if (s.index() == 0) return to_string(std::get<Process>(s));
    return "[" + to_string(std::get<Derivation>(s)) + "]";
}

namespace {

template <class S, class ProcText, class StepText>
std::string render(const Path<S>& p, ProcText proc, StepText step) {
    std::string out;
    auto seq = [&](const std::vector<S>& xs, const S* closing) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (is_process(xs[i]))
                out += proc(xs[i]);
            else
                out += " -" + step(xs[i]) + "-> ";
        }
        if (closing) out += proc(*closing);
    };
    if (p.finite()) {
        seq(p.stem, nullptr);
        return out;
    }
    seq(p.stem, p.stem.empty() ? nullptr : &p.cycle.front());
    out += p.stem.empty() ? "; " : " ; ";
    seq(p.cycle, &p.cycle.front());
    return out;
}

}  // namespace

std::string to_string(const SPath& p) {
    return render(
        p, [](const SState& s) { return to_string(std::get<Process>(s)); },
        [](const SState& s) { return to_string(std::get<Transition>(s).label); });
}

std::string to_string(const UPath& p) {
    return render(
        p, [](const UState& s) { return to_string(std::get<Process>(s)); },
        [](const UState& s) { return to_string(std::get<Derivation>(s)); });
}

std::string to_literal(const SPath& p, const LtsGraph& g) {
    return render(
        p,
        [&](const SState& s) {
            int i = g.find(std::get<Process>(s));
            if (i < 0) throw std::invalid_argument("state not in graph: " + to_string(s));
            return std::to_string(i);
        },
        [](const SState& s) { return to_string(std::get<Transition>(s).label); });
}

std::string to_literal(const UPath& p, const LtsGraph& g) {
    return render(
        p,
        [&](const UState& s) {
            int i = g.find(std::get<Process>(s));
            if (i < 0) throw std::invalid_argument("state not in graph: " + to_string(s));
            return std::to_string(i);
        },
        [](const UState& s) { return to_string(std::get<Derivation>(s)); });
}

// ---------------------------------------------------------------- literal parsing

namespace {

struct RawStep {
    int src;
    std::string text;
    int tgt;
};

struct RawSeq {
    std::vector<int> states;
    std::vector<RawStep> steps;
};

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

RawSeq parse_seq(std::string_view s, const LtsGraph& g) {
    RawSeq out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    auto number = [&] {
        skip();
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
        if (ec != std::errc() || ptr == s.data() + i)
            throw std::invalid_argument("expected a state index at '" + std::string(s.substr(i)) + "'");
        i = static_cast<std::size_t>(ptr - s.data());
        if (v < 0 || v >= static_cast<int>(g.states.size()))
            throw std::invalid_argument("state index " + std::to_string(v) + " out of range");
        return v;
    };
    skip();
    if (i == s.size()) return out;
    out.states.push_back(number());
    for (;;) {
        skip();
        if (i == s.size()) break;
        if (s[i] != '-') throw std::invalid_argument("expected '-' in path literal");
        std::size_t end = s.find("->", i + 1);
        if (end == std::string_view::npos) throw std::invalid_argument("missing '->' in path literal");
        std::string text = trim(s.substr(i + 1, end - i - 1));
        i = end + 2;
        int tgt = number();
        out.steps.push_back({out.states.back(), text, tgt});
        out.states.push_back(tgt);
    }
    return out;
}

const Edge& resolve_edge(const RawStep& st, const LtsGraph& g, bool need_unique) {
    const auto& out = g.out[st.src];
    if (!st.text.empty() && st.text[0] == '#') {
        std::size_t k = std::stoul(st.text.substr(1));
        if (k >= out.size()) throw std::invalid_argument("no edge " + st.text + " at state " + std::to_string(st.src));
        const Edge& e = g.edges[out[k]];
        if (e.tgt != st.tgt) throw std::invalid_argument("edge " + st.text + " does not reach " + std::to_string(st.tgt));
        return e;
    }
    const Edge* by_label = nullptr;
    int label_hits = 0;
    for (int ei : out) {
        const Edge& e = g.edges[ei];
        if (e.tgt != st.tgt) continue;
        if (to_string(e.derivation) == st.text) return e;
        if (to_string(e.label()) == st.text) {
            if (!by_label) by_label = &e;
            ++label_hits;
        }
    }
    if (!by_label)
        throw std::invalid_argument("no transition '" + st.text + "' from " + std::to_string(st.src) + " to " +
                                    std::to_string(st.tgt));
    if (need_unique && label_hits > 1)
        throw std::invalid_argument("label '" + st.text + "' from " + std::to_string(st.src) +
                                    " is ambiguous; give the derivation or #index");
    return *by_label;
}

template <class S, class MakeMid>
Path<S> build_path(std::string_view text, const LtsGraph& g, MakeMid mid) {
    auto semi = text.find(';');
    RawSeq stem = parse_seq(text.substr(0, semi), g);
    auto append = [&](std::vector<S>& xs, const RawSeq& sq, bool include_last) {
        for (std::size_t i = 0; i < sq.steps.size(); ++i) {
            xs.push_back(g.states[sq.states[i]]);
            xs.push_back(mid(sq.steps[i]));
        }
        if (include_last && !sq.states.empty()) xs.push_back(g.states[sq.states.back()]);
    };
    Path<S> p;
    if (semi == std::string_view::npos) {
        if (stem.states.empty()) throw std::invalid_argument("empty path literal");
        append(p.stem, stem, true);
        return p;
    }
    RawSeq cyc = parse_seq(text.substr(semi + 1), g);
    if (cyc.steps.empty()) throw std::invalid_argument("lasso cycle needs at least one transition");
    if (cyc.states.front() != cyc.states.back()) throw std::invalid_argument("lasso cycle must end where it starts");
    if (!stem.states.empty() && stem.states.back() != cyc.states.front())
        throw std::invalid_argument("lasso stem must end where the cycle starts");
    append(p.stem, stem, false);
    append(p.cycle, cyc, false);
    return p;
}

}  // namespace

SPath parse_s_path(std::string_view text, const LtsGraph& g) {
    return build_path<SState>(text, g, [&](const RawStep& st) -> SState {
        const Edge& e = resolve_edge(st, g, false);
        return Transition{g.states[e.src], e.label(), g.states[e.tgt]};
    });
}

UPath parse_u_path(std::string_view text, const LtsGraph& g) {
    return build_path<UState>(text, g, [&](const RawStep& st) -> UState { return resolve_edge(st, g, true).derivation; });
}

// ---------------------------------------------------------------- validity

namespace {

template <class S, class StepOk>
bool valid_generic(const Path<S>& p, StepOk ok) {
    std::vector<S> seq(p.stem);
    seq.insert(seq.end(), p.cycle.begin(), p.cycle.end());
    if (seq.empty()) return false;
    if (!p.finite()) {
        if (p.cycle.size() % 2 || !is_process(p.cycle.front())) return false;
        seq.push_back(p.cycle.front());
    } else if (!is_process(seq.back())) {
        return false;
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (is_process(seq[i])) {
            if (i + 1 < seq.size() && is_process(seq[i + 1])) return false;
            continue;
        }
        if (i == 0 || i + 1 >= seq.size()) return false;
        if (!is_process(seq[i - 1]) || !is_process(seq[i + 1])) return false;
        if (!ok(seq[i - 1], seq[i], seq[i + 1])) return false;
    }
    return true;
}

}  // namespace

bool valid(const SPath& p, const Semantics& sem) {
    return valid_generic(p, [&](const SState& a, const SState& m, const SState& b) {
        const auto& t = std::get<Transition>(m);
        if (!(t.source == std::get<Process>(a)) || !(t.target == std::get<Process>(b))) return false;
        return !derivations_of(t, sem).empty();
    });
}

bool valid(const UPath& p) {
    return valid_generic(p, [](const UState& a, const UState& m, const UState& b) {
        const auto& d = std::get<Derivation>(m);
        return d.source() == std::get<Process>(a) && d.target() == std::get<Process>(b);
    });
}

}  // namespace abc
