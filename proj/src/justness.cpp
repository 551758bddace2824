#include "abc/justness.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace abc {

std::string to_string(Truth t) {
    switch (t) {
        case Truth::False: return "false";
        case Truth::True: return "true";
        case Truth::Unknown: return "unknown";
    }
    return {};
}

bool progressing(const SPath& p, const Semantics& sem) {
    if (!p.finite()) return true;
    return !sem.admits_nonblocking(std::get<Process>(p.last()));
}

bool progressing(const UPath& p, const Semantics& sem) {
    if (!p.finite()) return true;
    return !sem.admits_nonblocking(std::get<Process>(p.last()));
}

// ---------------------------------------------------------------- handshake sets

HandshakeIndex::HandshakeIndex(const Spec& spec) : names_(spec.handshake_names.begin(), spec.handshake_names.end()) {
    if (names_.size() > 32) throw std::invalid_argument("more than 32 handshake names");
    full_ = names_.size() == 32 ? ~YMask{0} : (YMask{1} << (2 * names_.size())) - 1;
}

YMask HandshakeIndex::mask(const Label& l) const {
    if (!l.is_handshake()) return 0;
    auto it = std::lower_bound(names_.begin(), names_.end(), l.name);
    if (it == names_.end() || *it != l.name) throw std::invalid_argument("unknown handshake name " + l.name);
    auto i = static_cast<unsigned>(it - names_.begin());
    return YMask{1} << (2 * i + (l.kind == LabelKind::CoHand ? 1 : 0));
}

YMask HandshakeIndex::mask(const std::vector<Label>& ls) const {
    YMask m = 0;
    for (const auto& l : ls) m |= mask(l);
    return m;
}

YMask HandshakeIndex::channel(const std::string& c) const {
    return mask(Label::hand(c)) | mask(Label::cohand(c));
}

YMask HandshakeIndex::image(YMask y, const Relabelling& f) const {
    YMask out = 0;
    for (const auto& l : labels(y)) out |= mask(apply_relabelling(f, l));
    return out;
}

std::vector<Label> HandshakeIndex::labels(YMask y) const {
    std::vector<Label> out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (y & (YMask{1} << (2 * i))) out.push_back(Label::hand(names_[i]));
        if (y & (YMask{1} << (2 * i + 1))) out.push_back(Label::cohand(names_[i]));
    }
    return out;
}

std::string HandshakeIndex::render(YMask y) const {
    std::string s = "{";
    bool first = true;
    for (const auto& l : labels(y)) {
        if (!first) s += ",";
        first = false;
        s += to_string(l);
    }
    return s + "}";
}

namespace {

YMask complement_mask(YMask z) {
    constexpr YMask even = 0x5555555555555555ULL;
    return ((z & even) << 1) | ((z >> 1) & even);
}

YFamily minimize(YFamily f) {
    std::sort(f.begin(), f.end(), [](YMask a, YMask b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    YFamily out;
    for (YMask x : f) {
        bool dominated = std::any_of(out.begin(), out.end(), [x](YMask m) { return (m & x) == m; });
        if (!dominated) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

YFamily meet(const YFamily& a, const YFamily& b) {
    YFamily out;
    for (YMask x : a)
        for (YMask y : b) out.push_back(x | y);
    return minimize(std::move(out));
}

YFamily join(const YFamily& a, const YFamily& b) {
    YFamily out(a);
    out.insert(out.end(), b.begin(), b.end());
    return minimize(std::move(out));
}

bool contains(const YFamily& f, YMask y) {
    return std::any_of(f.begin(), f.end(), [y](YMask m) { return (m & y) == m; });
}

YFamily combine_par(const YFamily& left, const YFamily& right) {
    YFamily out;
    for (YMask x : left)
        for (YMask z : right)
            if ((x & complement_mask(z)) == 0) out.push_back(x | z);
    return minimize(std::move(out));
}

}  // namespace

// ---------------------------------------------------------------- Def1Checker

struct Def1Checker::Impl {
    enum class Shape { Other, Par, Res, Rel };

    struct Node {
        SPath path;
        YFamily req{0};
        Shape shape = Shape::Other;
        std::vector<std::pair<int, int>> pars;
        std::vector<int> inners;
        YMask res_bits = 0;
        Relabelling f;
        std::vector<int> suffixes;
        bool truncated = false;
        bool expanded = false;
        YFamily value{0};
    };

    const Semantics& sem;
    JustnessOptions opt;
    HandshakeIndex hs;
    std::vector<Node> nodes;
    std::unordered_map<SPath, int, PathHash<SState>> ids;

    Impl(const Semantics& s, JustnessOptions o) : sem(s), opt(o), hs(s.spec()) {}

    int intern(const SPath& canon) {
        auto [it, fresh] = ids.emplace(canon, static_cast<int>(nodes.size()));
        if (fresh) {
            Node n;
            n.path = canon;
            nodes.push_back(std::move(n));
        }
        return it->second;
    }

    void expand(int id) {
        Node n = std::move(nodes[id]);  // interning below may reallocate
        n.expanded = true;
        if (nodes.size() > opt.max_nodes) {
            n.truncated = true;
            n.req = {};
            n.value = {};
            nodes[id] = std::move(n);
            return;
        }
        if (n.path.finite()) {
            const Process& last = std::get<Process>(n.path.last());
            if (sem.admits_nonblocking(last)) {
                n.req = {};
            } else {
                YMask m = 0;
                for (const auto& d : sem.step_original(last)) m |= hs.mask(d.label());
                n.req = {m};
            }
        }
        const Process& head = std::get<Process>(n.path.first());
        std::vector<std::pair<int, int>> pars;
        std::vector<int> inners;
        try {
            switch (head.kind()) {
                case ProcKind::Par:
                    n.shape = Shape::Par;
                    for (const auto& [l, r] : decompose_par_s(n.path, opt.lift_bound, sem)) {
                        int a = intern(l);
                        int b = intern(r);
                        pars.emplace_back(a, b);
                    }
                    break;
                case ProcKind::Restrict:
                    n.shape = Shape::Res;
                    n.res_bits = hs.channel(head.name());
                    for (const auto& q : decompose_res_s(n.path, opt.lift_bound, sem)) inners.push_back(intern(q));
                    break;
                case ProcKind::Relabel:
                    n.shape = Shape::Rel;
                    n.f = head.relabelling();
                    for (const auto& q : decompose_rel_s(n.path, opt.lift_bound, sem)) inners.push_back(intern(q));
                    break;
                default:
                    break;
            }
        } catch (const LiftBoundExceeded&) {
            n.truncated = true;
        }
        n.pars = std::move(pars);
        n.inners = std::move(inners);
        std::vector<int> suffixes;
        for (auto& s : suffix_classes(n.path)) {
            if (!is_process(s.first())) continue;
            SPath c = canonical(std::move(s));
            if (c == n.path) continue;
            suffixes.push_back(intern(c));
        }
        std::sort(suffixes.begin(), suffixes.end());
        suffixes.erase(std::unique(suffixes.begin(), suffixes.end()), suffixes.end());
        n.suffixes = std::move(suffixes);
        nodes[id] = std::move(n);
    }

    YFamily structural(const Node& n) const {
        YFamily s;
        switch (n.shape) {
            case Shape::Other:
                return {0};
            case Shape::Par:
                for (auto [a, b] : n.pars) s = join(s, combine_par(nodes[a].value, nodes[b].value));
                return s;
            case Shape::Res:
                for (int i : n.inners) {
                    YFamily t;
                    for (YMask m : nodes[i].value) t.push_back(m & ~n.res_bits);
                    s = join(s, minimize(std::move(t)));
                }
                return s;
            case Shape::Rel:
                for (int i : n.inners) {
                    YFamily t;
                    for (YMask m : nodes[i].value) t.push_back(hs.image(m, n.f));
                    s = join(s, minimize(std::move(t)));
                }
                return s;
        }
        return s;
    }

    YFamily compute(const Node& n) const {
        if (!n.expanded) return n.value;
        YFamily v = n.req;
        if (!v.empty()) v = meet(v, structural(n));
        for (int s : n.suffixes) {
            if (v.empty()) break;
            v = meet(v, nodes[s].value);
        }
        return v;
    }

    int solve(const SPath& p) {
        if (p.size() == 0 || !is_process(p.first()))
            throw std::invalid_argument("justness is defined for paths starting at a process");
        SPath canon = canonical(p);
        std::size_t first = nodes.size();
        int root = intern(canon);
        if (static_cast<std::size_t>(root) < first) return root;
        for (std::size_t i = first; i < nodes.size(); ++i) expand(static_cast<int>(i));
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = nodes.size(); i-- > first;) {
                YFamily v = compute(nodes[i]);
                if (v != nodes[i].value) {
                    nodes[i].value = std::move(v);
                    changed = true;
                }
            }
        }
        return root;
    }

    bool truncated_below(int root) const {
        std::vector<int> todo{root};
        std::unordered_set<int> seen{root};
        while (!todo.empty()) {
            int id = todo.back();
            todo.pop_back();
            const Node& n = nodes[id];
            if (n.truncated) return true;
            auto push = [&](int c) {
                if (seen.insert(c).second) todo.push_back(c);
            };
            for (auto [a, b] : n.pars) {
                push(a);
                push(b);
            }
            for (int c : n.inners) push(c);
            for (int c : n.suffixes) push(c);
        }
        return false;
    }

    std::string family_text(const YFamily& f) const {
        if (f.empty()) return "none";
        std::string s;
        for (std::size_t i = 0; i < f.size(); ++i) s += (i ? " " : "") + hs.render(f[i]);
        return s;
    }

    void describe(std::ostringstream& os, int id, int depth, std::unordered_set<int>& seen) const {
        const Node& n = nodes[id];
        std::string pad(2 * depth, ' ');
        os << pad << to_string(n.path) << "  minimal Y: " << family_text(n.value) << '\n';
        if (!seen.insert(id).second || depth >= 4 || n.value.empty()) return;
        if (n.shape == Shape::Par) {
            for (auto [a, b] : n.pars) {
                if (combine_par(nodes[a].value, nodes[b].value).empty()) continue;
                os << pad << "  splits into\n";
                describe(os, a, depth + 2, seen);
                describe(os, b, depth + 2, seen);
                return;
            }
        }
        if (n.shape == Shape::Res || n.shape == Shape::Rel) {
            for (int i : n.inners) {
                if (nodes[i].value.empty()) continue;
                os << pad << "  strips to\n";
                describe(os, i, depth + 2, seen);
                return;
            }
        }
    }

    std::string refutation(int id) const {
        const Node& n = nodes[id];
        if (n.req.empty()) {
            return "finite path " + to_string(n.path) + " ends in a state admitting a non-blocking action";
        }
        if (structural(n).empty()) {
            std::string what = n.shape == Shape::Par ? "decomposition" : "component path";
            return to_string(n.path) + ": no " + what + " into just components (lift bound " +
                   std::to_string(opt.lift_bound) + ")";
        }
        for (int s : n.suffixes)
            if (nodes[s].value.empty()) return refutation(s);
        return to_string(n.path) + " is not just";
    }
};

Def1Checker::Def1Checker(const Semantics& sem, JustnessOptions opt) : impl_(std::make_unique<Impl>(sem, opt)) {}
Def1Checker::~Def1Checker() = default;

const HandshakeIndex& Def1Checker::handshakes() const { return impl_->hs; }

YFamily Def1Checker::family(const SPath& p) {
    int root = impl_->solve(p);
    return impl_->nodes[root].value;
}

Truth Def1Checker::y_just(const SPath& p, YMask y) {
    int root = impl_->solve(p);
    if (contains(impl_->nodes[root].value, y)) return Truth::True;
    return impl_->truncated_below(root) ? Truth::Unknown : Truth::False;
}

JustnessVerdict Def1Checker::just(const SPath& p) {
    int root = impl_->solve(p);
    JustnessVerdict v;
    v.method = JustMethod::Definition;
    v.lift_bound = impl_->opt.lift_bound;
    const auto& node = impl_->nodes[root];
    std::ostringstream os;
    if (!node.value.empty()) {
        v.just = Truth::True;
        std::unordered_set<int> seen;
        impl_->describe(os, root, 0, seen);
    } else if (impl_->truncated_below(root)) {
        v.just = Truth::Unknown;
        os << "search bound reached below " << to_string(node.path) << '\n';
    } else {
        v.just = Truth::False;
        os << impl_->refutation(root) << '\n';
    }
    v.witness = os.str();
    return v;
}

std::size_t Def1Checker::node_count() const { return impl_->nodes.size(); }

JustnessVerdict just_def1(const SPath& p, const Semantics& sem, JustnessOptions opt) {
    Def1Checker c(sem, opt);
    return c.just(p);
}

Truth y_just_def1(const SPath& p, const std::vector<Label>& y, const Semantics& sem, JustnessOptions opt) {
    Def1Checker c(sem, opt);
    return c.y_just(p, c.handshakes().mask(y));
}

// ---------------------------------------------------------------- justness through lifts

bool just_thm3_u(const UPath& p, const Semantics& sem, std::string* witness) {
    if (p.finite()) {
        const Process& last = std::get<Process>(p.last());
        if (!sem.admits_nonblocking(last)) return true;
        if (witness) *witness = "final state " + to_string(last) + " admits a non-blocking action";
        return false;
    }
    const Process& head = std::get<Process>(p.cycle.front());
    for (const auto& nu : abstract_transitions(head, sem)) {
        if (!non_blocking(nu.label())) continue;
        bool always = std::all_of(p.cycle.begin(), p.cycle.end(),
                                  [&](const UState& u) { return enabled(nu, u, sem); });
        if (always) {
            if (witness) {
                *witness = to_string(nu) + " is enabled at every state of the cycle";
                for (const auto& u : p.cycle) *witness += "\n  " + to_string(u);
            }
            return false;
        }
    }
    return true;
}

JustnessVerdict just_s_via_lifts(const SPath& p, const Semantics& sem, JustnessOptions opt) {
    JustnessVerdict v;
    v.method = JustMethod::Lifts;
    v.lift_bound = opt.lift_bound;
    v.just = Truth::False;
    bool found = false;
    try {
        for_each_lift(
            p, opt.lift_bound, sem,
            [&](const UPath& u) {
                std::string w;
                if (just_thm3_u(u, sem, &w)) {
                    found = true;
                    v.witness = "lift " + to_string(u) + " keeps no non-blocking transition enabled";
                    return false;
                }
                if (v.witness.empty()) v.witness = "lift " + to_string(u) + ": " + w;
                return true;
            },
            opt.max_lifts);
    } catch (const LiftBoundExceeded& e) {
        if (!found) {
            v.just = Truth::Unknown;
            v.witness = e.what();
            return v;
        }
    }
    if (found) v.just = Truth::True;
    return v;
}

// ---------------------------------------------------------------- nu-enabled paths

namespace {

bool par_shaped(const UState& s) {
    if (is_process(s)) return std::get<Process>(s).kind() == ProcKind::Par;
    auto k = std::get<Derivation>(s).kind();
    return k == DerivKind::ParL || k == DerivKind::ParR || k == DerivKind::Sync;
}

bool structural_enabled(const UPath& s, const AbstractTransition& nu, const Semantics& sem) {
    const UState& head = s.first();
    switch (nu.kind()) {
        case AbsKind::Prefix:
            return false;
        case AbsKind::ParL:
        case AbsKind::ParR:
        case AbsKind::Sync: {
            if (!par_shaped(head)) return false;
            auto [l, r] = decompose_par_u(s);
            if (nu.kind() == AbsKind::ParL) return nu_enabled(l, nu.inner(), sem);
            if (nu.kind() == AbsKind::ParR) return nu_enabled(r, nu.inner(), sem);
            return nu_enabled(l, nu.inner(), sem) && nu_enabled(r, nu.inner2(), sem);
        }
        case AbsKind::Res: {
            bool shaped = is_process(head) ? std::get<Process>(head).kind() == ProcKind::Restrict &&
                                                 std::get<Process>(head).name() == nu.channel()
                                           : std::get<Derivation>(head).kind() == DerivKind::Res &&
                                                 std::get<Derivation>(head).name() == nu.channel();
            return shaped && nu_enabled(decompose_res_u(s), nu.inner(), sem);
        }
        case AbsKind::Rel: {
            bool shaped = is_process(head) ? std::get<Process>(head).kind() == ProcKind::Relabel &&
                                                 std::get<Process>(head).relabelling() == nu.relabelling()
                                           : std::get<Derivation>(head).kind() == DerivKind::Rel &&
                                                 std::get<Derivation>(head).relabelling() == nu.relabelling();
            return shaped && nu_enabled(decompose_rel_u(s), nu.inner(), sem);
        }
    }
    return false;
}

}  // namespace

bool nu_enabled(const UPath& p, const AbstractTransition& nu, const Semantics& sem) {
    if (p.finite() && enabled(nu, p.last(), sem)) return true;
    for (const auto& s : suffix_classes(p))
        if (structural_enabled(s, nu, sem)) return true;
    return false;
}

Truth complete(const SPath& p, const std::vector<LtlFormula>& fairness, const Semantics& sem, JustnessOptions opt) {
    if (!progressing(p, sem)) return Truth::False;
    Truth j = just_def1(p, sem, opt).just;
    if (j == Truth::False) return Truth::False;
    for (const auto& f : fairness)
        if (!eval_ltl(p, f)) return Truth::False;
    return j;
}

}  // namespace abc
