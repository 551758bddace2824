#include "abc/sos.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace abc {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

constexpr int kMaxUnfoldDepth = 10000;

std::shared_ptr<DerivationNode> make(DerivKind k) {
    auto n = std::make_shared<DerivationNode>();
    n->kind = k;
    return n;
}

void seal(DerivationNode& n) {
    std::size_t h = mix(static_cast<std::size_t>(n.kind) + 11, hash_value(n.label));
    h = mix(h, n.operand.hash());
    h = mix(h, std::hash<std::string>{}(n.name));
    if (n.relabelling) h = mix(h, hash_value(*n.relabelling));
    for (const auto& d : n.premises) h = mix(h, d.hash());
    n.hash = h;
}

const Relabelling& no_relabelling() {
    static const Relabelling r;
    return r;
}

}  // namespace

std::optional<LabelKind> compose_broadcast(LabelKind a, LabelKind b) {
    using K = LabelKind;
    if (a == K::Send && b == K::Send) return std::nullopt;
    if (a == K::Send || b == K::Send) return K::Send;
    if (a == K::Receive || b == K::Receive) return K::Receive;
    return K::Discard;
}

Derivation Derivation::act(Action a, Process body) {
    auto n = make(DerivKind::Act);
    n->label = a;
    n->source = Process::prefix(a, body);
    n->target = body;
    n->operand = std::move(body);
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::sum_l(Derivation d, Process right) {
    auto n = make(DerivKind::SumL);
    n->label = d.label();
    n->source = Process::choice(d.source(), right);
    n->target = d.target();
    n->operand = std::move(right);
    n->premises.push_back(std::move(d));
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::sum_r(Process left, Derivation d) {
    auto n = make(DerivKind::SumR);
    n->label = d.label();
    n->source = Process::choice(left, d.source());
    n->target = d.target();
    n->operand = std::move(left);
    n->premises.push_back(std::move(d));
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::par_l(Derivation d, Process right) {
    auto n = make(DerivKind::ParL);
    n->label = d.label();
    n->source = Process::par(d.source(), right);
    n->target = Process::par(d.target(), right);
    n->operand = std::move(right);
    n->premises.push_back(std::move(d));
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::par_r(Process left, Derivation d) {
    auto n = make(DerivKind::ParR);
    n->label = d.label();
    n->source = Process::par(left, d.source());
    n->target = Process::par(left, d.target());
    n->operand = std::move(left);
    n->premises.push_back(std::move(d));
    seal(*n);
    return Derivation(std::move(n));
}

std::optional<Derivation> Derivation::sync(Derivation l, Derivation r) {
    const Label& a = l.label();
    const Label& b = r.label();
    Label out;
    if (a.is_handshake() && b.is_handshake() && a.name == b.name && a.kind != b.kind) {
        out = Label::tau();
    } else if (a.is_broadcast() && b.is_broadcast() && a.name == b.name) {
        auto k = compose_broadcast(a.kind, b.kind);
        if (!k) return std::nullopt;
        out = Label{*k, a.name};
    } else {
        return std::nullopt;
    }
    auto n = make(DerivKind::Sync);
    n->label = std::move(out);
    n->source = Process::par(l.source(), r.source());
    n->target = Process::par(l.target(), r.target());
    n->premises.push_back(std::move(l));
    n->premises.push_back(std::move(r));
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::res(Derivation d, std::string channel) {
    auto n = make(DerivKind::Res);
    n->label = d.label();
    n->source = Process::restrict(d.source(), channel);
    n->target = Process::restrict(d.target(), channel);
    n->name = std::move(channel);
    n->premises.push_back(std::move(d));
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::rel(Derivation d, Relabelling f) {
    auto n = make(DerivKind::Rel);
    n->label = apply_relabelling(f, d.label());
    n->source = Process::relabel(d.source(), f);
    n->target = Process::relabel(d.target(), f);
    n->relabelling = std::make_shared<const Relabelling>(std::move(f));
    n->premises.push_back(std::move(d));
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::rec(std::string agent, Derivation d) {
    auto n = make(DerivKind::Rec);
    n->label = d.label();
    n->source = Process::agent(agent);
    n->target = d.target();
    n->name = std::move(agent);
    n->premises.push_back(std::move(d));
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::dis0(std::string b) {
    auto n = make(DerivKind::Dis0);
    n->label = Label::discard(b);
    n->name = std::move(b);
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::dis1(std::string b, Process prefixed) {
    auto n = make(DerivKind::Dis1);
    n->label = Label::discard(b);
    n->source = prefixed;
    n->target = prefixed;
    n->operand = std::move(prefixed);
    n->name = std::move(b);
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::dis2(Derivation l, Derivation r) {
    auto n = make(DerivKind::Dis2);
    n->label = l.label();
    n->source = Process::choice(l.source(), r.source());
    n->target = Process::choice(l.target(), r.target());
    n->premises.push_back(std::move(l));
    n->premises.push_back(std::move(r));
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::dis_rec(std::string agent, Derivation d) {
    auto n = make(DerivKind::DisRec);
    n->label = d.label();
    n->source = Process::agent(agent);
    n->target = n->source;
    n->name = std::move(agent);
    n->premises.push_back(std::move(d));
    seal(*n);
    return Derivation(std::move(n));
}

Derivation Derivation::dis_rel(std::string b, Process body, Relabelling f, std::vector<Derivation> premises) {
    auto n = make(DerivKind::DisRel);
    n->label = Label::discard(b);
    n->source = Process::relabel(body, f);
    n->target = n->source;
    n->operand = std::move(body);
    n->name = std::move(b);
    n->relabelling = std::make_shared<const Relabelling>(std::move(f));
    n->premises = std::move(premises);
    seal(*n);
    return Derivation(std::move(n));
}

DerivKind Derivation::kind() const { return node_->kind; }
const Label& Derivation::label() const { return node_->label; }
const Process& Derivation::source() const { return node_->source; }
const Process& Derivation::target() const { return node_->target; }
const Derivation& Derivation::sub() const { return node_->premises.at(0); }
const Derivation& Derivation::sub2() const { return node_->premises.at(1); }
const std::vector<Derivation>& Derivation::premises() const { return node_->premises; }
const Process& Derivation::operand() const { return node_->operand; }
const std::string& Derivation::name() const { return node_->name; }
const Relabelling& Derivation::relabelling() const {
    return node_->relabelling ? *node_->relabelling : no_relabelling();
}
std::size_t Derivation::hash() const { return node_->hash; }

bool operator==(const Derivation& a, const Derivation& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash()) return false;
    return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Derivation& a, const Derivation& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    if (auto c = a.label() <=> b.label(); c != 0) return c;
    const auto& pa = a.premises();
    const auto& pb = b.premises();
    for (std::size_t i = 0; i < pa.size() && i < pb.size(); ++i)
        if (auto c = pa[i] <=> pb[i]; c != 0) return c;
    if (auto c = pa.size() <=> pb.size(); c != 0) return c;
    if (auto c = a.operand() <=> b.operand(); c != 0) return c;
    if (int c = a.name().compare(b.name()); c != 0) return c <=> 0;
    return a.relabelling() <=> b.relabelling();
}

// ---------------------------------------------------------------- rendering

namespace {

std::string operand_text(const Process& p) {
    std::string s = to_string(p, true);
    if (p.kind() == ProcKind::Choice || p.kind() == ProcKind::Par) return "(" + s + ")";
    return s;
}

std::string wrapped(const Derivation& d) { return "(" + to_string(d) + ")"; }

}  // namespace

std::string to_string(const Derivation& d) {
    switch (d.kind()) {
        case DerivKind::Act: return "<" + to_string(d.label()) + ">" + operand_text(d.operand());
        case DerivKind::SumL: return wrapped(d.sub()) + "+" + operand_text(d.operand());
        case DerivKind::SumR: return operand_text(d.operand()) + "+" + wrapped(d.sub());
        case DerivKind::ParL: return wrapped(d.sub()) + "|" + operand_text(d.operand());
        case DerivKind::ParR: return operand_text(d.operand()) + "|" + wrapped(d.sub());
        case DerivKind::Sync: return wrapped(d.sub()) + "|" + wrapped(d.sub2());
        case DerivKind::Res: return wrapped(d.sub()) + "\\" + d.name();
        case DerivKind::Rel: return wrapped(d.sub()) + to_string(d.relabelling());
        case DerivKind::Rec:
            return d.name() + ":" + (d.sub().kind() == DerivKind::Act ? to_string(d.sub()) : wrapped(d.sub()));
        case DerivKind::Dis0: return "{" + d.name() + ":}0";
        case DerivKind::Dis1: return "{" + d.name() + ":}(" + to_string(d.operand(), true) + ")";
        case DerivKind::Dis2: return wrapped(d.sub()) + "+" + wrapped(d.sub2());
        case DerivKind::DisRec: return d.name() + ":" + wrapped(d.sub());
        case DerivKind::DisRel: {
            std::string s = "{" + d.name() + ":}(";
            for (std::size_t i = 0; i < d.premises().size(); ++i)
                s += (i ? "," : "") + to_string(d.premises()[i]);
            return s + ")" + to_string(d.relabelling());
        }
    }
    return {};
}

bool non_blocking(const Label& l) { return l.is_tau() || l.is_send(); }

// ---------------------------------------------------------------- Semantics

Semantics::Semantics(Spec spec) : spec_(std::move(spec)) {}

const std::vector<Derivation>& Semantics::step_original(const Process& p) const { return original(p, 0); }
const std::vector<Derivation>& Semantics::step_discard(const Process& p) const { return discard(p, 0); }

const std::vector<Derivation>& Semantics::original(const Process& p, int depth) const {
    auto it = original_cache_.find(p);
    if (it != original_cache_.end()) return it->second;
    auto v = compute_original(p, depth);
    return original_cache_.emplace(p, std::move(v)).first->second;
}

const std::vector<Derivation>& Semantics::discard(const Process& p, int depth) const {
    auto it = discard_cache_.find(p);
    if (it != discard_cache_.end()) return it->second;
    auto v = compute_discard(p, depth);
    return discard_cache_.emplace(p, std::move(v)).first->second;
}

namespace {

bool has_label(const std::vector<Derivation>& ds, const Label& l) {
    return std::any_of(ds.begin(), ds.end(), [&](const Derivation& d) { return d.label() == l; });
}

void canonical(std::vector<Derivation>& ds) {
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
}

}  // namespace

std::vector<Derivation> Semantics::compute_original(const Process& p, int depth) const {
    if (depth > kMaxUnfoldDepth) throw UnguardedRecursion("unguarded recursion while deriving " + to_string(p));
    std::vector<Derivation> out;
    switch (p.kind()) {
        case ProcKind::Nil:
            break;
        case ProcKind::Prefix:
            out.push_back(Derivation::act(p.action(), p.body()));
            break;
        case ProcKind::Choice:
            for (const auto& d : original(p.left(), depth + 1)) out.push_back(Derivation::sum_l(d, p.right()));
            for (const auto& d : original(p.right(), depth + 1)) out.push_back(Derivation::sum_r(p.left(), d));
            break;
        case ProcKind::Par: {
            const auto& L = original(p.left(), depth + 1);
            const auto& R = original(p.right(), depth + 1);
            for (const auto& d : L) {
                const Label& l = d.label();
                if (!l.is_broadcast() || !has_label(R, Label::receive(l.name)))
                    out.push_back(Derivation::par_l(d, p.right()));
            }
            for (const auto& e : R) {
                const Label& l = e.label();
                if (!l.is_broadcast() || !has_label(L, Label::receive(l.name)))
                    out.push_back(Derivation::par_r(p.left(), e));
            }
            for (const auto& d : L)
                for (const auto& e : R)
                    if (auto s = Derivation::sync(d, e)) out.push_back(std::move(*s));
            break;
        }
        case ProcKind::Restrict:
            for (const auto& d : original(p.body(), depth + 1))
                if (!(d.label().is_handshake() && d.label().name == p.name()))
                    out.push_back(Derivation::res(d, p.name()));
            break;
        case ProcKind::Relabel:
            for (const auto& d : original(p.body(), depth + 1)) out.push_back(Derivation::rel(d, p.relabelling()));
            break;
        case ProcKind::Agent:
            for (const auto& d : original(spec_.body(p.name()), depth + 1))
                out.push_back(Derivation::rec(p.name(), d));
            break;
    }
    canonical(out);
    return out;
}

std::vector<Derivation> Semantics::compute_discard(const Process& p, int depth) const {
    if (depth > kMaxUnfoldDepth) throw UnguardedRecursion("unguarded recursion while deriving " + to_string(p));
    std::vector<Derivation> out;
    switch (p.kind()) {
        case ProcKind::Nil:
            for (const auto& b : spec_.broadcast_names) out.push_back(Derivation::dis0(b));
            break;
        case ProcKind::Prefix:
            out.push_back(Derivation::act(p.action(), p.body()));
            for (const auto& b : spec_.broadcast_names)
                if (p.action() != Label::receive(b)) out.push_back(Derivation::dis1(b, p));
            break;
        case ProcKind::Choice: {
            const auto& L = discard(p.left(), depth + 1);
            const auto& R = discard(p.right(), depth + 1);
            for (const auto& d : L)
                if (!d.label().is_discard()) out.push_back(Derivation::sum_l(d, p.right()));
            for (const auto& e : R)
                if (!e.label().is_discard()) out.push_back(Derivation::sum_r(p.left(), e));
            for (const auto& d : L)
                for (const auto& e : R)
                    if (d.label().is_discard() && d.label() == e.label()) out.push_back(Derivation::dis2(d, e));
            break;
        }
        case ProcKind::Par: {
            const auto& L = discard(p.left(), depth + 1);
            const auto& R = discard(p.right(), depth + 1);
            for (const auto& d : L)
                if (!d.label().is_broadcast()) out.push_back(Derivation::par_l(d, p.right()));
            for (const auto& e : R)
                if (!e.label().is_broadcast()) out.push_back(Derivation::par_r(p.left(), e));
            for (const auto& d : L)
                for (const auto& e : R)
                    if (auto s = Derivation::sync(d, e)) out.push_back(std::move(*s));
            break;
        }
        case ProcKind::Restrict:
            for (const auto& d : discard(p.body(), depth + 1))
                if (!(d.label().is_handshake() && d.label().name == p.name()))
                    out.push_back(Derivation::res(d, p.name()));
            break;
        case ProcKind::Relabel: {
            const auto& L = discard(p.body(), depth + 1);
            const Relabelling& f = p.relabelling();
            for (const auto& d : L)
                if (!d.label().is_discard()) out.push_back(Derivation::rel(d, f));
            for (const auto& b : spec_.broadcast_names) {
                std::vector<Derivation> premises;
                bool all = true;
                for (const auto& pre : spec_.broadcast_names) {
                    if (f.apply_broadcast(pre) != b) continue;
                    auto it = std::find_if(L.begin(), L.end(),
                                           [&](const Derivation& d) { return d.label() == Label::discard(pre); });
                    if (it == L.end()) {
                        all = false;
                        break;
                    }
                    premises.push_back(*it);
                }
                if (all) out.push_back(Derivation::dis_rel(b, p.body(), f, std::move(premises)));
            }
            break;
        }
        case ProcKind::Agent:
            for (const auto& d : discard(spec_.body(p.name()), depth + 1)) {
                if (d.label().is_discard())
                    out.push_back(Derivation::dis_rec(p.name(), d));
                else
                    out.push_back(Derivation::rec(p.name(), d));
            }
            break;
    }
    canonical(out);
    return out;
}

bool Semantics::admits(const Process& p, const Label& l) const {
    return has_label(l.is_discard() ? step_discard(p) : step_original(p), l);
}

bool Semantics::admits_nonblocking(const Process& p) const {
    const auto& ds = step_original(p);
    return std::any_of(ds.begin(), ds.end(), [](const Derivation& d) { return non_blocking(d.label()); });
}

// ---------------------------------------------------------------- LTS

int LtsGraph::find(const Process& p) const {
    auto it = index.find(p);
    return it == index.end() ? -1 : it->second;
}

LtsGraph reachable(const Process& init, const Semantics& sem, std::size_t max_states) {
    LtsGraph g;
    g.states.push_back(init);
    g.index.emplace(init, 0);
    g.out.emplace_back();
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        Process p = g.states[i];
        for (const auto& d : sem.step_original(p)) {
            auto [it, fresh] = g.index.emplace(d.target(), static_cast<int>(g.states.size()));
            if (fresh) {
                if (g.states.size() >= max_states) throw StateBoundExceeded(max_states, to_string(d.target()));
                g.states.push_back(d.target());
                g.out.emplace_back();
            }
            g.out[i].push_back(static_cast<int>(g.edges.size()));
            g.edges.push_back({static_cast<int>(i), d, it->second});
        }
    }
    return g;
}

}  // namespace abc
