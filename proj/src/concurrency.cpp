#include "abc/concurrency.hpp"

#include <algorithm>
#include <functional>

namespace abc {

namespace {

using K = DerivKind;

bool receive(const Derivation& d) { return d.label().is_receive(); }

}  // namespace

bool concurrent_oneway(const Derivation& a, const Derivation& b) {
    switch (a.kind()) {
        case K::SumL:
            return b.kind() == K::SumL && a.operand() == b.operand() && concurrent_oneway(a.sub(), b.sub());
        case K::SumR:
            return b.kind() == K::SumR && a.operand() == b.operand() && concurrent_oneway(a.sub(), b.sub());
        case K::Res:
            return b.kind() == K::Res && a.name() == b.name() && concurrent_oneway(a.sub(), b.sub());
        case K::Rel:
            return b.kind() == K::Rel && a.relabelling() == b.relabelling() &&
                   concurrent_oneway(a.sub(), b.sub());
        case K::Rec:
            return b.kind() == K::Rec && a.name() == b.name() && concurrent_oneway(a.sub(), b.sub());
        case K::ParL:
            // chi|Q against P|zeta, chi|P against zeta|P, chi|P against zeta|xi
            if (b.kind() == K::ParR)
                return a.sub().source() == b.operand() && b.sub().source() == a.operand();
            if (b.kind() == K::ParL)
                return a.operand() == b.operand() && concurrent_oneway(a.sub(), b.sub());
            if (b.kind() == K::Sync)
                return a.operand() == b.sub2().source() && concurrent_oneway(a.sub(), b.sub());
            return false;
        case K::ParR:
            if (b.kind() == K::ParL)
                return b.sub().source() == a.operand() && a.sub().source() == b.operand();
            if (b.kind() == K::ParR)
                return a.operand() == b.operand() && concurrent_oneway(a.sub(), b.sub());
            if (b.kind() == K::Sync)
                return a.operand() == b.sub().source() && concurrent_oneway(a.sub(), b.sub2());
            return false;
        case K::Sync: {
            const Derivation& l = a.sub();
            const Derivation& r = a.sub2();
            if (b.kind() == K::ParR) {
                // chi|s against P|zeta with s a receive that zeta may replace
                if (l.source() == b.operand() && r.source() == b.sub().source() && receive(r)) return true;
                return b.operand() == l.source() && concurrent_oneway(r, b.sub());
            }
            if (b.kind() == K::ParL) {
                if (r.source() == b.operand() && l.source() == b.sub().source() && receive(l)) return true;
                return b.operand() == r.source() && concurrent_oneway(l, b.sub());
            }
            if (b.kind() == K::Sync) {
                const Derivation& bl = b.sub();
                const Derivation& br = b.sub2();
                if (receive(r) && r.source() == br.source() && concurrent_oneway(l, bl)) return true;
                if (receive(l) && l.source() == bl.source() && concurrent_oneway(r, br)) return true;
                return concurrent_oneway(l, bl) && concurrent_oneway(r, br);
            }
            return false;
        }
        default:
            return false;
    }
}

bool concurrent(const Derivation& chi, const Derivation& zeta) {
    return concurrent_oneway(chi, zeta) && concurrent_oneway(zeta, chi);
}

// ---------------------------------------------------------------- abstract transitions

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const Relabelling& no_relabelling() {
    static const Relabelling r;
    return r;
}

}  // namespace

AbstractTransition AbstractTransition::prefix(Action a, Process body) {
    auto n = std::make_shared<AbstractNode>();
    n->kind = AbsKind::Prefix;
    n->label = std::move(a);
    n->body = std::move(body);
    n->hash = mix(mix(101, hash_value(n->label)), n->body.hash());
    return AbstractTransition(std::move(n));
}

AbstractTransition AbstractTransition::par_l(AbstractTransition inner) {
    auto n = std::make_shared<AbstractNode>();
    n->kind = AbsKind::ParL;
    n->label = inner.label();
    n->hash = mix(102, inner.hash());
    n->inner.push_back(std::move(inner));
    return AbstractTransition(std::move(n));
}

AbstractTransition AbstractTransition::par_r(AbstractTransition inner) {
    auto n = std::make_shared<AbstractNode>();
    n->kind = AbsKind::ParR;
    n->label = inner.label();
    n->hash = mix(103, inner.hash());
    n->inner.push_back(std::move(inner));
    return AbstractTransition(std::move(n));
}

AbstractTransition AbstractTransition::sync(AbstractTransition l, AbstractTransition r) {
    auto n = std::make_shared<AbstractNode>();
    n->kind = AbsKind::Sync;
    n->label = Label::tau();
    n->hash = mix(mix(104, l.hash()), r.hash());
    n->inner.push_back(std::move(l));
    n->inner.push_back(std::move(r));
    return AbstractTransition(std::move(n));
}

AbstractTransition AbstractTransition::res(AbstractTransition inner, std::string channel) {
    auto n = std::make_shared<AbstractNode>();
    n->kind = AbsKind::Res;
    n->label = inner.label();
    n->channel = std::move(channel);
    n->hash = mix(mix(105, inner.hash()), std::hash<std::string>{}(n->channel));
    n->inner.push_back(std::move(inner));
    return AbstractTransition(std::move(n));
}

AbstractTransition AbstractTransition::rel(AbstractTransition inner, Relabelling f) {
    auto n = std::make_shared<AbstractNode>();
    n->kind = AbsKind::Rel;
    n->label = apply_relabelling(f, inner.label());
    n->hash = mix(mix(106, inner.hash()), hash_value(f));
    n->relabelling = std::make_shared<const Relabelling>(std::move(f));
    n->inner.push_back(std::move(inner));
    return AbstractTransition(std::move(n));
}

AbsKind AbstractTransition::kind() const { return node_->kind; }
const Label& AbstractTransition::label() const { return node_->label; }
const Process& AbstractTransition::body() const { return node_->body; }
const AbstractTransition& AbstractTransition::inner() const { return node_->inner.at(0); }
const AbstractTransition& AbstractTransition::inner2() const { return node_->inner.at(1); }
const std::string& AbstractTransition::channel() const { return node_->channel; }
const Relabelling& AbstractTransition::relabelling() const {
    return node_->relabelling ? *node_->relabelling : no_relabelling();
}
std::size_t AbstractTransition::hash() const { return node_->hash; }

bool operator==(const AbstractTransition& a, const AbstractTransition& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash()) return false;
    return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const AbstractTransition& a, const AbstractTransition& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    if (auto c = a.label() <=> b.label(); c != 0) return c;
    if (auto c = a.body() <=> b.body(); c != 0) return c;
    if (int c = a.channel().compare(b.channel()); c != 0) return c <=> 0;
    if (auto c = a.relabelling() <=> b.relabelling(); c != 0) return c;
    const auto& ia = a.node_->inner;
    const auto& ib = b.node_->inner;
    for (std::size_t i = 0; i < ia.size() && i < ib.size(); ++i)
        if (auto c = ia[i] <=> ib[i]; c != 0) return c;
    return ia.size() <=> ib.size();
}

std::string to_string(const AbstractTransition& nu) {
    auto w = [](const AbstractTransition& x) { return "(" + to_string(x) + ")"; };
    switch (nu.kind()) {
        case AbsKind::Prefix: {
            std::string body = to_string(nu.body(), true);
            if (nu.body().kind() == ProcKind::Choice || nu.body().kind() == ProcKind::Par) body = "(" + body + ")";
            return "<" + to_string(nu.label()) + ">" + body;
        }
        case AbsKind::ParL: return w(nu.inner()) + "|_";
        case AbsKind::ParR: return "_|" + w(nu.inner());
        case AbsKind::Sync: return w(nu.inner()) + "|" + w(nu.inner2());
        case AbsKind::Res: return w(nu.inner()) + "\\" + nu.channel();
        case AbsKind::Rel: return w(nu.inner()) + to_string(nu.relabelling());
    }
    return {};
}

namespace {

AbstractTransition abstract_rec(const Derivation& d) {
    switch (d.kind()) {
        case K::Act: return AbstractTransition::prefix(d.label(), d.operand());
        case K::SumL:
        case K::SumR:
        case K::Rec:
            return abstract_rec(d.sub());
        case K::ParL: return AbstractTransition::par_l(abstract_rec(d.sub()));
        case K::ParR: return AbstractTransition::par_r(abstract_rec(d.sub()));
        case K::Sync: {
            const Derivation& l = d.sub();
            const Derivation& r = d.sub2();
            if (l.label().is_handshake()) return AbstractTransition::sync(abstract_rec(l), abstract_rec(r));
            // A broadcast send absorbs its receivers.
            if (l.label().is_send()) return AbstractTransition::par_l(abstract_rec(l));
            return AbstractTransition::par_r(abstract_rec(r));
        }
        case K::Res: return AbstractTransition::res(abstract_rec(d.sub()), d.name());
        case K::Rel: return AbstractTransition::rel(abstract_rec(d.sub()), d.relabelling());
        default:
            throw std::invalid_argument("discard derivation has no abstract transition: " + to_string(d));
    }
}

}  // namespace

AbstractTransition abstract_of(const Derivation& chi) {
    if (chi.label().is_receive() || chi.label().is_discard())
        throw ReceiveLabel("no abstract transition for " + to_string(chi.label()) + " derivation " + to_string(chi));
    return abstract_rec(chi);
}

bool equiv(const Derivation& chi, const Derivation& zeta) { return abstract_of(chi) == abstract_of(zeta); }

std::vector<Derivation> representatives(const AbstractTransition& nu, const Process& p, const Semantics& sem) {
    std::vector<Derivation> out;
    for (const auto& d : sem.step_original(p))
        if (!d.label().is_receive() && d.label() == nu.label() && abstract_of(d) == nu) out.push_back(d);
    return out;
}

std::vector<AbstractTransition> abstract_transitions(const Process& p, const Semantics& sem) {
    std::vector<AbstractTransition> out;
    for (const auto& d : sem.step_original(p))
        if (!d.label().is_receive()) out.push_back(abstract_of(d));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool enabled(const AbstractTransition& nu, const Process& p, const Semantics& sem) {
    return !representatives(nu, p, sem).empty();
}

bool enabled(const AbstractTransition& nu, const Derivation& zeta, const Semantics& sem) {
    for (const auto& chi : representatives(nu, zeta.source(), sem))
        if (concurrent_oneway(chi, zeta)) return true;
    return false;
}

}  // namespace abc
