#include "abc/syntax.hpp"

#include <functional>
#include <sstream>

namespace abc {

namespace {

constexpr std::size_t kNilHash = 0x9e3779b97f4a7c15ULL;

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const Relabelling& empty_relabelling() {
    static const Relabelling r;
    return r;
}

const Label& tau_label() {
    static const Label l = Label::tau();
    return l;
}

const std::string& empty_string() {
    static const std::string s;
    return s;
}

}  // namespace

std::string to_string(const Label& l) {
    switch (l.kind) {
        case LabelKind::Tau: return "tau";
        case LabelKind::Hand: return l.name;
        case LabelKind::CoHand: return "'" + l.name;
        case LabelKind::Send: return l.name + "!";
        case LabelKind::Receive: return l.name + "?";
        case LabelKind::Discard: return l.name + ":";
    }
    return {};
}

std::size_t hash_value(const Label& l) {
    return mix(static_cast<std::size_t>(l.kind) + 1, std::hash<std::string>{}(l.name));
}

Label complement(const Label& l) {
    if (l.kind == LabelKind::Hand) return Label::cohand(l.name);
    if (l.kind == LabelKind::CoHand) return Label::hand(l.name);
    throw std::invalid_argument("no complement for " + to_string(l));
}

std::string Relabelling::apply_broadcast(const std::string& n) const {
    auto it = broadcast.find(n);
    return it == broadcast.end() ? n : it->second;
}

std::string Relabelling::apply_handshake(const std::string& n) const {
    auto it = handshake.find(n);
    return it == handshake.end() ? n : it->second;
}

std::strong_ordering operator<=>(const Relabelling& a, const Relabelling& b) {
    auto cmp_map = [](const auto& x, const auto& y) {
        auto i = x.begin();
        auto j = y.begin();
        for (; i != x.end() && j != y.end(); ++i, ++j) {
            if (int c = i->first.compare(j->first); c != 0) return c <=> 0;
            if (int c = i->second.compare(j->second); c != 0) return c <=> 0;
        }
        return x.size() <=> y.size();
    };
    if (auto c = cmp_map(a.broadcast, b.broadcast); c != 0) return c;
    return cmp_map(a.handshake, b.handshake);
}

Label apply_relabelling(const Relabelling& f, const Label& l) {
    if (l.is_handshake()) return {l.kind, f.apply_handshake(l.name)};
    if (l.is_broadcast()) return {l.kind, f.apply_broadcast(l.name)};
    return l;
}

std::string to_string(const Relabelling& f) {
    std::string out = "[";
    bool first = true;
    auto emit = [&](const auto& m) {
        for (const auto& [from, to] : m) {
            if (!first) out += ",";
            first = false;
            out += to + "/" + from;
        }
    };
    emit(f.broadcast);
    emit(f.handshake);
    return out + "]";
}

std::size_t hash_value(const Relabelling& f) {
    std::size_t h = 17;
    std::hash<std::string> hs;
    for (const auto& [a, b] : f.broadcast) h = mix(mix(h, hs(a)), hs(b));
    h = mix(h, 31);
    for (const auto& [a, b] : f.handshake) h = mix(mix(h, hs(a)), hs(b));
    return h;
}

// ---------------------------------------------------------------- Process

Process::Process() = default;

Process Process::nil() { return Process(); }

Process Process::prefix(Action a, Process body) {
    auto n = std::make_shared<ProcessNode>();
    n->kind = ProcKind::Prefix;
    n->hash = mix(mix(2, hash_value(a)), body.hash());
    n->size = 1 + body.size();
    n->action = std::move(a);
    n->first = std::move(body);
    return Process(std::move(n));
}

Process Process::choice(Process l, Process r) {
    auto n = std::make_shared<ProcessNode>();
    n->kind = ProcKind::Choice;
    n->hash = mix(mix(3, l.hash()), r.hash());
    n->size = 1 + l.size() + r.size();
    n->first = std::move(l);
    n->second = std::move(r);
    return Process(std::move(n));
}

Process Process::par(Process l, Process r) {
    auto n = std::make_shared<ProcessNode>();
    n->kind = ProcKind::Par;
    n->hash = mix(mix(4, l.hash()), r.hash());
    n->size = 1 + l.size() + r.size();
    n->first = std::move(l);
    n->second = std::move(r);
    return Process(std::move(n));
}

Process Process::restrict(Process body, std::string channel) {
    auto n = std::make_shared<ProcessNode>();
    n->kind = ProcKind::Restrict;
    n->hash = mix(mix(5, body.hash()), std::hash<std::string>{}(channel));
    n->size = 1 + body.size();
    n->first = std::move(body);
    n->name = std::move(channel);
    return Process(std::move(n));
}

Process Process::relabel(Process body, Relabelling f) {
    auto n = std::make_shared<ProcessNode>();
    n->kind = ProcKind::Relabel;
    n->hash = mix(mix(6, body.hash()), hash_value(f));
    n->size = 1 + body.size();
    n->first = std::move(body);
    n->relabelling = std::make_shared<const Relabelling>(std::move(f));
    return Process(std::move(n));
}

Process Process::agent(std::string name) {
    auto n = std::make_shared<ProcessNode>();
    n->kind = ProcKind::Agent;
    n->hash = mix(7, std::hash<std::string>{}(name));
    n->name = std::move(name);
    return Process(std::move(n));
}

ProcKind Process::kind() const { return node_ ? node_->kind : ProcKind::Nil; }
const Action& Process::action() const { return node_ ? node_->action : tau_label(); }
const Process& Process::body() const { return node_->first; }
const Process& Process::left() const { return node_->first; }
const Process& Process::right() const { return node_->second; }
const std::string& Process::name() const { return node_ ? node_->name : empty_string(); }
const Relabelling& Process::relabelling() const {
    return node_ && node_->relabelling ? *node_->relabelling : empty_relabelling();
}
std::size_t Process::hash() const { return node_ ? node_->hash : kNilHash; }
std::size_t Process::size() const { return node_ ? node_->size : 1; }

bool operator==(const Process& a, const Process& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size()) return false;
    return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Process& a, const Process& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    switch (a.kind()) {
        case ProcKind::Nil:
            return std::strong_ordering::equal;
        case ProcKind::Prefix:
            if (auto c = a.action() <=> b.action(); c != 0) return c;
            return a.body() <=> b.body();
        case ProcKind::Choice:
        case ProcKind::Par:
            if (auto c = a.left() <=> b.left(); c != 0) return c;
            return a.right() <=> b.right();
        case ProcKind::Restrict:
            if (int c = a.name().compare(b.name()); c != 0) return c <=> 0;
            return a.body() <=> b.body();
        case ProcKind::Relabel:
            if (auto c = a.relabelling() <=> b.relabelling(); c != 0) return c;
            return a.body() <=> b.body();
        case ProcKind::Agent:
            return a.name().compare(b.name()) <=> 0;
    }
    return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- Spec

const Process& Spec::body(const std::string& agent) const {
    auto it = env.find(agent);
    if (it == env.end()) throw std::out_of_range("undefined agent " + agent);
    return it->second;
}

std::vector<Label> Spec::handshake_actions() const {
    std::vector<Label> out;
    for (const auto& c : handshake_names) {
        out.push_back(Label::hand(c));
        out.push_back(Label::cohand(c));
    }
    return out;
}

Sort sort(const Process& p, const Spec& spec) {
    Sort s;
    std::set<std::string> seen;
    std::vector<Process> todo{p};
    while (!todo.empty()) {
        Process q = todo.back();
        todo.pop_back();
        switch (q.kind()) {
            case ProcKind::Nil: break;
            case ProcKind::Prefix: {
                const Action& a = q.action();
                if (a.is_handshake()) s.handshake.insert(a.name);
                if (a.is_broadcast()) s.broadcast.insert(a.name);
                todo.push_back(q.body());
                break;
            }
            case ProcKind::Choice:
            case ProcKind::Par:
                todo.push_back(q.left());
                todo.push_back(q.right());
                break;
            case ProcKind::Restrict:
                todo.push_back(q.body());
                break;
            case ProcKind::Relabel: {
                // Names of the body are reported through the renaming.
                Sort inner = sort(q.body(), spec);
                const Relabelling& f = q.relabelling();
                for (const auto& b : inner.broadcast) s.broadcast.insert(f.apply_broadcast(b));
                for (const auto& c : inner.handshake) s.handshake.insert(f.apply_handshake(c));
                break;
            }
            case ProcKind::Agent:
                if (seen.insert(q.name()).second) {
                    auto it = spec.env.find(q.name());
                    if (it != spec.env.end()) todo.push_back(it->second);
                }
                break;
        }
    }
    return s;
}

// ---------------------------------------------------------------- printing

namespace {

// Levels: 0 left of +, 1 right of + or left of |, 2 right of | or prefix body,
// 3 operand of \c or [f].
void print(std::ostream& os, const Process& p, int level, bool compact) {
    const char* plus = compact ? "+" : " + ";
    const char* bar = compact ? "|" : " | ";
    switch (p.kind()) {
        case ProcKind::Nil:
            os << '0';
            return;
        case ProcKind::Agent:
            os << p.name();
            return;
        case ProcKind::Prefix:
            if (level == 3) {
                os << '(';
                print(os, p, 0, compact);
                os << ')';
                return;
            }
            os << to_string(p.action()) << '.';
            print(os, p.body(), 2, compact);
            return;
        case ProcKind::Choice:
            if (level >= 1) {
                os << '(';
                print(os, p, 0, compact);
                os << ')';
                return;
            }
            print(os, p.left(), 0, compact);
            os << plus;
            print(os, p.right(), 1, compact);
            return;
        case ProcKind::Par:
            if (level >= 2) {
                os << '(';
                print(os, p, 0, compact);
                os << ')';
                return;
            }
            print(os, p.left(), 1, compact);
            os << bar;
            print(os, p.right(), 2, compact);
            return;
        case ProcKind::Restrict:
            print(os, p.body(), 3, compact);
            os << '\\' << p.name();
            return;
        case ProcKind::Relabel:
            print(os, p.body(), 3, compact);
            os << to_string(p.relabelling());
            return;
    }
}

}  // namespace

std::string to_string(const Process& p, bool compact) {
    std::ostringstream os;
    print(os, p, 0, compact);
    return os.str();
}

std::string to_string(const Spec& s) {
    std::ostringstream os;
    if (!s.broadcast_names.empty()) {
        os << "broadcast";
        for (const auto& b : s.broadcast_names) os << ' ' << b;
        os << ";\n";
    }
    if (!s.handshake_names.empty()) {
        os << "handshake";
        for (const auto& c : s.handshake_names) os << ' ' << c;
        os << ";\n";
    }
    for (const auto& [name, body] : s.env) os << "agent " << name << " = " << to_string(body) << '\n';
    os << "init " << to_string(s.init) << '\n';
    return os.str();
}

std::vector<std::string> unguarded_agents(const Process& p) {
    std::vector<std::string> out;
    std::vector<Process> todo{p};
    while (!todo.empty()) {
        Process q = todo.back();
        todo.pop_back();
        switch (q.kind()) {
            case ProcKind::Nil:
            case ProcKind::Prefix:
                break;
            case ProcKind::Agent:
                out.push_back(q.name());
                break;
            case ProcKind::Choice:
            case ProcKind::Par:
                todo.push_back(q.left());
                todo.push_back(q.right());
                break;
            case ProcKind::Restrict:
            case ProcKind::Relabel:
                todo.push_back(q.body());
                break;
        }
    }
    return out;
}

}  // namespace abc
