#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace abc {

enum class LabelKind : std::uint8_t { Tau, Hand, CoHand, Send, Receive, Discard };

// A transition label. Prefix actions use every kind except Discard.
struct Label {
    LabelKind kind = LabelKind::Tau;
    std::string name;

    static Label tau() { return {LabelKind::Tau, {}}; }
    static Label hand(std::string n) { return {LabelKind::Hand, std::move(n)}; }
    static Label cohand(std::string n) { return {LabelKind::CoHand, std::move(n)}; }
    static Label send(std::string n) { return {LabelKind::Send, std::move(n)}; }
    static Label receive(std::string n) { return {LabelKind::Receive, std::move(n)}; }
    static Label discard(std::string n) { return {LabelKind::Discard, std::move(n)}; }

    bool is_tau() const { return kind == LabelKind::Tau; }
    bool is_handshake() const { return kind == LabelKind::Hand || kind == LabelKind::CoHand; }
    bool is_broadcast() const {
        return kind == LabelKind::Send || kind == LabelKind::Receive || kind == LabelKind::Discard;
    }
    bool is_send() const { return kind == LabelKind::Send; }
    bool is_receive() const { return kind == LabelKind::Receive; }
    bool is_discard() const { return kind == LabelKind::Discard; }
    bool is_action() const { return kind != LabelKind::Discard; }

    friend bool operator==(const Label&, const Label&) = default;
    friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        return a.name.compare(b.name) <=> 0;
    }
};

using Action = Label;

std::string to_string(const Label& l);
std::size_t hash_value(const Label& l);

// Handshake complement: c <-> 'c. Throws std::invalid_argument for other labels.
Label complement(const Label& l);

// Kind-preserving renaming. Names missing from a map are left alone.
struct Relabelling {
    std::map<std::string, std::string> broadcast;
    std::map<std::string, std::string> handshake;

    std::string apply_broadcast(const std::string& n) const;
    std::string apply_handshake(const std::string& n) const;
    bool empty() const { return broadcast.empty() && handshake.empty(); }

    friend bool operator==(const Relabelling&, const Relabelling&) = default;
    friend std::strong_ordering operator<=>(const Relabelling& a, const Relabelling& b);
};

Label apply_relabelling(const Relabelling& f, const Label& l);
std::string to_string(const Relabelling& f);
std::size_t hash_value(const Relabelling& f);

enum class ProcKind : std::uint8_t { Nil, Prefix, Choice, Par, Restrict, Relabel, Agent };

struct ProcessNode;

// Immutable process term with structural equality. Copies share structure.
class Process {
public:
    Process();  // 0

    static Process nil();
    static Process prefix(Action a, Process body);
    static Process choice(Process l, Process r);
    static Process par(Process l, Process r);
    static Process restrict(Process body, std::string channel);
    static Process relabel(Process body, Relabelling f);
    static Process agent(std::string name);

    ProcKind kind() const;
    const Action& action() const;          // Prefix
    const Process& body() const;           // Prefix, Restrict, Relabel
    const Process& left() const;           // Choice, Par
    const Process& right() const;          // Choice, Par
    const std::string& name() const;       // Restrict channel, Agent identifier
    const Relabelling& relabelling() const;  // Relabel
    std::size_t hash() const;
    std::size_t size() const;

    bool same_node(const Process& o) const { return node_ == o.node_; }

    friend bool operator==(const Process& a, const Process& b);
    friend std::strong_ordering operator<=>(const Process& a, const Process& b);

private:
    explicit Process(std::shared_ptr<const ProcessNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ProcessNode> node_;
};

struct ProcessNode {
    ProcKind kind = ProcKind::Nil;
    Action action;
    std::string name;
    std::shared_ptr<const Relabelling> relabelling;
    Process first;
    Process second;
    std::size_t hash = 0;
    std::size_t size = 1;
};

struct ProcessHash {
    std::size_t operator()(const Process& p) const { return p.hash(); }
};

// Full spec: alphabets, agent definitions, initial process.
struct Spec {
    std::set<std::string> broadcast_names;
    std::set<std::string> handshake_names;
    std::map<std::string, Process> env;
    Process init;

    const Process& body(const std::string& agent) const;
    std::vector<Label> handshake_actions() const;  // c and 'c for each handshake name

    friend bool operator==(const Spec&, const Spec&) = default;
};

struct Sort {
    std::set<std::string> broadcast;
    std::set<std::string> handshake;
    friend bool operator==(const Sort&, const Sort&) = default;
};

// Names syntactically reachable from p through agent bodies and relabelling ranges.
Sort sort(const Process& p, const Spec& spec);

// Printing. The compact form drops spaces around + and | and is used inside
// derivation and abstract-transition renderings.
std::string to_string(const Process& p, bool compact = false);
std::string to_string(const Spec& s);

// Agent occurrences in p that are not under a prefix.
std::vector<std::string> unguarded_agents(const Process& p);

}  // namespace abc

template <>
struct std::hash<abc::Process> {
    std::size_t operator()(const abc::Process& p) const { return p.hash(); }
};
template <>
struct std::hash<abc::Label> {
    std::size_t operator()(const abc::Label& l) const { return abc::hash_value(l); }
};
