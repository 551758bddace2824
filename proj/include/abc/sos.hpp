#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "abc/syntax.hpp"

namespace abc {

// Act..Rec mirror the rules of the original semantics; Dis* build discard
// transitions (b:) which only the discard semantics produces.
enum class DerivKind : std::uint8_t {
    Act,     // <a>P
    SumL,    // d+Q
    SumR,    // P+d
    ParL,    // d|Q
    ParR,    // P|d
    Sync,    // d|e
    Res,     // d\c
    Rel,     // d[f]
    Rec,     // A:d
    Dis0,    // 0 -b:-> 0
    Dis1,    // a.P -b:-> a.P for a != b?
    Dis2,    // d+e on two discards
    DisRec,  // A -b:-> A from a discard of the body
    DisRel,  // P[f] -b:-> P[f] from discards of every preimage of b
};

struct DerivationNode;

class Derivation {
public:
    static Derivation act(Action a, Process body);
    static Derivation sum_l(Derivation d, Process right);
    static Derivation sum_r(Process left, Derivation d);
    static Derivation par_l(Derivation d, Process right);
    static Derivation par_r(Process left, Derivation d);
    // Returns nullopt when the labels do not synchronise.
    static std::optional<Derivation> sync(Derivation l, Derivation r);
    static Derivation res(Derivation d, std::string channel);
    static Derivation rel(Derivation d, Relabelling f);
    static Derivation rec(std::string agent, Derivation d);
    static Derivation dis0(std::string b);
    static Derivation dis1(std::string b, Process prefixed);
    static Derivation dis2(Derivation l, Derivation r);
    static Derivation dis_rec(std::string agent, Derivation d);
    static Derivation dis_rel(std::string b, Process body, Relabelling f, std::vector<Derivation> premises);

    DerivKind kind() const;
    const Label& label() const;
    const Process& source() const;
    const Process& target() const;
    const Derivation& sub() const;   // the premise of unary rules, the left premise of Sync/Dis2
    const Derivation& sub2() const;  // the right premise of Sync/Dis2
    const std::vector<Derivation>& premises() const;
    const Process& operand() const;  // Act body, the idle side of Sum/Par, the Dis1 process
    const std::string& name() const;  // Res channel, Rec agent, Dis0/Dis1/DisRel broadcast name
    const Relabelling& relabelling() const;
    std::size_t hash() const;

    friend bool operator==(const Derivation& a, const Derivation& b);
    friend std::strong_ordering operator<=>(const Derivation& a, const Derivation& b);

private:
    explicit Derivation(std::shared_ptr<const DerivationNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const DerivationNode> node_;
};

struct DerivationNode {
    DerivKind kind = DerivKind::Act;
    Label label;
    Process source;
    Process target;
    Process operand;
    std::string name;
    std::shared_ptr<const Relabelling> relabelling;
    std::vector<Derivation> premises;
    std::size_t hash = 0;
};

std::string to_string(const Derivation& d);

// Composition of broadcast modes: ! with ? is !, ? with ? is ?, and so on;
// !/! is undefined. Discard (:) acts as a unit.
std::optional<LabelKind> compose_broadcast(LabelKind a, LabelKind b);

class UnguardedRecursion : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Both transition relations over one spec, with per-object memo tables.
class Semantics {
public:
    explicit Semantics(Spec spec);

    const Spec& spec() const { return spec_; }

    const std::vector<Derivation>& step_original(const Process& p) const;
    const std::vector<Derivation>& step_discard(const Process& p) const;
    bool admits(const Process& p, const Label& l) const;
    bool admits_nonblocking(const Process& p) const;

private:
    std::vector<Derivation> compute_original(const Process& p, int depth) const;
    std::vector<Derivation> compute_discard(const Process& p, int depth) const;
    const std::vector<Derivation>& original(const Process& p, int depth) const;
    const std::vector<Derivation>& discard(const Process& p, int depth) const;

    Spec spec_;
    mutable std::unordered_map<Process, std::vector<Derivation>> original_cache_;
    mutable std::unordered_map<Process, std::vector<Derivation>> discard_cache_;
};

bool non_blocking(const Label& l);

class StateBoundExceeded : public std::runtime_error {
public:
    StateBoundExceeded(std::size_t bound, std::string sample)
        : std::runtime_error("state bound " + std::to_string(bound) + " exceeded; frontier includes " + sample),
          bound_(bound) {}
    std::size_t bound() const { return bound_; }

private:
    std::size_t bound_;
};

struct Edge {
    int src;
    Derivation derivation;
    int tgt;
    const Label& label() const { return derivation.label(); }
};

// Reachable fragment of the original semantics, states in discovery order.
struct LtsGraph {
    std::vector<Process> states;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> out;  // edge indices per state
    std::unordered_map<Process, int> index;
    int init = 0;

    int find(const Process& p) const;
};

constexpr std::size_t kDefaultMaxStates = 100000;

LtsGraph reachable(const Process& init, const Semantics& sem, std::size_t max_states = kDefaultMaxStates);

std::string to_dot(const LtsGraph& g);
std::string to_json(const LtsGraph& g);
std::string to_text(const LtsGraph& g);

}  // namespace abc

template <>
struct std::hash<abc::Derivation> {
    std::size_t operator()(const abc::Derivation& d) const { return d.hash(); }
};
