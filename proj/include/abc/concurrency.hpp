#pragma once

#include <memory>
#include <string>
#include <vector>

#include "abc/sos.hpp"

namespace abc {

// chi is concurrent with zeta: the occurrence of zeta does not affect chi.
bool concurrent_oneway(const Derivation& chi, const Derivation& zeta);
// Both directions.
bool concurrent(const Derivation& chi, const Derivation& zeta);

enum class AbsKind : std::uint8_t { Prefix, ParL, ParR, Sync, Res, Rel };

struct AbstractNode;

// Equivalence class of derivations that differ only in idle context,
// choice context, agent unfolding and absorbed receivers.
class AbstractTransition {
public:
    static AbstractTransition prefix(Action a, Process body);
    static AbstractTransition par_l(AbstractTransition inner);  // nu|_
    static AbstractTransition par_r(AbstractTransition inner);  // _|nu
    static AbstractTransition sync(AbstractTransition l, AbstractTransition r);
    static AbstractTransition res(AbstractTransition inner, std::string channel);
    static AbstractTransition rel(AbstractTransition inner, Relabelling f);

    AbsKind kind() const;
    const Label& label() const;
    const Process& body() const;  // Prefix
    const AbstractTransition& inner() const;
    const AbstractTransition& inner2() const;
    const std::string& channel() const;
    const Relabelling& relabelling() const;
    std::size_t hash() const;

    friend bool operator==(const AbstractTransition& a, const AbstractTransition& b);
    friend std::strong_ordering operator<=>(const AbstractTransition& a, const AbstractTransition& b);

private:
    explicit AbstractTransition(std::shared_ptr<const AbstractNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const AbstractNode> node_;
};

struct AbstractNode {
    AbsKind kind = AbsKind::Prefix;
    Label label;
    Process body;
    std::string channel;
    std::shared_ptr<const Relabelling> relabelling;
    std::vector<AbstractTransition> inner;
    std::size_t hash = 0;
};

std::string to_string(const AbstractTransition& nu);

class ReceiveLabel : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Throws ReceiveLabel for derivations labelled b?.
AbstractTransition abstract_of(const Derivation& chi);
bool equiv(const Derivation& chi, const Derivation& zeta);

// Derivations from p whose abstract transition is nu.
std::vector<Derivation> representatives(const AbstractTransition& nu, const Process& p, const Semantics& sem);

// Abstract transitions of the non-receive derivations from p, sorted, no duplicates.
std::vector<AbstractTransition> abstract_transitions(const Process& p, const Semantics& sem);

bool enabled(const AbstractTransition& nu, const Process& p, const Semantics& sem);
bool enabled(const AbstractTransition& nu, const Derivation& zeta, const Semantics& sem);

}  // namespace abc

template <>
struct std::hash<abc::AbstractTransition> {
    std::size_t operator()(const abc::AbstractTransition& n) const { return n.hash(); }
};
