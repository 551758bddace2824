#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "abc/concurrency.hpp"
#include "abc/paths.hpp"

namespace abc {

enum class LtlKind : std::uint8_t {
    True,
    False,
    Label,  // <l>: the current state is a transition labelled l
    Nu,     // the current state is an occurrence of an abstract transition (U only)
    En,     // the abstract transition is enabled here (U only)
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Globally,
    Finally,
};

struct LtlNode;

class LtlFormula {
public:
    explicit LtlFormula(std::shared_ptr<const LtlNode> n) : node_(std::move(n)) {}

    static LtlFormula truth(bool v);
    static LtlFormula label(Label l);
    static LtlFormula nu(AbstractTransition t);
    static LtlFormula en(AbstractTransition t);
    static LtlFormula negate(LtlFormula a);
    static LtlFormula conj(LtlFormula a, LtlFormula b);
    static LtlFormula disj(LtlFormula a, LtlFormula b);
    static LtlFormula implies(LtlFormula a, LtlFormula b);
    static LtlFormula next(LtlFormula a);
    static LtlFormula until(LtlFormula a, LtlFormula b);
    static LtlFormula globally(LtlFormula a);
    static LtlFormula finally(LtlFormula a);

    LtlKind kind() const;
    const Label& atom_label() const;
    const AbstractTransition& atom_transition() const;
    const LtlFormula& lhs() const;
    const LtlFormula& rhs() const;
    const LtlNode* id() const { return node_.get(); }

private:
    std::shared_ptr<const LtlNode> node_;
};

struct LtlNode {
    LtlKind kind = LtlKind::True;
    Label label;
    std::vector<AbstractTransition> transition;  // empty or one
    std::vector<LtlFormula> args;
};

class LtlParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Grammar, loosest first: =>, |, &, U, then prefix ! X G F.
// Atoms: true, false, <tau>, <c>, <'c>, <b!>, <b?>. Names must exist in spec.
LtlFormula parse_ltl(std::string_view text, const Spec& spec);
std::string to_string(const LtlFormula& f);

// A fairness spec: one formula per non-empty line, '#' starts a comment.
std::vector<LtlFormula> parse_fairness(std::string_view text, const Spec& spec);

using Valuation = std::vector<bool>;

// Subformulas of a set of roots in evaluation order, for position-by-position
// evaluation on lassos and finite paths.
class LtlClosure {
public:
    explicit LtlClosure(const std::vector<LtlFormula>& roots);

    std::size_t size() const { return nodes_.size(); }
    std::size_t index_of_root(std::size_t r) const { return roots_.at(r); }

    std::vector<char> atoms(const SState& s) const;
    std::vector<char> atoms(const UState& s, const Semantics& sem) const;

    // Values at one position; next is null at the last position of a finite path.
    Valuation step(const std::vector<char>& atoms, const Valuation* next) const;
    // Values at every position of a cycle repeated forever.
    std::vector<Valuation> cycle(const std::vector<std::vector<char>>& atoms) const;

    // Values at position 0.
    Valuation evaluate(const SPath& p) const;
    Valuation evaluate(const UPath& p, const Semantics& sem) const;

private:
    Valuation evaluate_atoms(const std::vector<std::vector<char>>& stem, const std::vector<std::vector<char>>& cyc) const;

    std::vector<LtlFormula> nodes_;
    std::vector<std::size_t> roots_;
    std::vector<std::size_t> lhs_;
    std::vector<std::size_t> rhs_;
};

bool eval_ltl(const SPath& p, const LtlFormula& f);
bool eval_ltl(const UPath& p, const LtlFormula& f, const Semantics& sem);

}  // namespace abc
