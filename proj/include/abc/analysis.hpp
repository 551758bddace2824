#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "abc/justness.hpp"
#include "abc/ltl.hpp"
#include "abc/paths.hpp"

namespace abc {

// Path lengths count transitions.
struct Bounds {
    int stem = 8;
    int cycle = 8;
    int lift = 2;
    int finlen = 12;
    std::size_t max_states = kDefaultMaxStates;

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

enum class Status : std::uint8_t { Holds, Fails, Unknown };

std::string to_string(Status s);

struct Verdict {
    Status status = Status::Unknown;
    Bounds bounds;
    std::optional<SPath> counterexample;
    std::string counterexample_literal;  // state indices of the reachable graph
    std::string reason;
};

std::string verdict_text(const Verdict& v);
std::string verdict_json(const Verdict& v);
// Inverse of verdict_json for everything except the counterexample path,
// which is recovered from counterexample_literal with parse_s_path.
Verdict verdict_from_json(const std::string& text);

// Transitions of the S structure: one per (source, label, target) triple.
struct STransitions {
    LtsGraph graph;
    std::vector<std::vector<std::pair<Label, int>>> out;
    std::vector<std::vector<std::pair<int, Label>>> in;
};

STransitions s_transitions(const Process& init, const Semantics& sem, std::size_t max_states = kDefaultMaxStates);

// Every finite S-path from init with at most maxlen transitions, depth first.
// fn returns false to stop.
void enumerate_finite_paths(const Process& init, const Semantics& sem, int maxlen,
                            const std::function<bool(const SPath&)>& fn, std::size_t max_states = kDefaultMaxStates);
// As above, following only transitions whose label passes allow.
void enumerate_finite_paths_if(const Process& init, const Semantics& sem, int maxlen,
                               const std::function<bool(const Label&)>& allow,
                               const std::function<bool(const SPath&)>& fn, std::size_t max_states = kDefaultMaxStates);
std::vector<SPath> finite_paths(const Process& init, const Semantics& sem, int maxlen,
                                std::size_t max_states = kDefaultMaxStates);

// Simple S-cycles of at most max_len transitions, each once, starting at its
// lowest-numbered state.
std::vector<SPath> simple_cycles(const STransitions& st, int max_len);

struct CompletePaths {
    std::vector<SPath> paths;  // canonical, sorted, no duplicates
    std::size_t undecided = 0;  // candidates whose justness hit a bound
    std::string reason;
};

// Explicit enumeration of the complete finite paths and lassos within bounds.
CompletePaths enumerate_complete(const Process& init, const Semantics& sem, const std::vector<LtlFormula>& fairness,
                                 const Bounds& b);

// Searches the complete paths within bounds for one violating phi.
Verdict check(const Process& init, const Semantics& sem, const LtlFormula& phi,
              const std::vector<LtlFormula>& fairness, const Bounds& b);

// Strong bisimilarity over the original semantics.
bool bisimilar(const Process& p, const Process& q, const Semantics& sem, std::size_t max_states = kDefaultMaxStates);

}  // namespace abc
