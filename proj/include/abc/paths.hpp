#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "abc/concurrency.hpp"
#include "abc/sos.hpp"

namespace abc {

// A transition triple without its proof; the midway state of S.
struct Transition {
    Process source;
    Label label;
    Process target;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend std::strong_ordering operator<=>(const Transition& a, const Transition& b) {
        if (auto c = a.source <=> b.source; c != 0) return c;
        if (auto c = a.label <=> b.label; c != 0) return c;
        return a.target <=> b.target;
    }
};

using SState = std::variant<Process, Transition>;
using UState = std::variant<Process, Derivation>;

std::size_t hash_value(const SState& s);
std::size_t hash_value(const UState& s);

inline bool is_process(const SState& s) { return s.index() == 0; }
inline bool is_process(const UState& s) { return s.index() == 0; }

template <class S>
std::strong_ordering compare_states(const S& a, const S& b) {
    if (auto c = a.index() <=> b.index(); c != 0) return c;
    if (a.index() == 0) return std::get<0>(a) <=> std::get<0>(b);
    return std::get<1>(a) <=> std::get<1>(b);
}

// Processes and midway states (or derivations) alternate. A finite path has an
// empty cycle and ends in a process; a lasso repeats its cycle forever.
template <class S>
struct Path {
    std::vector<S> stem;
    std::vector<S> cycle;

    bool finite() const { return cycle.empty(); }
    std::size_t size() const { return stem.size() + cycle.size(); }
    // Position i of the unrolled sequence; past the end of a finite path is an error.
    const S& at(std::size_t i) const {
        if (i < stem.size()) return stem[i];
        return cycle.at((i - stem.size()) % cycle.size());
    }
    const S& first() const { return stem.empty() ? cycle.front() : stem.front(); }
    const S& last() const { return stem.back(); }

    friend bool operator==(const Path& a, const Path& b) {
        return a.stem == b.stem && a.cycle == b.cycle;
    }
};

using SPath = Path<SState>;
using UPath = Path<UState>;

template <class S>
struct PathHash {
    std::size_t operator()(const Path<S>& p) const {
        std::size_t h = p.stem.size() * 31 + p.cycle.size();
        for (const auto& s : p.stem) h = h * 1000003 ^ hash_value(s);
        h ^= 0x5bd1e995;
        for (const auto& s : p.cycle) h = h * 1000003 ^ hash_value(s);
        return h;
    }
};

// Unique representation of the same infinite sequence: primitive cycle that
// starts at a process, shortest stem.
template <class S>
Path<S> canonical(Path<S> p) {
    if (p.cycle.empty()) return p;
    const std::size_t n = p.cycle.size();
    for (std::size_t period = 1; period < n; ++period) {
        if (n % period) continue;
        bool ok = true;
        for (std::size_t i = period; i < n && ok; ++i) ok = p.cycle[i] == p.cycle[i - period];
        if (ok) {
            p.cycle.resize(period);
            break;
        }
    }
    if (!is_process(p.cycle.front()) && p.cycle.size() > 1) {
        p.stem.push_back(p.cycle.front());
        std::rotate(p.cycle.begin(), p.cycle.begin() + 1, p.cycle.end());
    }
    const std::size_t m = p.cycle.size();
    while (m >= 2 && p.stem.size() >= 2 && p.stem.back() == p.cycle.back() &&
           p.stem[p.stem.size() - 2] == p.cycle[m - 2]) {
        std::rotate(p.cycle.begin(), p.cycle.end() - 2, p.cycle.end());
        p.stem.resize(p.stem.size() - 2);
    }
    return p;
}

// Every suffix: one per stem position and one per cycle rotation.
template <class S>
std::vector<Path<S>> suffix_classes(const Path<S>& p) {
    std::vector<Path<S>> out;
    for (std::size_t i = 0; i < p.stem.size(); ++i)
        out.push_back({std::vector<S>(p.stem.begin() + i, p.stem.end()), p.cycle});
    for (std::size_t j = 0; j < p.cycle.size(); ++j) {
        Path<S> r{{}, p.cycle};
        std::rotate(r.cycle.begin(), r.cycle.begin() + j, r.cycle.end());
        out.push_back(std::move(r));
    }
    return out;
}

SState hat(const UState& u);
SPath hat(const UPath& p);

class LiftBoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::size_t kDefaultMaxLifts = 100000;

// Calls fn on each U-path whose hat is rho with its cycle unrolled m <= k
// times, skipping repeats of the same infinite sequence. fn returns false to stop.
// Throws LiftBoundExceeded after max_lifts candidates.
void for_each_lift(const SPath& rho, int k, const Semantics& sem, const std::function<bool(const UPath&)>& fn,
                   std::size_t max_lifts = kDefaultMaxLifts);
std::vector<UPath> lifts(const SPath& rho, int k, const Semantics& sem, std::size_t max_lifts = kDefaultMaxLifts);

// Component paths of a path whose states all have the form u|v, with stutter removed.
std::pair<UPath, UPath> decompose_par_u(const UPath& pi);
UPath decompose_res_u(const UPath& pi);
UPath decompose_rel_u(const UPath& pi);

std::vector<std::pair<SPath, SPath>> decompose_par_s(const SPath& rho, int k, const Semantics& sem);
std::vector<SPath> decompose_res_s(const SPath& rho, int k, const Semantics& sem);
std::vector<SPath> decompose_rel_s(const SPath& rho, int k, const Semantics& sem);

bool enabled(const AbstractTransition& nu, const UState& u, const Semantics& sem);

std::string to_string(const SState& s);
std::string to_string(const UState& s);
std::string to_string(const SPath& p);
std::string to_string(const UPath& p);

// Literal form "s0 -l1-> s1 ... ; sk -l-> ... -l-> sk" over state indices of g.
// Between the arrows goes a label, a derivation rendering, or #i for the i-th
// outgoing edge of the source state.
SPath parse_s_path(std::string_view text, const LtsGraph& g);
UPath parse_u_path(std::string_view text, const LtsGraph& g);
std::string to_literal(const SPath& p, const LtsGraph& g);
std::string to_literal(const UPath& p, const LtsGraph& g);

// Structural checks: alternation and that every step is a transition.
bool valid(const SPath& p, const Semantics& sem);
bool valid(const UPath& p);

}  // namespace abc
