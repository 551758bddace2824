#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "abc/ltl.hpp"
#include "abc/paths.hpp"

namespace abc {

enum class Truth : std::uint8_t { False, True, Unknown };

std::string to_string(Truth t);

enum class JustMethod : std::uint8_t { Definition, Lifts };

struct JustnessVerdict {
    Truth just = Truth::Unknown;
    JustMethod method = JustMethod::Definition;
    int lift_bound = 2;
    std::string witness;
};

struct JustnessOptions {
    int lift_bound = 2;
    std::size_t max_lifts = kDefaultMaxLifts;
    std::size_t max_nodes = 200000;
};

// Lassos always progress; a finite path progresses when its last state
// admits no tau and no broadcast send.
bool progressing(const SPath& p, const Semantics& sem);
bool progressing(const UPath& p, const Semantics& sem);

// Bit set over a Spec's handshake actions (c at bit 2i, 'c at bit 2i+1).
using YMask = std::uint64_t;

class HandshakeIndex {
public:
    explicit HandshakeIndex(const Spec& spec);
    YMask mask(const Label& l) const;  // 0 for non-handshake labels
    YMask mask(const std::vector<Label>& ls) const;
    YMask full() const { return full_; }
    YMask channel(const std::string& c) const;
    YMask image(YMask y, const Relabelling& f) const;
    std::vector<Label> labels(YMask y) const;
    std::string render(YMask y) const;

private:
    std::vector<std::string> names_;
    YMask full_ = 0;
};

// Upward-closed family of Y sets kept as its minimal elements.
using YFamily = std::vector<YMask>;

// Greatest family of Y-just paths, computed over the finite graph of suffixes
// and component paths. Paths must start at a process. Parallel (and
// relabelled) paths are split through lifts with cycles unrolled up to the
// lift bound. Results persist across calls.
class Def1Checker {
public:
    explicit Def1Checker(const Semantics& sem, JustnessOptions opt = {});
    ~Def1Checker();
    Def1Checker(const Def1Checker&) = delete;
    Def1Checker& operator=(const Def1Checker&) = delete;

    const HandshakeIndex& handshakes() const;
    YFamily family(const SPath& p);
    Truth y_just(const SPath& p, YMask y);
    JustnessVerdict just(const SPath& p);
    std::size_t node_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

JustnessVerdict just_def1(const SPath& p, const Semantics& sem, JustnessOptions opt = {});
Truth y_just_def1(const SPath& p, const std::vector<Label>& y, const Semantics& sem, JustnessOptions opt = {});

// A path of derivations is just iff no non-blocking abstract transition stays
// enabled from some point on.
bool just_thm3_u(const UPath& p, const Semantics& sem, std::string* witness = nullptr);
JustnessVerdict just_s_via_lifts(const SPath& p, const Semantics& sem, JustnessOptions opt = {});

bool nu_enabled(const UPath& p, const AbstractTransition& nu, const Semantics& sem);

// Progressing, just and satisfying every fairness formula.
Truth complete(const SPath& p, const std::vector<LtlFormula>& fairness, const Semantics& sem,
               JustnessOptions opt = {});

}  // namespace abc
