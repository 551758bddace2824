#include "abc/demo.hpp"

#include <functional>

#include "abc/corpus.hpp"
#include "abc/parser.hpp"

namespace abc {

std::string scheduler_property3() {
    return "G((<t1!> | <t2!>) => X((!(<t1!> | <t2!>) U <e!>) | G !(<t1!> | <t2!>)))";
}

namespace {

DemoLine from_verdict(const std::string& name, const Verdict& v) {
    DemoLine l{name, v.status == Status::Holds, to_string(v.status)};
    if (v.counterexample) l.detail += "; counterexample " + to_string(*v.counterexample);
    if (!v.reason.empty()) l.detail += "; " + v.reason;
    return l;
}

}  // namespace

std::vector<DemoLine> run_scheduler_demo(const Bounds& b) {
    Spec spec = parse_spec(corpus_text("scheduler"));
    Semantics sem(spec);
    std::vector<DemoLine> out;

    for (int i = 1; i <= 2; ++i) {
        std::string f = "G(<r" + std::to_string(i) + "> => F <t" + std::to_string(i) + "!>)";
        out.push_back(from_verdict("property 1: " + f, check(spec.init, sem, parse_ltl(f, spec), {}, b)));
    }

    const Label t[2] = {Label::send("t1"), Label::send("t2")};
    const Label r[2] = {Label::hand("r1"), Label::hand("r2")};
    std::size_t paths = 0;
    std::string bad;
    enumerate_finite_paths_if(
        spec.init, sem, b.finlen, [](const Label& l) { return !l.is_receive(); },
        [&](const SPath& p) {
            ++paths;
            int count[2] = {0, 0};
            for (const auto& s : p.stem) {
                if (is_process(s)) continue;
                const Label& l = std::get<Transition>(s).label;
                for (int i = 0; i < 2; ++i) count[i] += (l == t[i]) - (l == r[i]);
            }
            if (count[0] > 0 || count[1] > 0) {
                bad = to_string(p);
                return false;
            }
            return true;
        },
        b.max_states);
    DemoLine two{"property 2: #ti! <= #ri on finite paths up to length " + std::to_string(b.finlen), bad.empty(),
                 std::to_string(paths) + " paths"};
    if (!bad.empty()) two.detail += "; violated by " + bad;
    out.push_back(two);

    out.push_back(from_verdict("property 3: " + scheduler_property3(),
                               check(spec.init, sem, parse_ltl(scheduler_property3(), spec), {}, b)));
    return out;
}

}  // namespace abc
