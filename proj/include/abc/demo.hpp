#pragma once

#include <string>
#include <vector>

#include "abc/analysis.hpp"

namespace abc {

struct DemoLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Property 3 as an LTL formula: after t1! or t2!, no further ti! before e!.
std::string scheduler_property3();

// The three scheduler properties on the bundled scheduler spec.
// Property 2 counts over finite paths without environment-driven receives.
std::vector<DemoLine> run_scheduler_demo(const Bounds& b);

}  // namespace abc
