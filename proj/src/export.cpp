#include <sstream>

#include "abc/sos.hpp"
#include "json.hpp"

namespace abc {

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_dot(const LtsGraph& g) {
    std::ostringstream os;
    os << "digraph lts {\n  rankdir=LR;\n  start [shape=point];\n";
    for (std::size_t i = 0; i < g.states.size(); ++i)
        os << "  s" << i << " [label=\"" << i << ": " << dot_escape(to_string(g.states[i])) << "\"];\n";
    os << "  start -> s" << g.init << ";\n";
    for (const auto& e : g.edges)
        os << "  s" << e.src << " -> s" << e.tgt << " [label=\"" << dot_escape(to_string(e.label()))
           << "\", tooltip=\"" << dot_escape(to_string(e.derivation)) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string to_json(const LtsGraph& g) {
    nlohmann::json j;
    j["states"] = nlohmann::json::array();
    for (const auto& s : g.states) j["states"].push_back(to_string(s));
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back({{"src", e.src},
                              {"label", to_string(e.label())},
                              {"tgt", e.tgt},
                              {"derivation", to_string(e.derivation)}});
    j["init"] = g.init;
    return j.dump(2) + "\n";
}

std::string to_text(const LtsGraph& g) {
    std::ostringstream os;
    os << g.states.size() << " states, " << g.edges.size() << " transitions\n";
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        os << (static_cast<int>(i) == g.init ? "* " : "  ") << i << ": " << to_string(g.states[i]) << '\n';
        for (int ei : g.out[i]) {
            const Edge& e = g.edges[ei];
            os << "      -" << to_string(e.label()) << "-> " << e.tgt << "   " << to_string(e.derivation) << '\n';
        }
    }
    return os.str();
}

}  // namespace abc
