// abc: command-line front end for the ABC process algebra library.
//
// Exit codes: 0 holds/true, 1 fails/false, 2 unknown or bound exhausted,
// 3 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "abc/analysis.hpp"
#include "abc/concurrency.hpp"
#include "abc/corpus.hpp"
#include "abc/demo.hpp"
#include "abc/justness.hpp"
#include "abc/parser.hpp"

namespace {

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kUnknown = 2;
constexpr int kInputError = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// A path, or @name for a bundled corpus spec.
abc::Spec load_spec(const std::string& where) {
    std::string text;
    if (!where.empty() && where[0] == '@') {
        try {
            text = std::string(abc::corpus_text(where.substr(1)));
        } catch (const std::out_of_range& e) {
            throw InputError(e.what());
        }
    } else {
        text = read_file(where);
    }
    try {
        return abc::parse_spec(text);
    } catch (const abc::ParseError& e) {
        throw InputError(where + ":" + e.what());
    }
}

int exit_for(abc::Truth t) {
    switch (t) {
        case abc::Truth::True: return kTrue;
        case abc::Truth::False: return kFalse;
        case abc::Truth::Unknown: return kUnknown;
    }
    return kUnknown;
}

int exit_for(abc::Status s) {
    switch (s) {
        case abc::Status::Holds: return kTrue;
        case abc::Status::Fails: return kFalse;
        case abc::Status::Unknown: return kUnknown;
    }
    return kUnknown;
}

struct Options {
    std::string spec;
    std::string ltl;
    std::string fair;
    std::string format = "text";
    std::string state;
    std::string lasso;
    std::string chi;
    std::string zeta;
    std::string p;
    std::string q;
    bool tables = false;
    abc::Bounds bounds;
};

abc::Process state_of(const abc::Spec& spec, const std::string& expr) {
    if (expr.empty()) return spec.init;
    try {
        return abc::with_init(spec, expr).init;
    } catch (const abc::ParseError& e) {
        throw InputError("state: " + std::string(e.what()));
    }
}

std::vector<abc::LtlFormula> fairness_of(const abc::Spec& spec, const std::string& file) {
    if (file.empty()) return {};
    try {
        return abc::parse_fairness(read_file(file), spec);
    } catch (const abc::LtlParseError& e) {
        throw InputError(file + ": " + e.what());
    }
}

int cmd_parse(const Options& o) {
    std::cout << abc::to_string(load_spec(o.spec));
    return kTrue;
}

int cmd_lts(const Options& o) {
    abc::Spec spec = load_spec(o.spec);
    abc::Semantics sem(spec);
    abc::LtsGraph g = abc::reachable(spec.init, sem, o.bounds.max_states);
    if (o.format == "dot") std::cout << abc::to_dot(g);
    else if (o.format == "json") std::cout << abc::to_json(g) << '\n';
    else std::cout << abc::to_text(g);
    return kTrue;
}

int cmd_derivations(const Options& o) {
    abc::Spec spec = load_spec(o.spec);
    abc::Semantics sem(spec);
    abc::Process p = state_of(spec, o.state);
    const auto& ds = sem.step_original(p);
    std::cout << "state " << abc::to_string(p) << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i)
        std::cout << "#" << i << "  " << abc::to_string(ds[i].label()) << "  " << abc::to_string(ds[i]) << "  -> "
                  << abc::to_string(ds[i].target()) << '\n';
    if (o.tables && !ds.empty()) {
        auto table = [&](const char* title, auto rel) {
            std::cout << title << '\n' << "     ";
            for (std::size_t j = 0; j < ds.size(); ++j) std::cout << " #" << j;
            std::cout << '\n';
            for (std::size_t i = 0; i < ds.size(); ++i) {
                std::cout << "  #" << i << " ";
                for (std::size_t j = 0; j < ds.size(); ++j) std::cout << "  " << (rel(ds[i], ds[j]) ? 'x' : '.');
                std::cout << '\n';
            }
        };
        table("concurrent (row unaffected by column):",
              [](const abc::Derivation& a, const abc::Derivation& b) { return abc::concurrent_oneway(a, b); });
        table("same abstract transition:", [](const abc::Derivation& a, const abc::Derivation& b) {
            return !a.label().is_receive() && !b.label().is_receive() && abc::equiv(a, b);
        });
    }
    return kTrue;
}

// A derivation rendering, or #i for the i-th derivation of the state.
abc::Derivation find_derivation(const std::vector<abc::Derivation>& ds, const std::string& text) {
    if (!text.empty() && text[0] == '#') {
        std::size_t i = 0;
        try {
            i = std::stoul(text.substr(1));
        } catch (const std::exception&) {
            throw InputError("bad derivation index " + text);
        }
        if (i >= ds.size()) throw InputError("no derivation " + text);
        return ds[i];
    }
    for (const auto& d : ds)
        if (abc::to_string(d) == text) return d;
    throw InputError("no derivation rendered as " + text);
}

int cmd_conc(const Options& o) {
    abc::Spec spec = load_spec(o.spec);
    abc::Semantics sem(spec);
    abc::Process p = state_of(spec, o.state);
    const auto& ds = sem.step_original(p);
    abc::Derivation chi = find_derivation(ds, o.chi);
    abc::Derivation zeta = find_derivation(ds, o.zeta);
    bool fwd = abc::concurrent_oneway(chi, zeta);
    bool bwd = abc::concurrent_oneway(zeta, chi);
    std::cout << "chi  = " << abc::to_string(chi) << '\n'
              << "zeta = " << abc::to_string(zeta) << '\n'
              << "chi unaffected by zeta: " << (fwd ? "yes" : "no") << '\n'
              << "zeta unaffected by chi: " << (bwd ? "yes" : "no") << '\n'
              << "concurrent: " << (fwd && bwd ? "yes" : "no") << '\n';
    return fwd ? kTrue : kFalse;
}

int cmd_abstract(const Options& o) {
    abc::Spec spec = load_spec(o.spec);
    abc::Semantics sem(spec);
    abc::LtsGraph g = abc::reachable(spec.init, sem, o.bounds.max_states);
    std::vector<abc::AbstractTransition> all;
    for (const auto& s : g.states)
        for (const auto& nu : abc::abstract_transitions(s, sem)) all.push_back(nu);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) std::cout << "nu" << i << "  " << abc::to_string(all[i]) << '\n';
    for (std::size_t s = 0; s < g.states.size(); ++s) {
        std::cout << "state " << s << "  " << abc::to_string(g.states[s]) << "\n  enabled:";
        for (std::size_t i = 0; i < all.size(); ++i)
            if (abc::enabled(all[i], g.states[s], sem)) std::cout << " nu" << i;
        std::cout << '\n';
    }
    return kTrue;
}

int cmd_just(const Options& o) {
    abc::Spec spec = load_spec(o.spec);
    abc::Semantics sem(spec);
    abc::LtsGraph g = abc::reachable(spec.init, sem, o.bounds.max_states);
    abc::SPath p;
    try {
        p = abc::parse_s_path(o.lasso, g);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("lasso: ") + e.what());
    }
    abc::JustnessOptions opt;
    opt.lift_bound = o.bounds.lift;
    abc::JustnessVerdict d = abc::just_def1(p, sem, opt);
    abc::JustnessVerdict l = abc::just_s_via_lifts(p, sem, opt);
    std::cout << "path: " << abc::to_string(p) << '\n'
              << "progressing: " << (abc::progressing(p, sem) ? "yes" : "no") << '\n'
              << "just: " << abc::to_string(d.just) << '\n'
              << d.witness << "lifts (k=" << opt.lift_bound << "): " << abc::to_string(l.just) << '\n'
              << l.witness << '\n';
    if (l.just != abc::Truth::Unknown && d.just != abc::Truth::Unknown && l.just != d.just) {
        std::cout << "warning: the two justness checks disagree\n";
        return kUnknown;
    }
    return exit_for(d.just);
}

int cmd_lassos(const Options& o) {
    abc::Spec spec = load_spec(o.spec);
    abc::Semantics sem(spec);
    auto fs = fairness_of(spec, o.fair);
    abc::CompletePaths cp = abc::enumerate_complete(spec.init, sem, fs, o.bounds);
    abc::LtsGraph g = abc::reachable(spec.init, sem, o.bounds.max_states);
    if (o.format == "json") {
        nlohmann::json j;
        j["paths"] = nlohmann::json::array();
        for (const auto& p : cp.paths) j["paths"].push_back({{"path", abc::to_string(p)}, {"literal", abc::to_literal(p, g)}});
        j["undecided"] = cp.undecided;
        if (!cp.reason.empty()) j["reason"] = cp.reason;
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& p : cp.paths) std::cout << abc::to_literal(p, g) << "    " << abc::to_string(p) << '\n';
        std::cout << cp.paths.size() << " complete paths";
        if (cp.undecided) std::cout << ", " << cp.undecided << " undecided (" << cp.reason << ")";
        std::cout << '\n';
    }
    return cp.undecided ? kUnknown : kTrue;
}

int cmd_check(const Options& o) {
    abc::Spec spec = load_spec(o.spec);
    abc::Semantics sem(spec);
    if (o.ltl.empty()) throw InputError("--ltl is required");
    abc::LtlFormula phi = [&] {
        try {
            return abc::parse_ltl(o.ltl, spec);
        } catch (const abc::LtlParseError& e) {
            throw InputError(std::string("--ltl: ") + e.what());
        }
    }();
    auto fs = fairness_of(spec, o.fair);
    abc::Verdict v = abc::check(spec.init, sem, phi, fs, o.bounds);
    std::cout << (o.format == "json" ? abc::verdict_json(v) + "\n" : abc::verdict_text(v));
    return exit_for(v.status);
}

int cmd_bisim(const Options& o) {
    abc::Spec spec = load_spec(o.spec);
    abc::Spec sp = [&] {
        try {
            return abc::with_init(spec, o.p);
        } catch (const abc::ParseError& e) {
            throw InputError(std::string("P: ") + e.what());
        }
    }();
    abc::Spec sq = [&] {
        try {
            return abc::with_init(sp, o.q);
        } catch (const abc::ParseError& e) {
            throw InputError(std::string("Q: ") + e.what());
        }
    }();
    abc::Semantics sem(sq);
    bool eq = abc::bisimilar(sp.init, sq.init, sem, o.bounds.max_states);
    std::cout << (eq ? "bisimilar" : "not bisimilar") << '\n';
    return eq ? kTrue : kFalse;
}

int cmd_demo(const Options& o) {
    abc::Bounds b = o.bounds;
    int worst = kTrue;
    for (const auto& line : abc::run_scheduler_demo(b)) {
        std::cout << (line.pass ? "PASS " : "FAIL ") << line.name << "  (" << line.detail << ")\n";
        if (!line.pass) worst = kFalse;
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"abc: process algebra with broadcast communication"};
    app.require_subcommand(1);
    Options o;

    auto add_bounds = [&](CLI::App* c) {
        c->add_option("--stem", o.bounds.stem, "Stem length bound")->check(CLI::PositiveNumber);
        c->add_option("--cycle", o.bounds.cycle, "Cycle length bound")->check(CLI::PositiveNumber);
        c->add_option("--lift", o.bounds.lift, "Cycle unrolling bound for lifts")->check(CLI::PositiveNumber);
        c->add_option("--finlen", o.bounds.finlen, "Finite path length bound")->check(CLI::NonNegativeNumber);
        c->add_option("--max-states", o.bounds.max_states, "Reachable state bound")->check(CLI::PositiveNumber);
    };
    auto add_spec = [&](CLI::App* c) {
        c->add_option("spec", o.spec, "Spec file, or @name for a bundled example")->required();
    };
    auto add_format = [&](CLI::App* c, std::vector<std::string> allowed) {
        c->add_option("--format", o.format, "Output format")->check(CLI::IsMember(allowed));
    };

    auto* parse = app.add_subcommand("parse", "Print the normalized spec");
    add_spec(parse);

    auto* lts = app.add_subcommand("lts", "Export the reachable transition system");
    add_spec(lts);
    add_format(lts, {"dot", "json", "text"});
    o.format = "text";
    lts->callback([&] {
        if (lts->count("--format") == 0) o.format = "dot";
    });
    add_bounds(lts);

    auto* der = app.add_subcommand("derivations", "List the derivations of a state");
    add_spec(der);
    der->add_option("--state", o.state, "Process expression (default: init)");
    der->add_flag("--tables", o.tables, "Print concurrency and equivalence tables");

    auto* conc = app.add_subcommand("conc", "Is chi unaffected by zeta?");
    add_spec(conc);
    conc->add_option("chi", o.chi, "Derivation rendering or #index")->required();
    conc->add_option("zeta", o.zeta, "Derivation rendering or #index")->required();
    conc->add_option("--state", o.state, "Process expression (default: init)");

    auto* abs = app.add_subcommand("abstract", "Abstract transitions and where they are enabled");
    add_spec(abs);
    add_bounds(abs);

    auto* just = app.add_subcommand("just", "Justness of a path literal");
    add_spec(just);
    just->add_option("lasso", o.lasso, "Path literal, e.g. \"0 ; 0 -c-> 0\"")->required();
    add_bounds(just);

    auto* lassos = app.add_subcommand("lassos", "Enumerate complete paths within bounds");
    add_spec(lassos);
    lassos->add_option("--fair", o.fair, "Fairness spec file");
    add_format(lassos, {"json", "text"});
    add_bounds(lassos);

    auto* chk = app.add_subcommand("check", "Check an LTL formula on complete paths");
    add_spec(chk);
    chk->add_option("--ltl", o.ltl, "Formula")->required();
    chk->add_option("--fair", o.fair, "Fairness spec file");
    add_format(chk, {"json", "text"});
    add_bounds(chk);

    auto* bisim = app.add_subcommand("bisim", "Strong bisimilarity of two expressions");
    add_spec(bisim);
    bisim->add_option("p", o.p, "First expression")->required();
    bisim->add_option("q", o.q, "Second expression")->required();
    add_bounds(bisim);

    auto* demo = app.add_subcommand("demo-scheduler", "Check the bundled scheduler");
    add_bounds(demo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kTrue : kInputError;
    }

    if (demo->parsed()) {
        if (demo->count("--stem") == 0) o.bounds.stem = 12;
        if (demo->count("--cycle") == 0) o.bounds.cycle = 12;
    }

    try {
        if (parse->parsed()) return cmd_parse(o);
        if (lts->parsed()) return cmd_lts(o);
        if (der->parsed()) return cmd_derivations(o);
        if (conc->parsed()) return cmd_conc(o);
        if (abs->parsed()) return cmd_abstract(o);
        if (just->parsed()) return cmd_just(o);
        if (lassos->parsed()) return cmd_lassos(o);
        if (chk->parsed()) return cmd_check(o);
        if (bisim->parsed()) return cmd_bisim(o);
        if (demo->parsed()) return cmd_demo(o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const abc::UnguardedRecursion& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const abc::StateBoundExceeded& e) {
        std::cerr << "bound: " << e.what() << '\n';
        return kUnknown;
    } catch (const abc::LiftBoundExceeded& e) {
        std::cerr << "bound: " << e.what() << '\n';
        return kUnknown;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
