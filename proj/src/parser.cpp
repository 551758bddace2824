#include "abc/parser.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <vector>

namespace abc {

namespace {

struct Pos {
    int line = 1;
    int col = 1;
};

enum class Tok { Name, Zero, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    Pos pos;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    Pos p;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++p.line;
                p.col = 1;
            } else {
                ++p.col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back({Tok::Name, std::string(src.substr(i, j - i)), p});
            advance(j - i);
            continue;
        }
        if (c == '0') {
            out.push_back({Tok::Zero, "0", p});
            advance(1);
            continue;
        }
        static const std::string_view punct = ".+|\\[],/()'!?=;";
        if (punct.find(c) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, c), p});
            advance(1);
            continue;
        }
        throw ParseError(p.line, p.col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", p});
    return out;
}

bool is_keyword(const std::string& s) {
    return s == "broadcast" || s == "handshake" || s == "agent" || s == "init" || s == "tau";
}

struct RawAction {
    LabelKind kind;
    std::string name;
    Pos pos;
};

struct Raw {
    enum class K { Nil, Prefix, Choice, Par, Restrict, Relabel, Name } k;
    Pos pos;
    RawAction act{};
    std::string name;
    std::vector<std::pair<std::string, std::string>> ren;  // (to, from)
    std::unique_ptr<Raw> a;
    std::unique_ptr<Raw> b;
};

using RawPtr = std::unique_ptr<Raw>;

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    bool at_punct(char c, std::size_t k = 0) const {
        return peek(k).kind == Tok::Punct && peek(k).text[0] == c;
    }
    bool at_word(const char* w) const { return peek().kind == Tok::Name && peek().text == w; }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(t.pos.line, t.pos.col, msg + ", found " + found);
    }

    void expect(char c) {
        if (!at_punct(c)) fail(std::string("expected '") + c + "'");
        take();
    }

    std::string expect_name(const char* what) {
        if (peek().kind != Tok::Name || is_keyword(peek().text)) fail(std::string("expected ") + what);
        return take().text;
    }

    RawPtr choice() {
        RawPtr l = par();
        while (at_punct('+')) {
            Pos p = take().pos;
            auto n = std::make_unique<Raw>(Raw{Raw::K::Choice, p});
            n->a = std::move(l);
            n->b = par();
            l = std::move(n);
        }
        return l;
    }

    RawPtr par() {
        RawPtr l = postfix();
        while (at_punct('|')) {
            Pos p = take().pos;
            auto n = std::make_unique<Raw>(Raw{Raw::K::Par, p});
            n->a = std::move(l);
            n->b = postfix();
            l = std::move(n);
        }
        return l;
    }

    RawPtr postfix() {
        RawPtr p = primary();
        for (;;) {
            if (at_punct('\\')) {
                Pos at = take().pos;
                auto n = std::make_unique<Raw>(Raw{Raw::K::Restrict, at});
                n->name = expect_name("channel name after '\\'");
                n->a = std::move(p);
                p = std::move(n);
            } else if (at_punct('[')) {
                Pos at = take().pos;
                auto n = std::make_unique<Raw>(Raw{Raw::K::Relabel, at});
                do {
                    std::string to = expect_name("name in relabelling");
                    expect('/');
                    std::string from = expect_name("name in relabelling");
                    n->ren.emplace_back(to, from);
                } while (at_punct(',') && (take(), true));
                expect(']');
                n->a = std::move(p);
                p = std::move(n);
            } else {
                return p;
            }
        }
    }

    RawPtr prefixed(RawAction act) {
        expect('.');
        auto n = std::make_unique<Raw>(Raw{Raw::K::Prefix, act.pos});
        n->act = std::move(act);
        n->a = postfix();
        return n;
    }

    RawPtr primary() {
        const Token& t = peek();
        if (t.kind == Tok::Zero) {
            take();
            return std::make_unique<Raw>(Raw{Raw::K::Nil, t.pos});
        }
        if (at_punct('(')) {
            take();
            RawPtr p = choice();
            expect(')');
            return p;
        }
        if (at_punct('\'')) {
            Pos at = take().pos;
            std::string n = expect_name("handshake name after \"'\"");
            return prefixed({LabelKind::CoHand, n, at});
        }
        if (t.kind == Tok::Name) {
            if (t.text == "tau") {
                Pos at = take().pos;
                return prefixed({LabelKind::Tau, "", at});
            }
            if (is_keyword(t.text)) fail("expected a process");
            Token name = take();
            if (at_punct('!') || at_punct('?')) {
                LabelKind k = take().text == "!" ? LabelKind::Send : LabelKind::Receive;
                return prefixed({k, name.text, name.pos});
            }
            if (at_punct('.')) return prefixed({LabelKind::Hand, name.text, name.pos});
            auto n = std::make_unique<Raw>(Raw{Raw::K::Name, name.pos});
            n->name = name.text;
            return n;
        }
        fail("expected a process");
    }

    struct AgentDef {
        std::string name;
        Pos pos;
        RawPtr body;
    };

    struct Decl {
        bool broadcast;
        std::string name;
        Pos pos;
    };

    std::vector<Decl> decls;
    std::vector<AgentDef> agents;
    RawPtr init;

    void spec() {
        while (at_word("broadcast") || at_word("handshake")) {
            bool b = take().text == "broadcast";
            do {
                Pos at = peek().pos;
                decls.push_back({b, expect_name("name in declaration"), at});
            } while (!at_punct(';'));
            take();
        }
        while (at_word("agent")) {
            take();
            Pos at = peek().pos;
            std::string n = expect_name("agent name");
            expect('=');
            agents.push_back({n, at, choice()});
        }
        if (!at_word("init")) fail("expected 'agent' or 'init'");
        take();
        init = choice();
        if (peek().kind != Tok::End) fail("expected end of input");
    }

    void expression_only() {
        init = choice();
        if (peek().kind != Tok::End) fail("expected end of input");
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

enum class Space { Broadcast, Handshake, Agent };

const char* space_name(Space s) {
    switch (s) {
        case Space::Broadcast: return "broadcast";
        case Space::Handshake: return "handshake";
        case Space::Agent: return "agent";
    }
    return "";
}

class Resolver {
public:
    std::map<std::string, Space> space;

    void declare(const std::string& n, Space s, Pos p) {
        auto [it, fresh] = space.emplace(n, s);
        if (!fresh && it->second != s)
            throw ParseError(p.line, p.col,
                             "name '" + n + "' used as " + space_name(s) + " but already a " +
                                 space_name(it->second));
    }

    // Pass 1: names whose kind is fixed by syntax.
    void collect(const Raw& r) {
        switch (r.k) {
            case Raw::K::Prefix:
                if (r.act.kind == LabelKind::Send || r.act.kind == LabelKind::Receive)
                    declare(r.act.name, Space::Broadcast, r.act.pos);
                else if (r.act.kind != LabelKind::Tau)
                    declare(r.act.name, Space::Handshake, r.act.pos);
                collect(*r.a);
                break;
            case Raw::K::Restrict:
                declare(r.name, Space::Handshake, r.pos);
                collect(*r.a);
                break;
            case Raw::K::Choice:
            case Raw::K::Par:
                collect(*r.a);
                collect(*r.b);
                break;
            case Raw::K::Relabel:
                collect(*r.a);
                break;
            case Raw::K::Name:
            case Raw::K::Nil:
                break;
        }
    }

    // Pass 2: relabelling entries take the kind of whichever side is known.
    void collect_relabellings(const Raw& r) {
        if (r.a) collect_relabellings(*r.a);
        if (r.b) collect_relabellings(*r.b);
        if (r.k != Raw::K::Relabel) return;
        for (const auto& [to, from] : r.ren) {
            auto kind_of = [&](const std::string& n) -> std::optional<Space> {
                auto it = space.find(n);
                if (it == space.end()) return std::nullopt;
                return it->second;
            };
            auto kt = kind_of(to);
            auto kf = kind_of(from);
            if ((kt && *kt == Space::Agent) || (kf && *kf == Space::Agent))
                throw ParseError(r.pos.line, r.pos.col,
                                 "agent name in relabelling " + to + "/" + from);
            if (kt && kf && *kt != *kf)
                throw ParseError(r.pos.line, r.pos.col,
                                 "relabelling kind mismatch: " + to + " is " + space_name(*kt) +
                                     ", " + from + " is " + space_name(*kf));
            if (!kt && !kf)
                throw ParseError(r.pos.line, r.pos.col,
                                 "cannot infer kind of relabelling " + to + "/" + from);
            Space s = kt ? *kt : *kf;
            declare(to, s, r.pos);
            declare(from, s, r.pos);
        }
    }

    Process build(const Raw& r) const {
        switch (r.k) {
            case Raw::K::Nil: return Process::nil();
            case Raw::K::Prefix: return Process::prefix(Label{r.act.kind, r.act.name}, build(*r.a));
            case Raw::K::Choice: return Process::choice(build(*r.a), build(*r.b));
            case Raw::K::Par: return Process::par(build(*r.a), build(*r.b));
            case Raw::K::Restrict: return Process::restrict(build(*r.a), r.name);
            case Raw::K::Relabel: {
                Relabelling f;
                for (const auto& [to, from] : r.ren) {
                    auto& m = space.at(from) == Space::Broadcast ? f.broadcast : f.handshake;
                    auto [it, fresh] = m.emplace(from, to);
                    if (!fresh && it->second != to)
                        throw ParseError(r.pos.line, r.pos.col,
                                         "relabelling maps " + from + " twice");
                }
                return Process::relabel(build(*r.a), std::move(f));
            }
            case Raw::K::Name: {
                auto it = space.find(r.name);
                if (it == space.end())
                    throw ParseError(r.pos.line, r.pos.col, "unknown agent '" + r.name + "'");
                if (it->second != Space::Agent)
                    throw ParseError(r.pos.line, r.pos.col,
                                     "'" + r.name + "' is a " + space_name(it->second) +
                                         " name, not an agent");
                return Process::agent(r.name);
            }
        }
        return Process::nil();
    }
};

void check_guarded(const std::string& agent, const Pos& pos, const Process& body) {
    auto bad = unguarded_agents(body);
    if (!bad.empty())
        throw ParseError(pos.line, pos.col,
                         "unguarded recursion: '" + bad.front() + "' occurs unguarded in " + agent);
}

Spec finish(Resolver& res, Parser& ps, const Spec* context) {
    for (const auto& d : ps.decls) res.declare(d.name, d.broadcast ? Space::Broadcast : Space::Handshake, d.pos);
    for (const auto& a : ps.agents) {
        if (res.space.count(a.name) && res.space.at(a.name) == Space::Agent && !context)
            throw ParseError(a.pos.line, a.pos.col, "agent '" + a.name + "' defined twice");
        res.declare(a.name, Space::Agent, a.pos);
    }
    for (const auto& a : ps.agents) res.collect(*a.body);
    res.collect(*ps.init);
    for (const auto& a : ps.agents) res.collect_relabellings(*a.body);
    res.collect_relabellings(*ps.init);

    Spec s;
    if (context) {
        s.env = context->env;
    }
    for (const auto& [n, sp] : res.space) {
        if (sp == Space::Broadcast) s.broadcast_names.insert(n);
        if (sp == Space::Handshake) s.handshake_names.insert(n);
    }
    for (const auto& a : ps.agents) {
        Process body = res.build(*a.body);
        check_guarded(a.name, a.pos, body);
        s.env[a.name] = body;
    }
    s.init = res.build(*ps.init);
    return s;
}

}  // namespace

Spec parse_spec(std::string_view text) {
    Parser ps(lex(text));
    ps.spec();
    Resolver res;
    return finish(res, ps, nullptr);
}

Spec with_init(const Spec& context, std::string_view expr) {
    Parser ps(lex(expr));
    ps.expression_only();
    Resolver res;
    for (const auto& b : context.broadcast_names) res.space[b] = Space::Broadcast;
    for (const auto& c : context.handshake_names) res.space[c] = Space::Handshake;
    for (const auto& [a, body] : context.env) res.space[a] = Space::Agent;
    return finish(res, ps, &context);
}

}  // namespace abc
