#include "abc/ltl.hpp"

#include <cctype>
#include <unordered_map>

namespace abc {

namespace {

LtlFormula make(LtlKind k, std::vector<LtlFormula> args) {
    auto n = std::make_shared<LtlNode>();
    n->kind = k;
    n->args = std::move(args);
    return LtlFormula(std::move(n));
}

}  // namespace

LtlFormula LtlFormula::truth(bool v) { return make(v ? LtlKind::True : LtlKind::False, {}); }

LtlFormula LtlFormula::label(Label l) {
    auto n = std::make_shared<LtlNode>();
    n->kind = LtlKind::Label;
    n->label = std::move(l);
    return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::nu(AbstractTransition t) {
    auto n = std::make_shared<LtlNode>();
    n->kind = LtlKind::Nu;
    n->transition.push_back(std::move(t));
    return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::en(AbstractTransition t) {
    auto n = std::make_shared<LtlNode>();
    n->kind = LtlKind::En;
    n->transition.push_back(std::move(t));
    return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::negate(LtlFormula a) { return make(LtlKind::Not, {std::move(a)}); }
LtlFormula LtlFormula::conj(LtlFormula a, LtlFormula b) { return make(LtlKind::And, {std::move(a), std::move(b)}); }
LtlFormula LtlFormula::disj(LtlFormula a, LtlFormula b) { return make(LtlKind::Or, {std::move(a), std::move(b)}); }
LtlFormula LtlFormula::implies(LtlFormula a, LtlFormula b) {
    return make(LtlKind::Implies, {std::move(a), std::move(b)});
}
LtlFormula LtlFormula::next(LtlFormula a) { return make(LtlKind::Next, {std::move(a)}); }
LtlFormula LtlFormula::until(LtlFormula a, LtlFormula b) { return make(LtlKind::Until, {std::move(a), std::move(b)}); }
LtlFormula LtlFormula::globally(LtlFormula a) { return make(LtlKind::Globally, {std::move(a)}); }
LtlFormula LtlFormula::finally(LtlFormula a) { return make(LtlKind::Finally, {std::move(a)}); }

LtlKind LtlFormula::kind() const { return node_->kind; }
const Label& LtlFormula::atom_label() const { return node_->label; }
const AbstractTransition& LtlFormula::atom_transition() const { return node_->transition.at(0); }
const LtlFormula& LtlFormula::lhs() const { return node_->args.at(0); }
const LtlFormula& LtlFormula::rhs() const { return node_->args.at(1); }

std::string to_string(const LtlFormula& f) {
    auto un = [&](const char* op) { return std::string(op) + "(" + to_string(f.lhs()) + ")"; };
    auto bin = [&](const char* op) { return "(" + to_string(f.lhs()) + " " + op + " " + to_string(f.rhs()) + ")"; };
    switch (f.kind()) {
        case LtlKind::True: return "true";
        case LtlKind::False: return "false";
        case LtlKind::Label: return "<" + to_string(f.atom_label()) + ">";
        case LtlKind::Nu: return "nu{" + to_string(f.atom_transition()) + "}";
        case LtlKind::En: return "en{" + to_string(f.atom_transition()) + "}";
        case LtlKind::Not: return un("!");
        case LtlKind::And: return bin("&");
        case LtlKind::Or: return bin("|");
        case LtlKind::Implies: return bin("=>");
        case LtlKind::Next: return un("X");
        case LtlKind::Until: return bin("U");
        case LtlKind::Globally: return un("G");
        case LtlKind::Finally: return un("F");
    }
    return {};
}

// ---------------------------------------------------------------- parsing

namespace {

class LtlParser {
public:
    LtlParser(std::string_view s, const Spec& spec) : s_(s), spec_(spec) {}

    LtlFormula parse() {
        LtlFormula f = implication();
        skip();
        if (i_ != s_.size()) fail("unexpected text");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw LtlParseError("column " + std::to_string(i_ + 1) + ": " + msg + " in '" + std::string(s_) + "'");
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool eat(std::string_view tok) {
        skip();
        if (s_.substr(i_, tok.size()) != tok) return false;
        // true and false must not run into a longer word; operator letters may
        // chain, as in GF.
        if (tok.size() > 1 && std::isalpha(static_cast<unsigned char>(tok[0]))) {
            std::size_t j = i_ + tok.size();
            if (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) return false;
        }
        i_ += tok.size();
        return true;
    }

    LtlFormula implication() {
        LtlFormula a = disjunction();
        if (eat("=>")) return LtlFormula::implies(a, implication());
        return a;
    }

    LtlFormula disjunction() {
        LtlFormula a = conjunction();
        while (eat("|")) a = LtlFormula::disj(a, conjunction());
        return a;
    }

    LtlFormula conjunction() {
        LtlFormula a = until();
        while (eat("&")) a = LtlFormula::conj(a, until());
        return a;
    }

    LtlFormula until() {
        LtlFormula a = unary();
        if (eat("U")) return LtlFormula::until(a, until());
        return a;
    }

    LtlFormula unary() {
        if (eat("!")) return LtlFormula::negate(unary());
        if (eat("X")) return LtlFormula::next(unary());
        if (eat("G")) return LtlFormula::globally(unary());
        if (eat("F")) return LtlFormula::finally(unary());
        return atom();
    }

    LtlFormula atom() {
        if (eat("true")) return LtlFormula::truth(true);
        if (eat("false")) return LtlFormula::truth(false);
        if (eat("(")) {
            LtlFormula f = implication();
            if (!eat(")")) fail("expected ')'");
            return f;
        }
        if (eat("<")) {
            std::size_t end = s_.find('>', i_);
            if (end == std::string_view::npos) fail("unterminated label");
            std::string text(s_.substr(i_, end - i_));
            i_ = end + 1;
            return LtlFormula::label(resolve(text));
        }
        fail("expected a formula");
    }

    Label resolve(std::string text) {
        auto trim = [](std::string t) {
            while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
            std::size_t a = 0;
            while (a < t.size() && std::isspace(static_cast<unsigned char>(t[a]))) ++a;
            return t.substr(a);
        };
        text = trim(text);
        if (text == "tau") return Label::tau();
        if (text.empty()) fail("empty label");
        auto need = [&](const std::set<std::string>& names, const std::string& n, const char* kind) {
            if (!names.count(n)) fail(std::string("undeclared ") + kind + " name '" + n + "'");
        };
        if (text[0] == '\'') {
            std::string n = trim(text.substr(1));
            need(spec_.handshake_names, n, "handshake");
            return Label::cohand(n);
        }
        char last = text.back();
        if (last == '!' || last == '?') {
            std::string n = trim(text.substr(0, text.size() - 1));
            need(spec_.broadcast_names, n, "broadcast");
            return last == '!' ? Label::send(n) : Label::receive(n);
        }
        need(spec_.handshake_names, text, "handshake");
        return Label::hand(text);
    }

    std::string_view s_;
    const Spec& spec_;
    std::size_t i_ = 0;
};

}  // namespace

LtlFormula parse_ltl(std::string_view text, const Spec& spec) { return LtlParser(text, spec).parse(); }

std::vector<LtlFormula> parse_fairness(std::string_view text, const Spec& spec) {
    std::vector<LtlFormula> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        bool blank = true;
        for (char c : line) blank = blank && std::isspace(static_cast<unsigned char>(c));
        if (!blank) out.push_back(parse_ltl(line, spec));
        start = end + 1;
    }
    return out;
}

// ---------------------------------------------------------------- evaluation

LtlClosure::LtlClosure(const std::vector<LtlFormula>& roots) {
    std::unordered_map<const LtlNode*, std::size_t> index;
    std::function<std::size_t(const LtlFormula&)> visit = [&](const LtlFormula& f) -> std::size_t {
        if (auto it = index.find(f.id()); it != index.end()) return it->second;
        std::size_t l = SIZE_MAX, r = SIZE_MAX;
        switch (f.kind()) {
            case LtlKind::Not:
            case LtlKind::Next:
            case LtlKind::Globally:
            case LtlKind::Finally:
                l = visit(f.lhs());
                break;
            case LtlKind::And:
            case LtlKind::Or:
            case LtlKind::Implies:
            case LtlKind::Until:
                l = visit(f.lhs());
                r = visit(f.rhs());
                break;
            default:
                break;
        }
        nodes_.push_back(f);
        lhs_.push_back(l);
        rhs_.push_back(r);
        index.emplace(f.id(), nodes_.size() - 1);
        return nodes_.size() - 1;
    };
    for (const auto& r : roots) roots_.push_back(visit(r));
}

std::vector<char> LtlClosure::atoms(const SState& s) const {
    std::vector<char> out(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        switch (nodes_[i].kind()) {
            case LtlKind::Label:
                out[i] = !is_process(s) && std::get<Transition>(s).label == nodes_[i].atom_label();
                break;
            case LtlKind::Nu:
            case LtlKind::En:
                throw std::invalid_argument("abstract-transition atoms need a path of derivations");
            default:
                break;
        }
    }
    return out;
}

std::vector<char> LtlClosure::atoms(const UState& s, const Semantics& sem) const {
    std::vector<char> out(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const LtlFormula& f = nodes_[i];
        switch (f.kind()) {
            case LtlKind::Label:
                out[i] = !is_process(s) && std::get<Derivation>(s).label() == f.atom_label();
                break;
            case LtlKind::Nu:
                if (!is_process(s)) {
                    const Derivation& d = std::get<Derivation>(s);
                    out[i] = !d.label().is_receive() && abstract_of(d) == f.atom_transition();
                }
                break;
            case LtlKind::En:
                out[i] = enabled(f.atom_transition(), s, sem);
                break;
            default:
                break;
        }
    }
    return out;
}

Valuation LtlClosure::step(const std::vector<char>& atoms, const Valuation* next) const {
    Valuation v(nodes_.size(), false);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        std::size_t l = lhs_[i], r = rhs_[i];
        switch (nodes_[i].kind()) {
            case LtlKind::True: v[i] = true; break;
            case LtlKind::False: v[i] = false; break;
            case LtlKind::Label:
            case LtlKind::Nu:
            case LtlKind::En: v[i] = atoms[i]; break;
            case LtlKind::Not: v[i] = !v[l]; break;
            case LtlKind::And: v[i] = v[l] && v[r]; break;
            case LtlKind::Or: v[i] = v[l] || v[r]; break;
            case LtlKind::Implies: v[i] = !v[l] || v[r]; break;
            case LtlKind::Next: v[i] = next && (*next)[l]; break;
            case LtlKind::Until: v[i] = v[r] || (v[l] && next && (*next)[i]); break;
            case LtlKind::Finally: v[i] = v[l] || (next && (*next)[i]); break;
            case LtlKind::Globally: v[i] = v[l] && (!next || (*next)[i]); break;
        }
    }
    return v;
}

std::vector<Valuation> LtlClosure::cycle(const std::vector<std::vector<char>>& atoms) const {
    const std::size_t n = atoms.size();
    std::vector<Valuation> val(n, Valuation(nodes_.size(), false));
    auto succ = [n](std::size_t p) { return (p + 1) % n; };
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        std::size_t l = lhs_[i], r = rhs_[i];
        LtlKind k = nodes_[i].kind();
        if (k == LtlKind::Until || k == LtlKind::Finally || k == LtlKind::Globally) {
            const bool greatest = k == LtlKind::Globally;
            for (std::size_t p = 0; p < n; ++p) val[p][i] = greatest;
            bool changed = true;
            while (changed) {
                changed = false;
                for (std::size_t q = n; q-- > 0;) {
                    bool nx = val[succ(q)][i];
                    bool v = k == LtlKind::Until      ? val[q][r] || (val[q][l] && nx)
                             : k == LtlKind::Finally ? val[q][l] || nx
                                                     : val[q][l] && nx;
                    if (v != val[q][i]) {
                        val[q][i] = v;
                        changed = true;
                    }
                }
            }
            continue;
        }
        for (std::size_t p = 0; p < n; ++p) {
            bool v = false;
            switch (k) {
                case LtlKind::True: v = true; break;
                case LtlKind::False: v = false; break;
                case LtlKind::Label:
                case LtlKind::Nu:
                case LtlKind::En: v = atoms[p][i]; break;
                case LtlKind::Not: v = !val[p][l]; break;
                case LtlKind::And: v = val[p][l] && val[p][r]; break;
                case LtlKind::Or: v = val[p][l] || val[p][r]; break;
                case LtlKind::Implies: v = !val[p][l] || val[p][r]; break;
                case LtlKind::Next: v = val[succ(p)][l]; break;
                default: break;
            }
            val[p][i] = v;
        }
    }
    return val;
}

Valuation LtlClosure::evaluate_atoms(const std::vector<std::vector<char>>& stem,
                                     const std::vector<std::vector<char>>& cyc) const {
    Valuation next;
    bool have_next = false;
    if (!cyc.empty()) {
        next = cycle(cyc).front();
        have_next = true;
    }
    for (std::size_t p = stem.size(); p-- > 0;) {
        next = step(stem[p], have_next ? &next : nullptr);
        have_next = true;
    }
    return next;
}

Valuation LtlClosure::evaluate(const SPath& p) const {
    std::vector<std::vector<char>> s, c;
    for (const auto& x : p.stem) s.push_back(atoms(x));
    for (const auto& x : p.cycle) c.push_back(atoms(x));
    return evaluate_atoms(s, c);
}

Valuation LtlClosure::evaluate(const UPath& p, const Semantics& sem) const {
    std::vector<std::vector<char>> s, c;
    for (const auto& x : p.stem) s.push_back(atoms(x, sem));
    for (const auto& x : p.cycle) c.push_back(atoms(x, sem));
    return evaluate_atoms(s, c);
}

bool eval_ltl(const SPath& p, const LtlFormula& f) {
    LtlClosure c({f});
    return c.evaluate(p)[c.index_of_root(0)];
}

bool eval_ltl(const UPath& p, const LtlFormula& f, const Semantics& sem) {
    LtlClosure c({f});
    return c.evaluate(p, sem)[c.index_of_root(0)];
}

}  // namespace abc
