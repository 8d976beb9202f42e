// Recursive-descent parsers for the model, package and expression formats.

#include <charconv>
#include <regex>
#include <set>

#include "preface/textio.hpp"
#include "textio/lexer.hpp"

namespace preface {

ParseError::ParseError(SourceLocation loc, std::string expected, std::string found)
    : std::runtime_error(loc.file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) +
                         ": expected " + expected + ", found " + found),
      loc_(std::move(loc)),
      expected_(std::move(expected)),
      found_(std::move(found))
{
}

ParseError::ParseError(SourceLocation loc, std::string message)
    : std::runtime_error(loc.file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " +
                         message),
      loc_(std::move(loc))
{
}

namespace textio {
namespace {

// Words with a fixed meaning inside expressions; they cannot name variables,
// members or states.
const std::set<std::string, std::less<>>& reserved_words()
{
    static const std::set<std::string, std::less<>> words = {
        "and", "or", "not", "implies", "true", "false", "forall", "exists", "in", "size", "isEmpty",
        "hasStereotype"};
    return words;
}

class Parser {
public:
    Parser(std::string_view text, std::string file, int line = 1, int column = 1)
        : file_(std::move(file))
    {
        LexResult lexed = lex(text, file_, line, column);
        tokens_ = std::move(lexed.tokens);
        comments_ = std::move(lexed.comments);
    }

    // --- token helpers ------------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const
    {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    const Token& last() const { return tokens_[pos_ == 0 ? 0 : pos_ - 1]; }

    bool at_word(std::string_view word, std::size_t ahead = 0) const
    {
        const Token& t = peek(ahead);
        return t.kind == TokenKind::ident && t.text == word;
    }
    bool at_symbol(std::string_view sym, std::size_t ahead = 0) const
    {
        const Token& t = peek(ahead);
        return t.kind == TokenKind::symbol && t.text == sym;
    }
    bool at_end() const { return peek().kind == TokenKind::end; }

    [[noreturn]] void fail(std::string expected) const
    {
        throw ParseError(peek().loc, std::move(expected), describe(peek()));
    }

    void expect_word(std::string_view word)
    {
        if (!at_word(word)) {
            fail("'" + std::string(word) + "'");
        }
        next();
    }
    void expect_symbol(std::string_view sym)
    {
        if (!at_symbol(sym)) {
            fail("'" + std::string(sym) + "'");
        }
        next();
    }
    bool accept_word(std::string_view word)
    {
        if (at_word(word)) {
            next();
            return true;
        }
        return false;
    }
    bool accept_symbol(std::string_view sym)
    {
        if (at_symbol(sym)) {
            next();
            return true;
        }
        return false;
    }

    std::string identifier(std::string what = "identifier")
    {
        if (peek().kind != TokenKind::ident) {
            fail(std::move(what));
        }
        return next().text;
    }

    /// An identifier that declares a name usable in expressions.
    std::string name(std::string what)
    {
        if (peek().kind == TokenKind::ident && reserved_words().count(peek().text) != 0) {
            throw ParseError(peek().loc, "'" + peek().text + "' is reserved and cannot name a " + what);
        }
        return identifier(what + " name");
    }

    std::string string_literal(std::string what)
    {
        if (peek().kind != TokenKind::string) {
            fail(std::move(what));
        }
        return next().text;
    }

    std::int64_t integer(bool negative)
    {
        const Token& t = next();
        const std::string digits = (negative ? "-" : "") + t.text;
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
            throw ParseError(t.loc, "integer literal out of range");
        }
        return value;
    }

    Literal literal()
    {
        if (peek().kind == TokenKind::integer) {
            return integer(false);
        }
        if (at_symbol("-") && peek(1).kind == TokenKind::integer) {
            next();
            return integer(true);
        }
        if (peek().kind == TokenKind::string) {
            return next().text;
        }
        if (accept_word("true")) {
            return true;
        }
        if (accept_word("false")) {
            return false;
        }
        fail("literal");
    }

    void expect_end()
    {
        if (!at_end()) {
            fail("end of input");
        }
    }

    // --- expressions --------------------------------------------------------

    ExprPtr expr() { return implies_expr(); }

    ExprPtr implies_expr()
    {
        ExprPtr lhs = or_expr();
        if (at_word("implies")) {
            const SourceLocation loc = next().loc;
            return build::logic(LogicOp::implies, lhs, implies_expr(), loc);
        }
        return lhs;
    }

    ExprPtr or_expr()
    {
        ExprPtr lhs = and_expr();
        while (at_word("or")) {
            const SourceLocation loc = next().loc;
            lhs = build::logic(LogicOp::or_, lhs, and_expr(), loc);
        }
        return lhs;
    }

    ExprPtr and_expr()
    {
        ExprPtr lhs = not_expr();
        while (at_word("and")) {
            const SourceLocation loc = next().loc;
            lhs = build::logic(LogicOp::and_, lhs, not_expr(), loc);
        }
        return lhs;
    }

    ExprPtr not_expr()
    {
        if (at_word("not")) {
            const SourceLocation loc = next().loc;
            return build::not_(not_expr(), loc);
        }
        return comparison();
    }

    ExprPtr comparison()
    {
        ExprPtr lhs = additive();
        static const std::pair<std::string_view, CompareOp> ops[] = {
            {"=", CompareOp::eq}, {"<>", CompareOp::ne}, {"<", CompareOp::lt},
            {"<=", CompareOp::le}, {">", CompareOp::gt}, {">=", CompareOp::ge}};
        for (const auto& [sym, op] : ops) {
            if (at_symbol(sym)) {
                const SourceLocation loc = next().loc;
                return build::compare(op, lhs, additive(), loc);
            }
        }
        return lhs;
    }

    ExprPtr additive()
    {
        ExprPtr lhs = postfix();
        while (at_symbol("+") || at_symbol("-")) {
            const Token& op = next();
            const ArithOp kind = op.text == "+" ? ArithOp::add : ArithOp::sub;
            lhs = build::arith(kind, lhs, postfix(), op.loc);
        }
        return lhs;
    }

    ExprPtr postfix()
    {
        ExprPtr target = primary();
        while (at_symbol(".")) {
            const SourceLocation loc = next().loc;
            target = build::nav(target, identifier("feature name"), loc);
        }
        return target;
    }

    ExprPtr primary()
    {
        const Token& t = peek();
        const SourceLocation loc = t.loc;
        if (t.kind == TokenKind::integer || t.kind == TokenKind::string ||
            (at_symbol("-") && peek(1).kind == TokenKind::integer)) {
            return build::lit(literal(), loc);
        }
        if (accept_symbol("(")) {
            ExprPtr inner = expr();
            expect_symbol(")");
            return inner;
        }
        if (t.kind != TokenKind::ident) {
            fail("expression");
        }
        if (accept_word("true")) {
            return build::lit(true, loc);
        }
        if (accept_word("false")) {
            return build::lit(false, loc);
        }
        if (at_word("forall") || at_word("exists")) {
            const Quantifier kind = next().text == "forall" ? Quantifier::forall : Quantifier::exists;
            expect_symbol("(");
            std::string var = name("variable");
            expect_word("in");
            ExprPtr domain = expr();
            expect_symbol("|");
            ExprPtr body = expr();
            expect_symbol(")");
            return build::quant(kind, std::move(var), domain, body, loc);
        }
        if (at_word("size") || at_word("isEmpty")) {
            const Builtin fn = next().text == "size" ? Builtin::size : Builtin::is_empty;
            expect_symbol("(");
            ExprPtr arg = expr();
            expect_symbol(")");
            return build::call(fn, {arg}, loc);
        }
        if (accept_word("hasStereotype")) {
            expect_symbol("(");
            ExprPtr element = expr();
            expect_symbol(",");
            const SourceLocation name_loc = peek().loc;
            ExprPtr stereotype = build::lit(string_literal("stereotype name string"), name_loc);
            expect_symbol(")");
            return build::call(Builtin::has_stereotype, {element, stereotype}, loc);
        }
        if (reserved_words().count(t.text) != 0) {
            fail("expression");
        }
        return build::var(next().text, loc);
    }

    // --- models -------------------------------------------------------------

    Model model()
    {
        Model m;
        m.loc = peek().loc;
        expect_word("model");
        m.name = identifier("model name");
        while (!at_end()) {
            if (at_word("class")) {
                m.classes.push_back(class_def());
            } else if (at_word("statechart")) {
                m.statecharts.push_back(chart_def());
            } else {
                fail("'class' or 'statechart'");
            }
        }
        return m;
    }

    ClassDef class_def()
    {
        ClassDef cls;
        cls.loc = peek().loc;
        expect_word("class");
        cls.name = name("class");
        if (accept_word("specializes")) {
            do {
                cls.superclasses.push_back(identifier("superclass name"));
            } while (accept_symbol(","));
        }
        if (accept_symbol("<<")) {
            do {
                cls.stereotypes.insert(identifier("stereotype name"));
            } while (accept_symbol(","));
            expect_symbol(">>");
        }
        expect_symbol("{");
        const int body_start = last().loc.line;
        while (!at_symbol("}")) {
            if (at_word("attribute")) {
                Attribute attr;
                attr.loc = next().loc;
                attr.name = name("attribute");
                expect_symbol(":");
                attr.type = identifier("type name");
                attr.origin = trailing_origin();
                cls.attributes.push_back(std::move(attr));
            } else if (at_word("operation")) {
                cls.operations.push_back(operation());
            } else if (at_word("invariant")) {
                Invariant inv;
                inv.loc = next().loc;
                inv.expr = expr();
                inv.origin = trailing_origin();
                cls.invariants.push_back(std::move(inv));
            } else if (at_word("tag")) {
                const SourceLocation loc = next().loc;
                std::string key = identifier("tag name");
                expect_symbol("=");
                if (!cls.tagged_values.emplace(key, literal()).second) {
                    throw ParseError(loc, "duplicate tagged value '" + key + "'");
                }
            } else {
                fail("'attribute', 'operation', 'invariant', 'tag' or '}'");
            }
        }
        const int body_end = peek().loc.line;
        expect_symbol("}");
        attach_induced_preconditions(cls, body_start, body_end);
        return cls;
    }

    Operation operation()
    {
        Operation op;
        op.loc = next().loc;
        op.name = name("operation");
        expect_symbol("(");
        if (!at_symbol(")")) {
            do {
                Parameter p;
                p.name = name("parameter");
                expect_symbol(":");
                p.type = identifier("type name");
                op.params.push_back(std::move(p));
            } while (accept_symbol(","));
        }
        expect_symbol(")");
        if (at_word("pre") && at_symbol(":", 1)) {
            next();
            next();
            op.pre_authored = expr();
        }
        if (at_word("post") && at_symbol(":", 1)) {
            next();
            next();
            op.post_authored = expr();
        }
        op.origin = trailing_origin();
        return op;
    }

    Statechart chart_def()
    {
        Statechart chart;
        chart.loc = peek().loc;
        expect_word("statechart");
        chart.name = identifier("statechart name");
        expect_word("for");
        chart.attached_to = identifier("class name");
        expect_symbol("{");
        while (!at_symbol("}")) {
            if (at_word("initial") || at_word("state")) {
                State s;
                s.loc = peek().loc;
                s.initial = accept_word("initial");
                expect_word("state");
                s.name = name("state");
                chart.states.push_back(std::move(s));
            } else if (at_word("transition")) {
                Transition t;
                t.loc = next().loc;
                t.source = identifier("source state");
                expect_symbol("->");
                t.target = identifier("target state");
                expect_word("on");
                t.event = identifier("event name");
                if (accept_symbol("[")) {
                    t.guard = expr();
                    expect_symbol("]");
                }
                chart.transitions.push_back(std::move(t));
            } else {
                fail("'state', 'initial', 'transition' or '}'");
            }
        }
        expect_symbol("}");
        return chart;
    }

    // Induced elements are printed with `// induced by <rule> from <chart>`
    // on their line, and induced preconditions as standalone
    // `// induced pre <op> by <rule> from <chart>: <expr>` lines.

    Origin trailing_origin() const
    {
        static const std::regex pattern(R"(^induced by ([A-Za-z0-9_-]+) from ([A-Za-z_][A-Za-z0-9_]*)$)");
        const int line = last().loc.line;
        for (const auto& c : comments_) {
            if (c.loc.line != line) {
                continue;
            }
            std::smatch m;
            if (std::regex_match(c.text, m, pattern)) {
                return Origin::induced(m[1].str(), m[2].str());
            }
        }
        return {};
    }

    void attach_induced_preconditions(ClassDef& cls, int first_line, int last_line) const
    {
        static const std::regex pattern(
            R"(^induced pre ([A-Za-z_][A-Za-z0-9_]*) by ([A-Za-z0-9_-]+) from ([A-Za-z_][A-Za-z0-9_]*): (.+)$)");
        for (const auto& c : comments_) {
            if (c.loc.line < first_line || c.loc.line > last_line) {
                continue;
            }
            std::smatch m;
            if (!std::regex_match(c.text, m, pattern)) {
                continue;
            }
            Operation* op = cls.find_operation(m[1].str());
            if (!op) {
                throw ParseError(c.loc, "induced precondition for unknown operation '" + m[1].str() + "'");
            }
            if (op->pre_induced) {
                throw ParseError(c.loc, "second induced precondition for operation '" + op->name + "'");
            }
            // Column of the expression: after `//`, leading blanks and the matched prefix.
            const auto offset = static_cast<int>(m.position(4));
            Parser sub(m[4].str(), file_, c.loc.line, c.loc.column + 3 + offset);
            ExprPtr pre = sub.expr();
            sub.expect_end();
            op->pre_induced = InducedPrecondition{pre, Origin::induced(m[2].str(), m[3].str())};
        }
    }

    // --- packages -----------------------------------------------------------

    Package package()
    {
        Package pkg;
        pkg.loc = peek().loc;
        expect_word("package");
        pkg.id = string_literal("package id string");
        expect_symbol("{");
        while (at_word("import")) {
            const SourceLocation loc = next().loc;
            std::string id = string_literal("imported package id string");
            if (id == pkg.id) {
                throw ParseError(loc, "package '" + pkg.id + "' imports itself");
            }
            pkg.imports.push_back(std::move(id));
        }
        while (!at_symbol("}")) {
            if (at_word("import")) {
                throw ImportAfterDefinition(peek().loc, "imports must precede definitions");
            }
            pkg.definitions.push_back(definition());
        }
        expect_symbol("}");
        expect_end();
        return pkg;
    }

    ElementKind metaclass()
    {
        const Token& t = peek();
        if (t.kind == TokenKind::ident) {
            if (auto kind = parse_metaclass(t.text)) {
                next();
                return *kind;
            }
        }
        fail("metaclass (Class, Attribute, Operation, Statechart or Transition)");
    }

    std::string dotted()
    {
        std::string key = identifier("option key");
        while (accept_symbol(".")) {
            key += "." + identifier("option key segment");
        }
        return key;
    }

    std::string hyphenated()
    {
        std::string id = identifier("transform id");
        while (at_symbol("-") && peek(1).kind == TokenKind::ident) {
            next();
            id += "-" + next().text;
        }
        return id;
    }

    Definition definition()
    {
        Definition def;
        def.loc = peek().loc;
        if (accept_word("const")) {
            ConstDef d;
            d.key = identifier("constant name");
            expect_symbol("=");
            d.value = literal();
            def.body = std::move(d);
        } else if (accept_word("option")) {
            OptionDef d;
            d.key = dotted();
            expect_symbol("=");
            d.value = identifier("option value");
            def.body = std::move(d);
        } else if (accept_word("stereotype")) {
            StereotypeDef d;
            d.name = identifier("stereotype name");
            expect_word("on");
            d.base = metaclass();
            if (accept_word("requires")) {
                do {
                    d.required_tags.push_back(identifier("tag name"));
                } while (accept_symbol(","));
            }
            def.body = std::move(d);
        } else if (accept_word("tagdef")) {
            TagDef d;
            d.name = identifier("tag name");
            expect_symbol(":");
            if (accept_word("string")) {
                d.type = TagType::string;
            } else if (accept_word("int")) {
                d.type = TagType::int_;
            } else if (accept_word("bool")) {
                d.type = TagType::bool_;
            } else {
                fail("'string', 'int' or 'bool'");
            }
            def.body = std::move(d);
        } else if (accept_word("constraint")) {
            ConstraintDef d;
            d.name = identifier("constraint name");
            expect_word("on");
            d.scope = metaclass();
            if (accept_word("severity")) {
                if (accept_word("error")) {
                    d.severity = Severity::error;
                } else if (accept_word("warning")) {
                    d.severity = Severity::warning;
                } else {
                    fail("'error' or 'warning'");
                }
            }
            expect_symbol(":");
            d.body = expr();
            def.body = std::move(d);
        } else if (accept_word("rule")) {
            PredicatedRuleDef d;
            d.property = identifier("property name");
            expect_word("when");
            if (accept_word("all")) {
                d.predicate = pred::All{};
            } else if (accept_word("stereotype")) {
                expect_symbol("(");
                d.predicate = pred::HasStereotype{identifier("stereotype name")};
                expect_symbol(")");
            } else if (accept_word("metaclass")) {
                expect_symbol("(");
                d.predicate = pred::IsMetaclass{metaclass()};
                expect_symbol(")");
            } else {
                fail("'all', 'stereotype(' or 'metaclass('");
            }
            expect_symbol("=");
            d.value = identifier("rule value");
            def.body = std::move(d);
        } else if (accept_word("transform")) {
            TransformSelection d;
            d.id = hyphenated();
            if (accept_word("on")) {
                d.enabled = true;
            } else if (accept_word("off")) {
                d.enabled = false;
            } else {
                fail("'on' or 'off'");
            }
            def.body = std::move(d);
        } else {
            fail("definition ('const', 'option', 'stereotype', 'tagdef', 'constraint', 'rule' or 'transform')");
        }
        return def;
    }

private:
    std::string file_;
    std::vector<Token> tokens_;
    std::vector<Comment> comments_;
    std::size_t pos_ = 0;
};

}  // namespace
}  // namespace textio

Model parse_model(std::string_view text, std::string file)
{
    textio::Parser parser(text, std::move(file));
    return parser.model();
}

Package parse_package(std::string_view text, std::string file)
{
    textio::Parser parser(text, std::move(file));
    return parser.package();
}

ExprPtr parse_expr(std::string_view text, std::string file)
{
    textio::Parser parser(text, std::move(file));
    ExprPtr e = parser.expr();
    parser.expect_end();
    return e;
}

}  // namespace preface
