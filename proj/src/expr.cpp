#include "fpf/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "fpf/errors.hpp"

namespace fpf::expr {

// ---------------------------------------------------------------------------
// Lexer

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.offset = i;
        if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
            std::size_t j = i;
            while (j < src.size() && is_digit(src[j])) ++j;
            if (j < src.size() && src[j] == '.') {
                ++j;
                while (j < src.size() && is_digit(src[j])) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && is_digit(src[k])) {
                    while (k < src.size() && is_digit(src[k])) ++k;
                    j = k;
                }
            }
            t.kind = TokenKind::Number;
            t.text = std::string(src.substr(i, j - i));
            t.number = std::strtod(t.text.c_str(), nullptr);
            if (!std::isfinite(t.number)) throw LexError("numeric literal out of range", i);
            i = j;
        } else if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && is_ident_char(src[j])) ++j;
            t.text = std::string(src.substr(i, j - i));
            bool numbered = t.text.size() > 1 && t.text[0] == 'x';
            for (std::size_t k = 1; numbered && k < t.text.size(); ++k) numbered = is_digit(t.text[k]);
            if (numbered) {
                if (t.text.size() > 9) throw LexError("variable index too large", i);
                t.kind = TokenKind::Variable;
                t.variable = std::atoi(t.text.c_str() + 1);
            } else {
                t.kind = TokenKind::Identifier;
            }
            i = j;
        } else {
            switch (c) {
                case '+': t.kind = TokenKind::Plus; break;
                case '-': t.kind = TokenKind::Minus; break;
                case '*': t.kind = TokenKind::Star; break;
                case '/': t.kind = TokenKind::Slash; break;
                case ',': t.kind = TokenKind::Comma; break;
                case '(': t.kind = TokenKind::LParen; break;
                case ')': t.kind = TokenKind::RParen; break;
                default: throw LexError(std::string("unrecognized character '") + c + "'", i);
            }
            t.text = std::string(1, c);
            ++i;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = TokenKind::End;
    end.offset = src.size();
    out.push_back(end);
    return out;
}

// ---------------------------------------------------------------------------
// AST

const char* op_name(Op op) {
    switch (op) {
        case Op::Const: return "const";
        case Op::Var: return "var";
        case Op::Neg: return "neg";
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Exp: return "exp";
        case Op::Abs: return "abs";
        case Op::Sqrt: return "sqrt";
        case Op::Add: return "add";
        case Op::Sub: return "sub";
        case Op::Mul: return "mul";
        case Op::Div: return "div";
        case Op::Min: return "min";
        case Op::Max: return "max";
    }
    return "?";
}

bool is_unary(Op op) {
    return op == Op::Neg || op == Op::Sin || op == Op::Cos || op == Op::Exp || op == Op::Abs || op == Op::Sqrt;
}

bool is_binary(Op op) {
    return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Min || op == Op::Max;
}

Expr Expr::constant(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = v;
    return Expr(std::move(n));
}

Expr Expr::variable(int index) {
    if (index < 0) throw DomainError("negative variable index");
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->variable = index;
    return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr operand) {
    if (!is_unary(op)) throw Error(std::string("not a unary operator: ") + op_name(op));
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(operand.root_);
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    if (!is_binary(op)) throw Error(std::string("not a binary operator: ") + op_name(op));
    auto n = std::make_shared<Node>();
    n->op = op;
    n->square = op == Op::Mul && structurally_equal(lhs, rhs);
    n->lhs = std::move(lhs.root_);
    n->rhs = std::move(rhs.root_);
    return Expr(std::move(n));
}

namespace {

int max_var(const Node& n) {
    int m = n.op == Op::Var ? n.variable : -1;
    if (n.lhs) m = std::max(m, max_var(*n.lhs));
    if (n.rhs) m = std::max(m, max_var(*n.rhs));
    return m;
}

bool node_equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op) return false;
    if (a->op == Op::Const) return a->value == b->value;
    if (a->op == Op::Var) return a->variable == b->variable;
    return node_equal(a->lhs.get(), b->lhs.get()) && node_equal(a->rhs.get(), b->rhs.get());
}

}  // namespace

int Expr::max_variable() const { return root_ ? max_var(*root_) : -1; }

void Expr::bind(int dimension) const {
    const int m = max_variable();
    if (m >= dimension) {
        throw DomainError("variable x" + std::to_string(m) + " is out of range for dimension " +
                          std::to_string(dimension));
    }
}

bool structurally_equal(const Expr& a, const Expr& b) { return node_equal(a.root_.get(), b.root_.get()); }

// ---------------------------------------------------------------------------
// Parser

namespace {

constexpr int kAdditive = 10;
constexpr int kMultiplicative = 20;
constexpr int kPrefix = 30;

class Parser {
public:
    explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

    Expr run() {
        if (toks_.empty()) throw ParseError("expected expression", 0);
        Expr e = expression(0);
        if (peek().kind != TokenKind::End) throw ParseError("unexpected token '" + peek().text + "'", peek().offset);
        return e;
    }

private:
    const Token& peek() const { return toks_[std::min(pos_, toks_.size() - 1)]; }
    const Token& advance() {
        const Token& t = peek();
        if (pos_ < toks_.size()) ++pos_;
        return t;
    }
    void expect(TokenKind kind, const char* what) {
        if (peek().kind != kind) throw ParseError(std::string("expected ") + what, peek().offset);
        advance();
    }

    static int infix_power(TokenKind k) {
        switch (k) {
            case TokenKind::Plus:
            case TokenKind::Minus: return kAdditive;
            case TokenKind::Star:
            case TokenKind::Slash: return kMultiplicative;
            default: return -1;
        }
    }

    Expr expression(int min_power) {
        Expr lhs = prefix();
        for (;;) {
            const TokenKind k = peek().kind;
            const int power = infix_power(k);
            if (power < 0 || power <= min_power) break;
            advance();
            Expr rhs = expression(power);
            const Op op = k == TokenKind::Plus    ? Op::Add
                          : k == TokenKind::Minus ? Op::Sub
                          : k == TokenKind::Star  ? Op::Mul
                                                  : Op::Div;
            lhs = Expr::binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr prefix() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Number: advance(); return Expr::constant(t.number);
            case TokenKind::Variable: advance(); return Expr::variable(t.variable);
            case TokenKind::Minus: advance(); return Expr::unary(Op::Neg, expression(kPrefix));
            case TokenKind::LParen: {
                advance();
                Expr inner = expression(0);
                expect(TokenKind::RParen, "')'");
                return inner;
            }
            case TokenKind::Identifier: return call();
            default: throw ParseError("expected expression", t.offset);
        }
    }

    Expr call() {
        const Token& name = advance();
        Op op;
        int arity = 1;
        if (name.text == "sin") op = Op::Sin;
        else if (name.text == "cos") op = Op::Cos;
        else if (name.text == "exp") op = Op::Exp;
        else if (name.text == "abs") op = Op::Abs;
        else if (name.text == "sqrt") op = Op::Sqrt;
        else if (name.text == "min") op = Op::Min, arity = 2;
        else if (name.text == "max") op = Op::Max, arity = 2;
        else throw ParseError("unknown function '" + name.text + "'", name.offset);
        expect(TokenKind::LParen, "'('");
        Expr a = expression(0);
        if (arity == 1) {
            expect(TokenKind::RParen, "')'");
            return Expr::unary(op, std::move(a));
        }
        expect(TokenKind::Comma, "','");
        Expr b = expression(0);
        expect(TokenKind::RParen, "')'");
        return Expr::binary(op, std::move(a), std::move(b));
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

Expr parse(std::string_view source) { return parse(tokenize(source)); }

// ---------------------------------------------------------------------------
// Printer

namespace {

void print_to(const Node& n, std::string& out) {
    switch (n.op) {
        case Op::Const: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            out += buf;
            return;
        }
        case Op::Var: out += "x" + std::to_string(n.variable); return;
        case Op::Neg:
            out += "-";
            print_to(*n.lhs, out);
            return;
        case Op::Sin:
        case Op::Cos:
        case Op::Exp:
        case Op::Abs:
        case Op::Sqrt:
            out += op_name(n.op);
            out += "(";
            print_to(*n.lhs, out);
            out += ")";
            return;
        case Op::Min:
        case Op::Max:
            out += op_name(n.op);
            out += "(";
            print_to(*n.lhs, out);
            out += ", ";
            print_to(*n.rhs, out);
            out += ")";
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? " * " : " / ";
            out += "(";
            print_to(*n.lhs, out);
            out += sym;
            print_to(*n.rhs, out);
            out += ")";
            return;
        }
    }
}

}  // namespace

std::string print(const Expr& e) {
    std::string out;
    if (!e.empty()) print_to(e.node(), out);
    return out;
}

// ---------------------------------------------------------------------------
// Point evaluation

namespace {

double point_eval(const Node& n, std::span<const double> p) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var:
            if (static_cast<std::size_t>(n.variable) >= p.size())
                throw DomainError("unbound variable x" + std::to_string(n.variable));
            return p[n.variable];
        case Op::Neg: return -point_eval(*n.lhs, p);
        case Op::Sin: return std::sin(point_eval(*n.lhs, p));
        case Op::Cos: return std::cos(point_eval(*n.lhs, p));
        case Op::Exp: {
            const double r = std::exp(point_eval(*n.lhs, p));
            if (!std::isfinite(r)) throw DomainError("exp overflow");
            return r;
        }
        case Op::Abs: return std::fabs(point_eval(*n.lhs, p));
        case Op::Sqrt: {
            const double a = point_eval(*n.lhs, p);
            if (a < 0.0) throw DomainError("sqrt of a negative number");
            return std::sqrt(a);
        }
        case Op::Add: return point_eval(*n.lhs, p) + point_eval(*n.rhs, p);
        case Op::Sub: return point_eval(*n.lhs, p) - point_eval(*n.rhs, p);
        case Op::Mul: return point_eval(*n.lhs, p) * point_eval(*n.rhs, p);
        case Op::Div: {
            const double a = point_eval(*n.lhs, p);
            const double b = point_eval(*n.rhs, p);
            if (b == 0.0) throw DomainError("division by zero");
            return a / b;
        }
        case Op::Min: return std::min(point_eval(*n.lhs, p), point_eval(*n.rhs, p));
        case Op::Max: return std::max(point_eval(*n.lhs, p), point_eval(*n.rhs, p));
    }
    return 0.0;
}

}  // namespace

double eval_point(const Expr& e, std::span<const double> point) {
    const double r = point_eval(e.node(), point);
    if (!std::isfinite(r)) throw DomainError("non-finite value");
    return r;
}

// ---------------------------------------------------------------------------
// Interval evaluation

namespace {

Interval interval_eval(const Node& n, std::span<const Interval> b) {
    switch (n.op) {
        case Op::Const: return Interval{n.value};
        case Op::Var:
            if (static_cast<std::size_t>(n.variable) >= b.size())
                throw DomainError("unbound variable x" + std::to_string(n.variable));
            return b[n.variable];
        case Op::Neg: return -interval_eval(*n.lhs, b);
        case Op::Sin: return sin(interval_eval(*n.lhs, b));
        case Op::Cos: return cos(interval_eval(*n.lhs, b));
        case Op::Exp: return exp(interval_eval(*n.lhs, b));
        case Op::Abs: return abs(interval_eval(*n.lhs, b));
        case Op::Sqrt: return sqrt(interval_eval(*n.lhs, b));
        case Op::Add: return interval_eval(*n.lhs, b) + interval_eval(*n.rhs, b);
        case Op::Sub: return interval_eval(*n.lhs, b) - interval_eval(*n.rhs, b);
        case Op::Mul:
            if (n.square) return sqr(interval_eval(*n.lhs, b));
            return interval_eval(*n.lhs, b) * interval_eval(*n.rhs, b);
        case Op::Div: return interval_eval(*n.lhs, b) / interval_eval(*n.rhs, b);
        case Op::Min: return min(interval_eval(*n.lhs, b), interval_eval(*n.rhs, b));
        case Op::Max: return max(interval_eval(*n.lhs, b), interval_eval(*n.rhs, b));
    }
    return {};
}

std::vector<Interval> zero_gradient(std::size_t k) { return std::vector<Interval>(k, Interval{0.0}); }

void scale_gradient(std::vector<Interval>& g, const Interval& s) {
    for (auto& gi : g) gi = gi * s;
}

Enclosure gradient_eval(const Node& n, std::span<const Interval> b) {
    const std::size_t k = b.size();
    Enclosure r;
    switch (n.op) {
        case Op::Const:
            r.value = Interval{n.value};
            r.gradient = zero_gradient(k);
            return r;
        case Op::Var:
            if (static_cast<std::size_t>(n.variable) >= k)
                throw DomainError("unbound variable x" + std::to_string(n.variable));
            r.value = b[n.variable];
            r.gradient = zero_gradient(k);
            r.gradient[n.variable] = Interval{1.0};
            return r;
        default: break;
    }

    Enclosure a = gradient_eval(*n.lhs, b);
    if (is_unary(n.op)) {
        r.has_gradient = a.has_gradient;
        r.gradient = a.gradient;
        switch (n.op) {
            case Op::Neg:
                r.value = -a.value;
                for (auto& g : r.gradient) g = -g;
                break;
            case Op::Sin:
                r.value = sin(a.value);
                scale_gradient(r.gradient, cos(a.value));
                break;
            case Op::Cos:
                r.value = cos(a.value);
                scale_gradient(r.gradient, -sin(a.value));
                break;
            case Op::Exp:
                r.value = exp(a.value);
                scale_gradient(r.gradient, r.value);
                break;
            case Op::Abs: {
                r.value = abs(a.value);
                const Interval s = a.value.lo > 0.0 ? Interval{1.0} : a.value.hi < 0.0 ? Interval{-1.0} : Interval{-1.0, 1.0};
                scale_gradient(r.gradient, s);
                break;
            }
            case Op::Sqrt:
                r.value = sqrt(a.value);
                if (r.value.lo > 0.0) {
                    scale_gradient(r.gradient, Interval{1.0} / (Interval{2.0} * r.value));
                } else {
                    r.has_gradient = false;
                }
                break;
            default: break;
        }
        return r;
    }

    Enclosure c = gradient_eval(*n.rhs, b);
    r.has_gradient = a.has_gradient && c.has_gradient;
    r.gradient.resize(k);
    switch (n.op) {
        case Op::Add:
            r.value = a.value + c.value;
            for (std::size_t i = 0; i < k; ++i) r.gradient[i] = a.gradient[i] + c.gradient[i];
            break;
        case Op::Sub:
            r.value = a.value - c.value;
            for (std::size_t i = 0; i < k; ++i) r.gradient[i] = a.gradient[i] - c.gradient[i];
            break;
        case Op::Mul:
            r.value = n.square ? sqr(a.value) : a.value * c.value;
            for (std::size_t i = 0; i < k; ++i) r.gradient[i] = a.gradient[i] * c.value + c.gradient[i] * a.value;
            break;
        case Op::Div:
            r.value = a.value / c.value;
            for (std::size_t i = 0; i < k; ++i)
                r.gradient[i] = (a.gradient[i] - r.value * c.gradient[i]) / c.value;
            break;
        case Op::Min:
        case Op::Max: {
            r.value = n.op == Op::Min ? min(a.value, c.value) : max(a.value, c.value);
            const bool a_wins = n.op == Op::Min ? a.value.hi < c.value.lo : a.value.lo > c.value.hi;
            const bool c_wins = n.op == Op::Min ? c.value.hi < a.value.lo : c.value.lo > a.value.hi;
            for (std::size_t i = 0; i < k; ++i) {
                r.gradient[i] = a_wins ? a.gradient[i] : c_wins ? c.gradient[i] : hull(a.gradient[i], c.gradient[i]);
            }
            break;
        }
        default: break;
    }
    return r;
}

std::vector<Interval> midpoint(std::span<const Interval> box) {
    std::vector<Interval> m;
    m.reserve(box.size());
    for (const auto& iv : box) m.emplace_back(iv.mid());
    return m;
}

Interval mean_value_sum(Interval center, const std::vector<Interval>& grad, std::span<const Interval> box,
                        const std::vector<Interval>& mid) {
    for (std::size_t i = 0; i < box.size(); ++i) center = center + grad[i] * (box[i] - mid[i]);
    return center;
}

}  // namespace

Interval eval_interval(const Expr& e, std::span<const Interval> box) {
    const Interval r = interval_eval(e.node(), box);
    if (!r.finite()) throw DomainError("non-finite enclosure");
    return r;
}

Enclosure eval_with_gradient(const Expr& e, std::span<const Interval> box) { return gradient_eval(e.node(), box); }

Interval eval_centered(const Expr& e, std::span<const Interval> box) {
    const Enclosure full = eval_with_gradient(e, box);
    if (!full.has_gradient) return full.value;
    const auto mid = midpoint(box);
    const Interval mv = mean_value_sum(eval_interval(e, mid), full.gradient, box, mid);
    return intersect(full.value, mv).value_or(full.value);
}

Interval eval_centered_displacement(const Expr& e, int axis, std::span<const Interval> box) {
    const Enclosure full = eval_with_gradient(e, box);
    const Interval natural = full.value - box[axis];
    if (!full.has_gradient) return natural;
    auto grad = full.gradient;
    grad[axis] = grad[axis] - Interval{1.0};
    const auto mid = midpoint(box);
    const Interval mv = mean_value_sum(eval_interval(e, mid) - mid[axis], grad, box, mid);
    return intersect(natural, mv).value_or(natural);
}

}  // namespace fpf::expr
