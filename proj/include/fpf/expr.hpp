#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpf/interval.hpp"

// Arithmetic expression language for map branches. Grammar in docs/grammar.md.
namespace fpf::expr {

enum class TokenKind { Number, Variable, Identifier, Plus, Minus, Star, Slash, Comma, LParen, RParen, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    double number = 0.0;  // Number
    int variable = -1;    // Variable: index in x0..x{k-1}
    std::size_t offset = 0;
};

/// Maximal-munch lexer. The returned sequence always ends with an End token.
/// Throws LexError carrying the byte offset of the offending character.
std::vector<Token> tokenize(std::string_view source);

enum class Op { Const, Var, Neg, Sin, Cos, Exp, Abs, Sqrt, Add, Sub, Mul, Div, Min, Max };

const char* op_name(Op op);
bool is_unary(Op op);
bool is_binary(Op op);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::Const;
    double value = 0.0;
    int variable = -1;
    NodePtr lhs;
    NodePtr rhs;
    // Mul whose operands are structurally identical; evaluated with the
    // square rule so that x*x never encloses negative values.
    bool square = false;
};

/// Immutable expression tree; cheap to copy and safe to share across threads.
class Expr {
public:
    Expr() = default;

    static Expr constant(double v);
    static Expr variable(int index);
    static Expr unary(Op op, Expr operand);
    static Expr binary(Op op, Expr lhs, Expr rhs);

    const Node& node() const { return *root_; }
    bool empty() const { return root_ == nullptr; }
    Expr lhs() const { return Expr(root_->lhs); }
    Expr rhs() const { return Expr(root_->rhs); }

    /// Largest variable index used, or -1 for a closed expression.
    int max_variable() const;
    /// Throws DomainError if a variable index is >= dimension.
    void bind(int dimension) const;

    friend bool structurally_equal(const Expr& a, const Expr& b);

private:
    explicit Expr(NodePtr root) : root_(std::move(root)) {}
    NodePtr root_;
};

bool structurally_equal(const Expr& a, const Expr& b);

/// Precedence climbing: unary minus > (*, /) > (+, -). Throws ParseError.
Expr parse(const std::vector<Token>& tokens);
/// tokenize + parse.
Expr parse(std::string_view source);

/// Fully parenthesised rendering; parse(print(e)) is structurally equal to e
/// for every expression whose literals are non-negative.
std::string print(const Expr& e);

double eval_point(const Expr& e, std::span<const double> point);

/// Natural interval extension. Inclusion-sound and monotone under box
/// inclusion. Throws DomainError where the extension is undefined.
Interval eval_interval(const Expr& e, std::span<const Interval> box);

/// Value enclosure together with an enclosure of the gradient over the box.
/// has_gradient is false where a derivative is unbounded (sqrt at 0).
struct Enclosure {
    Interval value;
    std::vector<Interval> gradient;
    bool has_gradient = true;
};

Enclosure eval_with_gradient(const Expr& e, std::span<const Interval> box);

/// Intersection of the natural extension with the mean-value form
/// f(mid) + grad f(box) * (box - mid). Tighter on small boxes, still sound.
Interval eval_centered(const Expr& e, std::span<const Interval> box);

/// Same, for e(x) - x[axis]: the displacement of one coordinate of a map.
Interval eval_centered_displacement(const Expr& e, int axis, std::span<const Interval> box);

}  // namespace fpf::expr
