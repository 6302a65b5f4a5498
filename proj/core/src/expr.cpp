#include "egd/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "egd/errors.hpp"

namespace egd {

struct PdfExpr::Node {
    enum class Op { Constant, VarX, VarZ, Add, Sub, Mul, Neg, Pow };

    Op op = Op::Constant;
    double value = 0.0;
    int exponent = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double x, double z) const {
        switch (op) {
            case Op::Constant: return value;
            case Op::VarX: return x;
            case Op::VarZ: return z;
            case Op::Add: return lhs->eval(x, z) + rhs->eval(x, z);
            case Op::Sub: return lhs->eval(x, z) - rhs->eval(x, z);
            case Op::Mul: return lhs->eval(x, z) * rhs->eval(x, z);
            case Op::Neg: return -lhs->eval(x, z);
            case Op::Pow: {
                double base = lhs->eval(x, z);
                double out = 1.0;
                for (int k = 0; k < exponent; ++k) out *= base;
                return out;
            }
        }
        return 0.0;
    }
};

namespace {

using Node = PdfExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

class Parser {
public:
    Parser(const std::string& text) : text_(text) {}

    NodePtr run(bool& uses_z) {
        NodePtr root = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        uses_z = uses_z_;
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError("pdf expression, column " + std::to_string(pos_ + 1) +
                          ": " + why);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expression() {
        NodePtr node;
        if (consume('-')) {
            auto neg = std::make_shared<Node>();
            neg->op = Node::Op::Neg;
            neg->lhs = term();
            node = neg;
        } else {
            node = term();
        }
        while (true) {
            if (consume('+')) {
                auto add = std::make_shared<Node>();
                add->op = Node::Op::Add;
                add->lhs = node;
                add->rhs = term();
                node = add;
            } else if (consume('-')) {
                auto sub = std::make_shared<Node>();
                sub->op = Node::Op::Sub;
                sub->lhs = node;
                sub->rhs = term();
                node = sub;
            } else {
                return node;
            }
        }
    }

    NodePtr term() {
        NodePtr node = factor();
        while (consume('*')) {
            auto mul = std::make_shared<Node>();
            mul->op = Node::Op::Mul;
            mul->lhs = node;
            mul->rhs = factor();
            node = mul;
        }
        return node;
    }

    NodePtr factor() {
        NodePtr base = atom();
        if (!consume('^')) return base;
        skip_space();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) fail("'^' needs a nonnegative integer exponent");
        int exponent = std::atoi(text_.substr(start, pos_ - start).c_str());
        auto node = std::make_shared<Node>();
        node->op = Node::Op::Pow;
        node->lhs = base;
        node->exponent = exponent;
        return node;
    }

    NodePtr atom() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            if (!consume(')')) fail("missing ')'");
            return inner;
        }
        if (c == 'x' || c == 'z') {
            ++pos_;
            auto node = std::make_shared<Node>();
            node->op = c == 'x' ? Node::Op::VarX : Node::Op::VarZ;
            if (c == 'z') uses_z_ = true;
            return node;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text_.c_str() + pos_;
            char* end = nullptr;
            double value = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<size_t>(end - begin);
            auto node = std::make_shared<Node>();
            node->op = Node::Op::Constant;
            node->value = value;
            return node;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& text_;
    size_t pos_ = 0;
    bool uses_z_ = false;
};

}  // namespace

PdfExpr PdfExpr::parse(const std::string& source) {
    Parser parser(source);
    bool uses_z = false;
    NodePtr root = parser.run(uses_z);
    return PdfExpr(std::move(root), uses_z, source);
}

double PdfExpr::eval(double x, double z) const { return root_->eval(x, z); }

PdfExpr::PdfExpr(std::shared_ptr<const Node> root, bool uses_z, std::string source)
    : root_(std::move(root)), uses_z_(uses_z), source_(std::move(source)) {}

PdfExpr::PdfExpr(const PdfExpr&) = default;
PdfExpr::PdfExpr(PdfExpr&&) noexcept = default;
PdfExpr& PdfExpr::operator=(PdfExpr other) {
    root_ = std::move(other.root_);
    uses_z_ = other.uses_z_;
    source_ = std::move(other.source_);
    return *this;
}
PdfExpr::~PdfExpr() = default;

}  // namespace egd
