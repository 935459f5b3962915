#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathcond/algebra.hpp"
#include "pathcond/errors.hpp"

namespace pathcond {

/// A term: rooted DAG whose leaves are variables and whose internal nodes
/// apply a named operation. Nodes are immutable and shared, so provenance
/// replays that revisit the same subterm stay compact in memory even when
/// the printed tree form would not.
class TermExpr {
public:
    struct Node {
        std::string name;                                   // variable or operation name
        std::vector<std::shared_ptr<const Node>> children;  // empty <=> variable

        bool is_variable() const noexcept { return children.empty(); }
    };
    using NodePtr = std::shared_ptr<const Node>;

    TermExpr() = default;
    explicit TermExpr(NodePtr root) : root_(std::move(root)) {}

    static TermExpr variable(const std::string& name) {
        return TermExpr(std::make_shared<Node>(Node{name, {}}));
    }

    static TermExpr apply(const std::string& op, std::vector<TermExpr> args) {
        std::vector<NodePtr> children;
        children.reserve(args.size());
        for (auto& a : args) children.push_back(a.root_);
        return TermExpr(std::make_shared<Node>(Node{op, std::move(children)}));
    }

    const NodePtr& root() const noexcept { return root_; }
    bool empty() const noexcept { return root_ == nullptr; }

    bool is_variable() const { return root_ && root_->is_variable(); }

    /// Prefix text form, e.g. "m(v1,v1,v2)".
    std::string to_string() const {
        std::string out;
        if (!root_) return out;
        // Post-order over an explicit stack; terms from deep provenance
        // chains would overflow the call stack.
        struct Frame {
            const Node* node;
            std::size_t next_child;
        };
        std::vector<Frame> stack{{root_.get(), 0}};
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.node->is_variable()) {
                out += f.node->name;
                stack.pop_back();
                continue;
            }
            if (f.next_child == 0) {
                out += f.node->name;
                out += '(';
            } else if (f.next_child < f.node->children.size()) {
                out += ',';
            }
            if (f.next_child == f.node->children.size()) {
                out += ')';
                stack.pop_back();
                continue;
            }
            const Node* child = f.node->children[f.next_child].get();
            ++f.next_child;
            stack.push_back({child, 0});
        }
        return out;
    }

    /// Evaluates against an algebra: operation names resolve to basic
    /// operations, variable names through `assignment`. Unknown variables or
    /// operations raise UnboundVariable.
    Element eval(const Algebra& a, const std::map<std::string, Element>& assignment) const {
        if (!root_) fail(ErrorKind::UnboundVariable, "empty term");
        std::unordered_map<const Node*, Element> memo;
        struct Frame {
            const Node* node;
            bool expanded;
        };
        std::vector<Frame> stack{{root_.get(), false}};
        while (!stack.empty()) {
            auto [node, expanded] = stack.back();
            if (memo.count(node)) {
                stack.pop_back();
                continue;
            }
            if (node->is_variable()) {
                auto it = assignment.find(node->name);
                if (it == assignment.end())
                    fail(ErrorKind::UnboundVariable, "variable '" + node->name + "' not assigned");
                memo[node] = it->second;
                stack.pop_back();
                continue;
            }
            if (!expanded) {
                stack.back().expanded = true;
                for (const auto& c : node->children)
                    if (!memo.count(c.get())) stack.push_back({c.get(), false});
                continue;
            }
            auto op = a.operation_index(node->name);
            if (!op)
                fail(ErrorKind::UnboundVariable,
                     "operation '" + node->name + "' not in signature");
            std::vector<Element> args;
            args.reserve(node->children.size());
            for (const auto& c : node->children) args.push_back(memo.at(c.get()));
            memo[node] = a.apply(*op, args);
            stack.pop_back();
        }
        return memo.at(root_.get());
    }

private:
    NodePtr root_;
};

inline Element eval_term(const TermExpr& t, const Algebra& a,
                         const std::map<std::string, Element>& assignment) {
    return t.eval(a, assignment);
}

/// Parses the prefix grammar: name '(' term {',' term} ')' | variable.
inline TermExpr parse_term(const std::string& text) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto parse_ident = [&]() -> std::string {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (start == pos) fail(ErrorKind::ParseError, "expected identifier at offset " + std::to_string(pos));
        return text.substr(start, pos - start);
    };
    std::function<TermExpr()> parse_one = [&]() -> TermExpr {
        std::string name = parse_ident();
        skip_ws();
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            std::vector<TermExpr> args;
            while (true) {
                args.push_back(parse_one());
                skip_ws();
                if (pos >= text.size()) fail(ErrorKind::ParseError, "unterminated argument list");
                if (text[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (text[pos] == ')') {
                    ++pos;
                    break;
                }
                fail(ErrorKind::ParseError, "expected ',' or ')' at offset " + std::to_string(pos));
            }
            return TermExpr::apply(name, std::move(args));
        }
        return TermExpr::variable(name);
    };
    TermExpr t = parse_one();
    skip_ws();
    if (pos != text.size()) fail(ErrorKind::ParseError, "trailing input after term");
    return t;
}

} // namespace pathcond
