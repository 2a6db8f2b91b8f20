#pragma once

// Rooted non-planar trees and their canonical balanced-parenthesis codes.
//
// A tree is the multiset of its root-child subtrees; the one-vertex tree r
// has no children. The canonical code of r is "()", and a tree's code is
// "(" + child codes + ")" with children ordered by (code length, then
// lexicographic with '(' < ')'). Two trees are equal iff their codes are.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treezeta/error.hpp"

namespace treezeta {

/// Canonical ordering of codes: shorter first, then lexicographic.
inline std::strong_ordering compare_codes(std::string_view a, std::string_view b) noexcept {
    if (a.size() != b.size()) return a.size() <=> b.size();
    const int c = a.compare(b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

class TreeCode {
public:
    TreeCode() : text_("()") {}

    const std::string& str() const noexcept { return text_; }
    std::size_t size() const noexcept { return text_.size(); }

    friend bool operator==(const TreeCode&, const TreeCode&) = default;
    friend bool operator==(const TreeCode& a, std::string_view b) noexcept { return a.text_ == b; }
    friend std::ostream& operator<<(std::ostream& os, const TreeCode& c) { return os << c.text_; }
    friend std::strong_ordering operator<=>(const TreeCode& a, const TreeCode& b) noexcept {
        return compare_codes(a.text_, b.text_);
    }

private:
    friend class Tree;
    explicit TreeCode(std::string text) : text_(std::move(text)) {}
    std::string text_;
};

/// Immutable value type; copies share structure and are safe across threads.
class Tree {
public:
    /// The one-vertex tree r.
    Tree() = default;

    /// Tree whose root children are `children` (any order; stored canonically).
    explicit Tree(std::vector<Tree> children) {
        if (children.empty()) return;
        std::sort(children.begin(), children.end(),
                  [](const Tree& a, const Tree& b) { return compare_codes(a.code_view(), b.code_view()) < 0; });
        auto node = std::make_shared<Node>();
        std::size_t len = 2;
        for (const auto& c : children) len += c.code_view().size();
        node->code.reserve(len);
        node->code.push_back('(');
        for (const auto& c : children) node->code.append(c.code_view());
        node->code.push_back(')');
        node->children = std::move(children);
        node_ = std::move(node);
    }

    std::span<const Tree> children() const noexcept {
        if (!node_) return {};
        return node_->children;
    }
    std::size_t degree() const noexcept { return node_ ? node_->children.size() : 0; }
    bool is_root() const noexcept { return !node_; }
    std::size_t vertex_count() const noexcept { return code_view().size() / 2; }

    std::string_view code_view() const noexcept {
        static constexpr std::string_view root_code = "()";
        return node_ ? std::string_view(node_->code) : root_code;
    }
    TreeCode code() const { return TreeCode(std::string(code_view())); }

    friend bool operator==(const Tree& a, const Tree& b) noexcept {
        return a.node_ == b.node_ || a.code_view() == b.code_view();
    }
    friend std::strong_ordering operator<=>(const Tree& a, const Tree& b) noexcept {
        return compare_codes(a.code_view(), b.code_view());
    }

private:
    struct Node {
        std::vector<Tree> children;
        std::string code;
    };
    std::shared_ptr<const Node> node_;
};

inline TreeCode encode(const Tree& t) { return t.code(); }

/// Maximum nesting accepted by decode; far beyond any tree with a finite
/// birth under a practical bit budget.
inline constexpr std::size_t max_decode_depth = 4096;

/// Parses a canonical code. Rejects unbalanced text, trailing garbage and
/// children out of canonical order, reporting the offending offset.
inline Tree decode(std::string_view text) {
    if (text.empty()) throw parse_error("empty tree code", 0);
    if (text.front() != '(') throw parse_error("tree code must start with '('", 0);

    struct Frame {
        std::size_t open;
        std::vector<Tree> children;
    };
    std::vector<Frame> stack;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == '(') {
            if (i > 0 && stack.empty()) throw parse_error("trailing characters after tree code", i);
            if (stack.size() >= max_decode_depth) throw parse_error("tree code nested too deeply", i);
            stack.push_back({i, {}});
        } else if (ch == ')') {
            if (stack.empty()) throw parse_error("unbalanced ')'", i);
            Frame frame = std::move(stack.back());
            stack.pop_back();
            Tree node(std::move(frame.children));
            if (!stack.empty()) {
                auto& siblings = stack.back().children;
                if (!siblings.empty() && compare_codes(node.code_view(), siblings.back().code_view()) < 0)
                    throw parse_error("child subtree out of canonical order", frame.open);
                siblings.push_back(std::move(node));
            } else if (i + 1 != text.size()) {
                throw parse_error("trailing characters after tree code", i + 1);
            } else {
                return node;
            }
        } else {
            throw parse_error(std::string("unexpected character '") + ch + "'", i);
        }
    }
    throw parse_error("unbalanced '(' (unterminated tree code)", text.size());
}

/// Glues two trees at their roots; r is the unit.
inline Tree product(const Tree& a, const Tree& b) {
    if (a.is_root()) return b;
    if (b.is_root()) return a;
    std::vector<Tree> children(a.children().begin(), a.children().end());
    children.insert(children.end(), b.children().begin(), b.children().end());
    return Tree(std::move(children));
}

/// e^t: a new root with a single edge leading to t.
inline Tree lift(const Tree& t) { return Tree(std::vector<Tree>{t}); }

}  // namespace treezeta

template <>
struct std::hash<treezeta::Tree> {
    std::size_t operator()(const treezeta::Tree& t) const noexcept {
        return std::hash<std::string_view>{}(t.code_view());
    }
};
