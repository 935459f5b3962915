#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "pathcond/errors.hpp"
#include "pathcond/pattern.hpp"
#include "pathcond/term.hpp"

namespace pathcond {

struct Equation {
    TermExpr lhs;
    TermExpr rhs;

    std::string to_string() const { return lhs.to_string() + " ≈ " + rhs.to_string(); }
};

/// The equations of the strong linear condition associated with a pattern
/// path: binary symbols s_0..s_n, ternary symbols t_1..t_n, all applied to
/// the variables x,y only.
struct EquationSystem {
    std::vector<Equation> equations;

    /// Linear: no function symbol occurs inside another application.
    bool is_linear() const {
        for (const auto& eq : equations)
            for (const TermExpr* side : {&eq.lhs, &eq.rhs}) {
                if (side->empty()) return false;
                if (side->root()->is_variable()) continue;
                for (const auto& child : side->root()->children)
                    if (!child->is_variable()) return false;
            }
        return true;
    }

    std::string to_string() const {
        std::string out;
        for (const auto& eq : equations) {
            out += eq.to_string();
            out += '\n';
        }
        return out;
    }
};

namespace detail {

inline TermExpr sym(const std::string& name, std::vector<std::string> vars) {
    std::vector<TermExpr> args;
    args.reserve(vars.size());
    for (auto& v : vars) args.push_back(TermExpr::variable(v));
    return TermExpr::apply(name, std::move(args));
}

} // namespace detail

struct EmitOptions {
    /// Replace s_0 by x and s_n by y (and drop the two defining equations),
    /// as the gallery presentations do. Off keeps the raw system.
    bool substitute_endpoints = true;
};

/// Builds M(P). For each edge i of P, a ternary t_i links the adjacent
/// binary terms: forward edges set t_i(x,x,y) = s_{i-1} and t_i(x,y,y) =
/// s_i, backward edges swap those two, and solid edges add t_i(x,y,x) = x.
/// With endpoints substituted, s_0/s_n become the variables x/y.
inline EquationSystem emit_maltsev_condition(const PatternPath& p, const EmitOptions& opt = {}) {
    const int n = p.length();
    auto x = TermExpr::variable("x");
    auto y = TermExpr::variable("y");
    auto s_term = [&](int i) -> TermExpr {
        if (opt.substitute_endpoints) {
            if (i == 0) return x;
            if (i == n) return y;
        }
        return detail::sym("s" + std::to_string(i), {"x", "y"});
    };

    EquationSystem sys;
    if (!opt.substitute_endpoints) {
        sys.equations.push_back({detail::sym("s0", {"x", "y"}), x});
        sys.equations.push_back({detail::sym("s" + std::to_string(n), {"x", "y"}), y});
    }
    std::vector<Equation> solid_eqs;
    for (int i = 1; i <= n; ++i) {
        const PathEdge e = p.edges[static_cast<std::size_t>(i - 1)];
        TermExpr t_xxy = detail::sym("t" + std::to_string(i), {"x", "x", "y"});
        TermExpr t_xyy = detail::sym("t" + std::to_string(i), {"x", "y", "y"});
        if (e.dir == EdgeDir::Forward) {
            sys.equations.push_back({t_xxy, s_term(i - 1)});
            sys.equations.push_back({t_xyy, s_term(i)});
        } else {
            sys.equations.push_back({t_xxy, s_term(i)});
            sys.equations.push_back({t_xyy, s_term(i - 1)});
        }
        if (e.style == EdgeStyle::Solid)
            solid_eqs.push_back({detail::sym("t" + std::to_string(i), {"x", "y", "x"}), x});
    }
    for (auto& eq : solid_eqs) sys.equations.push_back(std::move(eq));
    return sys;
}

/// Eliminates the intermediate binary symbols s_1..s_{n-1}: each is defined
/// by exactly two edge equations, which fuse into one t-to-t equation. The
/// result is the gallery presentation of the same condition.
inline EquationSystem reduce_equations(const PatternPath& p) {
    EquationSystem raw = emit_maltsev_condition(p, {.substitute_endpoints = true});
    const int n = p.length();
    std::map<std::string, std::vector<TermExpr>> defs;  // s_i name -> t-sides mentioning it
    std::vector<Equation> x_end, y_end, solid, chain;
    auto is_solid_eq = [](const Equation& eq) {
        // t_i(x,y,x) ≈ x
        return eq.rhs.is_variable() && !eq.lhs.is_variable() &&
               eq.lhs.root()->children.size() == 3 && eq.lhs.root()->children[1]->name == "y" &&
               eq.lhs.root()->children[0]->name == "x" && eq.lhs.root()->children[2]->name == "x";
    };
    for (const auto& eq : raw.equations) {
        // In the substituted system an intermediate s_i can only be an rhs.
        if (!eq.rhs.empty() && !eq.rhs.root()->is_variable() && eq.rhs.root()->name[0] == 's')
            defs[eq.rhs.root()->name].push_back(eq.lhs);
        else if (is_solid_eq(eq))
            solid.push_back(eq);
        else if (eq.rhs.is_variable() && eq.rhs.root()->name == "x")
            x_end.push_back(eq);
        else
            y_end.push_back(eq);
    }
    for (int i = 1; i < n; ++i) {
        auto it = defs.find("s" + std::to_string(i));
        if (it == defs.end() || it->second.size() != 2)
            fail(ErrorKind::ParseError, "intermediate symbol s" + std::to_string(i) +
                                            " not defined by exactly two equations");
        chain.push_back({it->second[0], it->second[1]});
    }
    // Gallery layout: the x endpoint, the chain, the y endpoint, then the
    // solid equations.
    EquationSystem out;
    for (auto* group : {&x_end, &chain, &y_end, &solid})
        for (auto& eq : *group) out.equations.push_back(std::move(eq));
    return out;
}

/// Parses one "lhs ≈ rhs" line (also accepts "=").
inline Equation parse_equation(const std::string& line) {
    std::size_t pos = line.find("≈");
    if (pos != std::string::npos) {
        return {parse_term(line.substr(0, pos)), parse_term(line.substr(pos + std::string("≈").size()))};
    }
    pos = line.find('=');
    if (pos == std::string::npos) fail(ErrorKind::ParseError, "equation needs a ≈ or =");
    return {parse_term(line.substr(0, pos)), parse_term(line.substr(pos + 1))};
}

/// Order-insensitive, side-insensitive normal form used to compare an
/// emitted system against a transcription.
inline std::vector<std::string> normalized_equations(const EquationSystem& sys) {
    std::vector<std::string> lines;
    lines.reserve(sys.equations.size());
    for (const auto& eq : sys.equations) {
        std::string a = eq.lhs.to_string();
        std::string b = eq.rhs.to_string();
        if (b < a) std::swap(a, b);
        lines.push_back(a + " ≈ " + b);
    }
    std::sort(lines.begin(), lines.end());
    return lines;
}

} // namespace pathcond
