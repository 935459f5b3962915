#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathcond/algebra.hpp"
#include "pathcond/equations.hpp"
#include "pathcond/errors.hpp"
#include "pathcond/pattern.hpp"
#include "pathcond/subpower.hpp"
#include "pathcond/term.hpp"

namespace pathcond {

/// The 2-generated free algebra of the variety of A, realized inside
/// A^(|A|^2): coordinate (u,v) of the generator x is u and of y is v, with
/// pairs (u,v) enumerated lexicographically, u most significant. Every
/// element is a binary term operation of A; its provenance is that term.
struct FreeAlgebra2 {
    Subpower algebra;
    std::uint32_t x_index = 0;
    std::uint32_t y_index = 0;
};

inline FreeAlgebra2 build_free_algebra(const Algebra& a, const ClosureLimits& limits = {}) {
    if (!is_idempotent(a).idempotent)
        fail(ErrorKind::NotIdempotent, "the free-algebra oracle needs an idempotent algebra");
    const int s = a.size();
    const int m = s * s;
    std::vector<Element> xbar(static_cast<std::size_t>(m)), ybar(static_cast<std::size_t>(m));
    for (int u = 0; u < s; ++u)
        for (int v = 0; v < s; ++v) {
            xbar[static_cast<std::size_t>(u * s + v)] = u;
            ybar[static_cast<std::size_t>(u * s + v)] = v;
        }
    Subpower f = generate(a, m, {xbar, ybar}, limits);
    FreeAlgebra2 out{std::move(f), 0, 0};
    out.x_index = out.algebra.index_of(out.algebra.generators()[0]);
    out.y_index = out.algebra.index_of(out.algebra.generators()[1]);
    return out;
}

/// K(A): the subpower of F^3 generated by the columns (x,x,x), (y,x,y),
/// (x,y,y), realized as one subpower of arity 3|A|^2 so provenance replays
/// directly as ternary terms. Viewed as a pattern digraph on F, a triple
/// (a,b,c) is an edge b -> c, solid exactly when a = x.
struct KGraph {
    Subpower triples;
    std::uint32_t x_index = 0;  // into F
    std::uint32_t y_index = 0;
    /// first discovered element per ordered F-pair; solid keyed separately
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> solid_first;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> any_first;

    bool has_edge(std::uint32_t b, std::uint32_t c) const { return any_first.count({b, c}) != 0; }
    bool has_solid_edge(std::uint32_t b, std::uint32_t c) const { return solid_first.count({b, c}) != 0; }

    PatternDigraph to_pattern_digraph(std::size_t f_size) const {
        PatternDigraph g(f_size, x_index, y_index);
        for (const auto& [pair, elt] : any_first) g.add_edge(pair.first, pair.second, EdgeStyle::Dashed);
        for (const auto& [pair, elt] : solid_first) g.add_edge(pair.first, pair.second, EdgeStyle::Solid);
        return g;
    }
};

inline KGraph build_k_graph(const Algebra& a, const FreeAlgebra2& f, const ClosureLimits& limits = {}) {
    const int m = a.size() * a.size();
    TupleCodec triple_codec(a.size(), 3 * m);  // guards the 3m-digit code space
    const TupleCode space = f.algebra.codec().space();
    const TupleCode x = f.algebra.elements()[f.x_index];
    const TupleCode y = f.algebra.elements()[f.y_index];
    auto concat = [&](TupleCode c1, TupleCode c2, TupleCode c3) {
        return (c1 * space + c2) * space + c3;
    };
    std::vector<TupleCode> gens{concat(x, x, x), concat(y, x, y), concat(x, y, y)};
    KGraph k{generate_codes(a, 3 * m, gens, limits), f.x_index, f.y_index, {}, {}};
    for (std::uint32_t i = 0; i < k.triples.size(); ++i) {
        TupleCode code = k.triples.elements()[i];
        TupleCode c3 = code % space;
        TupleCode c2 = (code / space) % space;
        TupleCode c1 = code / (space * space);
        std::uint32_t b = f.algebra.index_of(c2);
        std::uint32_t c = f.algebra.index_of(c3);
        k.any_first.emplace(std::make_pair(b, c), i);
        if (c1 == x) k.solid_first.emplace(std::make_pair(b, c), i);
    }
    return k;
}

enum class OracleVerdict { Satisfied, Refuted };

struct OracleDecision {
    OracleVerdict verdict = OracleVerdict::Refuted;
    /// F-indices w_0..w_n when satisfied. Empty for the trivial shortcut,
    /// which never builds F.
    std::optional<Walk> walk;
    bool trivial_shortcut = false;
};

struct WitnessTerms {
    std::vector<TermExpr> s;  // n+1 binary terms over {x,y}; s_0 = x, s_n = y
    std::vector<TermExpr> t;  // n ternary terms over {x,y,z}
};

/// Ground-truth decision by direct walk search over K(A), layered per path
/// position. Exponential in general: F and K are materialized, subject to
/// the closure limits.
class Oracle {
public:
    explicit Oracle(Algebra a, ClosureLimits limits = {})
        : algebra_(std::move(a)), limits_(limits) {
        if (!is_idempotent(algebra_).idempotent)
            fail(ErrorKind::NotIdempotent, "the oracle needs an idempotent algebra");
    }

    const Algebra& algebra() const noexcept { return algebra_; }

    const FreeAlgebra2& free_algebra() {
        if (!f_) f_ = build_free_algebra(algebra_, limits_);
        return *f_;
    }

    const KGraph& k_graph() {
        if (!k_) k_ = build_k_graph(algebra_, free_algebra(), limits_);
        return *k_;
    }

    OracleDecision decide(const PatternPath& p) {
        if (is_trivial(p)) return {OracleVerdict::Satisfied, std::nullopt, true};
        const FreeAlgebra2& f = free_algebra();
        const KGraph& k = k_graph();
        const int n = p.length();
        LayeredDigraph g;
        g.layer_sizes.assign(static_cast<std::size_t>(n) + 1, f.algebra.size());
        g.initial = f.x_index;
        g.terminal = f.y_index;
        g.gap_edges.resize(static_cast<std::size_t>(n));
        std::vector<LayeredDigraph::Edge> all_edges, solid_edges;
        for (const auto& [pair, elt] : k.any_first)
            all_edges.push_back({pair.first, pair.second,
                                 k.solid_first.count(pair) ? EdgeStyle::Solid : EdgeStyle::Dashed});
        for (const auto& [pair, elt] : k.solid_first)
            solid_edges.push_back({pair.first, pair.second, EdgeStyle::Solid});
        for (int i = 0; i < n; ++i)
            g.gap_edges[static_cast<std::size_t>(i)] =
                (p.edges[static_cast<std::size_t>(i)].style == EdgeStyle::Solid) ? solid_edges
                                                                                 : all_edges;
        auto walk = find_walk(p, g);
        if (!walk) return {OracleVerdict::Refuted, std::nullopt, false};
        return {OracleVerdict::Satisfied, walk, false};
    }

    /// Witness terms for a satisfied path: s_i replays the provenance of the
    /// i-th walk vertex in F, t_i the provenance of the first-discovered
    /// K-element realizing the i-th edge. K's generator columns play the
    /// roles x,y,z, so provenance variables are renamed accordingly.
    WitnessTerms extract_witness_terms(const PatternPath& p) {
        OracleDecision d = decide(p);
        if (d.verdict != OracleVerdict::Satisfied)
            fail(ErrorKind::NoWalk, "cannot extract witnesses: condition refuted");
        const int n = p.length();
        WitnessTerms w;
        if (d.trivial_shortcut) {
            // Projections witness a path with a forward dashed edge i:
            // earlier t's project on x, t_i on y, later t's on z.
            int i = 1;
            for (; i <= n; ++i) {
                const PathEdge e = p.edges[static_cast<std::size_t>(i - 1)];
                if (e.dir == EdgeDir::Forward && e.style == EdgeStyle::Dashed) break;
            }
            for (int j = 0; j <= n; ++j) w.s.push_back(TermExpr::variable(j < i ? "x" : "y"));
            for (int j = 1; j <= n; ++j)
                w.t.push_back(TermExpr::variable(j < i ? "x" : (j == i ? "y" : "z")));
            return w;
        }
        const FreeAlgebra2& f = free_algebra();
        const KGraph& k = k_graph();
        const Walk& walk = *d.walk;
        const std::vector<std::string> xy{"x", "y"};
        const std::vector<std::string> xyz{"x", "y", "z"};
        for (int i = 0; i <= n; ++i) {
            if (i == 0)
                w.s.push_back(TermExpr::variable("x"));
            else if (i == n)
                w.s.push_back(TermExpr::variable("y"));
            else
                w.s.push_back(f.algebra.term_of(walk[static_cast<std::size_t>(i)], xy));
        }
        for (int i = 1; i <= n; ++i) {
            const PathEdge e = p.edges[static_cast<std::size_t>(i - 1)];
            std::pair<std::uint32_t, std::uint32_t> pair =
                e.dir == EdgeDir::Forward
                    ? std::make_pair(walk[static_cast<std::size_t>(i - 1)], walk[static_cast<std::size_t>(i)])
                    : std::make_pair(walk[static_cast<std::size_t>(i)], walk[static_cast<std::size_t>(i - 1)]);
            const auto& table = (e.style == EdgeStyle::Solid) ? k.solid_first : k.any_first;
            auto it = table.find(pair);
            if (it == table.end()) fail(ErrorKind::NoWalk, "internal: walk edge has no realizing element");
            w.t.push_back(k.triples.term_of(it->second, xyz));
        }
        return w;
    }

private:
    Algebra algebra_;
    ClosureLimits limits_;
    std::optional<FreeAlgebra2> f_;
    std::optional<KGraph> k_;
};

inline KGraph build_k_graph(const Algebra& a, const ClosureLimits& limits = {}) {
    return build_k_graph(a, build_free_algebra(a, limits), limits);
}

inline OracleDecision oracle_decide(const Algebra& a, const PatternPath& p,
                                    const ClosureLimits& limits = {}) {
    Oracle o(a, limits);
    return o.decide(p);
}

inline WitnessTerms extract_witness_terms(const Algebra& a, const PatternPath& p,
                                          const ClosureLimits& limits = {}) {
    Oracle o(a, limits);
    return o.extract_witness_terms(p);
}

struct WitnessViolation {
    std::string equation;
    Element x;
    Element y;
    Element lhs_value;
    Element rhs_value;
};

struct WitnessReport {
    bool valid = true;
    std::vector<WitnessViolation> violations;
};

namespace detail {

/// Evaluates an equation side whose applications may name either basic
/// operations of the algebra or the witness symbols s_i/t_i.
inline Element eval_with_witness(const TermExpr::NodePtr& node, const Algebra& a,
                                 const WitnessTerms& w, Element xv, Element yv) {
    if (node->is_variable()) {
        if (node->name == "x") return xv;
        if (node->name == "y") return yv;
        fail(ErrorKind::UnboundVariable, "unexpected variable '" + node->name + "' in equation");
    }
    std::vector<Element> args;
    args.reserve(node->children.size());
    for (const auto& c : node->children) args.push_back(eval_with_witness(c, a, w, xv, yv));
    const std::string& name = node->name;
    if ((name[0] == 's' || name[0] == 't') && name.size() > 1 &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
        std::size_t idx = std::stoul(name.substr(1));
        const TermExpr* body = nullptr;
        std::map<std::string, Element> binding;
        if (name[0] == 's' && idx < w.s.size() && args.size() == 2) {
            body = &w.s[idx];
            binding = {{"x", args[0]}, {"y", args[1]}};
        } else if (name[0] == 't' && idx >= 1 && idx <= w.t.size() && args.size() == 3) {
            body = &w.t[idx - 1];
            binding = {{"x", args[0]}, {"y", args[1]}, {"z", args[2]}};
        }
        if (body) return body->eval(a, binding);
    }
    auto op = a.operation_index(name);
    if (!op) fail(ErrorKind::UnboundVariable, "symbol '" + name + "' has no witness or operation");
    return a.apply(*op, args);
}

} // namespace detail

/// Evaluates every equation of M(P) (raw form, endpoint equations included)
/// over all |A|^2 assignments of (x,y), plugging the witness terms in for
/// the symbols. Reports each violated (equation, assignment).
inline WitnessReport verify_witness(const Algebra& a, const PatternPath& p, const WitnessTerms& w) {
    WitnessReport report;
    if (static_cast<int>(w.s.size()) != p.length() + 1 ||
        static_cast<int>(w.t.size()) != p.length())
        fail(ErrorKind::ArityMismatch, "witness term counts do not match the path length");
    EquationSystem sys = emit_maltsev_condition(p, {.substitute_endpoints = false});
    for (const auto& eq : sys.equations) {
        for (Element xv = 0; xv < a.size(); ++xv)
            for (Element yv = 0; yv < a.size(); ++yv) {
                Element lv = detail::eval_with_witness(eq.lhs.root(), a, w, xv, yv);
                Element rv = detail::eval_with_witness(eq.rhs.root(), a, w, xv, yv);
                if (lv != rv) {
                    report.valid = false;
                    report.violations.push_back({eq.to_string(), xv, yv, lv, rv});
                }
            }
    }
    return report;
}

} // namespace pathcond
