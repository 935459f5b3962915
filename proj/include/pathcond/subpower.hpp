#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathcond/algebra.hpp"
#include "pathcond/errors.hpp"
#include "pathcond/term.hpp"

namespace pathcond {

/// Guards for subuniverse generation. max_elements bounds the closure size
/// (memory); max_steps bounds the number of operation applications (time) —
/// a ternary signature costs Θ(N³) applications to close N elements, so the
/// element cap alone cannot keep a run desk-scale.
struct ClosureLimits {
    std::uint64_t max_elements = std::uint64_t{1} << 22;
    std::uint64_t max_steps = std::uint64_t{1} << 32;
    /// Membership goes through a dense bitset when size^m has at most this
    /// many codes, through the index hash map otherwise.
    std::uint64_t bitset_threshold = std::uint64_t{1} << 26;
};

/// A generated subuniverse of A^m. Elements are TupleCodes in discovery
/// order; every element carries one derivation (its first discovery), either
/// a generator index or an operation applied to earlier elements. Immutable
/// after generate() returns.
class Subpower {
public:
    struct Derivation {
        int op_index = -1;           // -1: generator, arg0 = generator index
        std::uint32_t args_offset = 0;
        std::uint32_t args_count = 0;
    };

    const Algebra& algebra() const noexcept { return algebra_; }
    int arity() const noexcept { return codec_.arity(); }
    const TupleCodec& codec() const noexcept { return codec_; }

    const std::vector<TupleCode>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<TupleCode>& generators() const noexcept { return generators_; }

    bool contains(TupleCode code) const { return index_.count(code) != 0; }

    std::uint32_t index_of(TupleCode code) const {
        auto it = index_.find(code);
        if (it == index_.end()) fail(ErrorKind::ElementOutOfRange, "tuple not in subpower");
        return it->second;
    }

    std::vector<Element> tuple_at(std::uint32_t idx) const {
        return codec_.decode(elements_.at(idx));
    }

    const Derivation& derivation(std::uint32_t idx) const { return derivations_.at(idx); }

    std::uint32_t derivation_arg(const Derivation& d, std::uint32_t i) const {
        return derivation_args_.at(d.args_offset + i);
    }

    std::uint64_t steps_used() const noexcept { return steps_; }

    /// Replays the derivation of element `idx` into a term over variables
    /// v1..vg, one per generator (1-based, in generator order), or over
    /// `variable_names` when given. Evaluating the term coordinatewise on the
    /// generators yields the element back.
    TermExpr term_of(std::uint32_t idx, const std::vector<std::string>& variable_names = {}) const {
        auto var_name = [&](std::uint32_t g) -> std::string {
            if (g < variable_names.size()) return variable_names[g];
            return "v" + std::to_string(g + 1);
        };
        // Build nodes bottom-up: derivation args always point to earlier
        // indices, so ascending index order is a topological order.
        std::unordered_map<std::uint32_t, TermExpr> built;
        std::vector<std::uint32_t> needed{idx};
        std::vector<std::uint32_t> order;
        std::unordered_map<std::uint32_t, bool> seen;
        while (!needed.empty()) {
            std::uint32_t cur = needed.back();
            needed.pop_back();
            if (seen[cur]) continue;
            seen[cur] = true;
            order.push_back(cur);
            const Derivation& d = derivations_.at(cur);
            if (d.op_index >= 0)
                for (std::uint32_t i = 0; i < d.args_count; ++i)
                    needed.push_back(derivation_arg(d, i));
        }
        std::sort(order.begin(), order.end());
        for (std::uint32_t cur : order) {
            const Derivation& d = derivations_.at(cur);
            if (d.op_index < 0) {
                built.emplace(cur, TermExpr::variable(var_name(derivation_arg(d, 0))));
            } else {
                std::vector<TermExpr> args;
                args.reserve(d.args_count);
                for (std::uint32_t i = 0; i < d.args_count; ++i)
                    args.push_back(built.at(derivation_arg(d, i)));
                built.emplace(cur, TermExpr::apply(algebra_.operation(d.op_index).name, std::move(args)));
            }
        }
        return built.at(idx);
    }

    friend Subpower generate(const Algebra& a, int arity,
                             const std::vector<std::vector<Element>>& generator_tuples,
                             const ClosureLimits& limits);
    friend Subpower generate_codes(const Algebra& a, int arity,
                                   const std::vector<TupleCode>& generator_codes,
                                   const ClosureLimits& limits);

private:
    Subpower(const Algebra& a, int arity) : algebra_(a), codec_(a.size(), arity) {}

    Algebra algebra_;
    TupleCodec codec_;
    std::vector<TupleCode> elements_;
    std::vector<TupleCode> generators_;
    std::unordered_map<TupleCode, std::uint32_t> index_;
    std::vector<Derivation> derivations_;
    std::vector<std::uint32_t> derivation_args_;
    std::uint64_t steps_ = 0;
};

/// Closes the generators under every basic operation applied coordinatewise
/// (the Sg operator). Worklist discipline: each operation is applied only to
/// argument combinations containing at least one newly added element.
/// Throws CapExceeded when either limit fires.
inline Subpower generate_codes(const Algebra& a, int arity,
                               const std::vector<TupleCode>& generator_codes,
                               const ClosureLimits& limits = {}) {
    if (generator_codes.empty()) fail(ErrorKind::EmptySignature, "generate needs at least one generator");
    Subpower s(a, arity);
    const int m = arity;
    const int asize = a.size();

    // Decoded rows, m entries per element, shared flat storage.
    std::vector<Element> rows;
    // Dense membership fast path when the code space is small enough.
    const bool use_bitset = s.codec_.space() <= limits.bitset_threshold;
    std::vector<bool> member;
    if (use_bitset) member.assign(static_cast<std::size_t>(s.codec_.space()), false);
    auto add_element = [&](TupleCode code, int op_index,
                           const std::uint32_t* args, std::uint32_t argc) -> bool {
        if (use_bitset) {
            if (member[static_cast<std::size_t>(code)]) return false;
            member[static_cast<std::size_t>(code)] = true;
            s.index_.emplace(code, static_cast<std::uint32_t>(s.elements_.size()));
        } else {
            auto [it, inserted] = s.index_.emplace(code, static_cast<std::uint32_t>(s.elements_.size()));
            if (!inserted) return false;
        }
        if (s.elements_.size() >= limits.max_elements) {
            fail(ErrorKind::CapExceeded,
                 "closure exceeded the element cap of " + std::to_string(limits.max_elements));
        }
        s.elements_.push_back(code);
        Subpower::Derivation d;
        d.op_index = op_index;
        d.args_offset = static_cast<std::uint32_t>(s.derivation_args_.size());
        d.args_count = argc;
        for (std::uint32_t i = 0; i < argc; ++i) s.derivation_args_.push_back(args[i]);
        s.derivations_.push_back(d);
        std::size_t off = rows.size();
        rows.resize(off + static_cast<std::size_t>(m));
        s.codec_.decode(code, std::span<Element>(rows.data() + off, static_cast<std::size_t>(m)));
        return true;
    };

    for (std::uint32_t g = 0; g < generator_codes.size(); ++g) {
        TupleCode code = generator_codes[g];
        if (code >= s.codec_.space()) fail(ErrorKind::ElementOutOfRange, "generator code out of range");
        s.generators_.push_back(code);
        add_element(code, -1, &g, 1);
    }

    std::vector<std::uint32_t> args;
    std::vector<Element> out(static_cast<std::size_t>(m));
    for (std::uint32_t q = 0; q < s.elements_.size(); ++q) {
        for (int op = 0; op < a.operation_count(); ++op) {
            const OperationTable& table = a.operation(op);
            const int r = table.arity;
            // Enumerate the r-tuples over [0..q] that contain q, in
            // lexicographic order (this order fixes which derivation an
            // element keeps). Tuples without q are skipped in O(1): when an
            // increment drops the last q, the lex-next valid tuple is the
            // same prefix with the final digit set to q.
            args.assign(static_cast<std::size_t>(r), 0);
            args[static_cast<std::size_t>(r - 1)] = q;
            int q_count = (q == 0) ? r : 1;
            while (true) {
                if (++s.steps_ > limits.max_steps)
                    fail(ErrorKind::CapExceeded,
                         "closure exceeded the step budget of " + std::to_string(limits.max_steps));
                // Apply op to the argument rows, coordinatewise.
                for (int c = 0; c < m; ++c) {
                    std::size_t idx = 0;
                    for (int i = 0; i < r; ++i) {
                        Element e = rows[static_cast<std::size_t>(args[static_cast<std::size_t>(i)]) *
                                             static_cast<std::size_t>(m) +
                                         static_cast<std::size_t>(c)];
                        idx = idx * static_cast<std::size_t>(asize) + static_cast<std::size_t>(e);
                    }
                    out[static_cast<std::size_t>(c)] = table.table[idx];
                }
                TupleCode code = 0;
                for (int c = 0; c < m; ++c)
                    code = code * static_cast<TupleCode>(asize) +
                           static_cast<TupleCode>(out[static_cast<std::size_t>(c)]);
                add_element(code, op, args.data(), static_cast<std::uint32_t>(r));
                int i = r - 1;
                for (; i >= 0; --i) {
                    if (args[static_cast<std::size_t>(i)] < q) {
                        if (++args[static_cast<std::size_t>(i)] == q) ++q_count;
                        for (int j = i + 1; j < r; ++j) {
                            if (args[static_cast<std::size_t>(j)] == q) --q_count;
                            args[static_cast<std::size_t>(j)] = 0;
                        }
                        break;
                    }
                }
                if (i < 0) break;
                if (q_count == 0) {
                    args[static_cast<std::size_t>(r - 1)] = q;
                    q_count = 1;
                }
            }
        }
    }
    return s;
}

inline Subpower generate(const Algebra& a, int arity,
                         const std::vector<std::vector<Element>>& generator_tuples,
                         const ClosureLimits& limits = {}) {
    TupleCodec codec(a.size(), arity);
    std::vector<TupleCode> codes;
    codes.reserve(generator_tuples.size());
    for (const auto& t : generator_tuples) codes.push_back(codec.encode(t));
    return generate_codes(a, arity, codes, limits);
}

inline TermExpr term_of(const Subpower& s, std::uint32_t element_index,
                        const std::vector<std::string>& variable_names = {}) {
    return s.term_of(element_index, variable_names);
}

} // namespace pathcond
