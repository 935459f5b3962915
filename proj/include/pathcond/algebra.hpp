#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pathcond/errors.hpp"

namespace pathcond {

using Element = int;
using TupleCode = std::uint64_t;

/// One finitary operation given by its full table. The table is flattened
/// lexicographically with the first argument most significant: the entry for
/// (a_1,...,a_r) sits at index a_1*size^(r-1) + ... + a_r.
struct OperationTable {
    std::string name;
    int arity = 0;
    std::vector<Element> table;
};

namespace detail {

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

inline std::uint64_t checked_pow(std::uint64_t base, int exp, bool* overflow) {
    std::uint64_t r = 1;
    *overflow = false;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > (std::uint64_t{1} << 62) / base) {
            *overflow = true;
            return 0;
        }
        r *= base;
    }
    return r;
}

} // namespace detail

/// Finite algebra over the universe {0,...,size-1}. Immutable once
/// constructed; validation enforces every structural invariant, so code
/// downstream never re-checks tables.
class Algebra {
public:
    /// Validates a raw description. Throws Error with kind MalformedTable,
    /// EmptySignature, NoPositiveArityOperation or IdempotenceError (a
    /// nullary operation next to other operations: constants cannot be
    /// idempotent).
    static Algebra validate(int size, std::vector<OperationTable> operations,
                            std::string name = {}) {
        if (size < 1) fail(ErrorKind::MalformedTable, "size must be >= 1");
        if (operations.empty()) fail(ErrorKind::EmptySignature, "no operations given");
        bool has_positive = false;
        for (const auto& op : operations)
            if (op.arity >= 1) has_positive = true;
        if (!has_positive)
            fail(ErrorKind::NoPositiveArityOperation,
                 "signature has no operation of arity >= 1");
        std::unordered_set<std::string> seen;
        for (const auto& op : operations) {
            if (op.arity < 0)
                fail(ErrorKind::MalformedTable, "operation '" + op.name + "' has negative arity");
            if (op.arity == 0)
                fail(ErrorKind::IdempotenceError,
                     "operation '" + op.name + "' is nullary; constants cannot be idempotent");
            if (!detail::valid_identifier(op.name))
                fail(ErrorKind::MalformedTable, "operation name '" + op.name + "' is not an identifier");
            if (!seen.insert(op.name).second)
                fail(ErrorKind::MalformedTable, "duplicate operation name '" + op.name + "'");
            bool overflow = false;
            std::uint64_t expect = detail::checked_pow(static_cast<std::uint64_t>(size), op.arity, &overflow);
            if (overflow)
                fail(ErrorKind::MalformedTable, "operation '" + op.name + "' table too large to index");
            if (op.table.size() != expect)
                fail(ErrorKind::MalformedTable,
                     "operation '" + op.name + "' has " + std::to_string(op.table.size()) +
                         " entries, expected " + std::to_string(expect));
            for (Element e : op.table)
                if (e < 0 || e >= size)
                    fail(ErrorKind::MalformedTable,
                         "operation '" + op.name + "' has entry " + std::to_string(e) +
                             " outside [0," + std::to_string(size) + ")");
        }
        return Algebra(size, std::move(operations), std::move(name));
    }

    int size() const noexcept { return size_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<OperationTable>& operations() const noexcept { return operations_; }
    const OperationTable& operation(int index) const { return operations_.at(static_cast<std::size_t>(index)); }
    int operation_count() const noexcept { return static_cast<int>(operations_.size()); }

    std::optional<int> operation_index(const std::string& opname) const {
        for (std::size_t i = 0; i < operations_.size(); ++i)
            if (operations_[i].name == opname) return static_cast<int>(i);
        return std::nullopt;
    }

    int max_arity() const noexcept {
        int r = 0;
        for (const auto& op : operations_) r = std::max(r, op.arity);
        return r;
    }

    /// Table lookup at the lexicographic index of args.
    Element apply(int op_index, std::span<const Element> args) const {
        const OperationTable& op = operation(op_index);
        if (static_cast<int>(args.size()) != op.arity)
            fail(ErrorKind::ArityMismatch,
                 "operation '" + op.name + "' expects " + std::to_string(op.arity) +
                     " arguments, got " + std::to_string(args.size()));
        std::size_t idx = 0;
        for (Element a : args) {
            if (a < 0 || a >= size_)
                fail(ErrorKind::ElementOutOfRange,
                     "argument " + std::to_string(a) + " outside [0," + std::to_string(size_) + ")");
            idx = idx * static_cast<std::size_t>(size_) + static_cast<std::size_t>(a);
        }
        return op.table[idx];
    }

    Element apply(int op_index, std::initializer_list<Element> args) const {
        return apply(op_index, std::span<const Element>(args.begin(), args.size()));
    }

private:
    Algebra(int size, std::vector<OperationTable> operations, std::string name)
        : size_(size), operations_(std::move(operations)), name_(std::move(name)) {}

    int size_;
    std::vector<OperationTable> operations_;
    std::string name_;
};

struct IdempotenceViolation {
    int op_index;
    Element element;
};

struct IdempotenceReport {
    bool idempotent = true;
    std::vector<IdempotenceViolation> violations;
};

/// Checks f(e,...,e) = e for every basic operation f and element e.
inline IdempotenceReport is_idempotent(const Algebra& a) {
    IdempotenceReport report;
    std::vector<Element> args;
    for (int op = 0; op < a.operation_count(); ++op) {
        args.assign(static_cast<std::size_t>(a.operation(op).arity), 0);
        for (Element e = 0; e < a.size(); ++e) {
            for (auto& x : args) x = e;
            if (a.apply(op, args) != e) {
                report.idempotent = false;
                report.violations.push_back({op, e});
            }
        }
    }
    return report;
}

/// The input-size measure: sum over arities i of (#operations of arity i) * size^i.
struct SizeMeasure {
    std::uint64_t value = 0;
    int max_arity = 0;
    std::map<int, int> counts_by_arity;
};

inline SizeMeasure size_measure(const Algebra& a) {
    SizeMeasure m;
    for (const auto& op : a.operations()) {
        m.counts_by_arity[op.arity] += 1;
        m.max_arity = std::max(m.max_arity, op.arity);
    }
    for (const auto& [arity, count] : m.counts_by_arity) {
        bool overflow = false;
        std::uint64_t p = detail::checked_pow(static_cast<std::uint64_t>(a.size()), arity, &overflow);
        if (overflow) fail(ErrorKind::CapExceeded, "size measure overflows 64 bits");
        m.value += static_cast<std::uint64_t>(count) * p;
    }
    return m;
}

/// Fixed bijection between m-tuples over {0..size-1} and integers in
/// [0, size^m), first coordinate most significant. Every format and closure
/// in this library uses this one encoding.
class TupleCodec {
public:
    TupleCodec(int size, int arity) : size_(size), arity_(arity) {
        if (size < 1 || arity < 0) fail(ErrorKind::BadSize, "codec needs size >= 1, arity >= 0");
        bool overflow = false;
        space_ = detail::checked_pow(static_cast<std::uint64_t>(size), arity, &overflow);
        if (overflow)
            fail(ErrorKind::CapExceeded,
                 "tuple space " + std::to_string(size) + "^" + std::to_string(arity) +
                     " does not fit in 63 bits");
    }

    int size() const noexcept { return size_; }
    int arity() const noexcept { return arity_; }
    TupleCode space() const noexcept { return space_; }

    TupleCode encode(std::span<const Element> tuple) const {
        if (static_cast<int>(tuple.size()) != arity_)
            fail(ErrorKind::ArityMismatch, "tuple length does not match codec arity");
        TupleCode code = 0;
        for (Element e : tuple) {
            if (e < 0 || e >= size_) fail(ErrorKind::ElementOutOfRange, "tuple entry out of range");
            code = code * static_cast<TupleCode>(size_) + static_cast<TupleCode>(e);
        }
        return code;
    }

    TupleCode encode(std::initializer_list<Element> tuple) const {
        return encode(std::span<const Element>(tuple.begin(), tuple.size()));
    }

    void decode(TupleCode code, std::span<Element> out) const {
        for (int i = arity_ - 1; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = static_cast<Element>(code % static_cast<TupleCode>(size_));
            code /= static_cast<TupleCode>(size_);
        }
    }

    std::vector<Element> decode(TupleCode code) const {
        std::vector<Element> out(static_cast<std::size_t>(arity_));
        decode(code, out);
        return out;
    }

private:
    int size_;
    int arity_;
    TupleCode space_;
};

/// Largest arity whose tuple space still fits the 63-bit code guard.
inline int max_codable_arity(int size) {
    if (size <= 1) return 1 << 20;
    int m = 0;
    std::uint64_t space = 1;
    while (space <= (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(size)) {
        space *= static_cast<std::uint64_t>(size);
        ++m;
    }
    return m;
}

} // namespace pathcond
