#include "sasp/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace sasp {

auto to_string(CompareOp op) -> std::string_view {
    switch (op) {
    case CompareOp::Eq:
        return "=";
    case CompareOp::Ne:
        return "!=";
    case CompareOp::Lt:
        return "<";
    case CompareOp::Le:
        return "<=";
    case CompareOp::Gt:
        return ">";
    case CompareOp::Ge:
        return ">=";
    }
    return "?";
}

auto holds(CompareOp op, int cmp) -> bool {
    switch (op) {
    case CompareOp::Eq:
        return cmp == 0;
    case CompareOp::Ne:
        return cmp != 0;
    case CompareOp::Lt:
        return cmp < 0;
    case CompareOp::Le:
        return cmp <= 0;
    case CompareOp::Gt:
        return cmp > 0;
    case CompareOp::Ge:
        return cmp >= 0;
    }
    return false;
}

auto compare_ground(Term const &lhs, Term const &rhs) -> int {
    bool ln = lhs.kind == Term::Kind::Number;
    bool rn = rhs.kind == Term::Kind::Number;
    if (ln && rn) {
        return cmp(BigInt{lhs.text}, BigInt{rhs.text});
    }
    if (ln != rn) {
        return ln ? -1 : 1;
    }
    return lhs.text.compare(rhs.text) < 0 ? -1 : (lhs.text == rhs.text ? 0 : 1);
}

void collect_variables(std::vector<Term> const &terms, std::vector<std::string> &out) {
    for (auto const &t : terms) {
        if (t.is_variable() && std::find(out.begin(), out.end(), t.text) == out.end()) {
            out.push_back(t.text);
        }
    }
}

auto atom_args(ConditionAtom const &atom) -> std::vector<Term> const & {
    return std::visit([](auto const &a) -> std::vector<Term> const & { return a.args; }, atom);
}

void collect_variables(Atom const &atom, std::vector<std::string> &out) {
    std::visit(
        [&](auto const &a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, AggregateAtom>) {
                collect_variables({a.element}, out);
                collect_variables(atom_args(a.condition), out);
            } else if constexpr (std::is_same_v<T, Comparison>) {
                collect_variables({a.lhs, a.rhs}, out);
            } else {
                collect_variables(a.args, out);
            }
        },
        atom);
}

auto GroundAtom::relation() const -> Relation {
    auto rel = relation_from_name(name);
    if (kind != AtomKind::Spatial || !rel) {
        throw std::logic_error("not a spatial atom: " + name);
    }
    return *rel;
}

auto to_string(GroundAtom const &atom) -> std::string {
    std::string out = atom.name;
    if (!atom.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += atom.args[i];
        }
        out += ')';
    }
    return out;
}

auto is_internal(GroundAtom const &atom) -> bool {
    return atom.kind == AtomKind::Aggregate || (!atom.name.empty() && atom.name.front() == '_');
}

auto AtomTable::intern(GroundAtom const &atom) -> AtomId {
    auto [it, inserted] = index_.try_emplace(atom, static_cast<AtomId>(atoms_.size() + 1));
    if (inserted) {
        atoms_.push_back(atom);
    }
    return it->second;
}

auto AtomTable::find(GroundAtom const &atom) const -> std::optional<AtomId> {
    auto it = index_.find(atom);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

auto AtomTable::at(AtomId id) const -> GroundAtom const & {
    if (id == 0 || id > atoms_.size()) {
        throw std::out_of_range("atom id out of range");
    }
    return atoms_[id - 1];
}

auto AtomTable::ids() const -> std::vector<AtomId> {
    std::vector<AtomId> out(atoms_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<AtomId>(i + 1);
    }
    return out;
}

auto GroundProgram::object(std::string const &name) const -> ObjectInfo const * {
    for (auto const &[n, info] : objects) {
        if (n == name) {
            return &info;
        }
    }
    return nullptr;
}

} // namespace sasp
