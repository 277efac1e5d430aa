#include "sasp/parser.hpp"

#include <sstream>

namespace sasp {

namespace {

void print_terms(std::ostream &out, std::vector<Term> const &terms) {
    if (terms.empty()) {
        return;
    }
    out << '(';
    for (std::size_t i = 0; i < terms.size(); ++i) {
        out << (i > 0 ? "," : "") << terms[i].text;
    }
    out << ')';
}

void print(std::ostream &out, Atom const &atom) {
    std::visit(
        [&](auto const &a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, RegularAtom>) {
                out << a.predicate;
                print_terms(out, a.args);
            } else if constexpr (std::is_same_v<T, SpatialAtom>) {
                out << relation_name(a.relation);
                print_terms(out, a.args);
            } else if constexpr (std::is_same_v<T, AggregateAtom>) {
                out << "#count{" << a.element.text << " : ";
                std::visit([&](auto const &c) { print(out, Atom{c}); }, a.condition);
                out << "} " << to_string(a.guard) << ' ' << a.bound.get_str();
            } else {
                out << a.lhs.text << ' ' << to_string(a.op) << ' ' << a.rhs.text;
            }
        },
        atom);
}

auto sort_fact_name(Rule const &rule, Sort sort) -> std::string const * {
    if (!rule.is_fact()) {
        return nullptr;
    }
    auto const *atom = std::get_if<RegularAtom>(&*rule.head);
    if (atom == nullptr || atom->predicate != sort_name(sort) || atom->args.size() != 1) {
        return nullptr;
    }
    return &atom->args[0].text;
}

} // namespace

auto print_atom(Atom const &atom) -> std::string {
    std::ostringstream out;
    print(out, atom);
    return out.str();
}

auto print_rule(Rule const &rule) -> std::string {
    std::ostringstream out;
    if (rule.head) {
        print(out, *rule.head);
    }
    if (!rule.body.empty()) {
        out << (rule.head ? " :- " : ":- ");
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            out << (i > 0 ? ", " : "");
            if (rule.body[i].negated) {
                out << "not ";
            }
            print(out, rule.body[i].atom);
        }
    }
    out << '.';
    return out.str();
}

auto print_program(Program const &program) -> std::string {
    std::ostringstream out;
    // Pooled sort declarations are re-pooled so that the declaration grouping
    // survives a print/parse round trip.
    std::size_t decl = 0;
    auto const &rules = program.rules;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        while (decl < program.objects.size() && program.objects[decl].endpoints) {
            ++decl;
        }
        if (decl < program.objects.size()) {
            auto const &group = program.objects[decl];
            auto const *first = sort_fact_name(rules[i], group.sort);
            if (first != nullptr && *first == group.names.front() && i + group.names.size() <= rules.size()) {
                bool matches = true;
                for (std::size_t k = 0; k < group.names.size() && matches; ++k) {
                    auto const *name = sort_fact_name(rules[i + k], group.sort);
                    matches = name != nullptr && *name == group.names[k];
                }
                if (matches) {
                    out << sort_name(group.sort) << '(';
                    for (std::size_t k = 0; k < group.names.size(); ++k) {
                        out << (k > 0 ? ";" : "") << group.names[k];
                    }
                    out << ").\n";
                    i += group.names.size() - 1;
                    ++decl;
                    continue;
                }
            }
        }
        out << print_rule(rules[i]) << '\n';
    }
    for (auto const &show : program.shows) {
        out << "#show " << show.predicate << '/' << show.arity << ".\n";
    }
    return out.str();
}

} // namespace sasp
