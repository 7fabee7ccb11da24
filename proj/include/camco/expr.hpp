#pragma once

/**
 * Closed boolean expression trees over (state, joint action). Used by
 * Custom policy predicates and by feasibility-rule conditions.
 *
 * Evaluation is total: a reference to a missing attribute or variable
 * yields "absent", equality against absent is false ("!=" is true),
 * ordered comparisons require two present numbers, and a value node used
 * as a condition is true only if it is a present boolean true.
 */

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "camco/domain.hpp"

namespace camco {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

inline std::string to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "==";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "==";
}

inline CmpOp cmp_from_string(std::string_view s) {
    if (s == "==") return CmpOp::Eq;
    if (s == "!=") return CmpOp::Ne;
    if (s == "<") return CmpOp::Lt;
    if (s == "<=") return CmpOp::Le;
    if (s == ">") return CmpOp::Gt;
    if (s == ">=") return CmpOp::Ge;
    throw ConfigInvalid("comparison op '" + std::string(s) + "'");
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Node { Const, StateVar, AttrRef, LabelRef, Cmp, In, And, Or, Not };

    Node node = Node::Const;
    AttrValue literal = false;          // Const
    std::string name;                   // StateVar: variable; AttrRef/LabelRef: agent id
    std::string attr;                   // AttrRef: attribute name
    CmpOp op = CmpOp::Eq;               // Cmp
    std::vector<ExprPtr> kids;          // Cmp: 2; Not: 1; And/Or: n; In: 1 (the value)
    std::vector<AttrValue> members;     // In: candidate set
};

namespace expr {

inline ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

inline ExprPtr lit(AttrValue v) {
    Expr e;
    e.node = Expr::Node::Const;
    e.literal = std::move(v);
    return make(std::move(e));
}
inline ExprPtr num(double x) { return lit(AttrValue(x)); }
inline ExprPtr text(std::string s) { return lit(AttrValue(std::move(s))); }
inline ExprPtr flag(bool b) { return lit(AttrValue(b)); }

inline ExprPtr state(std::string var) {
    Expr e;
    e.node = Expr::Node::StateVar;
    e.name = std::move(var);
    return make(std::move(e));
}
inline ExprPtr attr(std::string agent, std::string attribute) {
    Expr e;
    e.node = Expr::Node::AttrRef;
    e.name = std::move(agent);
    e.attr = std::move(attribute);
    return make(std::move(e));
}
inline ExprPtr label(std::string agent) {
    Expr e;
    e.node = Expr::Node::LabelRef;
    e.name = std::move(agent);
    return make(std::move(e));
}
inline ExprPtr cmp(CmpOp op, ExprPtr a, ExprPtr b) {
    Expr e;
    e.node = Expr::Node::Cmp;
    e.op = op;
    e.kids = {std::move(a), std::move(b)};
    return make(std::move(e));
}
inline ExprPtr eq(ExprPtr a, ExprPtr b) { return cmp(CmpOp::Eq, std::move(a), std::move(b)); }
inline ExprPtr ne(ExprPtr a, ExprPtr b) { return cmp(CmpOp::Ne, std::move(a), std::move(b)); }
inline ExprPtr gt(ExprPtr a, ExprPtr b) { return cmp(CmpOp::Gt, std::move(a), std::move(b)); }
inline ExprPtr ge(ExprPtr a, ExprPtr b) { return cmp(CmpOp::Ge, std::move(a), std::move(b)); }
inline ExprPtr lt(ExprPtr a, ExprPtr b) { return cmp(CmpOp::Lt, std::move(a), std::move(b)); }
inline ExprPtr le(ExprPtr a, ExprPtr b) { return cmp(CmpOp::Le, std::move(a), std::move(b)); }

inline ExprPtr in(ExprPtr value, std::vector<AttrValue> members) {
    Expr e;
    e.node = Expr::Node::In;
    e.kids = {std::move(value)};
    e.members = std::move(members);
    return make(std::move(e));
}
inline ExprPtr label_in(std::string agent, std::vector<std::string> labels) {
    std::vector<AttrValue> members;
    members.reserve(labels.size());
    for (auto& s : labels) members.emplace_back(std::move(s));
    return in(label(std::move(agent)), std::move(members));
}

inline ExprPtr all(std::vector<ExprPtr> kids) {
    Expr e;
    e.node = Expr::Node::And;
    e.kids = std::move(kids);
    return make(std::move(e));
}
inline ExprPtr any(std::vector<ExprPtr> kids) {
    Expr e;
    e.node = Expr::Node::Or;
    e.kids = std::move(kids);
    return make(std::move(e));
}
inline ExprPtr neg(ExprPtr kid) {
    Expr e;
    e.node = Expr::Node::Not;
    e.kids = {std::move(kid)};
    return make(std::move(e));
}
/// cond => then, as a total expression.
inline ExprPtr implies(ExprPtr cond, ExprPtr then) {
    return any({neg(std::move(cond)), std::move(then)});
}

} // namespace expr

// ---------------------------------------------------------------------------
// Evaluation.

inline std::optional<AttrValue> eval_value(const Expr& e, const EnterpriseState& state,
                                           const JointView& view) {
    switch (e.node) {
        case Expr::Node::Const:
            return e.literal;
        case Expr::Node::StateVar:
            return state.var(e.name);
        case Expr::Node::AttrRef: {
            const ActionValue* a = view.find(e.name);
            if (!a || a->kind != ActionKind::Discrete) return std::nullopt;
            return a->attr(e.attr);
        }
        case Expr::Node::LabelRef: {
            const ActionValue* a = view.find(e.name);
            if (!a || a->kind != ActionKind::Discrete) return std::nullopt;
            return AttrValue(a->label);
        }
        default:
            return std::nullopt; // boolean nodes carry no value
    }
}

inline bool eval_bool(const Expr& e, const EnterpriseState& state, const JointView& view);

inline bool values_equal(const AttrValue& a, const AttrValue& b) {
    return a.index() == b.index() && a == b;
}

inline bool eval_cmp(const Expr& e, const EnterpriseState& state, const JointView& view) {
    auto lhs = eval_value(*e.kids[0], state, view);
    auto rhs = eval_value(*e.kids[1], state, view);
    if (e.op == CmpOp::Eq) return lhs && rhs && values_equal(*lhs, *rhs);
    if (e.op == CmpOp::Ne) return !(lhs && rhs && values_equal(*lhs, *rhs));
    if (!lhs || !rhs) return false;
    auto x = attr_number(*lhs);
    auto y = attr_number(*rhs);
    if (!x || !y) return false; // ordered comparison needs two numbers
    switch (e.op) {
        case CmpOp::Lt: return *x < *y;
        case CmpOp::Le: return *x <= *y;
        case CmpOp::Gt: return *x > *y;
        case CmpOp::Ge: return *x >= *y;
        default: return false;
    }
}

inline bool eval_bool(const Expr& e, const EnterpriseState& state, const JointView& view) {
    switch (e.node) {
        case Expr::Node::Cmp:
            return eval_cmp(e, state, view);
        case Expr::Node::In: {
            auto v = eval_value(*e.kids[0], state, view);
            if (!v) return false;
            for (const auto& m : e.members)
                if (values_equal(*v, m)) return true;
            return false;
        }
        case Expr::Node::And:
            for (const auto& k : e.kids)
                if (!eval_bool(*k, state, view)) return false;
            return true;
        case Expr::Node::Or:
            for (const auto& k : e.kids)
                if (eval_bool(*k, state, view)) return true;
            return false;
        case Expr::Node::Not:
            return !eval_bool(*e.kids[0], state, view);
        default: {
            auto v = eval_value(e, state, view);
            if (!v) return false;
            auto b = attr_flag(*v);
            return b.value_or(false);
        }
    }
}

inline bool eval_bool(const ExprPtr& e, const EnterpriseState& state, const JointView& view) {
    if (!e) return true; // null condition = unconditional
    return eval_bool(*e, state, view);
}

// ---------------------------------------------------------------------------
// Closedness introspection.

inline void collect_agents(const Expr& e, std::set<std::string>& out) {
    if (e.node == Expr::Node::AttrRef || e.node == Expr::Node::LabelRef) out.insert(e.name);
    for (const auto& k : e.kids) collect_agents(*k, out);
}
inline std::set<std::string> referenced_agents(const ExprPtr& e) {
    std::set<std::string> out;
    if (e) collect_agents(*e, out);
    return out;
}

inline void collect_state_vars(const Expr& e, std::set<std::string>& out) {
    if (e.node == Expr::Node::StateVar) out.insert(e.name);
    for (const auto& k : e.kids) collect_state_vars(*k, out);
}
inline std::set<std::string> referenced_state_vars(const ExprPtr& e) {
    std::set<std::string> out;
    if (e) collect_state_vars(*e, out);
    return out;
}

} // namespace camco
