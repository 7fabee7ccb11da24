#pragma once

/**
 * Constraint projection: map a proposed action to the nearest member of
 * the agent's per-state constraint set, or report that the set is empty.
 *
 * Discrete spaces use an attribute-aware edit distance over an explicit
 * candidate list. Continuous spaces use exact box clamping, upgraded to
 * Dykstra's alternating-projection scheme when halfspace cuts are present
 * (plain cyclic projections find a feasible point, not the nearest one).
 * Emptiness of box-and-halfspace regions is certified exactly by basic
 * solution enumeration before iterating.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "camco/policy.hpp"

namespace camco {

enum class ProjectionOutcome { Unchanged, Projected, Reject };

inline std::string to_string(ProjectionOutcome o) {
    switch (o) {
        case ProjectionOutcome::Unchanged: return "unchanged";
        case ProjectionOutcome::Projected: return "projected";
        case ProjectionOutcome::Reject: return "reject";
    }
    return "reject";
}

struct ProjectionResult {
    ProjectionOutcome outcome = ProjectionOutcome::Reject;
    std::optional<ActionValue> action; // set unless Reject
    double distance = 0.0;
    std::size_t candidates_examined = 0; // discrete list size
    std::size_t sweeps = 0;              // continuous iteration count
};

// ---------------------------------------------------------------------------
// Discrete edit distance: label swap costs label_cost; each attribute
// present on either side adds |a-b|/range for numbers (range from spec,
// mismatching or half-missing values cost 1).

struct EditDistanceSpec {
    double label_cost = 1.0;
    std::map<std::string, std::pair<double, double>> numeric_ranges; // attr -> [lo, hi]

    static EditDistanceSpec from_actions(const std::vector<ActionValue>& actions,
                                         double label_cost = 1.0) {
        EditDistanceSpec spec;
        spec.label_cost = label_cost;
        for (const auto& a : actions) {
            if (a.kind != ActionKind::Discrete) continue;
            for (const auto& [name, val] : a.attrs) {
                auto x = attr_number(val);
                if (!x) continue;
                auto it = spec.numeric_ranges.find(name);
                if (it == spec.numeric_ranges.end())
                    spec.numeric_ranges[name] = {*x, *x};
                else {
                    it->second.first = std::min(it->second.first, *x);
                    it->second.second = std::max(it->second.second, *x);
                }
            }
        }
        return spec;
    }

    double numeric_cost(const std::string& attr, double a, double b) const {
        auto it = numeric_ranges.find(attr);
        if (it == numeric_ranges.end() || it->second.second <= it->second.first)
            return a == b ? 0.0 : 1.0;
        double span = it->second.second - it->second.first;
        double c = std::abs(a - b) / span;
        return c > 1.0 ? 1.0 : c;
    }
};

inline double edit_distance(const ActionValue& a, const ActionValue& b,
                            const EditDistanceSpec& spec) {
    double d = 0.0;
    if (a.label != b.label) d += spec.label_cost;
    std::set<std::string> names;
    for (const auto& [n, v] : a.attrs) names.insert(n);
    for (const auto& [n, v] : b.attrs) names.insert(n);
    for (const auto& n : names) {
        auto va = a.attr(n);
        auto vb = b.attr(n);
        if (!va || !vb) {
            d += 1.0;
            continue;
        }
        auto xa = attr_number(*va);
        auto xb = attr_number(*vb);
        if (xa && xb)
            d += spec.numeric_cost(n, *xa, *xb);
        else
            d += values_equal(*va, *vb) ? 0.0 : 1.0;
    }
    return d;
}

/// Nearest member of an explicit candidate list; ties break toward the
/// smallest canonical key so the result never depends on list order.
inline ProjectionResult project_discrete(const ActionValue& action,
                                         const std::vector<ActionValue>& candidates,
                                         const EditDistanceSpec& spec) {
    ProjectionResult out;
    out.candidates_examined = candidates.size();
    if (candidates.empty()) {
        out.outcome = ProjectionOutcome::Reject;
        return out;
    }
    for (const auto& c : candidates) {
        if (c == action) {
            out.outcome = ProjectionOutcome::Unchanged;
            out.action = action;
            out.distance = 0.0;
            return out;
        }
    }
    const ActionValue* best = nullptr;
    double best_d = 0.0;
    std::string best_key;
    for (const auto& c : candidates) {
        double d = edit_distance(action, c, spec);
        std::string key = c.canonical_key();
        if (!best || d < best_d || (d == best_d && key < best_key)) {
            best = &c;
            best_d = d;
            best_key = std::move(key);
        }
    }
    out.outcome = ProjectionOutcome::Projected;
    out.action = *best;
    out.distance = best_d;
    return out;
}

// ---------------------------------------------------------------------------
// Continuous machinery.

namespace detail {

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline std::vector<double> clamp_to_box(std::vector<double> x, const BoxBounds& box) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < box.lo[i]) x[i] = box.lo[i];
        if (x[i] > box.hi[i]) x[i] = box.hi[i];
    }
    return x;
}

inline void project_onto_halfspace(std::vector<double>& x, const Halfspace& h) {
    double dot = 0, norm2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += h.normal[i] * x[i];
        norm2 += h.normal[i] * h.normal[i];
    }
    if (dot <= h.offset || norm2 == 0) return;
    double scale = (dot - h.offset) / norm2;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= scale * h.normal[i];
}

inline bool region_member(const std::vector<double>& x, const BoxBounds& box,
                          const std::vector<Halfspace>& cuts, double tol) {
    if (!box.contains(x, tol)) return false;
    for (const auto& h : cuts)
        if (h.violation(x) > tol) return false;
    return true;
}

/// Solve M y = rhs by Gaussian elimination with partial pivoting.
/// Returns false when the system is (numerically) singular.
inline bool solve_square(std::vector<std::vector<double>> M, std::vector<double> rhs,
                         std::vector<double>& y) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        if (std::abs(M[piv][col]) < 1e-12) return false;
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = M[r][col] / M[col][col];
            for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    y.assign(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s -= M[ri][c] * y[c];
        y[ri] = s / M[ri][ri];
    }
    return true;
}

/// Exact nonemptiness certificate for box ∩ halfspaces. The region is a
/// bounded polyhedron, so it is nonempty iff it has a vertex, and every
/// vertex solves some d linearly independent active constraints. We try
/// all d-subsets of the 2d box facets plus the m cuts. Practical for
/// d <= 8; callers guard the dimension.
inline bool region_nonempty(const BoxBounds& box, const std::vector<Halfspace>& cuts,
                            std::vector<double>* witness = nullptr) {
    const std::size_t d = box.dim();
    // Constraint rows as normal . x <= offset.
    std::vector<std::vector<double>> normals;
    std::vector<double> offsets;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> row(d, 0.0);
        row[i] = -1.0;
        normals.push_back(row);
        offsets.push_back(-box.lo[i]);
        row[i] = 1.0;
        normals.push_back(row);
        offsets.push_back(box.hi[i]);
    }
    for (const auto& h : cuts) {
        normals.push_back(h.normal);
        offsets.push_back(h.offset);
    }
    const std::size_t m = normals.size();
    const double tol = 1e-9;
    auto satisfies_all = [&](const std::vector<double>& x) {
        for (std::size_t i = 0; i < m; ++i) {
            double dot = 0;
            for (std::size_t c = 0; c < d; ++c) dot += normals[i][c] * x[c];
            if (dot > offsets[i] + tol) return false;
        }
        return true;
    };

    std::vector<std::size_t> pick(d);
    // Iterate d-combinations of constraint indices in lexicographic order.
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < d; ++i) idx[i] = i;
    if (d == 0) return true;
    if (m < d) return false; // cannot happen: box alone supplies 2d rows
    while (true) {
        std::vector<std::vector<double>> M(d, std::vector<double>(d));
        std::vector<double> rhs(d);
        for (std::size_t r = 0; r < d; ++r) {
            M[r] = normals[idx[r]];
            rhs[r] = offsets[idx[r]];
        }
        std::vector<double> x;
        if (solve_square(std::move(M), std::move(rhs), x) && satisfies_all(x)) {
            if (witness) *witness = x;
            return true;
        }
        // next combination
        std::size_t i = d;
        while (i > 0) {
            --i;
            if (idx[i] != i + m - d) {
                ++idx[i];
                for (std::size_t j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return false;
        }
    }
}

inline constexpr double kProjectionTol = 1e-9;
inline constexpr std::size_t kProjectionSweepCap = 10'000;

/// Dykstra's method over {box, cut_1, ..., cut_m}; converges to the
/// Euclidean projection onto the intersection. Caller certifies the
/// region nonempty first.
inline std::vector<double> dykstra_project(const std::vector<double>& x0, const BoxBounds& box,
                                           const std::vector<Halfspace>& cuts,
                                           std::size_t& sweeps_out) {
    const std::size_t d = x0.size();
    const std::size_t sets = 1 + cuts.size();
    std::vector<double> x = x0;
    std::vector<std::vector<double>> corr(sets, std::vector<double>(d, 0.0));
    for (std::size_t sweep = 1; sweep <= kProjectionSweepCap; ++sweep) {
        double moved = 0.0;
        for (std::size_t s = 0; s < sets; ++s) {
            std::vector<double> y(d);
            for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + corr[s][i];
            std::vector<double> z = y;
            if (s == 0)
                z = clamp_to_box(std::move(z), box);
            else
                project_onto_halfspace(z, cuts[s - 1]);
            for (std::size_t i = 0; i < d; ++i) {
                corr[s][i] = y[i] - z[i];
                moved = std::max(moved, std::abs(z[i] - x[i]));
            }
            x = std::move(z);
        }
        if (moved < kProjectionTol && region_member(x, box, cuts, kProjectionTol)) {
            sweeps_out = sweep;
            return x;
        }
    }
    throw NonConvergence("projection onto box with " + std::to_string(cuts.size()) +
                         " cuts did not reach tolerance in " +
                         std::to_string(kProjectionSweepCap) + " sweeps");
}

} // namespace detail

/// Projection onto box ∩ halfspaces. Reject means the region is certified
/// empty. Box-only projection is an exact clamp.
inline ProjectionResult project_continuous(const std::vector<double>& x, const BoxBounds& box,
                                           const std::vector<Halfspace>& cuts) {
    box.validate();
    if (x.size() != box.dim())
        throw DimensionMismatch("action arity " + std::to_string(x.size()) + " vs box " +
                                std::to_string(box.dim()));
    for (double v : x)
        if (!std::isfinite(v)) throw ConfigInvalid("non-finite coordinate in proposed action");
    for (const auto& h : cuts)
        if (h.normal.size() != box.dim())
            throw DimensionMismatch("halfspace arity " + std::to_string(h.normal.size()) +
                                    " vs box " + std::to_string(box.dim()));

    ProjectionResult out;
    if (detail::region_member(x, box, cuts, 0.0)) {
        out.outcome = ProjectionOutcome::Unchanged;
        out.action = ActionValue::continuous(x);
        return out;
    }
    if (cuts.empty()) {
        auto z = detail::clamp_to_box(x, box);
        out.outcome = ProjectionOutcome::Projected;
        out.distance = detail::euclid(x, z);
        out.action = ActionValue::continuous(std::move(z));
        return out;
    }
    if (box.dim() > 8)
        throw ConfigInvalid("halfspace regions supported up to 8 coordinates, got " +
                            std::to_string(box.dim()));
    if (!detail::region_nonempty(box, cuts)) {
        out.outcome = ProjectionOutcome::Reject;
        return out;
    }
    std::size_t sweeps = 0;
    auto z = detail::dykstra_project(x, box, cuts, sweeps);
    out.outcome = ProjectionOutcome::Projected;
    out.sweeps = sweeps;
    out.distance = detail::euclid(x, z);
    out.action = ActionValue::continuous(std::move(z));
    return out;
}

// ---------------------------------------------------------------------------
// Full per-agent projection against C_i(s) = F_i(s) ∩ unary policy slices.

inline ProjectionResult project(const PolicyBundle& bundle, const EnterpriseState& state,
                                const AgentSpec& agent, const ActionValue& proposal) {
    AgentConstraintSet cs = agent_constraints(bundle, state, agent);

    if (agent.action_space.kind == ActionKind::Discrete) {
        if (proposal.kind != ActionKind::Discrete)
            throw DimensionMismatch("continuous proposal for discrete agent '" + agent.agent_id + "'");
        std::vector<ActionValue> candidates;
        for (const auto& a : cs.feasible.actions)
            if (cs.admits(state, agent.agent_id, a)) candidates.push_back(a);
        auto spec = EditDistanceSpec::from_actions(agent.action_space.actions);
        return project_discrete(proposal, candidates, spec);
    }

    if (proposal.kind != ActionKind::Continuous)
        throw DimensionMismatch("discrete proposal for continuous agent '" + agent.agent_id + "'");

    // The expression language reads labels and attributes, never
    // coordinates, so every unary slice is constant over the region:
    // a failing slice empties C_i outright.
    {
        JointView view(agent.agent_id, proposal);
        for (const auto* p : cs.unary) {
            if (!p->eval(state, view)) {
                ProjectionResult out;
                out.outcome = ProjectionOutcome::Reject;
                return out;
            }
        }
    }

    const auto& fs = cs.feasible;
    ProjectionResult onto_region;
    bool region_usable = false;
    if (fs.region_enabled) {
        onto_region = project_continuous(proposal.vec, fs.box, fs.halfspaces);
        region_usable = onto_region.outcome != ProjectionOutcome::Reject;
        if (onto_region.outcome == ProjectionOutcome::Unchanged) return onto_region;
    }
    // F_i always contains the safe default; compare against it.
    if (agent.safe_default.kind == ActionKind::Continuous &&
        agent.safe_default.vec.size() == proposal.vec.size()) {
        double d_sd = detail::euclid(proposal.vec, agent.safe_default.vec);
        if (!region_usable || d_sd < onto_region.distance) {
            ProjectionResult out;
            out.outcome = proposal == agent.safe_default ? ProjectionOutcome::Unchanged
                                                         : ProjectionOutcome::Projected;
            out.action = agent.safe_default;
            out.distance = out.outcome == ProjectionOutcome::Unchanged ? 0.0 : d_sd;
            return out;
        }
    }
    if (region_usable) return onto_region;
    ProjectionResult out;
    out.outcome = ProjectionOutcome::Reject;
    return out;
}

} // namespace camco
