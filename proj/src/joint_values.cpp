#include "mbdp/joint_values.hpp"

#include "mbdp/errors.hpp"

namespace mbdp {

namespace {

TreeSets distinct_children(const TreeSets& sets) {
    TreeSets children(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::unordered_map<const PolicyNode*, bool> seen;
        for (const auto& tree : sets[i]) {
            for (const auto& c : tree->children()) {
                if (!c) throw EvaluationError("cannot tabulate values of a partial policy tree");
                if (seen.emplace(c.get(), true).second) children[i].push_back(c);
            }
        }
    }
    return children;
}

std::vector<std::size_t> action_strides(const DecPomdp& model) {
    std::vector<std::size_t> strides(model.num_agents());
    std::size_t stride = 1;
    for (std::size_t i = model.num_agents(); i-- > 0;) {
        strides[i] = stride;
        stride *= model.num_actions(i);
    }
    return strides;
}

}  // namespace

void LevelTable::index_sets() {
    const std::size_t n = sets_.size();
    positions_.assign(n, {});
    strides_.assign(n, 1);
    num_tuples_ = 1;
    for (std::size_t i = n; i-- > 0;) {
        strides_[i] = num_tuples_;
        num_tuples_ *= sets_[i].size();
    }
    depth_ = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sets_[i].empty()) throw DataError("tree set of agent " + std::to_string(i) + " is empty");
        for (std::size_t k = 0; k < sets_[i].size(); ++k) {
            const auto& tree = sets_[i][k];
            if (depth_ == 0) depth_ = tree->depth();
            if (tree->depth() != depth_) throw DataError("tree sets must have uniform depth");
            positions_[i].emplace(tree.get(), static_cast<int>(k));
        }
    }
}

LevelTable LevelTable::compute(const DecPomdp& model, TreeSets sets) {
    if (sets.empty() || sets.front().empty()) throw DataError("cannot tabulate empty tree sets");
    if (sets.front().front()->depth() == 1) {
        LevelTable table;
        table.sets_ = std::move(sets);
        table.index_sets();
        table.num_states_ = model.num_states();
        table.values_.assign(table.num_tuples_ * table.num_states_, 0.0);
        const auto astrides = action_strides(model);
        std::vector<std::size_t> pos(table.num_agents(), 0);
        for (std::size_t t = 0; t < table.num_tuples_; ++t) {
            JointActionId a = 0;
            for (std::size_t i = 0; i < table.num_agents(); ++i) {
                pos[i] = (t / table.strides_[i]) % table.sets_[i].size();
                a += static_cast<std::size_t>(table.sets_[i][pos[i]]->action()) * astrides[i];
            }
            for (std::size_t s = 0; s < table.num_states_; ++s)
                table.values_[t * table.num_states_ + s] = model.expected_reward(s, a);
        }
        return table;
    }
    LevelTable children = compute(model, distinct_children(sets));
    return compute(model, std::move(sets), children);
}

LevelTable LevelTable::compute(const DecPomdp& model, TreeSets sets, const LevelTable& children) {
    LevelTable table;
    table.sets_ = std::move(sets);
    table.index_sets();
    if (table.num_agents() != model.num_agents()) throw DataError("tree sets do not match the agent count");
    if (table.depth_ != children.depth() + 1) throw DataError("child table has the wrong depth");
    const std::size_t n = table.num_agents();
    const std::size_t ns = model.num_states();
    table.num_states_ = ns;
    table.values_.assign(table.num_tuples_ * ns, 0.0);

    std::vector<std::vector<TreeShape>> shapes(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& tree : table.sets_[i]) {
            shapes[i].push_back(children.shape_of(i, tree));
            for (int c : shapes[i].back().children)
                if (c < 0) throw EvaluationError("cannot tabulate values of a partial policy tree");
        }
    }

    const auto astrides = action_strides(model);
    const std::size_t nobs = model.num_joint_observations();
    std::vector<std::vector<int>> obs_parts(nobs);
    for (std::size_t o = 0; o < nobs; ++o) obs_parts[o] = model.joint_observations().decode(o);

    std::vector<std::size_t> child_tuple(nobs);
    std::vector<const TreeShape*> members(n);
    for (std::size_t t = 0; t < table.num_tuples_; ++t) {
        JointActionId a = 0;
        for (std::size_t i = 0; i < n; ++i) {
            members[i] = &shapes[i][(t / table.strides_[i]) % table.sets_[i].size()];
            a += static_cast<std::size_t>(members[i]->action) * astrides[i];
        }
        for (std::size_t o = 0; o < nobs; ++o) {
            std::size_t ct = 0;
            for (std::size_t i = 0; i < n; ++i)
                ct += static_cast<std::size_t>(members[i]->children[static_cast<std::size_t>(obs_parts[o][i])]) *
                      children.stride(i);
            child_tuple[o] = ct;
        }
        double* out = table.values_.data() + t * ns;
        for (std::size_t s = 0; s < ns; ++s) {
            double total = model.expected_reward(s, a);
            for (const auto& succ : model.successors(s, a)) {
                double future = 0.0;
                for (const auto& obs : model.observations_after(a, succ.state))
                    future += obs.probability * children.value(child_tuple[obs.observation], succ.state);
                total += succ.probability * future;
            }
            out[s] = total;
        }
    }
    return table;
}

std::size_t LevelTable::tuple_index(std::span<const std::size_t> positions) const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) t += positions[i] * strides_[i];
    return t;
}

int LevelTable::position(std::size_t agent, const PolicyNode* node) const {
    auto it = positions_[agent].find(node);
    return it == positions_[agent].end() ? -1 : it->second;
}

TreeShape LevelTable::shape_of(std::size_t agent, const PolicyTree& tree) const {
    TreeShape shape;
    shape.action = tree->action();
    shape.children.reserve(tree->children().size());
    for (const auto& c : tree->children()) {
        if (!c) {
            shape.children.push_back(-1);
            continue;
        }
        const int p = position(agent, c.get());
        if (p < 0) throw DataError("policy tree child is not part of the child set");
        shape.children.push_back(p);
    }
    return shape;
}

BeliefScorer::BeliefScorer(const DecPomdp& model, const BeliefState& belief, const LevelTable* children)
    : model_(&model), children_(children) {
    const std::size_t na = model.num_joint_actions();
    const std::size_t nobs = model.num_joint_observations();
    const std::size_t ns = model.num_states();
    action_strides_ = action_strides(model);
    immediate_.assign(na, 0.0);
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t s = 0; s < ns; ++s)
            if (belief[s] != 0.0) immediate_[a] += belief[s] * model.expected_reward(s, a);
    if (!children_) return;

    observation_parts_.resize(nobs);
    for (std::size_t o = 0; o < nobs; ++o) observation_parts_[o] = model.joint_observations().decode(o);
    child_tuples_ = children_->num_tuples();
    future_.assign(na * nobs * child_tuples_, 0.0);
    std::vector<double> next(ns);
    for (std::size_t a = 0; a < na; ++a) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < ns; ++s) {
            if (belief[s] == 0.0) continue;
            for (const auto& succ : model.successors(s, a)) next[succ.state] += belief[s] * succ.probability;
        }
        for (std::size_t sp = 0; sp < ns; ++sp) {
            if (next[sp] == 0.0) continue;
            for (const auto& obs : model.observations_after(a, sp)) {
                const double w = next[sp] * obs.probability;
                double* row = future_.data() + (a * nobs + obs.observation) * child_tuples_;
                for (std::size_t c = 0; c < child_tuples_; ++c) row[c] += w * children_->value(c, sp);
            }
        }
    }
}

double BeliefScorer::value(std::span<const TreeShape* const> shapes) const {
    JointActionId a = 0;
    for (std::size_t i = 0; i < shapes.size(); ++i)
        a += static_cast<std::size_t>(shapes[i]->action) * action_strides_[i];
    double total = immediate_[a];
    if (!children_) return total;
    const std::size_t nobs = observation_parts_.size();
    const double* base = future_.data() + a * nobs * child_tuples_;
    for (std::size_t o = 0; o < nobs; ++o) {
        std::size_t ct = 0;
        for (std::size_t i = 0; i < shapes.size(); ++i)
            ct += static_cast<std::size_t>(shapes[i]->children[static_cast<std::size_t>(observation_parts_[o][i])]) *
                  children_->stride(i);
        total += base[o * child_tuples_ + ct];
    }
    return total;
}

double BeliefScorer::value(const TreeShape& first, const TreeShape& second) const {
    const JointActionId a = static_cast<std::size_t>(first.action) * action_strides_[0] +
                            static_cast<std::size_t>(second.action) * action_strides_[1];
    double total = immediate_[a];
    if (!children_) return total;
    const std::size_t n1 = first.children.size(), n2 = second.children.size();
    const std::size_t stride0 = children_->stride(0);
    const double* row = future_.data() + a * n1 * n2 * child_tuples_;
    for (std::size_t o1 = 0; o1 < n1; ++o1) {
        const std::size_t c1 = static_cast<std::size_t>(first.children[o1]) * stride0;
        for (std::size_t o2 = 0; o2 < n2; ++o2) {
            total += row[c1 + static_cast<std::size_t>(second.children[o2])];
            row += child_tuples_;
        }
    }
    return total;
}

}  // namespace mbdp
