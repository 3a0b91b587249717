#include "mbdp/backup.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_set>

#include "mbdp/errors.hpp"

namespace mbdp {

int CandidateSet::depth() const {
    for (const auto& set : trees)
        if (!set.empty()) return set.front()->depth();
    return 0;
}

void CandidateSet::check() const {
    const int d = depth();
    for (std::size_t i = 0; i < trees.size(); ++i) {
        std::unordered_set<const PolicyNode*> seen;
        for (const auto& t : trees[i]) {
            if (!t) throw DataError("candidate set contains a null tree");
            if (t->depth() != d) throw DataError("candidate set trees must have uniform depth");
            if (!seen.insert(t.get()).second)
                throw DataError("candidate set of agent " + std::to_string(i) + " repeats a tree");
        }
    }
}

bool ObservationSelection::contains(std::size_t agent, int observation) const {
    const auto& s = per_agent[agent];
    return std::find(s.begin(), s.end(), observation) != s.end();
}

std::vector<JointObservationId> ObservationSelection::joint_in(const DecPomdp& model) const {
    std::vector<JointObservationId> out;
    for (std::size_t o = 0; o < model.num_joint_observations(); ++o) {
        bool inside = true;
        for (std::size_t i = 0; i < model.num_agents() && inside; ++i)
            inside = contains(i, model.joint_observations().component(o, i));
        if (inside) out.push_back(o);
    }
    return out;
}

std::vector<JointObservationId> ObservationSelection::joint_out(const DecPomdp& model) const {
    const auto in = joint_in(model);
    std::vector<JointObservationId> out;
    std::size_t k = 0;
    for (std::size_t o = 0; o < model.num_joint_observations(); ++o) {
        if (k < in.size() && in[k] == o) ++k;
        else out.push_back(o);
    }
    return out;
}

bool ObservationSelection::is_full(const DecPomdp& model) const {
    for (std::size_t i = 0; i < model.num_agents(); ++i)
        if (per_agent[i].size() < model.num_observations(i)) return false;
    return true;
}

ObservationSelection ObservationSelection::full(const DecPomdp& model) {
    ObservationSelection sel;
    sel.per_agent.resize(model.num_agents());
    for (std::size_t i = 0; i < model.num_agents(); ++i) {
        sel.per_agent[i].resize(model.num_observations(i));
        std::iota(sel.per_agent[i].begin(), sel.per_agent[i].end(), 0);
    }
    return sel;
}

CandidateSet one_step_trees(const DecPomdp& model) {
    CandidateSet out;
    out.trees.resize(model.num_agents());
    for (std::size_t i = 0; i < model.num_agents(); ++i)
        for (std::size_t a = 0; a < model.num_actions(i); ++a) out.trees[i].push_back(PolicyNode::leaf(static_cast<int>(a)));
    return out;
}

std::size_t backup_count(std::size_t num_actions, std::size_t input_size, std::size_t branches) {
    constexpr std::size_t limit = std::numeric_limits<std::size_t>::max();
    std::size_t count = num_actions;
    for (std::size_t b = 0; b < branches; ++b) {
        if (input_size != 0 && count > limit / input_size) return 0;
        count *= input_size;
    }
    return count;
}

namespace {

CandidateSet backup_branches(const DecPomdp& model, const CandidateSet& sets,
                             const std::vector<std::vector<int>>& branches, std::size_t cap) {
    if (sets.num_agents() != model.num_agents()) throw DataError("candidate set does not match the agent count");
    if (sets.depth() < 1) throw DataError("backup needs input trees of depth at least 1");
    for (std::size_t i = 0; i < model.num_agents(); ++i) {
        if (sets.trees[i].empty()) throw DataError("backup input for agent " + std::to_string(i) + " is empty");
        const std::size_t count = backup_count(model.num_actions(i), sets.trees[i].size(), branches[i].size());
        if (count == 0 || count > cap)
            throw CapacityError("backup for agent " + std::to_string(i) + " would create " +
                                (count == 0 ? std::string("more than 2^64") : std::to_string(count)) +
                                " trees (cap " + std::to_string(cap) + "); reduce maxTrees or maxObs");
    }
    CandidateSet out;
    out.trees.resize(model.num_agents());
    for (std::size_t i = 0; i < model.num_agents(); ++i) {
        const auto& input = sets.trees[i];
        const std::size_t m = input.size();
        const std::size_t k = branches[i].size();
        const std::size_t count = backup_count(model.num_actions(i), m, k);
        const std::size_t assignments = count / model.num_actions(i);
        auto& result = out.trees[i];
        result.reserve(count);
        std::vector<std::size_t> digits(k, 0);
        for (std::size_t a = 0; a < model.num_actions(i); ++a) {
            std::fill(digits.begin(), digits.end(), 0);
            for (std::size_t n = 0; n < assignments; ++n) {
                std::vector<PolicyTree> children(model.num_observations(i));
                for (std::size_t j = 0; j < k; ++j)
                    children[static_cast<std::size_t>(branches[i][j])] = input[digits[j]];
                result.push_back(PolicyNode::internal(static_cast<int>(a), std::move(children)));
                // Odometer with the first branch most significant.
                for (std::size_t j = k; j-- > 0;) {
                    if (++digits[j] < m) break;
                    digits[j] = 0;
                }
            }
        }
    }
    return out;
}

}  // namespace

CandidateSet exhaustive_backup(const DecPomdp& model, const CandidateSet& sets, std::size_t cap) {
    return backup_branches(model, sets, ObservationSelection::full(model).per_agent, cap);
}

CandidateSet partial_backup(const DecPomdp& model, const CandidateSet& selected, const ObservationSelection& selection,
                            std::size_t cap) {
    if (selection.per_agent.size() != model.num_agents())
        throw DataError("observation selection does not match the agent count");
    std::vector<std::vector<int>> branches = selection.per_agent;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        auto& b = branches[i];
        if (b.empty()) throw DataError("observation selection of agent " + std::to_string(i) + " is empty");
        std::sort(b.begin(), b.end());
        if (std::adjacent_find(b.begin(), b.end()) != b.end())
            throw DataError("observation selection of agent " + std::to_string(i) + " repeats an observation");
        if (b.front() < 0 || static_cast<std::size_t>(b.back()) >= model.num_observations(i))
            throw DataError("observation selection of agent " + std::to_string(i) + " is out of range");
    }
    return backup_branches(model, selected, branches, cap);
}

ObservationSelection rank_observations(const DecPomdp& model, const BeliefState& previous_belief,
                                       JointActionId action, std::size_t max_obs) {
    if (max_obs == 0) throw DataError("maxObs must be at least 1");
    const auto dist = joint_observation_distribution(model, previous_belief, action);
    std::vector<JointObservationId> order(dist.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](JointObservationId x, JointObservationId y) { return dist[x] > dist[y]; });

    const std::size_t n = model.num_agents();
    ObservationSelection sel;
    sel.per_agent.resize(n);
    std::vector<std::size_t> quota(n);
    std::size_t pending = 0;
    for (std::size_t i = 0; i < n; ++i) {
        quota[i] = std::min(max_obs, model.num_observations(i));
        pending += quota[i];
    }
    for (JointObservationId o : order) {
        if (pending == 0) break;
        for (std::size_t i = 0; i < n; ++i) {
            const int local = model.joint_observations().component(o, i);
            if (sel.per_agent[i].size() < quota[i] && !sel.contains(i, local)) {
                sel.per_agent[i].push_back(local);
                --pending;
            }
        }
    }
    return sel;
}

namespace {

// Best joint value of `own` (agent `agent`) against every tuple of the other
// agents' current shapes.
class BestResponseValue {
public:
    BestResponseValue(const BeliefScorer& scorer, const std::vector<std::vector<TreeShape>>& shapes)
        : scorer_(scorer), shapes_(shapes) {}

    double operator()(std::size_t agent, const TreeShape& own) const {
        const std::size_t n = shapes_.size();
        if (n == 2) {
            double best = -std::numeric_limits<double>::infinity();
            const auto& others = shapes_[1 - agent];
            for (const auto& other : others) {
                const double v = agent == 0 ? scorer_.value(own, other) : scorer_.value(other, own);
                best = std::max(best, v);
            }
            return best;
        }
        std::vector<std::size_t> pos(n, 0);
        std::vector<const TreeShape*> members(n);
        double best = -std::numeric_limits<double>::infinity();
        while (true) {
            for (std::size_t j = 0; j < n; ++j) members[j] = j == agent ? &own : &shapes_[j][pos[j]];
            best = std::max(best, scorer_.value(members));
            std::size_t j = n;
            while (j-- > 0) {
                if (j == agent) continue;
                if (++pos[j] < shapes_[j].size()) break;
                pos[j] = 0;
            }
            if (j == static_cast<std::size_t>(-1)) break;
        }
        return best;
    }

private:
    const BeliefScorer& scorer_;
    const std::vector<std::vector<TreeShape>>& shapes_;
};

}  // namespace

CandidateSet fill_missing(const DecPomdp& model, const CandidateSet& partials, const CandidateSet& donors,
                          const BeliefState& belief, FillStats* stats, std::size_t max_rounds) {
    for (std::size_t i = 0; i < donors.num_agents(); ++i)
        if (donors.trees[i].empty()) throw DataError("fill_missing: donor set of agent " + std::to_string(i) + " is empty");
    return fill_missing(model, partials, LevelTable::compute(model, donors.trees), belief, stats, max_rounds);
}

CandidateSet fill_missing(const DecPomdp& model, const CandidateSet& partials, const LevelTable& donors,
                          const BeliefState& belief, FillStats* stats, std::size_t max_rounds) {
    const std::size_t n = model.num_agents();
    if (partials.num_agents() != n || donors.num_agents() != n)
        throw DataError("fill_missing: sets do not match the agent count");

    std::vector<std::vector<TreeShape>> shapes(n);
    std::vector<std::vector<std::vector<std::size_t>>> missing(n);
    bool any_missing = false;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& tree : partials.trees[i]) {
            TreeShape shape = donors.shape_of(i, tree);
            std::vector<std::size_t> gaps;
            for (std::size_t o = 0; o < shape.children.size(); ++o) {
                if (shape.children[o] < 0) {
                    if (donors.set_size(i) == 0) throw DataError("fill_missing: no donor subtrees available");
                    shape.children[o] = 0;
                    gaps.push_back(o);
                }
            }
            any_missing = any_missing || !gaps.empty();
            shapes[i].push_back(std::move(shape));
            missing[i].push_back(std::move(gaps));
        }
    }
    FillStats local;
    if (!any_missing) {
        if (stats) *stats = local;
        return partials;
    }

    const BeliefScorer scorer(model, belief, &donors);
    const BestResponseValue best_value(scorer, shapes);
    const auto num_donors = [&](std::size_t i) { return static_cast<int>(donors.set_size(i)); };

    for (std::size_t round = 0; round < max_rounds; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t q = 0; q < shapes[i].size(); ++q) {
                if (missing[i][q].empty()) continue;
                TreeShape& shape = shapes[i][q];
                double current = best_value(i, shape);
                bool improved = true;
                while (improved) {
                    improved = false;
                    ++local.sweeps;
                    for (std::size_t o : missing[i][q]) {
                        const int keep = shape.children[o];
                        int best_donor = keep;
                        double best = current;
                        for (int d = 0; d < num_donors(i); ++d) {
                            if (d == keep) continue;
                            shape.children[o] = d;
                            const double v = best_value(i, shape);
                            if (v > best) {
                                best = v;
                                best_donor = d;
                            }
                        }
                        shape.children[o] = best_donor;
                        if (best_donor != keep) {
                            current = best;
                            improved = true;
                            changed = true;
                            ++local.swaps;
                        }
                    }
                }
            }
        }
        if (!changed) break;
    }

    CandidateSet out;
    out.trees.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::map<std::pair<int, std::vector<int>>, bool> seen;
        for (std::size_t q = 0; q < shapes[i].size(); ++q) {
            const auto& shape = shapes[i][q];
            if (!seen.emplace(std::make_pair(shape.action, shape.children), true).second) continue;
            if (missing[i][q].empty()) {
                out.trees[i].push_back(partials.trees[i][q]);
                continue;
            }
            std::vector<PolicyTree> children(shape.children.size());
            for (std::size_t o = 0; o < children.size(); ++o)
                children[o] = donors.sets()[i][static_cast<std::size_t>(shape.children[o])];
            out.trees[i].push_back(PolicyNode::internal(shape.action, std::move(children)));
        }
    }
    if (stats) *stats = local;
    return out;
}

CandidateSet pointwise_prune(const DecPomdp& model, const CandidateSet& sets) {
    const std::size_t n = model.num_agents();
    const LevelTable table = LevelTable::compute(model, sets.trees);
    const std::size_t ns = model.num_states();
    std::vector<std::vector<bool>> alive(n);
    for (std::size_t i = 0; i < n; ++i) alive[i].assign(sets.trees[i].size(), true);

    // Offsets of every alive tuple of the agents other than `agent`.
    auto other_offsets = [&](std::size_t agent) {
        std::vector<std::size_t> offsets{0};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == agent) continue;
            std::vector<std::size_t> next;
            for (std::size_t off : offsets)
                for (std::size_t p = 0; p < alive[j].size(); ++p)
                    if (alive[j][p]) next.push_back(off + p * table.stride(j));
            offsets.swap(next);
        }
        return offsets;
    };

    bool removed_any = true;
    while (removed_any) {
        removed_any = false;
        for (std::size_t i = 0; i < n; ++i) {
            const auto offsets = other_offsets(i);
            const std::size_t stride = table.stride(i);
            for (std::size_t q = 0; q < alive[i].size(); ++q) {
                if (!alive[i][q]) continue;
                for (std::size_t r = 0; r < alive[i].size(); ++r) {
                    if (r == q || !alive[i][r]) continue;
                    bool weakly = true, strictly = false;
                    for (std::size_t off : offsets) {
                        const auto vq = table.values(q * stride + off);
                        const auto vr = table.values(r * stride + off);
                        for (std::size_t s = 0; s < ns; ++s) {
                            if (vr[s] < vq[s]) {
                                weakly = false;
                                break;
                            }
                            if (vr[s] > vq[s]) strictly = true;
                        }
                        if (!weakly) break;
                    }
                    if (weakly && (strictly || r < q)) {
                        alive[i][q] = false;
                        removed_any = true;
                        break;
                    }
                }
            }
        }
    }

    CandidateSet out;
    out.trees.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t q = 0; q < alive[i].size(); ++q)
            if (alive[i][q]) out.trees[i].push_back(sets.trees[i][q]);
    return out;
}

}  // namespace mbdp
