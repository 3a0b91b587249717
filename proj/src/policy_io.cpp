#include "mbdp/policy_io.hpp"

#include <unordered_map>

#include <json.hpp>

#include "mbdp/errors.hpp"

namespace mbdp {

using Json = nlohmann::ordered_json;

namespace {

Json write_tree(const PolicyTree& root, std::size_t agent, const DecPomdp& model) {
    std::unordered_map<const PolicyNode*, std::size_t> written;
    const auto& actions = model.action_names(agent);
    const auto& observations = model.observation_names(agent);

    // Explicit stack of pending slots to stay iterative on deep trees.
    Json out;
    struct Task {
        const PolicyNode* node;
        Json* slot;
    };
    std::vector<Task> stack{{root.get(), &out}};
    while (!stack.empty()) {
        const Task task = stack.back();
        stack.pop_back();
        if (auto it = written.find(task.node); it != written.end()) {
            *task.slot = Json{{"ref", it->second}};
            continue;
        }
        written.emplace(task.node, written.size());
        Json& j = *task.slot;
        j["action"] = actions.at(static_cast<std::size_t>(task.node->action()));
        if (task.node->is_leaf()) continue;
        if (task.node->children().size() != observations.size())
            throw DataError("policy tree does not match the observation count of agent " + std::to_string(agent));
        Json& kids = j["children"];
        for (std::size_t o = 0; o < observations.size(); ++o) kids[observations[o]] = nullptr;
        // Push in reverse so children are visited in observation order.
        for (std::size_t o = observations.size(); o-- > 0;) {
            const PolicyTree& c = task.node->child(o);
            if (!c) throw EvaluationError("cannot serialize a partial policy tree");
            stack.push_back({c.get(), &kids[observations[o]]});
        }
    }
    return out;
}

struct TreeReader {
    const DecPomdp& model;
    std::size_t agent;
    std::vector<PolicyTree> preorder;

    std::string where(const std::string& path) const {
        return "agent " + std::to_string(agent) + " at " + (path.empty() ? "root" : path);
    }

    // Recursion depth equals the tree depth, which the horizon caps at a few
    // hundred.
    PolicyTree read(const Json& j, const std::string& path) {
        if (!j.is_object()) throw DataError("policy node of " + where(path) + " must be an object");
        if (j.contains("ref")) {
            if (j.size() != 1 || !j["ref"].is_number_unsigned())
                throw DataError("bad subtree reference for " + where(path));
            const auto k = j["ref"].get<std::size_t>();
            if (k >= preorder.size() || !preorder[k])
                throw DataError("subtree reference " + std::to_string(k) + " of " + where(path) +
                                " does not point to an earlier node");
            return preorder[k];
        }
        for (const auto& [key, value] : j.items())
            if (key != "action" && key != "children")
                throw DataError("unexpected key '" + key + "' in policy node of " + where(path));
        if (!j.contains("action") || !j["action"].is_string())
            throw DataError("policy node of " + where(path) + " needs an action name");
        const auto& names = model.action_names(agent);
        const std::string name = j["action"].get<std::string>();
        int action = -1;
        for (std::size_t a = 0; a < names.size(); ++a)
            if (names[a] == name) action = static_cast<int>(a);
        if (action < 0) throw DataError("unknown action '" + name + "' for " + where(path));

        const std::size_t slot = preorder.size();
        preorder.emplace_back();  // reserved; filled once the subtree is built
        if (!j.contains("children")) {
            preorder[slot] = PolicyNode::leaf(action);
            return preorder[slot];
        }
        const Json& kids = j["children"];
        const auto& obs = model.observation_names(agent);
        if (!kids.is_object() || kids.size() != obs.size())
            throw DataError("policy node of " + where(path) + " needs one child per observation");
        std::vector<PolicyTree> children;
        std::size_t o = 0;
        for (const auto& [key, value] : kids.items()) {
            if (key != obs[o])
                throw DataError("child '" + key + "' of " + where(path) + " is out of place; expected '" + obs[o] + "'");
            children.push_back(read(value, path + "/" + key));
            ++o;
        }
        try {
            preorder[slot] = PolicyNode::internal(action, std::move(children));
        } catch (const DataError& e) {
            throw DataError(std::string(e.what()) + " (" + where(path) + ")");
        }
        return preorder[slot];
    }
};

}  // namespace

std::string serialize_policy(const JointPolicy& joint, const DecPomdp& model) {
    if (joint.num_agents() != model.num_agents()) throw DataError("policy and model disagree on the agent count");
    Json doc = Json::array();
    for (std::size_t i = 0; i < joint.num_agents(); ++i) {
        Json entry;
        entry["agent"] = i;
        entry["tree"] = write_tree(joint.tree(i), i, model);
        doc.push_back(std::move(entry));
    }
    return doc.dump(1) + "\n";
}

JointPolicy deserialize_policy(const std::string& text, const DecPomdp& model) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError::at_offset("malformed policy file", text, static_cast<std::size_t>(e.byte));
    }
    if (!doc.is_array() || doc.size() != model.num_agents())
        throw DataError("policy file must list exactly " + std::to_string(model.num_agents()) + " agents");
    std::vector<PolicyTree> trees;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const Json& entry = doc[i];
        if (!entry.is_object() || !entry.contains("agent") || !entry.contains("tree") || entry.size() != 2)
            throw DataError("policy entry " + std::to_string(i) + " needs exactly 'agent' and 'tree'");
        if (!entry["agent"].is_number_unsigned() || entry["agent"].get<std::size_t>() != i)
            throw DataError("policy entry " + std::to_string(i) + " has the wrong agent index");
        TreeReader reader{model, i, {}};
        trees.push_back(reader.read(entry["tree"], ""));
    }
    return JointPolicy(std::move(trees));
}

}  // namespace mbdp
