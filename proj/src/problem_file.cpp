#include "mbdp/problem_file.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "mbdp/errors.hpp"

namespace mbdp {

namespace {

std::vector<std::string> words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::vector<std::string> split_fields(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool all_digits(const std::string& s) { return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos; }

class Parser {
public:
    Parser(const std::string& text, std::string name) : text_(text) { data_.name = std::move(name); }

    DecPomdp run() {
        std::istringstream in(text_);
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            const auto colon = raw.find(':');
            const auto head = words(raw.substr(0, colon == std::string::npos ? raw.size() : colon));
            if (head.empty() && colon == std::string::npos) continue;
            if (colon == std::string::npos || head.size() != 1) fail("expected '<keyword>: ...'");
            const std::string key = head[0];
            const std::string rest = raw.substr(colon + 1);
            if (key == "T" || key == "O" || key == "R") entry(key, rest);
            else header(key, rest);
        }
        for (const char* required : {"agents", "states", "horizon"})
            if (!seen_headers_.count(required)) fail_at(0, std::string("missing header '") + required + ":'");
        ensure_tables(0);
        if (data_.initial_belief.empty())
            data_.initial_belief.assign(data_.states.size(), 1.0 / static_cast<double>(data_.states.size()));
        DecPomdp model(std::move(data_));
        const auto problems = validate(model);
        if (!problems.empty()) {
            std::string msg = "problem fails validation:";
            for (const auto& p : problems) msg += "\n  " + p;
            throw DataError(msg);
        }
        return model;
    }

private:
    const std::string& text_;
    DecPomdpData data_;
    std::size_t line_ = 0;
    std::size_t agents_ = 0;
    std::unordered_map<std::string, bool> seen_headers_;
    std::vector<bool> actions_seen_, observations_seen_;
    bool tables_ready_ = false;
    std::vector<char> t_seen_, o_seen_, r_seen_;
    std::size_t S_ = 0, A_ = 0, O_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }
    [[noreturn]] void fail_at(std::size_t line, const std::string& what) const {
        if (line == 0) throw ParseError(what, line_ == 0 ? 1 : line_);
        throw ParseError(what, line);
    }

    double number(const std::string& token) const {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            fail("'" + token + "' is not a number");
        }
        if (used != token.size()) fail("'" + token + "' is not a number");
        return v;
    }

    std::size_t count(const std::string& token, const char* what) const {
        if (!all_digits(token)) fail(std::string(what) + " must be a non-negative integer, got '" + token + "'");
        return std::stoull(token);
    }

    std::size_t lookup(const std::vector<std::string>& names, const std::string& token, const char* what) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == token) return i;
        if (all_digits(token) && std::stoull(token) < names.size()) return std::stoull(token);
        fail(std::string("unknown ") + what + " '" + token + "'");
    }

    void header(const std::string& key, const std::string& rest) {
        const auto w = words(rest);
        if (tables_ready_) fail("header '" + key + ":' after the first entry");
        if (key == "actions" || key == "observations") {
            if (!agents_) fail("'" + key + ":' before 'agents:'");
            if (w.size() < 2) fail("'" + key + ":' needs an agent index and at least one name");
            const std::size_t agent = count(w[0], "agent index");
            if (agent >= agents_) fail("agent index " + w[0] + " out of range");
            auto& seen = key == "actions" ? actions_seen_ : observations_seen_;
            if (seen[agent]) fail("duplicate '" + key + ":' for agent " + w[0]);
            seen[agent] = true;
            auto& list = key == "actions" ? data_.actions[agent] : data_.observations[agent];
            list.assign(w.begin() + 1, w.end());
            return;
        }
        if (seen_headers_.count(key)) fail("duplicate header '" + key + ":'");
        seen_headers_[key] = true;
        if (key == "agents") {
            if (w.size() != 1) fail("'agents:' takes one count");
            agents_ = count(w[0], "agent count");
            if (agents_ < 2) fail("at least two agents are required");
            data_.actions.assign(agents_, {});
            data_.observations.assign(agents_, {});
            actions_seen_.assign(agents_, false);
            observations_seen_.assign(agents_, false);
        } else if (key == "states") {
            if (w.empty()) fail("'states:' needs names or a count");
            if (w.size() == 1 && all_digits(w[0])) {
                const std::size_t n = count(w[0], "state count");
                if (n == 0) fail("state count must be positive");
                for (std::size_t s = 0; s < n; ++s) data_.states.push_back(std::to_string(s));
            } else {
                data_.states = w;
            }
        } else if (key == "horizon") {
            if (w.size() != 1) fail("'horizon:' takes one count");
            const std::size_t h = count(w[0], "horizon");
            if (h < 1) fail("horizon must be at least 1");
            data_.horizon = static_cast<int>(h);
        } else if (key == "start") {
            if (!seen_headers_.count("states")) fail("'start:' before 'states:'");
            if (w.size() != data_.states.size()) fail("'start:' needs one probability per state");
            for (const auto& t : w) data_.initial_belief.push_back(number(t));
        } else {
            fail("unknown keyword '" + key + "'");
        }
    }

    void ensure_tables(std::size_t line) {
        if (tables_ready_) return;
        for (const char* required : {"agents", "states"})
            if (!seen_headers_.count(required)) fail_at(line, std::string("missing header '") + required + ":'");
        for (std::size_t i = 0; i < agents_; ++i) {
            if (!actions_seen_[i]) fail_at(line, "missing header 'actions: " + std::to_string(i) + "'");
            if (!observations_seen_[i]) fail_at(line, "missing header 'observations: " + std::to_string(i) + "'");
        }
        S_ = data_.states.size();
        A_ = 1;
        O_ = 1;
        for (std::size_t i = 0; i < agents_; ++i) {
            A_ *= data_.actions[i].size();
            O_ *= data_.observations[i].size();
        }
        data_.transition.assign(S_ * A_ * S_, 0.0);
        data_.reward.assign(S_ * A_ * S_, 0.0);
        data_.observation.assign(A_ * S_ * O_, 0.0);
        t_seen_.assign(data_.transition.size(), 0);
        r_seen_.assign(data_.reward.size(), 0);
        o_seen_.assign(data_.observation.size(), 0);
        tables_ready_ = true;
    }

    std::size_t joint(const std::vector<std::vector<std::string>>& names, const std::vector<std::string>& tokens,
                      const char* what) const {
        if (tokens.size() != agents_) fail(std::string("expected one ") + what + " per agent");
        std::size_t index = 0;
        for (std::size_t i = 0; i < agents_; ++i) index = index * names[i].size() + lookup(names[i], tokens[i], what);
        return index;
    }

    std::size_t state(const std::string& field) const {
        const auto w = words(field);
        if (w.size() != 1) fail("expected one state");
        return lookup(data_.states, w[0], "state");
    }

    double value(const std::string& field) const {
        const auto w = words(field);
        if (w.size() != 1) fail("expected one number");
        return number(w[0]);
    }

    void entry(const std::string& key, const std::string& rest) {
        if (!seen_headers_.count("horizon")) fail("missing header 'horizon:' before the first entry");
        ensure_tables(line_);
        const auto f = split_fields(rest);
        const std::size_t expected = 4;
        if (f.size() != expected) fail("'" + key + ":' entry needs " + std::to_string(expected) + " ':'-separated fields");
        const std::size_t a = joint(data_.actions, words(f[0]), "action");
        std::size_t cell = 0;
        double* target = nullptr;
        char* seen = nullptr;
        if (key == "T" || key == "R") {
            const std::size_t s = state(f[1]);
            const std::size_t next = state(f[2]);
            cell = (s * A_ + a) * S_ + next;
            target = key == "T" ? &data_.transition[cell] : &data_.reward[cell];
            seen = key == "T" ? &t_seen_[cell] : &r_seen_[cell];
        } else {
            const std::size_t next = state(f[1]);
            const std::size_t o = joint(data_.observations, words(f[2]), "observation");
            cell = (a * S_ + next) * O_ + o;
            target = &data_.observation[cell];
            seen = &o_seen_[cell];
        }
        if (*seen) fail("duplicate '" + key + ":' entry");
        *seen = 1;
        *target = value(f[3]);
    }
};

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += " " + n;
    return out;
}

}  // namespace

DecPomdp parse_problem(const std::string& text, const std::string& name) { return Parser(text, name).run(); }

DecPomdp parse_problem_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read problem file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
    return parse_problem(buf.str(), name);
}

std::string write_problem(const DecPomdp& model) {
    std::ostringstream out;
    out << std::setprecision(17);
    const std::size_t n = model.num_agents();
    out << "# " << model.name() << "\n";
    out << "agents: " << n << "\n";
    out << "states:" << join(model.state_names()) << "\n";
    for (std::size_t i = 0; i < n; ++i) out << "actions: " << i << join(model.action_names(i)) << "\n";
    for (std::size_t i = 0; i < n; ++i) out << "observations: " << i << join(model.observation_names(i)) << "\n";
    out << "horizon: " << model.horizon() << "\n";
    out << "start:";
    for (double p : model.initial_belief_raw()) out << " " << p;
    out << "\n";

    auto action_words = [&](JointActionId a) {
        std::string s;
        const auto parts = model.joint_actions().decode(a);
        for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + model.action_names(i)[static_cast<std::size_t>(parts[i])];
        return s;
    };
    auto observation_words = [&](JointObservationId o) {
        std::string s;
        const auto parts = model.joint_observations().decode(o);
        for (std::size_t i = 0; i < n; ++i)
            s += (i ? " " : "") + model.observation_names(i)[static_cast<std::size_t>(parts[i])];
        return s;
    };
    const auto& states = model.state_names();
    for (std::size_t s = 0; s < model.num_states(); ++s)
        for (JointActionId a = 0; a < model.num_joint_actions(); ++a)
            for (std::size_t next = 0; next < model.num_states(); ++next) {
                if (const double p = model.transition(s, a, next); p != 0.0)
                    out << "T: " << action_words(a) << " : " << states[s] << " : " << states[next] << " : " << p << "\n";
            }
    for (JointActionId a = 0; a < model.num_joint_actions(); ++a)
        for (std::size_t next = 0; next < model.num_states(); ++next)
            for (JointObservationId o = 0; o < model.num_joint_observations(); ++o) {
                if (const double p = model.observation(a, next, o); p != 0.0)
                    out << "O: " << action_words(a) << " : " << states[next] << " : " << observation_words(o) << " : "
                        << p << "\n";
            }
    for (std::size_t s = 0; s < model.num_states(); ++s)
        for (JointActionId a = 0; a < model.num_joint_actions(); ++a)
            for (std::size_t next = 0; next < model.num_states(); ++next) {
                if (const double r = model.reward(s, a, next); r != 0.0)
                    out << "R: " << action_words(a) << " : " << states[s] << " : " << states[next] << " : " << r << "\n";
            }
    return out.str();
}

}  // namespace mbdp
