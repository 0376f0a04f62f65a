#include "cplearn/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace cplearn {

using nlohmann::json;

namespace {

json spec_to_json(const NetworkSpec& s) {
    json chain = json::array();
    for (const auto& l : s.graph_chain)
        chain.push_back({{"kind", l.kind == GraphLayerKind::gat ? "gat" : "s2v"},
                         {"in", l.in},
                         {"out", l.out},
                         {"heads", l.heads},
                         {"concat", l.concat},
                         {"edge_in", l.edge_in}});
    json dense = json::array();
    for (const auto& l : s.node_chain)
        dense.push_back({{"in", l.in}, {"out", l.out}, {"relu", l.relu}});
    return {{"input_width", s.input_width},
            {"raw_feature_width", s.raw_feature_width},
            {"graph_chain", chain},
            {"node_chain", dense},
            {"output_layer",
             {{"in", s.output_layer.in}, {"out", s.output_layer.out}}},
            {"action_count", s.action_count},
            {"per_node_scores", s.per_node_scores}};
}

NetworkSpec spec_from_json(const json& j) {
    NetworkSpec s;
    s.input_width = j.at("input_width");
    s.raw_feature_width = j.at("raw_feature_width");
    for (const auto& l : j.at("graph_chain"))
        s.graph_chain.push_back({l.at("kind") == "gat" ? GraphLayerKind::gat
                                                       : GraphLayerKind::s2v,
                                 l.at("in"), l.at("out"), l.at("heads"),
                                 l.at("concat"), l.at("edge_in")});
    for (const auto& l : j.at("node_chain"))
        s.node_chain.push_back({l.at("in"), l.at("out"), l.at("relu")});
    s.output_layer = {j.at("output_layer").at("in"),
                      j.at("output_layer").at("out"), false};
    s.action_count = j.at("action_count");
    s.per_node_scores = j.value("per_node_scores", false);
    return s;
}

json config_to_json(const AgentConfig& c) {
    return {{"gamma", c.gamma},
            {"lr", c.lr},
            {"batch_size", c.batch_size},
            {"update_horizon", c.update_horizon},
            {"min_replay_history", c.min_replay_history},
            {"update_freq", c.update_freq},
            {"target_update_freq", c.target_update_freq},
            {"buffer_capacity", c.buffer_capacity},
            {"eps_init", c.eps_init},
            {"eps_stable", c.eps_stable},
            {"decay_steps", c.decay_steps},
            {"warmup_steps", c.warmup_steps},
            {"double_dqn", c.double_dqn},
            {"seed", c.seed}};
}

AgentConfig config_from_json(const json& j) {
    AgentConfig c;
    c.gamma = j.at("gamma");
    c.lr = j.at("lr");
    c.batch_size = j.at("batch_size");
    c.update_horizon = j.at("update_horizon");
    c.min_replay_history = j.at("min_replay_history");
    c.update_freq = j.at("update_freq");
    c.target_update_freq = j.at("target_update_freq");
    c.buffer_capacity = j.at("buffer_capacity");
    c.eps_init = j.at("eps_init");
    c.eps_stable = j.at("eps_stable");
    c.decay_steps = j.at("decay_steps");
    c.warmup_steps = j.at("warmup_steps");
    c.double_dqn = j.at("double_dqn");
    c.seed = j.at("seed");
    return c;
}

json params_to_json(const ParameterStore& store) {
    json out = json::array();
    for (const auto& name : store.names()) {
        const Parameter& p = store.get(name);
        out.push_back({{"name", name},
                       {"rows", p.value.rows},
                       {"cols", p.value.cols},
                       {"data", p.value.data}});
    }
    return out;
}

void params_from_json(const json& j, ParameterStore& store) {
    for (const auto& e : j) {
        Tensor t(e.at("rows"), e.at("cols"));
        const auto& data = e.at("data");
        if (data.size() != t.size())
            throw std::invalid_argument("checkpoint: tensor size mismatch");
        t.data = data.get<std::vector<double>>();
        const std::string name = e.at("name");
        if (store.has(name))
            store.get(name).value = std::move(t);
        else
            store.create(name, std::move(t));
    }
}

} // namespace

std::string agent_to_json(const DQNLearner& learner) {
    json j;
    j["format_version"] = 1;
    j["spec"] = spec_to_json(learner.spec());
    j["config"] = config_to_json(learner.config());
    j["env_steps"] = learner.env_steps();
    j["online"] = params_to_json(learner.online());
    j["target"] = params_to_json(learner.target());
    return j.dump(2);
}

DQNLearner agent_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("format_version") != 1)
        throw std::invalid_argument("checkpoint: unsupported format version");
    DQNLearner learner(spec_from_json(j.at("spec")),
                       config_from_json(j.at("config")));
    params_from_json(j.at("online"), learner.online());
    params_from_json(j.at("target"), learner.target());
    learner.set_env_steps(j.at("env_steps"));
    return learner;
}

void save_agent(const DQNLearner& learner, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
    out << agent_to_json(learner);
}

DQNLearner load_agent(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("checkpoint: cannot read " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return agent_from_json(text);
}

} // namespace cplearn
