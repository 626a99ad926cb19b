#include "fairdag/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fairdag {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& key) {
    if (!j.contains(key))
        throw ParamError("missing JSON field '" + key + "'");
    return j.at(key);
}

/// Mixed-radix enumeration of the parent label configurations of `v`
/// (declared parent order, first parent most significant), as comma-joined
/// config keys aligned with CPT row order.
std::vector<std::string> parent_config_keys(
    const Dag& dag, NodeId v,
    const std::vector<std::vector<std::string>>& domains) {
    const std::vector<NodeId>& parents = dag.parents(v);
    std::vector<std::size_t> cards;
    std::size_t rows = 1;
    for (NodeId p : parents) {
        cards.push_back(domains[p].size());
        rows *= domains[p].size();
    }
    std::vector<std::string> keys;
    std::vector<std::size_t> idx(parents.size(), 0);
    for (std::size_t row = 0; row < rows; ++row) {
        std::string key;
        for (std::size_t k = 0; k < parents.size(); ++k) {
            if (k) key += ',';
            key += domains[parents[k]][idx[k]];
        }
        keys.push_back(std::move(key));
        for (int k = static_cast<int>(parents.size()) - 1; k >= 0; --k) {
            if (++idx[k] < cards[k]) break;
            idx[k] = 0;
        }
    }
    return keys;
}

}  // namespace

json graph_to_json(const Dag& dag) {
    json nodes = json::array();
    for (NodeId v = 0; v < dag.node_count(); ++v)
        nodes.push_back({{"name", dag.name(v)}, {"observed", dag.observed(v)}});
    json edges = json::array();
    for (auto& [from, to] : dag.edges())
        edges.push_back(json::array({dag.name(from), dag.name(to)}));
    return json{{"nodes", nodes}, {"edges", edges}};
}

Dag graph_from_json(const json& j) {
    std::vector<std::pair<std::string, bool>> nodes;
    for (const json& node : require(j, "nodes")) {
        bool observed = node.value("observed", true);
        nodes.emplace_back(require(node, "name").get<std::string>(), observed);
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const json& edge : require(j, "edges")) {
        if (!edge.is_array() || edge.size() != 2)
            throw ParamError("each edge must be a [from, to] pair");
        edges.emplace_back(edge[0].get<std::string>(), edge[1].get<std::string>());
    }
    return Dag(std::move(nodes), edges);
}

json model_to_json(const DiscreteModel& model) {
    const Dag& dag = model.dag();
    json j = graph_to_json(dag);
    json domains = json::object();
    std::vector<std::vector<std::string>> doms;
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        domains[dag.name(v)] = model.domain(v);
        doms.push_back(model.domain(v));
    }
    json cpts = json::object();
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        std::vector<std::string> keys = parent_config_keys(dag, v, doms);
        json rows = json::object();
        for (std::size_t r = 0; r < keys.size(); ++r)
            rows[keys[r]] = model.cpt(v)[r];
        cpts[dag.name(v)] = std::move(rows);
    }
    j["domains"] = std::move(domains);
    j["cpts"] = std::move(cpts);
    return j;
}

DiscreteModel discrete_from_json(const json& j) {
    Dag dag = graph_from_json(j);
    const json& jdomains = require(j, "domains");
    const json& jcpts = require(j, "cpts");
    std::vector<std::vector<std::string>> domains;
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        const std::string& name = dag.name(v);
        domains.push_back(require(jdomains, name).get<std::vector<std::string>>());
    }
    std::vector<std::vector<std::vector<double>>> cpts;
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        const std::string& name = dag.name(v);
        const json& jrows = require(jcpts, name);
        std::vector<std::vector<double>> rows;
        for (const std::string& key : parent_config_keys(dag, v, domains)) {
            if (!jrows.contains(key))
                throw ParamError("cpt of " + name + " lacks parent config '" + key +
                                 "'");
            rows.push_back(jrows.at(key).get<std::vector<double>>());
        }
        cpts.push_back(std::move(rows));
    }
    return DiscreteModel(std::move(dag), std::move(domains), std::move(cpts));
}

json model_to_json(const GaussianLinearModel& model) {
    const Dag& dag = model.dag();
    json j = graph_to_json(dag);
    json roots = json::object();
    for (auto& [v, root] : model.discrete_roots())
        roots[dag.name(v)] = {{"labels", root.labels}, {"probs", root.probs}};
    json mechs = json::object();
    for (auto& [v, per_config] : model.mechanisms()) {
        json configs = json::object();
        for (auto& [key, m] : per_config) {
            json coefs = json::object();
            for (auto& [p, c] : m.coefficients) coefs[dag.name(p)] = c;
            configs[key] = {{"intercept", m.intercept},
                            {"coefficients", std::move(coefs)},
                            {"noise_variance", m.noise_variance}};
        }
        mechs[dag.name(v)] = std::move(configs);
    }
    j["gaussian"] = {{"discrete_roots", std::move(roots)},
                     {"mechanisms", std::move(mechs)}};
    return j;
}

GaussianLinearModel gaussian_from_json(const json& j) {
    Dag dag = graph_from_json(j);
    const json& g = require(j, "gaussian");
    std::map<NodeId, DiscreteRoot> roots;
    for (auto& [name, spec] : require(g, "discrete_roots").items()) {
        DiscreteRoot root;
        root.labels = require(spec, "labels").get<std::vector<std::string>>();
        root.probs = require(spec, "probs").get<std::vector<double>>();
        roots[dag.index_of(name)] = std::move(root);
    }
    std::map<NodeId, std::map<std::string, Mechanism>> mechs;
    for (auto& [name, per_config] : require(g, "mechanisms").items()) {
        NodeId v = dag.index_of(name);
        for (auto& [key, spec] : per_config.items()) {
            Mechanism m;
            m.intercept = require(spec, "intercept").get<double>();
            m.noise_variance = require(spec, "noise_variance").get<double>();
            for (auto& [pname, coef] : require(spec, "coefficients").items())
                m.coefficients.emplace_back(dag.index_of(pname), coef.get<double>());
            std::sort(m.coefficients.begin(), m.coefficients.end());
            mechs[v][key] = std::move(m);
        }
    }
    return GaussianLinearModel(std::move(dag), std::move(roots), std::move(mechs));
}

bool json_is_gaussian(const json& j) { return j.contains("gaussian"); }

json report_to_json(const CriterionReport& report) {
    json gaps = json::object();
    for (auto& [name, value] : report.gaps) gaps[name] = value;
    json j = {{"criterion", to_string(report.criterion)},
              {"method", to_string(report.method)},
              {"gaps", std::move(gaps)},
              {"p_value", report.p_value ? json(*report.p_value) : json(nullptr)},
              {"threshold", report.threshold},
              {"verdict", to_string(report.verdict)}};
    if (!report.note.empty()) j["note"] = report.note;
    return j;
}

json marginal_to_json(const JointTable& table, const DiscreteModel& model) {
    if (table.variables.size() != 1)
        throw ParamError("marginal serialization expects a single variable");
    NodeId v = table.variables[0];
    json dist = json::object();
    const std::vector<std::string>& labels = model.domain(v);
    for (std::size_t k = 0; k < labels.size(); ++k)
        dist[labels[k]] = table.probabilities[k];
    return json{{"target", model.dag().name(v)}, {"distribution", std::move(dist)}};
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

Dataset read_csv(std::istream& in, const std::vector<std::string>& categorical) {
    std::string line;
    if (!std::getline(in, line))
        throw ParamError("CSV input is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_line(line);

    std::vector<bool> is_cat(header.size(), false);
    for (std::size_t c = 0; c < header.size(); ++c)
        is_cat[c] = std::find(categorical.begin(), categorical.end(), header[c]) !=
                    categorical.end();

    std::vector<std::vector<double>> reals(header.size());
    std::vector<std::vector<int>> codes(header.size());
    std::vector<std::vector<std::string>> labels(header.size());
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            throw ParamError("CSV row has " + std::to_string(cells.size()) +
                             " cells, header has " + std::to_string(header.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (is_cat[c]) {
                auto it = std::find(labels[c].begin(), labels[c].end(), cells[c]);
                if (it == labels[c].end()) {
                    labels[c].push_back(cells[c]);
                    it = std::prev(labels[c].end());
                }
                codes[c].push_back(static_cast<int>(it - labels[c].begin()));
            } else {
                try {
                    std::size_t used = 0;
                    double v = std::stod(cells[c], &used);
                    if (used != cells[c].size())
                        throw ParamError("");
                    reals[c].push_back(v);
                } catch (const std::exception&) {
                    throw ParamError("non-numeric value '" + cells[c] +
                                     "' in real column " + header[c]);
                }
            }
        }
        ++rows;
    }
    if (rows == 0)
        throw ParamError("CSV has a header but no data rows");

    Dataset data;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (is_cat[c])
            data.add_categorical(header[c], std::move(codes[c]), std::move(labels[c]));
        else
            data.add_real(header[c], std::move(reals[c]));
    }
    return data;
}

Dataset read_csv_file(const std::string& path,
                      const std::vector<std::string>& categorical) {
    std::ifstream in(path);
    if (!in)
        throw ParamError("cannot open CSV file: " + path);
    return read_csv(in, categorical);
}

void write_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t c = 0; c < data.columns.size(); ++c)
        out << (c ? "," : "") << data.columns[c].first;
    out << '\n';
    std::ostringstream cell;
    cell.precision(10);
    for (std::size_t i = 0; i < data.rows; ++i) {
        for (std::size_t c = 0; c < data.columns.size(); ++c) {
            const Column& col = data.columns[c].second;
            if (c) out << ',';
            if (col.categorical) {
                out << col.labels[col.codes[i]];
            } else {
                cell.str("");
                cell << col.real[i];
                out << cell.str();
            }
        }
        out << '\n';
    }
}

}  // namespace fairdag
