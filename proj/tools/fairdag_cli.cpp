#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairdag/io.hpp"
#include "fairdag/scenarios.hpp"
#include "fairdag/surgery.hpp"

namespace {

using nlohmann::json;

std::size_t size_cap_from_env() {
    const char* raw = std::getenv("FAIRDAG_SIZE_CAP");
    if (!raw || !*raw) return fairdag::kDefaultSizeCap;
    char* end = nullptr;
    unsigned long long cap = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || cap == 0)
        throw fairdag::ParamError("FAIRDAG_SIZE_CAP must be a positive integer");
    return static_cast<std::size_t>(cap);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw fairdag::ParamError("cannot open model file: " + path);
    return json::parse(in);
}

std::vector<std::string> split_csv_list(const std::string& raw) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(raw);
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

/// Exit code 2 when every verdict is undecidable, else 0.
int verdict_exit(const std::vector<fairdag::Verdict>& verdicts) {
    if (verdicts.empty()) return 0;
    for (fairdag::Verdict v : verdicts)
        if (v != fairdag::Verdict::undecidable) return 0;
    return 2;
}

int cmd_dsep(const std::string& model_path, const std::string& x,
             const std::string& y, const std::string& given) {
    json j = load_json_file(model_path);
    fairdag::Dag dag = fairdag::graph_from_json(j);
    std::vector<fairdag::NodeId> s;
    for (const std::string& name : split_csv_list(given))
        s.push_back(dag.index_of(name));
    bool separated = dag.d_separated(dag.index_of(x), dag.index_of(y), s);
    std::cout << (separated ? "true" : "false") << '\n';
    return 0;
}

int cmd_audit(const std::string& data_path, const std::string& a,
              const std::string& r, const std::string& y, double alpha,
              const std::string& categorical) {
    std::vector<std::string> cats = split_csv_list(categorical);
    for (const std::string& required : {a, r, y})
        if (std::find(cats.begin(), cats.end(), required) == cats.end())
            cats.push_back(required);
    fairdag::Dataset data = fairdag::read_csv_file(data_path, cats);
    std::vector<fairdag::CriterionReport> reports =
        fairdag::audit_binary(data, a, r, y, alpha);
    json out = json::array();
    std::vector<fairdag::Verdict> verdicts;
    for (const fairdag::CriterionReport& rep : reports) {
        out.push_back(fairdag::report_to_json(rep));
        verdicts.push_back(rep.verdict);
    }
    std::cout << out.dump(2) << '\n';
    return verdict_exit(verdicts);
}

int cmd_exact(const std::string& model_path, const std::string& a,
              const std::string& r, const std::string& y, const std::string& s) {
    fairdag::DiscreteModel model =
        fairdag::discrete_from_json(load_json_file(model_path));
    std::optional<std::string> extra;
    if (!s.empty()) extra = s;
    std::vector<fairdag::CriterionReport> reports =
        fairdag::exact_criteria(model, a, r, y, extra, 1e-9, size_cap_from_env());
    json out = json::array();
    std::vector<fairdag::Verdict> verdicts;
    for (const fairdag::CriterionReport& rep : reports) {
        out.push_back(fairdag::report_to_json(rep));
        verdicts.push_back(rep.verdict);
    }
    std::cout << out.dump(2) << '\n';
    return verdict_exit(verdicts);
}

int cmd_intervene(const std::string& model_path,
                  const std::vector<std::string>& assignments,
                  const std::string& target) {
    fairdag::DiscreteModel model =
        fairdag::discrete_from_json(load_json_file(model_path));
    fairdag::Intervention iv;
    for (const std::string& raw : assignments) {
        std::size_t eq = raw.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == raw.size())
            throw fairdag::ParamError("--do expects node=value, got '" + raw + "'");
        iv.discrete_assignments[model.dag().index_of(raw.substr(0, eq))] =
            raw.substr(eq + 1);
    }
    fairdag::DoResult result = fairdag::do_distribution(
        model, model.dag().index_of(target), iv, size_cap_from_env());
    if (std::holds_alternative<fairdag::Unidentifiable>(result)) {
        json out = {{"unidentifiable",
                     std::get<fairdag::Unidentifiable>(result).reason}};
        std::cout << out.dump(2) << '\n';
        return 2;
    }
    std::cout << fairdag::marginal_to_json(std::get<fairdag::JointTable>(result),
                                           model)
                     .dump(2)
              << '\n';
    return 0;
}

int cmd_scenario(const std::string& id, std::size_t n, std::uint64_t seed,
                 double alpha, const std::string& figure_path) {
    fairdag::ScenarioEvaluation eval =
        fairdag::evaluate_scenario(id, n, seed, alpha, !figure_path.empty());
    json out = json::array();
    std::vector<fairdag::Verdict> verdicts;
    for (auto& [predictor, rep] : eval.reports) {
        json entry = fairdag::report_to_json(rep);
        entry["predictor"] = predictor;
        out.push_back(std::move(entry));
        verdicts.push_back(rep.verdict);
    }
    if (!figure_path.empty()) {
        if (!eval.figure_csv)
            throw fairdag::ParamError("scenario " + id + " emits no figure data");
        std::ofstream f(figure_path);
        if (!f)
            throw fairdag::ParamError("cannot write figure file: " + figure_path);
        f << *eval.figure_csv;
    }
    std::cout << out.dump(2) << '\n';
    return verdict_exit(verdicts);
}

int cmd_incompat(std::uint64_t trials, std::uint64_t seed, double tol,
                 bool serial) {
    fairdag::IncompatResult result =
        serial ? fairdag::incompatibility_search_serial(trials, tol, seed)
               : fairdag::incompatibility_search(trials, tol, seed);
    json out = {{"trials", result.trials},
                {"accepted", result.accepted},
                {"satisfying", result.satisfying},
                {"max_dependence_gap", result.max_dependence_gap},
                {"max_gap_to_bound_ratio", result.max_gap_to_bound_ratio},
                {"tol", result.tol},
                {"dependence_threshold", result.dependence_threshold}};
    if (result.counterexample) {
        const fairdag::IncompatCounterexample& ce = *result.counterexample;
        out["counterexample"] = {{"trial", ce.trial},
                                 {"dims", json::array({ce.na, ce.nr, ce.ny})},
                                 {"joint", ce.joint},
                                 {"dependence_gap", ce.dependence_gap}};
    } else {
        out["counterexample"] = nullptr;
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairdag: causal-graph fairness auditing"};
    app.require_subcommand(1);

    std::string model_path, data_path, x, y_node, given, a_col, r_col, y_col, s_col;
    std::string categorical, scenario_id, figure_path;
    std::vector<std::string> do_assignments;
    std::string target;
    double alpha = 0.01, tol = 1e-6;
    std::size_t n = 100000;
    std::uint64_t seed = 7, trials = 100000;
    bool serial = false;

    CLI::App* dsep = app.add_subcommand("dsep", "d-separation query on a graph");
    dsep->add_option("--model", model_path, "graph/model JSON file")->required();
    dsep->add_option("--x", x, "first node")->required();
    dsep->add_option("--y", y_node, "second node")->required();
    dsep->add_option("--given", given, "comma-separated conditioning nodes");

    CLI::App* audit = app.add_subcommand("audit", "binary-classification audit of a CSV");
    audit->add_option("--data", data_path, "CSV file with header row")->required();
    audit->add_option("--a", a_col, "sensitive column")->required();
    audit->add_option("--r", r_col, "prediction column")->required();
    audit->add_option("--y", y_col, "response column")->required();
    audit->add_option("--alpha", alpha, "significance level");
    audit->add_option("--categorical", categorical,
                      "comma-separated categorical columns");

    CLI::App* exact = app.add_subcommand("exact", "exact criteria on a discrete model");
    exact->add_option("--model", model_path, "model JSON file")->required();
    exact->add_option("--a", a_col, "sensitive node")->required();
    exact->add_option("--r", r_col, "prediction node")->required();
    exact->add_option("--y", y_col, "response node")->required();
    exact->add_option("--s", s_col, "optional signal node for Parity by S");

    CLI::App* intervene = app.add_subcommand("intervene", "do()-query on a discrete model");
    intervene->add_option("--model", model_path, "model JSON file")->required();
    intervene->add_option("--do", do_assignments, "node=value assignment (repeatable)")
        ->required();
    intervene->add_option("--target", target, "query node")->required();

    CLI::App* scenario = app.add_subcommand("scenario", "run a built-in scenario");
    scenario->add_option("--id", scenario_id, "scenario id: 1, 2, 2b, 3, 4")
        ->required();
    scenario->add_option("--n", n, "sample size");
    scenario->add_option("--seed", seed, "sampling seed");
    scenario->add_option("--alpha", alpha, "significance level");
    scenario->add_option("--emit-figure", figure_path, "write figure data CSV here");

    CLI::App* incompat = app.add_subcommand("incompat",
                                            "search for Separation+Sufficiency "
                                            "counterexamples to A independent of Y");
    incompat->add_option("--trials", trials, "number of random joint tables");
    incompat->add_option("--seed", seed, "base seed");
    incompat->add_option("--tol", tol, "criterion tolerance");
    incompat->add_flag("--serial", serial, "disable parallel trials");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dsep->parsed()) return cmd_dsep(model_path, x, y_node, given);
        if (audit->parsed())
            return cmd_audit(data_path, a_col, r_col, y_col, alpha, categorical);
        if (exact->parsed()) return cmd_exact(model_path, a_col, r_col, y_col, s_col);
        if (intervene->parsed())
            return cmd_intervene(model_path, do_assignments, target);
        if (scenario->parsed())
            return cmd_scenario(scenario_id, n, seed, alpha, figure_path);
        if (incompat->parsed()) return cmd_incompat(trials, seed, tol, serial);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
