#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "fairdag/criteria.hpp"
#include "fairdag/dataset.hpp"
#include "fairdag/discrete.hpp"
#include "fairdag/gaussian.hpp"

namespace fairdag {

/// Graph schema: {"nodes":[{"name":str,"observed":bool}...],"edges":[[from,to]...]}.
nlohmann::json graph_to_json(const Dag& dag);
Dag graph_from_json(const nlohmann::json& j);

/// Discrete-model schema extends the graph schema with "domains":{node:[labels]}
/// and "cpts":{node:{key:[probs]}}, where key is the comma-joined parent labels
/// in declared parent order ("" for roots).
nlohmann::json model_to_json(const DiscreteModel& model);
DiscreteModel discrete_from_json(const nlohmann::json& j);

/// Gaussian schema extends the graph schema with "gaussian":
/// {"discrete_roots":{node:{"labels":[...],"probs":[...]}},
///  "mechanisms":{node:{key:{"intercept":x,"coefficients":{parent:c},
///                           "noise_variance":v}}}}.
nlohmann::json model_to_json(const GaussianLinearModel& model);
GaussianLinearModel gaussian_from_json(const nlohmann::json& j);

bool json_is_gaussian(const nlohmann::json& j);

/// {"criterion":str,"method":str,"gaps":{name:val},"p_value":num|null,
///  "threshold":num,"verdict":str}; a nonempty note is carried as "note".
nlohmann::json report_to_json(const CriterionReport& report);

/// Single-variable marginal as {"target":name,"distribution":{label:prob}}.
nlohmann::json marginal_to_json(const JointTable& table, const DiscreteModel& model);

/// Header-row CSV without quoting; listed columns are categorical (codes in
/// first-appearance order), everything else parses as real.
Dataset read_csv(std::istream& in, const std::vector<std::string>& categorical);
Dataset read_csv_file(const std::string& path,
                      const std::vector<std::string>& categorical);
void write_csv(std::ostream& out, const Dataset& data);

}  // namespace fairdag
