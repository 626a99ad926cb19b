#include "fairdag/dataset.hpp"

namespace fairdag {

bool Dataset::has(const std::string& name) const {
    for (auto& [n, c] : columns)
        if (n == name) return true;
    return false;
}

const Column& Dataset::col(const std::string& name) const {
    for (auto& [n, c] : columns)
        if (n == name) return c;
    throw UnknownNodeError("no such column: " + name);
}

void Dataset::add_real(const std::string& name, std::vector<double> values) {
    if (has(name))
        throw DuplicateError("duplicate column: " + name);
    if (!columns.empty() && values.size() != rows)
        throw ParamError("column length mismatch for: " + name);
    rows = values.size();
    Column c;
    c.real = std::move(values);
    columns.emplace_back(name, std::move(c));
}

void Dataset::add_categorical(const std::string& name, std::vector<int> codes,
                              std::vector<std::string> labels) {
    if (has(name))
        throw DuplicateError("duplicate column: " + name);
    if (!columns.empty() && codes.size() != rows)
        throw ParamError("column length mismatch for: " + name);
    rows = codes.size();
    Column c;
    c.categorical = true;
    c.codes = std::move(codes);
    c.labels = std::move(labels);
    columns.emplace_back(name, std::move(c));
}

}  // namespace fairdag
