#pragma once

#include <string>
#include <vector>

#include "fairdag/errors.hpp"

namespace fairdag {

/// One named column: either real-valued or categorical (codes into labels).
struct Column {
    bool categorical = false;
    std::vector<double> real;
    std::vector<int> codes;
    std::vector<std::string> labels;

    std::size_t size() const { return categorical ? codes.size() : real.size(); }
};

/// Columnar samples of named variables; all columns share one row count.
struct Dataset {
    std::vector<std::pair<std::string, Column>> columns;
    std::size_t rows = 0;

    bool has(const std::string& name) const;
    const Column& col(const std::string& name) const;
    void add_real(const std::string& name, std::vector<double> values);
    void add_categorical(const std::string& name, std::vector<int> codes,
                         std::vector<std::string> labels);
};

}  // namespace fairdag
