// timeseries.hpp — Sampled observables vs physical time, CSV-backed

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "ttedopa/errors.hpp"

namespace ttedopa {

struct TimeSeries {
    std::vector<double> t_ps;
    std::vector<std::string> columns;          // observable names, in CSV order
    std::vector<std::vector<double>> values;   // values[c][sample]
    std::vector<double> discarded_weight;      // cumulative per sample
    std::vector<double> max_bond_dim;          // per sample
    std::vector<std::string> warnings;

    std::size_t n_samples() const { return t_ps.size(); }

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == name) return values[c];
        if (name == "discarded_weight") return discarded_weight;
        if (name == "max_bond_dim") return max_bond_dim;
        throw validation_error("TimeSeries: no column named '" + name + "'");
    }

    void write_csv(std::ostream& os) const {
        os << "t_ps";
        for (const auto& c : columns) os << ", " << c;
        os << ", discarded_weight, max_bond_dim\n";
        os << std::setprecision(17);
        for (std::size_t i = 0; i < n_samples(); ++i) {
            os << t_ps[i];
            for (const auto& col : values) os << ", " << col[i];
            os << ", " << discarded_weight[i] << ", " << max_bond_dim[i] << "\n";
        }
        for (const auto& w : warnings) os << "# warning: " << w << "\n";
    }

    void write_csv_file(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw validation_error("cannot open output file '" + path + "'");
        write_csv(f);
    }

    static TimeSeries read_csv(std::istream& is) {
        TimeSeries ts;
        std::string line;
        if (!std::getline(is, line)) throw validation_error("CSV: empty file");
        auto fields = split(line);
        if (fields.empty() || fields[0] != "t_ps") throw validation_error("CSV: first column must be t_ps");
        if (fields.size() < 3 || fields[fields.size() - 2] != "discarded_weight" ||
            fields.back() != "max_bond_dim")
            throw validation_error("CSV: trailing columns must be discarded_weight, max_bond_dim");
        ts.columns.assign(fields.begin() + 1, fields.end() - 2);
        ts.values.resize(ts.columns.size());
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            if (line[0] == '#') {
                ts.warnings.push_back(line.substr(1));
                continue;
            }
            auto row = split(line);
            if (row.size() != fields.size()) throw validation_error("CSV: ragged row");
            ts.t_ps.push_back(std::stod(row[0]));
            for (std::size_t c = 0; c < ts.columns.size(); ++c)
                ts.values[c].push_back(std::stod(row[1 + c]));
            ts.discarded_weight.push_back(std::stod(row[row.size() - 2]));
            ts.max_bond_dim.push_back(std::stod(row.back()));
        }
        return ts;
    }

    static TimeSeries read_csv_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw validation_error("cannot open input file '" + path + "'");
        return read_csv(f);
    }

    static std::vector<std::string> split(const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            auto b = field.find_first_not_of(" \t\r");
            auto e = field.find_last_not_of(" \t\r");
            out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
        }
        return out;
    }
};

struct CompareReport {
    double max_abs_diff = 0.0;
    double at_t_ps = 0.0;
};

// Maximum absolute difference of a named column between two series on
// matching time grids (within 1e-12 ps).
inline CompareReport compare_series(const TimeSeries& a, const TimeSeries& b,
                                    const std::string& column) {
    if (a.n_samples() != b.n_samples())
        throw validation_error("compare: time grids have different lengths");
    for (std::size_t i = 0; i < a.n_samples(); ++i)
        if (std::abs(a.t_ps[i] - b.t_ps[i]) > 1e-12)
            throw validation_error("compare: time grids differ at sample " + std::to_string(i));
    const auto& ca = a.column(column);
    const auto& cb = b.column(column);
    CompareReport rep;
    for (std::size_t i = 0; i < a.n_samples(); ++i) {
        double d = std::abs(ca[i] - cb[i]);
        if (d > rep.max_abs_diff) {
            rep.max_abs_diff = d;
            rep.at_t_ps = a.t_ps[i];
        }
    }
    return rep;
}

}  // namespace ttedopa
