#ifndef CAUSAL_PERM_DATA_IO_HPP
#define CAUSAL_PERM_DATA_IO_HPP

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graph_io.hpp"

namespace causal_perm::io {

/// Rows are samples, columns are variables 1..p. No header unless
/// `skip_header` is set, in which case the first line is discarded.
inline Eigen::MatrixXd read_data_csv(std::istream& in, bool skip_header = false) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(rows.front().size()) + " columns");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("data file has no rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

inline void write_data_csv(std::ostream& out, const Eigen::MatrixXd& data) {
    char buf[32];
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", data(r, c));
            if (c) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace causal_perm::io

#endif
