#include "rdr/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rdr {

std::string format_double(double value) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (size_t c = 0; c < header.size(); ++c) {
        if (c) out += ',';
        out += header[c];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::runtime_error("to_csv: row width does not match header");
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> parse_xy_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse_xy_csv: empty input");
    std::vector<double> xs, ys;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[2];
        for (int c = 0; c < 2; ++c) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("parse_xy_csv: line " + std::to_string(line_no) +
                                         " has fewer than two columns");
            char* end = nullptr;
            vals[c] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw std::runtime_error("parse_xy_csv: non-numeric cell on line " +
                                         std::to_string(line_no));
        }
        xs.push_back(vals[0]);
        ys.push_back(vals[1]);
    }
    if (xs.empty()) throw std::runtime_error("parse_xy_csv: no data rows");
    return {xs, ys};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace rdr
