#include "frackpp/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frackpp {

std::string format_g17(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v || (v != v && back != back)) return buf;
    }
    return buf;
}

void CsvTable::validate() const {
    if (columns.size() != cols.size())
        throw std::invalid_argument("csv: header/column count mismatch");
    if (columns.empty()) throw std::invalid_argument("csv: no columns");
    for (const auto& c : cols)
        if (c.size() != cols[0].size())
            throw std::invalid_argument("csv: ragged columns");
}

void write_csv(const CsvTable& t, std::ostream& os) {
    t.validate();
    for (const auto& [k, v] : t.metadata) os << "# " << k << " = " << v << "\n";
    for (std::size_t j = 0; j < t.columns.size(); ++j)
        os << (j ? "," : "") << t.columns[j];
    os << "\n";
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.cols.size(); ++j)
            os << (j ? "," : "") << format_g17(t.cols[j][i]);
        os << "\n";
    }
}

void write_csv_file(const CsvTable& t, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("csv: cannot write " + path);
    write_csv(t, os);
    if (!os) throw std::runtime_error("csv: write failed for " + path);
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("csv: cannot open " + path);
    CsvTable t;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::size_t eq = line.find('=');
            if (eq != std::string::npos) {
                auto strip = [](std::string s) {
                    const auto b = s.find_first_not_of(" \t");
                    const auto e = s.find_last_not_of(" \t");
                    return b == std::string::npos ? std::string()
                                                  : s.substr(b, e - b + 1);
                };
                t.metadata[strip(line.substr(1, eq - 1))] =
                    strip(line.substr(eq + 1));
            }
            continue;
        }
        std::istringstream ss(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
            t.cols.resize(t.columns.size());
            have_header = true;
            continue;
        }
        std::size_t j = 0;
        while (std::getline(ss, cell, ',')) {
            if (j >= t.cols.size())
                throw std::invalid_argument("csv: line " +
                                            std::to_string(lineno) +
                                            ": too many fields");
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos == 0)
                throw std::invalid_argument("csv: line " +
                                            std::to_string(lineno) +
                                            ": bad number '" + cell + "'");
            t.cols[j++].push_back(v);
        }
        if (j != t.cols.size())
            throw std::invalid_argument("csv: line " + std::to_string(lineno) +
                                        ": missing fields");
    }
    if (!have_header) throw std::invalid_argument("csv: no header in " + path);
    t.validate();
    return t;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("io: cannot write " + path);
    os << text;
    if (!os) throw std::runtime_error("io: write failed for " + path);
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec)
        throw std::runtime_error("io: cannot create directory " + path + ": " +
                                 ec.message());
}

}  // namespace frackpp
