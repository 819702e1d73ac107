#ifndef FRACKPP_IO_HPP
#define FRACKPP_IO_HPP

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace frackpp {

/// Shortest text that round-trips the double (up to 17 significant digits).
std::string format_g17(double v);

/// Column-oriented CSV table. metadata renders as leading '# key = value'
/// lines (sorted by key) so every artifact carries its resolved
/// configuration; all outputs are timestamp-free and byte-deterministic.
struct CsvTable {
    std::map<std::string, std::string> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> cols;  // cols[j][i]: column j, row i

    std::size_t rows() const { return cols.empty() ? 0 : cols[0].size(); }
    /// Same number of columns and names, equal column lengths.
    void validate() const;
};

void write_csv(const CsvTable& t, std::ostream& os);
void write_csv_file(const CsvTable& t, const std::string& path);

/// Parses a table written by write_csv (metadata lines, header, numeric
/// rows). Unparseable numeric fields raise std::invalid_argument with the
/// line number.
CsvTable read_csv_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

/// mkdir -p. Throws on failure.
void ensure_directory(const std::string& path);

}  // namespace frackpp

#endif
