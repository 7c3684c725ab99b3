// CSV output used by the CLI: a comment header carrying the schema tag and
// key=value metadata, a column-name row, then data rows at 15 significant
// digits so files round-trip through double parsing.  Everything written
// here is a pure function of the inputs (no timestamps, no locale), so
// identical runs produce identical bytes.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace deepprior {

inline std::string format_sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14e", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::string& schema) : os_(os) {
        os_ << "# schema=" << schema << "\n";
    }

    void meta(const std::string& key, const std::string& value) {
        os_ << "# " << key << "=" << value << "\n";
    }

    void meta(const std::string& key, double value) {
        meta(key, format_sci(value));
    }

    void header(const std::vector<std::string>& names) {
        join(names);
    }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_sci(v));
        join(cells);
    }

    // Mixed row for tables with non-numeric cells (e.g. an error column).
    void row_cells(const std::vector<std::string>& cells) { join(cells); }

private:
    void join(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ",";
            os_ << cells[i];
        }
        os_ << "\n";
    }

    std::ostream& os_;
};

}  // namespace deepprior
