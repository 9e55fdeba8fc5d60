#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "aggnet/errors.hpp"

namespace aggnet {

// Comma separators, one header row, LF endings, floats at 17 significant
// digits so equal values produce equal bytes.
inline std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_num(int v) { return std::to_string(v); }
inline std::string csv_num(long long v) { return std::to_string(v); }

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_)
            throw InputError("cannot open output file: " + path);
        row(header);
    }

    void row(const std::vector<std::string>& cells) {
        for (size_t k = 0; k < cells.size(); ++k) {
            if (k)
                out_ << ',';
            out_ << cells[k];
        }
        out_ << '\n';
        if (!out_)
            throw InputError("write failed");
    }

    void close() {
        out_.close();
        if (out_.fail())
            throw InputError("write failed on close");
    }

private:
    std::ofstream out_;
};

} // namespace aggnet
