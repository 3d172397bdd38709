#include "kpsd/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace kpsd {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

SymMatrix parse_matrix_text(std::istream& in) {
    std::vector<double> numbers;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size())
                throw ArgumentError("matrix file: non-numeric token '" + tok + "'");
            numbers.push_back(v);
        }
    }
    if (numbers.empty()) throw ArgumentError("matrix file: no data");
    const double nval = numbers.front();
    const int n = static_cast<int>(nval);
    if (nval != n || n < 1) throw ArgumentError("matrix file: first value must be a dimension >= 1");
    if (static_cast<std::size_t>(n) * n + 1 != numbers.size())
        throw ArgumentError("matrix file: expected " + std::to_string(n * n) +
                            " entries after the dimension");

    double amax = 0.0;
    for (std::size_t t = 1; t < numbers.size(); ++t) {
        if (!std::isfinite(numbers[t])) throw ArgumentError("matrix file: non-finite entry");
        amax = std::max(amax, std::abs(numbers[t]));
    }
    const auto at = [&](int i, int j) { return numbers[1 + static_cast<std::size_t>(i) * n + j]; };
    const double band = 1e-9 * std::max(1.0, amax);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(at(i, j) - at(j, i)) > band)
                throw ArgumentError("matrix file: asymmetry at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") exceeds tolerance");

    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) m.set(i, j, 0.5 * (at(i, j) + at(j, i)));
    return m;
}

SymMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open matrix file: " + path);
    return parse_matrix_text(in);
}

std::string write_matrix_text(const SymMatrix& m) {
    std::string out = std::to_string(m.dim()) + "\n";
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            if (j) out += ' ';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

} // namespace kpsd
