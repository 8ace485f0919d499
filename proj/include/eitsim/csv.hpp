// csv.hpp — deterministic CSV output with round-trip scientific notation
#pragma once

#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace eitsim {

// Shortest round-trip representation in scientific notation.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> header);

    void row(std::initializer_list<double> values);
    void row(std::span<const double> values);

private:
    std::ofstream out_;
    std::string path_;
    std::size_t columns_;
};

} // namespace eitsim
