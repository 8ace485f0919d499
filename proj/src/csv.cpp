#include "eitsim/csv.hpp"

#include <charconv>
#include <system_error>

#include "eitsim/errors.hpp"

namespace eitsim {

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
    if (res.ec != std::errc{})
        throw IoError("number formatting failed");
    return {buf, res.ptr};
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), columns_(header.size())
{
    if (!out_)
        throw IoError("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
        out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values)
{
    row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values)
{
    if (values.size() != columns_)
        throw ContractError("csv row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format_double(values[i]);
    out_ << '\n';
    if (!out_)
        throw IoError("write failed: " + path_);
}

} // namespace eitsim
