#include "zfk/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "zfk/error.hpp"

namespace zfk {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc)
{
    if (!out_)
        throw Error(ErrorCode::configuration, "cannot open " + path.string() + " for writing");
    bool first = true;
    for (auto h : header) {
        if (!first)
            out_ << ',';
        out_ << h;
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::sep()
{
    if (row_started_)
        out_ << ',';
    row_started_ = true;
}

CsvWriter& CsvWriter::cell(double v)
{
    sep();
    out_ << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::cell(long long v)
{
    sep();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view s)
{
    sep();
    out_ << s;
    return *this;
}

void CsvWriter::end_row()
{
    out_ << '\n';
    row_started_ = false;
}

} // namespace zfk
