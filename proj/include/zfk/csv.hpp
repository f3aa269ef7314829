#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace zfk {

/// Shortest decimal string that round-trips to the same double (at most 17
/// significant digits). Non-finite values print as nan / inf / -inf.
std::string format_double(double v);

/// Comma-separated writer: one header line, LF endings, no quoting.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(std::string_view s);
    void end_row();

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    void sep();
    std::filesystem::path path_;
    std::ofstream out_;
    bool row_started_ = false;
};

} // namespace zfk
