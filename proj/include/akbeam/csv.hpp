#pragma once

#include <string>
#include <vector>

namespace akbeam {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

/// Minimal CSV writer with deterministic numeric formatting.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& cells);

    const std::string& content() const { return buffer_; }
    void write(const std::string& path) const;

private:
    std::string buffer_;
    std::size_t columns_ = 0;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// SHA-256 digest of a file's content, lowercase hex.
std::string sha256_file(const std::string& path);

/// SHA-256 digest of a string, lowercase hex.
std::string sha256_string(const std::string& data);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace akbeam
