#include "akbeam/csv.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "akbeam/errors.hpp"

namespace akbeam {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    // Shortest representation that parses back to the same bits.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header)
    : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += header[i];
    }
    buffer_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& values) {
    if (values.size() != columns_)
        throw Error("CSV row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += format_double(values[i]);
    }
    buffer_ += '\n';
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw Error("CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

void CsvWriter::write(const std::string& path) const {
    write_text_file(path, buffer_);
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw Error("CSV column not found: " + name);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CSV file: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

static std::string sha256_hex(const unsigned char* data, std::size_t len) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw Error("EVP_MD_CTX_new failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, data, len);
    EVP_DigestFinal_ex(ctx, digest, &digest_len);
    EVP_MD_CTX_free(ctx);
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * digest_len);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string sha256_string(const std::string& data) {
    return sha256_hex(reinterpret_cast<const unsigned char*>(data.data()),
                      data.size());
}

std::string sha256_file(const std::string& path) {
    return sha256_string(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

}  // namespace akbeam
