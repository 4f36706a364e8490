#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cascade::cli {

// Doubles are written with 17 significant digits so they round-trip exactly.
std::string format_double(double x);
double parse_double(const std::string& s);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    template <class... Ts>
    void add(const Ts&... cells) {
        rows.push_back({cell(cells)...});
    }

    static std::string cell(double x) { return format_double(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(long x) { return std::to_string(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }
    static std::string cell(bool x) { return x ? "1" : "0"; }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }

    std::size_t column(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace cascade::cli
