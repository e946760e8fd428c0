#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace epsim {

// Calendar date. Plain value type; validated on construction via parse().
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    bool valid() const;
    std::string to_string() const;  // YYYY-MM-DD

    // Parses strict ISO-8601 YYYY-MM-DD. Throws SchemaError on anything else.
    static Date parse(std::string_view iso);
};

std::string sha256_hex(std::string_view data);

std::uint64_t fnv1a64(std::string_view data);

// splitmix64: tiny deterministic generator, stable across platforms.
// Used wherever reproducibility is part of the contract (speech order,
// sample data); never for anything security sensitive.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, n); n > 0. Modulo bias is irrelevant at the scales used here.
    std::uint64_t bounded(std::uint64_t n) { return next() % n; }

    // [0, 1)
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Write-temp-then-rename. Readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::string to_lower(std::string s);
std::string trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

// First balanced {...} span in `raw`, honoring JSON string quoting, or
// nothing. Models like to wrap their JSON answer in prose; this digs it out.
std::optional<std::string> extract_first_json_object(std::string_view raw);

}  // namespace epsim
