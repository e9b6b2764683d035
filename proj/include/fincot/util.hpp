#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fincot::util {

std::string_view trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

bool starts_with(std::string_view s, std::string_view prefix);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
void append_line(const std::string& path, std::string_view line);

// RFC 4180 style: quote when the field contains comma, quote, or newline.
std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

// Fixed-point rendering with the given number of decimals (round half away from zero).
std::string format_fixed(double value, int decimals);

// SplitMix64: tiny, portable, deterministic PRNG used wherever bit-exact
// reproducibility across platforms matters.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Bounded draw via multiply-shift; bias is O(n / 2^64).
    std::size_t next_below(std::size_t n) {
        using u128 = unsigned __int128;
        return static_cast<std::size_t>((u128(next()) * u128(n)) >> 64);
    }

  private:
    std::uint64_t state_;
};

std::uint64_t fnv1a_hash(std::string_view data);

}  // namespace fincot::util
