#pragma once
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace linesim {

// Parse/validation error carrying file + line for CLI diagnostics.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, int line, const std::string& msg)
        : std::runtime_error(file + (line > 0 ? ":" + std::to_string(line) : "") + ": " + msg),
          file_(std::move(file)), line_(line) {}
    const std::string& file() const { return file_; }
    int line() const { return line_; }
private:
    std::string file_;
    int line_;
};

class ScenarioInvalid : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform in [0, 1), 53-bit mantissa.
inline double uniform01(std::mt19937_64& g) {
    return double(g() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller. Always consumes exactly two raw draws, so
// the stream layout is independent of the standard library implementation.
inline double gauss(std::mt19937_64& g) {
    double u1 = 1.0 - uniform01(g);  // (0, 1]
    double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

std::string trim(const std::string& s);
std::vector<std::string> split_ws(const std::string& s);
double parse_num(const std::string& tok, const std::string& file, int line);

std::string read_file(const std::string& path);

// Writes via temp file + rename so readers never observe partial content.
// fail_after_bytes is a test hook: abort (throw) after that many bytes to
// prove the destination is untouched on failure. -1 disables.
void write_file_atomic(const std::string& path, const std::string& content,
                       long fail_after_bytes = -1);

std::string format_full(double v);   // round-trip precision (%.17g)
std::string format_short(double v);  // human summaries (4 significant figures)

}  // namespace linesim
