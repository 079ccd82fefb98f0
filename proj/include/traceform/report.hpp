#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "traceform/arith.hpp"

namespace traceform {

inline constexpr const char* kArtifactName = "traceform";
inline constexpr const char* kArtifactVersion = "0.1.0";

// One typed cell of an output record.
struct Field {
    enum class Kind { text, real, integer, boolean };
    std::string key;
    Kind kind = Kind::text;
    std::string text;
    double real = 0.0;
    i64 integer = 0;
    bool boolean = false;

    static Field str(std::string key, std::string v);
    static Field num(std::string key, double v);
    static Field count(std::string key, i64 v);
    static Field flag(std::string key, bool v);
    std::string formatted() const;  // %.12e for reals, canonical otherwise
};

using Record = std::vector<Field>;

// Accumulates a header record plus homogeneous rows, rendered at the end so
// both formats come out byte-stable.
class Report {
  public:
    explicit Report(const std::string& format);  // "csv" | "jsonl"
    void set_meta(Record meta);
    void add(Record row);
    std::string render() const;

  private:
    bool jsonl_ = false;
    Record meta_;
    std::vector<Record> rows_;
};

struct RunConfig {
    std::string format = "csv";
    std::string out;         // empty: stdout
    double tolerance = 0.0;  // 0: per-suite defaults
    bool timings = false;
    std::uint64_t seed = 1;
    int k = 3;
    i64 qmin = 41, qmax = 151;
    i64 q = 13;
    double big_n = 26.0;  // coefficient window size N for the sieve command
    i64 h_cut = 2;
    std::string grid = "default";
    std::string kind = "y0";
};

struct SuiteRow {
    std::string name;
    bool pass = false;
    double worst = 0.0;
    std::string detail;
};

// Identity/inequality suites behind `verify`; tolerance 0 keeps each suite's
// pinned default.
std::vector<SuiteRow> verify_suites(const RunConfig& cfg);

// Command runners; each writes one report and returns the process exit code
// (0 = all checks passed, 1 = some check failed).
int run_verify(const RunConfig& cfg);
int run_moment(const RunConfig& cfg);
int run_sieve(const RunConfig& cfg);
int run_voronoi(const RunConfig& cfg);
int run_bessel(const RunConfig& cfg);

}  // namespace traceform
