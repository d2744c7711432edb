#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tatereg/padic.hpp"

namespace tatereg {

// A parsed scenario file: line-oriented `key value...` pairs grouped under
// `[section]` headers; `#` starts a comment.  Keys outside any section
// (like `kind`) live in the "" section.
class Scenario {
public:
    static Scenario parse_file(const std::string& path);
    static Scenario parse_text(const std::string& text,
                               const std::string& name = "<string>");

    const std::string& path() const { return path_; }
    const std::string& kind() const { return kind_; }

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    long get_long(const std::string& section, const std::string& key) const;
    long get_long_or(const std::string& section, const std::string& key,
                     long fallback) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    std::vector<long> get_longs(const std::string& section,
                                const std::string& key) const;

    // precision with the environment override TATEREG_PRECISION and the
    // command-line override applied (command line wins)
    long precision() const;
    long nu() const;
    void override_precision(long p) { precision_override_ = p; }
    void override_nu(long n) { nu_override_ = n; }

    // field from the [field] section
    FieldDesc field_desc() const;

    // evaluate a constant expression over K: integers, pi, zeta(n,k),
    // teich(c), products, quotients, powers, unary minus, parentheses
    PAdic eval_constant(const Field& F, const std::string& expr) const;
    PAdic get_constant(const Field& F, const std::string& section,
                       const std::string& key) const;

    // raw key/value echo for reports
    std::map<std::string, std::map<std::string, std::string>> echo() const;

private:
    std::string path_;
    std::string kind_;
    std::optional<long> precision_override_;
    std::optional<long> nu_override_;
    // section -> key -> tokens
    std::map<std::string, std::map<std::string, std::vector<std::string>>> kv_;
};

// One executed check inside a report.
struct CheckResult {
    std::string name;
    std::string status; // "pass" | "fail" | "unsupported"
    std::string lhs, rhs;
    std::string mode;   // e.g. "mod (K*)^{p^2}" or "abs tol 1e-10"
    std::string margin; // digits to spare / numeric residual
    std::string detail;
};

struct Report {
    int version = 1;
    std::string scenario_path;
    std::string kind;
    std::string field;
    // scenario echo: section -> key -> value
    std::map<std::string, std::map<std::string, std::string>> parameters;
    std::vector<CheckResult> checks;
    long duration_ms = 0;

    void pass(const std::string& name, const std::string& lhs = "",
              const std::string& rhs = "", const std::string& mode = "",
              const std::string& margin = "", const std::string& detail = "");
    void fail(const std::string& name, const std::string& lhs = "",
              const std::string& rhs = "", const std::string& mode = "",
              const std::string& margin = "", const std::string& detail = "");
    void unsupported(const std::string& name, const std::string& detail);

    long count(const std::string& status) const;
    bool all_passed() const;
    // deterministic JSON rendering; durations excluded when strip_timing
    std::string to_json(bool strip_timing = false) const;
};

} // namespace tatereg
