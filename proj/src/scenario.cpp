#include "tatereg/scenario.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tatereg {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

} // namespace

Scenario Scenario::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open scenario file " + path, 0, 0);
    std::stringstream buf;
    buf << in.rdbuf();
    Scenario s = parse_text(buf.str(), path);
    return s;
}

Scenario Scenario::parse_text(const std::string& text,
                              const std::string& name) {
    Scenario s;
    s.path_ = name;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw parse_error("unterminated section header", lineno,
                                  static_cast<int>(line.size()));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw parse_error("empty section name", lineno, 1);
            continue;
        }
        auto toks = split_ws(line);
        if (toks.size() < 2)
            throw parse_error("expected `key value...`", lineno, 1);
        std::string key = toks.front();
        toks.erase(toks.begin());
        if (s.kv_[section].count(key))
            throw parse_error("duplicate key `" + key + "`", lineno, 1);
        s.kv_[section][key] = toks;
    }
    if (!s.has("", "kind"))
        throw parse_error("missing `kind`", lineno, 1);
    s.kind_ = s.get_string("", "kind");
    return s;
}

bool Scenario::has(const std::string& section, const std::string& key) const {
    auto it = kv_.find(section);
    return it != kv_.end() && it->second.count(key) > 0;
}

std::string Scenario::get_string(const std::string& section,
                                 const std::string& key) const {
    if (!has(section, key))
        throw parse_error("missing key `" + key + "` in section [" + section +
                              "] of " + path_,
                          0, 0);
    const auto& toks = kv_.at(section).at(key);
    std::string out;
    for (size_t i = 0; i < toks.size(); ++i) {
        if (i) out += " ";
        out += toks[i];
    }
    return out;
}

long Scenario::get_long(const std::string& section,
                        const std::string& key) const {
    std::string v = get_string(section, key);
    try {
        size_t pos = 0;
        long r = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw parse_error("key `" + key + "` is not an integer: " + v, 0, 0);
    }
}

long Scenario::get_long_or(const std::string& section, const std::string& key,
                           long fallback) const {
    return has(section, key) ? get_long(section, key) : fallback;
}

double Scenario::get_double_or(const std::string& section,
                               const std::string& key, double fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stod(get_string(section, key));
    } catch (const std::exception&) {
        throw parse_error("key `" + key + "` is not a number", 0, 0);
    }
}

std::vector<long> Scenario::get_longs(const std::string& section,
                                      const std::string& key) const {
    if (!has(section, key))
        throw parse_error("missing key `" + key + "` in section [" + section +
                              "] of " + path_,
                          0, 0);
    std::vector<long> out;
    for (const auto& t : kv_.at(section).at(key)) {
        try {
            out.push_back(std::stol(t));
        } catch (const std::exception&) {
            throw parse_error("key `" + key + "` has a non-integer entry: " +
                                  t,
                              0, 0);
        }
    }
    return out;
}

long Scenario::precision() const {
    if (precision_override_) return *precision_override_;
    if (has("", "precision")) return get_long("", "precision");
    if (const char* env = std::getenv("TATEREG_PRECISION"))
        return std::strtol(env, nullptr, 10);
    return 40;
}

long Scenario::nu() const {
    if (nu_override_) return *nu_override_;
    return get_long_or("", "nu", 2);
}

FieldDesc Scenario::field_desc() const {
    FieldDesc d;
    d.p = get_long("field", "p");
    d.precision = precision();
    if (has("field", "unramified"))
        for (long c : get_longs("field", "unramified")) d.unramified.push_back(c);
    if (has("field", "eisenstein"))
        for (long c : get_longs("field", "eisenstein")) d.eisenstein.push_back(c);
    return d;
}

// --- constant expressions -------------------------------------------------

namespace {

struct ExprParser {
    const Field& F;
    const std::string& s;
    size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void err(const std::string& what) {
        throw parse_error("constant expression: " + what + " in `" + s + "`",
                          0, static_cast<int>(i));
    }
    long integer() {
        skip();
        size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            ++i;
        if (start == i) err("expected integer");
        return std::stol(s.substr(start, i - start));
    }
    PAdic atom() {
        skip();
        if (eat('(')) {
            PAdic v = expr();
            if (!eat(')')) err("missing )");
            return v;
        }
        if (eat('-')) return -atom();
        if (s.compare(i, 2, "pi") == 0 &&
            (i + 2 >= s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 2])))) {
            i += 2;
            return F.pi();
        }
        if (s.compare(i, 5, "zeta(") == 0) {
            i += 5;
            long n = integer();
            if (!eat(',')) err("zeta needs (order, index)");
            long k = integer();
            if (!eat(')')) err("missing )");
            return F.zeta(n, k);
        }
        if (s.compare(i, 6, "teich(") == 0) {
            i += 6;
            long c = integer();
            if (!eat(')')) err("missing )");
            return F.from_integer(c).teichmuller();
        }
        if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) ||
                             s[i] == '+'))
            return F.from_integer(integer());
        err("unrecognized atom");
    }
    PAdic factor() {
        PAdic v = atom();
        skip();
        if (eat('^')) {
            long k = integer();
            v = v.pow(k);
        }
        return v;
    }
    PAdic expr() {
        PAdic v = factor();
        while (true) {
            skip();
            if (eat('*')) {
                v = v * factor();
            } else if (eat('/')) {
                v = v / factor();
            } else {
                break;
            }
        }
        return v;
    }
};

} // namespace

PAdic Scenario::eval_constant(const Field& F, const std::string& expr) const {
    ExprParser p{F, expr};
    PAdic v = p.expr();
    p.skip();
    if (p.i != expr.size())
        throw parse_error("trailing input in constant `" + expr + "`", 0,
                          static_cast<int>(p.i));
    return v;
}

PAdic Scenario::get_constant(const Field& F, const std::string& section,
                             const std::string& key) const {
    return eval_constant(F, get_string(section, key));
}

std::map<std::string, std::map<std::string, std::string>> Scenario::echo()
    const {
    std::map<std::string, std::map<std::string, std::string>> out;
    for (const auto& [sec, kvs] : kv_)
        for (const auto& [k, toks] : kvs) {
            std::string v;
            for (size_t i = 0; i < toks.size(); ++i) {
                if (i) v += " ";
                v += toks[i];
            }
            out[sec][k] = v;
        }
    return out;
}

// --- reports ----------------------------------------------------------------

void Report::pass(const std::string& name, const std::string& lhs,
                  const std::string& rhs, const std::string& mode,
                  const std::string& margin, const std::string& detail) {
    checks.push_back({name, "pass", lhs, rhs, mode, margin, detail});
}

void Report::fail(const std::string& name, const std::string& lhs,
                  const std::string& rhs, const std::string& mode,
                  const std::string& margin, const std::string& detail) {
    checks.push_back({name, "fail", lhs, rhs, mode, margin, detail});
}

void Report::unsupported(const std::string& name, const std::string& detail) {
    checks.push_back({name, "unsupported", "", "", "", "", detail});
}

long Report::count(const std::string& status) const {
    long n = 0;
    for (const auto& c : checks)
        if (c.status == status) ++n;
    return n;
}

bool Report::all_passed() const {
    return count("fail") == 0 && count("unsupported") == 0 && !checks.empty();
}

std::string Report::to_json(bool strip_timing) const {
    nlohmann::ordered_json j;
    j["version"] = version;
    j["scenario"] = scenario_path;
    j["kind"] = kind;
    j["field"] = field;
    j["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [sec, kvs] : parameters) {
        nlohmann::ordered_json sj;
        for (const auto& [k, v] : kvs) sj[k] = v;
        j["parameters"][sec.empty() ? "-" : sec] = sj;
    }
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["status"] = c.status;
        if (!c.lhs.empty()) cj["lhs"] = c.lhs;
        if (!c.rhs.empty()) cj["rhs"] = c.rhs;
        if (!c.mode.empty()) cj["mode"] = c.mode;
        if (!c.margin.empty()) cj["margin"] = c.margin;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        j["checks"].push_back(cj);
    }
    j["summary"] = {{"pass", count("pass")},
                    {"fail", count("fail")},
                    {"unsupported", count("unsupported")}};
    if (!strip_timing) j["duration_ms"] = duration_ms;
    return j.dump(2);
}

} // namespace tatereg
