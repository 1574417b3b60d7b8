// Flat configuration files:
//
//   # comment
//   key = value
//
// Values are integers, reals, booleans (true/false), bare words, or
// comma-separated lists, optionally wrapped in [ ]. Each key may appear once.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "snrlab/harness.hpp"

namespace snrlab {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Line {
    std::size_t number;
    std::string_view value;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("config line " + std::to_string(number) + ": " + what);
    }

    std::string_view word() const {
        std::string_view v = value;
        if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
            v = v.substr(1, v.size() - 2);
        return v;
    }

    double real(std::string_view text) const {
        text = trim(text);
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
            fail("expected a number, got '" + std::string(text) + "'");
        return out;
    }
    double real() const { return real(value); }

    std::uint64_t integer() const {
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
            fail("expected a non-negative integer, got '" + std::string(value) + "'");
        return out;
    }

    bool boolean() const {
        if (value == "true") return true;
        if (value == "false") return false;
        fail("expected true or false, got '" + std::string(value) + "'");
    }

    std::vector<std::string_view> items() const {
        std::string_view v = value;
        if (!v.empty() && v.front() == '[') {
            if (v.back() != ']') fail("unterminated list");
            v = trim(v.substr(1, v.size() - 2));
        }
        std::vector<std::string_view> out;
        if (v.empty()) return out;
        std::size_t start = 0;
        while (true) {
            const auto comma = v.find(',', start);
            const auto item = trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
            if (item.empty()) fail("empty list item");
            out.push_back(item);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return out;
    }

    std::vector<double> reals() const {
        std::vector<double> out;
        for (auto item : items()) out.push_back(real(item));
        return out;
    }
};

using Setter = std::function<void(SweepConfig&, const Line&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"n", [](SweepConfig& c, const Line& l) { c.n = l.integer(); }},
        {"p", [](SweepConfig& c, const Line& l) { c.p = l.integer(); }},
        {"k", [](SweepConfig& c, const Line& l) { c.k = l.integer(); }},
        {"tau", [](SweepConfig& c, const Line& l) { c.tau = l.real(); }},
        {"inv_snr", [](SweepConfig& c, const Line& l) { c.inv_snr = l.reals(); }},
        {"trials", [](SweepConfig& c, const Line& l) { c.trials = l.integer(); }},
        {"pilot_trials", [](SweepConfig& c, const Line& l) { c.pilot_trials = l.integer(); }},
        {"estimators",
         [](SweepConfig& c, const Line& l) {
             c.estimators.clear();
             for (auto item : l.items()) {
                 const auto f = parse_family(item);
                 if (!f) l.fail("unknown estimator '" + std::string(item) + "'");
                 c.estimators.push_back(*f);
             }
         }},
        {"tuning",
         [](SweepConfig& c, const Line& l) {
             const auto m = parse_tuning_mode(l.word());
             if (!m) l.fail("tuning must be paper, oracle or fixed");
             c.tuning = *m;
         }},
        {"master_seed", [](SweepConfig& c, const Line& l) { c.master_seed = l.integer(); }},
        {"random_signs", [](SweepConfig& c, const Line& l) { c.random_signs = l.boolean(); }},
        {"grid_points", [](SweepConfig& c, const Line& l) { c.grid_points = l.integer(); }},
        {"ridge_grid", [](SweepConfig& c, const Line& l) { c.ridge_grid = l.reals(); }},
        {"lasso_grid", [](SweepConfig& c, const Line& l) { c.lasso_grid = l.reals(); }},
        {"enet_threshold_grid", [](SweepConfig& c, const Line& l) { c.enet_threshold_grid = l.reals(); }},
        {"enet_shrink_grid", [](SweepConfig& c, const Line& l) { c.enet_shrink_grid = l.reals(); }},
        {"ridge_lambda", [](SweepConfig& c, const Line& l) { c.ridge_lambda = l.real(); }},
        {"lasso_lambda", [](SweepConfig& c, const Line& l) { c.lasso_lambda = l.real(); }},
        {"enet_lambda", [](SweepConfig& c, const Line& l) { c.enet_lambda = l.real(); }},
        {"enet_gamma", [](SweepConfig& c, const Line& l) { c.enet_gamma = l.real(); }},
        {"bss_k", [](SweepConfig& c, const Line& l) { c.bss_k = l.integer(); }},
        {"bss_budget", [](SweepConfig& c, const Line& l) { c.bss_budget = l.integer(); }},
        {"lasso_tol", [](SweepConfig& c, const Line& l) { c.lasso_tol = l.real(); }},
        {"lasso_max_iter", [](SweepConfig& c, const Line& l) { c.lasso_max_iter = l.integer(); }},
    };
    return table;
}

std::string real_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string list_text(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += real_text(v[i]);
    }
    return out + "]";
}

}  // namespace

SweepConfig parse_config(std::string_view text) {
    SweepConfig c;
    std::vector<std::string> seen;
    std::size_t number = 0;
    while (!text.empty()) {
        ++number;
        const auto eol = text.find('\n');
        std::string_view raw = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;
        const auto eq = raw.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
        const std::string key(trim(raw.substr(0, eq)));
        const Line line{number, trim(raw.substr(eq + 1))};
        const auto it = setters().find(key);
        if (it == setters().end()) line.fail("unknown key '" + key + "'");
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) line.fail("duplicate key '" + key + "'");
        if (line.value.empty()) line.fail("missing value for '" + key + "'");
        seen.push_back(key);
        it->second(c, line);
    }
    c.validate();
    return c;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const SweepConfig& c) {
    std::ostringstream os;
    os << "n = " << c.n << "\n";
    os << "p = " << c.p << "\n";
    os << "k = " << c.k << "\n";
    os << "tau = " << real_text(c.tau) << "\n";
    os << "inv_snr = " << list_text(c.inv_snr) << "\n";
    os << "trials = " << c.trials << "\n";
    os << "pilot_trials = " << c.pilot_trials << "\n";
    os << "estimators = [";
    for (std::size_t i = 0; i < c.estimators.size(); ++i) os << (i ? ", " : "") << family_name(c.estimators[i]);
    os << "]\n";
    os << "tuning = " << tuning_mode_name(c.tuning) << "\n";
    os << "master_seed = " << c.master_seed << "\n";
    os << "random_signs = " << (c.random_signs ? "true" : "false") << "\n";
    os << "grid_points = " << c.grid_points << "\n";
    if (!c.ridge_grid.empty()) os << "ridge_grid = " << list_text(c.ridge_grid) << "\n";
    if (!c.lasso_grid.empty()) os << "lasso_grid = " << list_text(c.lasso_grid) << "\n";
    if (!c.enet_threshold_grid.empty()) os << "enet_threshold_grid = " << list_text(c.enet_threshold_grid) << "\n";
    if (!c.enet_shrink_grid.empty()) os << "enet_shrink_grid = " << list_text(c.enet_shrink_grid) << "\n";
    if (c.ridge_lambda) os << "ridge_lambda = " << real_text(*c.ridge_lambda) << "\n";
    if (c.lasso_lambda) os << "lasso_lambda = " << real_text(*c.lasso_lambda) << "\n";
    if (c.enet_lambda) os << "enet_lambda = " << real_text(*c.enet_lambda) << "\n";
    if (c.enet_gamma) os << "enet_gamma = " << real_text(*c.enet_gamma) << "\n";
    if (c.bss_k) os << "bss_k = " << *c.bss_k << "\n";
    os << "bss_budget = " << c.bss_budget << "\n";
    os << "lasso_tol = " << real_text(c.lasso_tol) << "\n";
    os << "lasso_max_iter = " << c.lasso_max_iter << "\n";
    return os.str();
}

}  // namespace snrlab
