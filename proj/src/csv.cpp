#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "snrlab/harness.hpp"

namespace snrlab {

std::string format_sig17(double v) {
    if (v == 0.0) return "0";
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char sci[64];
    std::snprintf(sci, sizeof sci, "%.16e", v);
    const int exponent = std::atoi(std::strchr(sci, 'e') + 1);
    const int decimals = std::max(16 - exponent, 0);
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string format_shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string out(buf, ptr);
    if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
    return out;
}

std::string format_csv(const SweepResult& result) {
    std::vector<const SweepCell*> cells;
    for (const SweepCell& c : result.cells) cells.push_back(&c);
    std::sort(cells.begin(), cells.end(), [](const SweepCell* a, const SweepCell* b) {
        const auto na = family_name(a->estimator), nb = family_name(b->estimator);
        return na < nb || (na == nb && a->inv_snr < b->inv_snr);
    });
    std::string out(kCsvHeader);
    out += '\n';
    for (const SweepCell* c : cells) {
        out += family_name(c->estimator);
        out += ',' + format_shortest(c->inv_snr);
        out += ',' + format_sig17(c->mean_scaled_mse);
        out += ',' + (c->trials < 2 ? std::string("0") : format_sig17(c->se_scaled_mse));
        out += ',' + std::to_string(c->trials);
        out += ',' + std::to_string(result.config.master_seed);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_csv(const SweepResult& result, const std::string& path) { write_text_file(path, format_csv(result)); }

namespace {

template <class T>
T parse_number(std::string_view field, std::size_t line, const char* what) {
    T out{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw SchemaError("line " + std::to_string(line) + ": bad " + what + " '" + std::string(field) + "'");
    return out;
}

}  // namespace

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::size_t number = 0;
    bool header = false;
    while (!text.empty()) {
        ++number;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!header) {
            if (line != kCsvHeader) throw SchemaError("line 1: header must be '" + std::string(kCsvHeader) + "'");
            header = true;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            f.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (f.size() != 6)
            throw SchemaError("line " + std::to_string(number) + ": expected 6 fields, got " + std::to_string(f.size()));
        if (!parse_family(f[0]))
            throw SchemaError("line " + std::to_string(number) + ": unknown estimator '" + std::string(f[0]) + "'");
        CsvRow r;
        r.estimator = std::string(family_name(*parse_family(f[0])));
        r.inv_snr = parse_number<double>(f[1], number, "inv_snr");
        r.mean = parse_number<double>(f[2], number, "mean_scaled_mse");
        r.se = parse_number<double>(f[3], number, "se_scaled_mse");
        r.trials = parse_number<std::size_t>(f[4], number, "trials");
        r.master_seed = parse_number<std::uint64_t>(f[5], number, "master_seed");
        rows.push_back(std::move(r));
    }
    if (!header) throw SchemaError("line 1: empty file, header missing");
    return rows;
}

std::vector<CsvRow> read_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_csv(text);
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

}  // namespace snrlab
