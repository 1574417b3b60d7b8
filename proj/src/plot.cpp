#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "snrlab/harness.hpp"

namespace snrlab {

namespace {

struct Series {
    const char* name;
    const char* color;
};

constexpr Series kSeries[] = {
    {"ridge", "red"}, {"lasso", "blue"}, {"enet", "green"}, {"best-subset", "purple"}, {"zero", "gray"}};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Reference risk / (k tau^2) of an estimator family, as in compare_theory.
double reference_curve(std::string_view name, std::size_t p, std::size_t k, double tau, double inv) {
    const ParamSpace space(k, tau, tau * inv);
    const double energy = static_cast<double>(k) * tau * tau;
    if (name == "ridge") return ridge_second_order_risk(p, space).value / energy;
    if (name == "enet") return enet_second_order_bounds(p, space).upper.value / energy;
    if (name == "zero") return 1.0;
    return minimax_first_order(p, space, classify_regime(p, space)) / energy;
}

}  // namespace

std::string render_svg(const std::vector<CsvRow>& rows, const PlotOptions& o) {
    if (!(o.y_max > 0.0)) throw std::invalid_argument("plot: y_max must be > 0");
    const double left = 64, right = 150, top = 40, bottom = 52;
    const double w = o.width, h = o.height;
    const double pw = w - left - right, ph = h - top - bottom;

    double x_lo = 0.0, x_hi = 1.0;
    if (!rows.empty()) {
        x_lo = x_hi = rows.front().inv_snr;
        for (const CsvRow& r : rows) {
            x_lo = std::min(x_lo, r.inv_snr);
            x_hi = std::max(x_hi, r.inv_snr);
        }
        if (x_hi == x_lo) {
            x_lo -= 0.5;
            x_hi += 0.5;
        }
    }
    auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y) { return top + ph - std::clamp(y, 0.0, o.y_max) / o.y_max * ph; };

    std::map<std::string, std::vector<std::pair<double, double>>> by_name;
    for (const CsvRow& r : rows) by_name[r.estimator].emplace_back(r.inv_snr, r.mean);

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(o.width) +
         "\" height=\"" + std::to_string(o.height) + "\" viewBox=\"0 0 " + std::to_string(o.width) + " " +
         std::to_string(o.height) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(o.width) + "\" height=\"" + std::to_string(o.height) +
         "\" fill=\"white\"/>\n";
    if (!o.title.empty())
        s += "<text x=\"" + num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + o.title +
             "</text>\n";

    // Axes and ticks.
    s += "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
         num(top + ph) + "\"/>\n";
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + ph) +
         "\"/>\n";
    s += "</g>\n<g class=\"ticks\" font-size=\"11\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double yv = o.y_max * i / 5.0, xv = x_lo + (x_hi - x_lo) * i / 5.0;
        s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(sy(yv) + 4) + "\" text-anchor=\"end\">" + tick(yv) +
             "</text>\n";
        s += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(top + ph + 16) + "\" text-anchor=\"middle\">" + tick(xv) +
             "</text>\n";
    }
    s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(h - 12) + "\" text-anchor=\"middle\">1/SNR</text>\n";
    s += "<text x=\"16\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(top + ph / 2) + ")\">MSE</text>\n";
    s += "</g>\n";

    const bool overlay = o.p && o.k && *o.p > *o.k && x_lo >= 0.0;
    int legend_row = 0;
    for (const Series& series : kSeries) {
        const auto it = by_name.find(series.name);
        if (it == by_name.end()) continue;
        auto pts = it->second;
        std::sort(pts.begin(), pts.end());
        s += "<polyline class=\"data\" fill=\"none\" stroke=\"" + std::string(series.color) +
             "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
            s += (i ? " " : "") + num(sx(pts[i].first)) + "," + num(sy(pts[i].second));
        s += "\"/>\n";

        if (overlay) {
            s += "<polyline class=\"theory\" fill=\"none\" stroke=\"" + std::string(series.color) +
                 "\" stroke-width=\"1\" stroke-dasharray=\"6,4\" points=\"";
            const int samples = 60;
            bool first = true;
            for (int i = 0; i <= samples; ++i) {
                const double xv = x_lo + (x_hi - x_lo) * i / samples;
                if (xv <= 0.0) continue;
                const double yv = reference_curve(series.name, *o.p, *o.k, o.tau, xv);
                s += (first ? "" : " ") + num(sx(xv)) + "," + num(sy(yv));
                first = false;
            }
            s += "\"/>\n";
        }

        const double ly = top + 14 + 20 * legend_row++;
        s += "<line class=\"legend\" x1=\"" + num(left + pw + 14) + "\" y1=\"" + num(ly) + "\" x2=\"" +
             num(left + pw + 40) + "\" y2=\"" + num(ly) + "\" stroke=\"" + series.color + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(left + pw + 46) + "\" y=\"" + num(ly + 4) + "\" font-size=\"12\">" + series.name +
             "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

void emit_plot(const std::string& csv_path, const std::string& svg_path, const PlotOptions& options) {
    write_text_file(svg_path, render_svg(read_csv(csv_path), options));
}

}  // namespace snrlab
