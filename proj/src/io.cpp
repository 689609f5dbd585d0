#include "turnplate/io.hpp"
#include "turnplate/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace turnplate {

using nlohmann::ordered_json;

namespace {

RingSpec spec_from_json(const ordered_json& j) {
    if (j.contains("effective_spec")) return spec_from_json(j.at("effective_spec"));
    const int n = j.at("n_sites").get<int>();
    if (j.contains("uniform")) {
        const auto& u = j.at("uniform");
        return RingSpec::uniform(n, u.at("mag").get<double>(), u.at("total_phase").get<double>());
    }
    std::vector<Link> links;
    for (const auto& c : j.at("couplings"))
        links.push_back(Link{c.at("mag").get<double>(), c.at("phase").get<double>()});
    return RingSpec(n, std::move(links));
}

} // namespace

RingSpec parse_spec(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("spec is not valid JSON: ") + e.what());
    }
    try {
        return spec_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("spec is missing required fields: ") + e.what());
    }
}

RingSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidSpec("cannot open spec file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

std::string dump_spec(const RingSpec& spec) {
    ordered_json j;
    j["n_sites"] = spec.n_sites();
    j["couplings"] = ordered_json::array();
    for (const auto& link : spec.links())
        j["couplings"].push_back({{"mag", link.mag}, {"phase", link.phase}});
    return j.dump(2) + "\n";
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string trace_to_csv(const TraceSeries& trace, const std::string& prefix) {
    std::string out = "t";
    for (size_t i = 0; i < trace.series.size(); ++i)
        out += "," + prefix + std::to_string(i + 1);
    out += "\n";
    for (size_t s = 0; s < trace.times.size(); ++s) {
        out += format_double(trace.times[s]);
        for (const auto& series : trace.series) out += "," + format_double(series[s]);
        out += "\n";
    }
    return out;
}

namespace {

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

const char* palette(size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % 10];
}

} // namespace

std::string trace_to_svg(const TraceSeries& trace, const std::vector<std::string>& labels,
                         const std::string& y_label) {
    const double width = 880, height = 520;
    const double left = 70, right = 850, top = 30, bottom = 470;

    double t_min = trace.times.front(), t_max = trace.times.back();
    double y_min = 0.0, y_max = 0.0;
    for (const auto& series : trace.series)
        for (const double v : series) y_max = std::max(y_max, v);
    if (y_max <= y_min) y_max = 1.0;
    y_max *= 1.05;

    auto x_of = [&](double t) { return left + (t - t_min) / (t_max - t_min) * (right - left); };
    auto y_of = [&](double v) { return bottom - (v - y_min) / (y_max - y_min) * (bottom - top); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
        << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    const int ticks = 6;
    for (int i = 0; i <= ticks; ++i) {
        const double t = t_min + (t_max - t_min) * i / ticks;
        const double v = y_min + (y_max - y_min) * i / ticks;
        svg << "<line x1=\"" << px(x_of(t)) << "\" y1=\"" << px(top) << "\" x2=\"" << px(x_of(t))
            << "\" y2=\"" << px(bottom) << "\" stroke=\"#eeeeee\"/>\n";
        svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(y_of(v)) << "\" x2=\"" << px(right)
            << "\" y2=\"" << px(y_of(v)) << "\" stroke=\"#eeeeee\"/>\n";
        svg << "<text x=\"" << px(x_of(t)) << "\" y=\"" << px(bottom + 20)
            << "\" text-anchor=\"middle\">" << format_double(std::round(t * 1000) / 1000)
            << "</text>\n";
        svg << "<text x=\"" << px(left - 8) << "\" y=\"" << px(y_of(v) + 4)
            << "\" text-anchor=\"end\">" << format_double(std::round(v * 1000) / 1000)
            << "</text>\n";
    }
    svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(right)
        << "\" y2=\"" << px(bottom) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left)
        << "\" y2=\"" << px(bottom) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px((left + right) / 2) << "\" y=\"" << px(height - 15)
        << "\" text-anchor=\"middle\">t</text>\n";
    svg << "<text x=\"18\" y=\"" << px((top + bottom) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << px((top + bottom) / 2)
        << ")\">" << y_label << "</text>\n";

    for (size_t s = 0; s < trace.series.size(); ++s) {
        svg << "<polyline fill=\"none\" stroke=\"" << palette(s) << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < trace.times.size(); ++i) {
            if (i) svg << " ";
            svg << px(x_of(trace.times[i])) << "," << px(y_of(trace.series[s][i]));
        }
        svg << "\"/>\n";
    }

    for (size_t s = 0; s < labels.size() && s < trace.series.size(); ++s) {
        const double ly = top + 18 + 18 * s;
        svg << "<line x1=\"" << px(right - 150) << "\" y1=\"" << px(ly) << "\" x2=\""
            << px(right - 120) << "\" y2=\"" << px(ly) << "\" stroke=\"" << palette(s)
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << px(right - 112) << "\" y=\"" << px(ly + 4) << "\">" << labels[s]
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string density_to_json(const ModeDensity& rho) {
    ordered_json j;
    j["dim"] = rho.dim;
    j["matrix"] = ordered_json::array();
    for (int a = 0; a < rho.dim; ++a)
        for (int b = 0; b < rho.dim; ++b) {
            const Complex v = rho.matrix(a, b);
            j["matrix"].push_back({v.real(), v.imag()});
        }
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

} // namespace turnplate
