#include "popdyn/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "popdyn/errors.hpp"

namespace popdyn {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_orbit_csv(std::ostream& os, const OrbitTrace& trace) {
    os << "step,pop_label,theta1,theta2,lbar_residual\n";
    os << "0,start," << format_g17(trace.start.theta1) << ',' << format_g17(trace.start.theta2)
       << ',' << format_g17(trace.start_residual) << '\n';
    long step = 1;
    for (const OrbitStep& s : trace.steps) {
        os << step++ << ',' << to_string(s.label) << ',' << format_g17(s.angles.theta1) << ','
           << format_g17(s.angles.theta2) << ',' << format_g17(s.residual) << '\n';
    }
}

void write_scan_csv(std::ostream& os, const ScanResult& scan) {
    os << "L,rho,method,error_bound,periodic_q\n";
    for (const ScanRow& row : scan.rows) {
        os << format_g17(row.L) << ',' << format_g17(row.estimate.rho) << ','
           << to_string(row.estimate.method) << ',' << format_g17(row.estimate.error_bound) << ',';
        if (row.periodic) os << row.periodic->second;
        os << '\n';
    }
}

void write_density_csv(std::ostream& os, const DensityReport& report) {
    os << "n,max_gap\n";
    for (const auto& [n, gap] : report.gap_history)
        os << n << ',' << format_g17(gap) << '\n';
}

void write_gamma_csv(std::ostream& os, const GammaGeometry& geo) {
    os << "component_id,theta1,theta2\n";
    for (std::size_t p = 0; p < geo.polylines.size(); ++p)
        for (const AngleConfig& v : geo.polylines[p])
            os << geo.polyline_component[p] << ',' << format_g17(v.theta1) << ','
               << format_g17(v.theta2) << '\n';
}

namespace {

void svg_chain(std::ostream& os, const PlanarConfig& cfg, const char* color, double width) {
    os << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
       << "\" points=\"" << format_g17(cfg.a.x) << ',' << format_g17(cfg.a.y) << ' '
       << format_g17(cfg.b.x) << ',' << format_g17(cfg.b.y) << ' ' << format_g17(cfg.c.x) << ','
       << format_g17(cfg.c.y) << ' ' << format_g17(cfg.d.x) << ',' << format_g17(cfg.d.y)
       << "\"/>\n";
}

}  // namespace

void write_orbit_svg(std::ostream& os, const Linkage& lk, const OrbitTrace& trace) {
    double r = lk.l1 + lk.l2 + lk.l3;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_g17(-r) << ' '
       << format_g17(-r) << ' ' << format_g17(lk.L + 2.0 * r) << ' ' << format_g17(2.0 * r)
       << "\">\n";
    // Flip the y axis so positive angles read counterclockwise.
    os << " <g transform=\"scale(1,-1)\">\n";
    os << "  <line x1=\"0\" y1=\"0\" x2=\"" << format_g17(lk.L)
       << "\" y2=\"0\" stroke=\"#bbbbbb\" stroke-width=\"" << format_g17(r / 150.0) << "\"/>\n";

    auto chain_of = [&](const AngleConfig& t) {
        return forward_kinematics(lk, t, 1e-6 * (1.0 + lk.L));
    };
    double width = r / 200.0;
    std::size_t count = trace.steps.size();
    if (count > 1) {
        std::size_t stride = std::max<std::size_t>(1, count / 8);
        for (std::size_t k = stride; k + 1 < count; k += stride)
            svg_chain(os, chain_of(trace.steps[k - 1].angles), "#999999", width);
    }
    svg_chain(os, chain_of(trace.start), "#000000", 1.5 * width);
    if (count > 0) svg_chain(os, chain_of(trace.steps.back().angles), "#cc0000", 1.5 * width);
    os << " </g>\n</svg>\n";
}

void write_gamma_svg(std::ostream& os, const GammaGeometry& geo) {
    static const char* palette[] = {"#000000", "#cc0000", "#0044cc", "#008800",
                                    "#aa6600", "#7700aa"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_g17(-kPi) << ' '
       << format_g17(-kPi) << ' ' << format_g17(kTwoPi) << ' ' << format_g17(kTwoPi) << "\">\n";
    os << " <rect x=\"" << format_g17(-kPi) << "\" y=\"" << format_g17(-kPi) << "\" width=\""
       << format_g17(kTwoPi) << "\" height=\"" << format_g17(kTwoPi)
       << "\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"0.01\"/>\n";
    for (std::size_t p = 0; p < geo.polylines.size(); ++p) {
        const char* color = palette[geo.polyline_component[p] % 6];
        os << " <polyline fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"0.015\" points=\"";
        const auto& line = geo.polylines[p];
        for (std::size_t i = 0; i < line.size(); ++i) {
            // Break the polyline at torus seams so loops do not smear
            // across the square; rendering gaps there is acceptable.
            if (i > 0 && (std::abs(line[i].theta1 - line[i - 1].theta1) > kPi ||
                          std::abs(line[i].theta2 - line[i - 1].theta2) > kPi)) {
                os << "\"/>\n <polyline fill=\"none\" stroke=\"" << color
                   << "\" stroke-width=\"0.015\" points=\"";
            }
            os << format_g17(line[i].theta1) << ',' << format_g17(line[i].theta2) << ' ';
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

namespace {

nlohmann::json parse_json_arg(const std::string& arg, const char* what) {
    std::string text = arg;
    if (!arg.empty() && arg.front() != '{') {
        std::ifstream in(arg);
        if (!in) throw Error(std::string("cannot open ") + what + " file: " + arg);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid ") + what + " JSON: " + e.what());
    }
}

double json_number(const nlohmann::json& j, const char* key, const char* what) {
    if (!j.contains(key) || !j[key].is_number())
        throw Error(std::string(what) + " JSON needs numeric field \"" + key + "\"");
    return j[key].get<double>();
}

}  // namespace

Linkage linkage_from_json(const std::string& arg) {
    nlohmann::json j = parse_json_arg(arg, "linkage");
    return {json_number(j, "l1", "linkage"), json_number(j, "l2", "linkage"),
            json_number(j, "l3", "linkage"), json_number(j, "L", "linkage")};
}

AngleConfig angles_from_json(const std::string& arg) {
    nlohmann::json j = parse_json_arg(arg, "angles");
    return {json_number(j, "theta1", "angles"), json_number(j, "theta2", "angles")};
}

}  // namespace popdyn
