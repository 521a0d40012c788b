#include "relstable/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace relstable {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

std::string join_coords(const Point& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ";";
        s += format_double(p[i]);
    }
    return s;
}

Point parse_coords(const std::string& cell) {
    Point p;
    std::size_t pos = 0;
    while (pos <= cell.size()) {
        const std::size_t next = cell.find(';', pos);
        const std::string tok = cell.substr(pos, next == std::string::npos ? next : next - pos);
        if (!tok.empty()) {
            double v = 0.0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc())
                throw std::runtime_error("parse_records_csv: bad coordinate '" + tok + "'");
            p.push_back(v);
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return p;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_double(const std::string& tok) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc())
        throw std::runtime_error("parse_records_csv: bad number '" + tok + "'");
    return v;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string csv_string(const RatioReport& report) {
    std::string out = "d,alpha,m,t,x,y,comparator,estimate,std_err,ratio\n";
    for (const auto& rec : report.records) {
        out += std::to_string(report.d);
        out += ",";
        out += format_double(report.alpha);
        out += ",";
        out += format_double(rec.m);
        out += ",";
        out += format_double(rec.t);
        out += ",";
        out += csv_quote(join_coords(rec.x));
        out += ",";
        out += csv_quote(join_coords(rec.y));
        out += ",";
        out += format_double(rec.comparator);
        out += ",";
        out += format_double(rec.estimate);
        out += ",";
        out += format_double(rec.std_err);
        out += ",";
        out += format_double(rec.ratio);
        out += "\n";
    }
    return out;
}

void emit_csv(const RatioReport& report, const std::string& path) {
    write_file(path, csv_string(report));
}

std::vector<RatioRecord> parse_records_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("parse_records_csv: empty input");
    if (line.rfind("d,alpha,m,t,x,y", 0) != 0)
        throw std::runtime_error("parse_records_csv: unexpected header");
    std::vector<RatioRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 10)
            throw std::runtime_error("parse_records_csv: expected 10 cells per row");
        RatioRecord rec;
        rec.m = parse_double(cells[2]);
        rec.t = parse_double(cells[3]);
        rec.x = parse_coords(cells[4]);
        rec.y = parse_coords(cells[5]);
        rec.comparator = parse_double(cells[6]);
        rec.estimate = parse_double(cells[7]);
        rec.std_err = parse_double(cells[8]);
        rec.ratio = parse_double(cells[9]);
        rec.dist = dist(rec.x, rec.y);
        rec.retained = rec.ratio > 0.0;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<RatioRecord> parse_records_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_records_csv_text(buf.str());
}

std::string json_string(const RatioReport& report) {
    ordered_json j;
    ordered_json config = ordered_json::object();
    for (const auto& [k, v] : report.config_echo) config[k] = v;
    j["config"] = config;

    const auto& s = report.summary;
    ordered_json fitted = ordered_json::object();
    fitted["C"] = s.fitted_c > 0.0 ? ordered_json(s.fitted_c) : ordered_json(nullptr);
    fitted["c2_inner"] = s.has_c2 ? ordered_json(s.fitted_c2) : ordered_json(nullptr);
    fitted["gamma"] = s.has_gamma ? ordered_json(s.fitted_gamma) : ordered_json(nullptr);
    fitted["lambda1"] = s.has_lambda1 ? ordered_json(s.fitted_lambda1) : ordered_json(nullptr);

    ordered_json summary = ordered_json::object();
    summary["min_ratio"] = s.min_ratio;
    summary["max_ratio"] = s.max_ratio;
    summary["geo_mean"] = s.geo_mean;
    summary["log_spread"] = s.log_spread;
    summary["fitted"] = fitted;
    j["summary"] = summary;
    j["verdict"] = s.pass ? "pass" : "fail";
    j["dropped_points"] = s.dropped_points;
    if (!s.reason.empty()) j["reason"] = s.reason;
    return j.dump(2) + "\n";
}

void emit_report_json(const RatioReport& report, const std::string& path) {
    write_file(path, json_string(report));
}

std::string svg_string(const RatioReport& report) {
    const int width = 640, height = 420;
    const int ml = 60, mr = 20, mt = 28, mb = 44;
    const double pw = width - ml - mr, ph = height - mt - mb;

    const auto axis_value = [&](const RatioRecord& rec) {
        if (report.axis == "t") return rec.t;
        if (report.axis == "delta") return std::min(rec.delta_x, rec.delta_y);
        return rec.dist;
    };

    std::vector<std::pair<double, double>> pts;  // (axis, log ratio)
    for (const auto& rec : report.records)
        if (rec.retained && rec.ratio > 0.0)
            pts.emplace_back(axis_value(rec), std::log(rec.ratio));

    const double log_c =
        report.summary.fitted_c > 0.0 ? std::log(report.summary.fitted_c) : 1.0;
    double x_lo = 0.0, x_hi = 1.0, y_abs = std::max(log_c * 1.15, 0.1);
    if (!pts.empty()) {
        x_lo = x_hi = pts.front().first;
        for (const auto& [x, y] : pts) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_abs = std::max(y_abs, std::abs(y) * 1.15);
        }
        if (x_hi == x_lo) {
            x_lo -= 0.5;
            x_hi += 0.5;
        }
    }
    const auto sx = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    const auto sy = [&](double y) { return mt + (1.0 - (y + y_abs) / (2.0 * y_abs)) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<!-- generator: relstable 0.1.0 -->\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << fmt6(pw)
        << "\" height=\"" << fmt6(ph) << "\" fill=\"none\" stroke=\"#888\"/>\n";

    // zero line and fitted band
    svg << "<line x1=\"" << ml << "\" y1=\"" << fmt6(sy(0.0)) << "\" x2=\"" << ml + pw
        << "\" y2=\"" << fmt6(sy(0.0)) << "\" stroke=\"#bbb\" stroke-dasharray=\"3,3\"/>\n";
    for (double b : {log_c, -log_c})
        svg << "<line x1=\"" << ml << "\" y1=\"" << fmt6(sy(b)) << "\" x2=\"" << ml + pw
            << "\" y2=\"" << fmt6(sy(b))
            << "\" stroke=\"#c33\" stroke-width=\"1.2\"/>\n";

    for (const auto& [x, y] : pts)
        svg << "<circle cx=\"" << fmt6(sx(x)) << "\" cy=\"" << fmt6(sy(y))
            << "\" r=\"2.4\" fill=\"#26c\" fill-opacity=\"0.75\"/>\n";

    svg << "<text x=\"" << ml << "\" y=\"" << mt - 10
        << "\" font-family=\"sans-serif\" font-size=\"12\">log-ratio vs " << report.axis
        << " (band: C=" << fmt6(report.summary.fitted_c) << ", points=" << pts.size()
        << ")</text>\n";
    svg << "<text x=\"" << ml << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << report.axis << " in ["
        << fmt6(x_lo) << ", " << fmt6(x_hi) << "]</text>\n";
    svg << "<text x=\"8\" y=\"" << mt + 12
        << "\" font-family=\"sans-serif\" font-size=\"11\">+lnC</text>\n";
    svg << "<text x=\"8\" y=\"" << mt + ph
        << "\" font-family=\"sans-serif\" font-size=\"11\">-lnC</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot_svg(const RatioReport& report, const std::string& path) {
    if (report.records.empty())
        throw std::runtime_error("emit_plot_svg: report has no records");
    write_file(path, svg_string(report));
}

}  // namespace relstable
