#include "nodal/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nodal {

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ColorRole role_for_nodes(int node_count) {
    switch (node_count) {
        case 0: return ColorRole::Positive;
        case 1: return ColorRole::OneNode;
        case 2: return ColorRole::TwoNode;
        default: return ColorRole::ManyNode;
    }
}

const char* role_color(ColorRole role) {
    switch (role) {
        case ColorRole::Positive: return "#1f4fd8";   // blue
        case ColorRole::OneNode: return "#d81f1f";    // red
        case ColorRole::TwoNode: return "#000000";    // black
        case ColorRole::ManyNode: return "#9017c0";
        case ColorRole::Eigencurve: return "#0f7d3f";
        case ColorRole::Trivial: return "#8a8a8a";
    }
    return "#000000";
}

const char* role_name(ColorRole role) {
    switch (role) {
        case ColorRole::Positive: return "positive";
        case ColorRole::OneNode: return "1-node";
        case ColorRole::TwoNode: return "2-node";
        case ColorRole::ManyNode: return "n-node";
        case ColorRole::Eigencurve: return "eigencurve";
        case ColorRole::Trivial: return "trivial";
    }
    return "?";
}

DiagramDocument assemble_diagram(const std::vector<Branch>& branches,
                                 const std::vector<BifurcationPoint>& bifpoints,
                                 const DiagramOptions& options) {
    DiagramDocument doc;
    doc.title = options.title;

    double mu = branches.empty() ? 0.0 : branches.front().mu();
    for (const auto& br : branches)
        if (!br.points.empty() && std::abs(br.mu() - mu) > 1e-9)
            throw ConsistencyError("assemble_diagram: branches have mixed mu values");

    double x_lo = 0.0, x_hi = 0.0, y_hi = 1e-12;
    bool any = false;
    for (const auto& br : branches) {
        Series s;
        s.label = "branch " + std::to_string(br.id);
        s.role = br.points.empty() ? ColorRole::Trivial
                                   : role_for_nodes(br.points.front().node_count);
        for (const auto& p : br.points) {
            s.points.emplace_back(p.state.lambda, p.l2);
            x_lo = any ? std::min(x_lo, p.state.lambda) : p.state.lambda;
            x_hi = any ? std::max(x_hi, p.state.lambda) : p.state.lambda;
            y_hi = std::max(y_hi, p.l2);
            any = true;
        }
        doc.series.push_back(std::move(s));
    }
    for (const auto& bp : bifpoints) {
        doc.annotations.push_back({bp.lambda, 0.0, "n=" + std::to_string(bp.mode)});
        x_lo = any ? std::min(x_lo, bp.lambda) : bp.lambda;
        x_hi = any ? std::max(x_hi, bp.lambda) : bp.lambda;
        any = true;
    }
    if (!any) {
        x_lo = -1.0;
        x_hi = 1.0;
    }
    double pad = 0.05 * std::max(x_hi - x_lo, 1e-9);
    doc.x_min = x_lo - pad;
    doc.x_max = x_hi + pad;
    doc.y_min = 0.0;
    doc.y_max = 1.08 * y_hi;

    if (options.draw_trivial_axis) {
        Series triv;
        triv.label = "trivial";
        triv.role = ColorRole::Trivial;
        triv.points.emplace_back(doc.x_min, 0.0);
        triv.points.emplace_back(doc.x_max, 0.0);
        doc.series.insert(doc.series.begin(), std::move(triv));
    }
    return doc;
}

DiagramDocument assemble_curve_diagram(const std::vector<EigencurveSample>& curves,
                                       const std::string& title) {
    DiagramDocument doc;
    doc.title = title;
    doc.y_label = "sigma";
    bool any = false;
    for (const auto& c : curves) {
        Series s;
        s.label = "Sigma_" + std::to_string(c.mode);
        s.role = ColorRole::Eigencurve;
        for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
            s.points.emplace_back(c.lambdas[i], c.values[i]);
            if (!any) {
                doc.x_min = doc.x_max = c.lambdas[i];
                doc.y_min = doc.y_max = c.values[i];
                any = true;
            }
            doc.x_min = std::min(doc.x_min, c.lambdas[i]);
            doc.x_max = std::max(doc.x_max, c.lambdas[i]);
            doc.y_min = std::min(doc.y_min, c.values[i]);
            doc.y_max = std::max(doc.y_max, c.values[i]);
        }
        doc.series.push_back(std::move(s));
    }
    if (!any) {
        doc.x_min = -1;
        doc.x_max = 1;
        doc.y_min = 0;
        doc.y_max = 1;
    }
    return doc;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

}  // namespace

void export_branch_csv(const Branch& branch, const std::string& path) {
    auto out = open_out(path);
    out << "index,lambda,mu,l2,nodes,residual,stability\n";
    for (std::size_t i = 0; i < branch.points.size(); ++i) {
        const auto& p = branch.points[i];
        out << i << ',' << format_value(p.state.lambda) << ',' << format_value(p.state.mu)
            << ',' << format_value(p.l2) << ',' << p.node_count << ','
            << format_value(p.residual_norm) << ',' << p.stability_hint << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void export_curves_csv(const std::vector<EigencurveSample>& curves,
                       const std::string& path) {
    auto out = open_out(path);
    out << "n,lambda,sigma,d1,d2\n";
    for (const auto& c : curves)
        for (std::size_t i = 0; i < c.lambdas.size(); ++i)
            out << c.mode << ',' << format_value(c.lambdas[i]) << ','
                << format_value(c.values[i]) << ',' << format_value(c.d1[i]) << ','
                << format_value(c.d2[i]) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void export_profile_csv(const Grid& grid, const SolutionRecord& rec,
                        const std::string& path) {
    auto out = open_out(path);
    out << "x,u\n";
    out << format_value(grid.r) << ",0\n";
    for (int i = 0; i < grid.n_interior; ++i)
        out << format_value(grid.node(i)) << ',' << format_value(rec.state.u[i]) << '\n';
    out << format_value(grid.s) << ",0\n";
    if (!out) throw IoError("write failed: " + path);
}

std::vector<BranchCsvRow> load_branch_rows_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv: " + path);
    std::vector<BranchCsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        BranchCsvRow r;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        if (!(ss >> r.index >> r.lambda >> r.mu >> r.l2 >> r.nodes >> r.residual >>
              r.stability))
            throw IoError("malformed branch csv row in " + path);
        rows.push_back(r);
    }
    return rows;
}

Series load_branch_series_csv(const std::string& path) {
    Series s;
    auto rows = load_branch_rows_csv(path);
    s.label = path;
    s.role = rows.empty() ? ColorRole::Trivial : role_for_nodes(rows.front().nodes);
    for (const auto& r : rows) s.points.emplace_back(r.lambda, r.l2);
    return s;
}

namespace {

double map_x(const DiagramDocument& doc, double x, int width) {
    const double margin = 60.0;
    return margin + (x - doc.x_min) / (doc.x_max - doc.x_min) * (width - 2 * margin);
}

double map_y(const DiagramDocument& doc, double y, int height) {
    const double margin = 45.0;
    return height - margin -
           (y - doc.y_min) / (doc.y_max - doc.y_min) * (height - 2 * margin);
}

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Round tick spacing to 1/2/5 times a power of ten.
double nice_step(double span, int target_ticks) {
    double raw = span / std::max(1, target_ticks);
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double frac = raw / mag;
    double nice = frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0;
    return nice * mag;
}

}  // namespace

void export_svg(const DiagramDocument& doc, const std::string& path, int width,
                int height) {
    auto out = open_out(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!doc.title.empty())
        out << "<text x=\"" << width / 2
            << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\" "
               "font-family=\"sans-serif\">"
            << doc.title << "</text>\n";

    // axes frame
    double x0 = map_x(doc, doc.x_min, width), x1 = map_x(doc, doc.x_max, width);
    double y0 = map_y(doc, doc.y_min, height), y1 = map_y(doc, doc.y_max, height);
    out << "<rect x=\"" << fmt_coord(x0) << "\" y=\"" << fmt_coord(y1) << "\" width=\""
        << fmt_coord(x1 - x0) << "\" height=\"" << fmt_coord(y0 - y1)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    auto ticks = [&](bool xaxis) {
        double lo = xaxis ? doc.x_min : doc.y_min;
        double hi = xaxis ? doc.x_max : doc.y_max;
        double st = nice_step(hi - lo, 6);
        double first = std::ceil(lo / st) * st;
        for (double v = first; v <= hi + 1e-12 * std::abs(hi); v += st) {
            double vv = std::abs(v) < 1e-12 * st ? 0.0 : v;
            if (xaxis) {
                double px = map_x(doc, vv, width);
                out << "<line x1=\"" << fmt_coord(px) << "\" y1=\"" << fmt_coord(y0)
                    << "\" x2=\"" << fmt_coord(px) << "\" y2=\"" << fmt_coord(y0 + 5)
                    << "\" stroke=\"black\"/>\n";
                out << "<text x=\"" << fmt_coord(px) << "\" y=\"" << fmt_coord(y0 + 18)
                    << "\" text-anchor=\"middle\" font-size=\"11\" "
                       "font-family=\"sans-serif\">"
                    << format_value(vv) << "</text>\n";
            } else {
                double py = map_y(doc, vv, height);
                out << "<line x1=\"" << fmt_coord(x0 - 5) << "\" y1=\"" << fmt_coord(py)
                    << "\" x2=\"" << fmt_coord(x0) << "\" y2=\"" << fmt_coord(py)
                    << "\" stroke=\"black\"/>\n";
                out << "<text x=\"" << fmt_coord(x0 - 8) << "\" y=\"" << fmt_coord(py + 4)
                    << "\" text-anchor=\"end\" font-size=\"11\" "
                       "font-family=\"sans-serif\">"
                    << format_value(vv) << "</text>\n";
            }
        }
    };
    ticks(true);
    ticks(false);

    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << doc.x_label << "</text>\n";
    out << "<text x=\"14\" y=\"" << height / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 14 "
        << height / 2 << ")\">" << doc.y_label << "</text>\n";

    for (const auto& s : doc.series) {
        if (s.points.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << role_color(s.role)
            << "\" stroke-width=\"1.4\" points=\"";
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            if (i) out << ' ';
            out << fmt_coord(map_x(doc, s.points[i].first, width)) << ','
                << fmt_coord(map_y(doc, s.points[i].second, height));
        }
        out << "\"/>\n";
    }

    for (const auto& a : doc.annotations) {
        out << "<circle cx=\"" << fmt_coord(map_x(doc, a.x, width)) << "\" cy=\""
            << fmt_coord(map_y(doc, a.y, height))
            << "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";
    }

    // legend: unique roles in series order
    std::vector<ColorRole> seen;
    double ly = y1 + 14;
    for (const auto& s : doc.series) {
        if (std::find(seen.begin(), seen.end(), s.role) != seen.end()) continue;
        seen.push_back(s.role);
        double lx = x1 - 130;
        out << "<line x1=\"" << fmt_coord(lx) << "\" y1=\"" << fmt_coord(ly)
            << "\" x2=\"" << fmt_coord(lx + 22) << "\" y2=\"" << fmt_coord(ly)
            << "\" stroke=\"" << role_color(s.role) << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt_coord(lx + 28) << "\" y=\"" << fmt_coord(ly + 4)
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << role_name(s.role)
            << "</text>\n";
        ly += 16;
    }

    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace nodal
