#pragma once

#include <string>
#include <vector>

#include "nodal/continuation.hpp"

namespace nodal {

enum class ColorRole { Positive, OneNode, TwoNode, ManyNode, Eigencurve, Trivial };

ColorRole role_for_nodes(int node_count);
const char* role_color(ColorRole role);
const char* role_name(ColorRole role);

struct Series {
    std::string label;
    ColorRole role = ColorRole::Trivial;
    std::vector<std::pair<double, double>> points;  // (lambda, l2) or (lambda, sigma)
};

struct DiagramAnnotation {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

struct DiagramDocument {
    std::string title;
    std::string x_label = "lambda";
    std::string y_label = "L2 norm";
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    std::vector<Series> series;
    std::vector<DiagramAnnotation> annotations;
};

struct DiagramOptions {
    std::string title;
    bool draw_trivial_axis = true;
};

// One series per branch, colored by node count; all branches must share mu.
DiagramDocument assemble_diagram(const std::vector<Branch>& branches,
                                 const std::vector<BifurcationPoint>& bifpoints,
                                 const DiagramOptions& options);

DiagramDocument assemble_curve_diagram(const std::vector<EigencurveSample>& curves,
                                       const std::string& title);

// Deterministic text output: fixed headers, 12 significant digits, LF endings.
void export_branch_csv(const Branch& branch, const std::string& path);
void export_curves_csv(const std::vector<EigencurveSample>& curves,
                       const std::string& path);
void export_profile_csv(const Grid& grid, const SolutionRecord& rec,
                        const std::string& path);

// Reads (lambda, l2, nodes) triples back from a branch CSV as a plot series.
Series load_branch_series_csv(const std::string& path);

// Branch CSV columns parsed back into numbers (round-trip support).
struct BranchCsvRow {
    int index = 0;
    double lambda = 0.0, mu = 0.0, l2 = 0.0;
    int nodes = 0;
    double residual = 0.0;
    int stability = 0;
};
std::vector<BranchCsvRow> load_branch_rows_csv(const std::string& path);

void export_svg(const DiagramDocument& doc, const std::string& path, int width = 900,
                int height = 600);

// 12-significant-digit formatting shared by every exporter.
std::string format_value(double v);

}  // namespace nodal
