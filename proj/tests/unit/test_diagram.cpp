#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nodal/diagram.hpp"

using namespace nodal;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Branch tiny_branch(int id, int nodes, double mu) {
    Branch br;
    br.id = id;
    for (int i = 0; i < 6; ++i) {
        SolutionRecord rec;
        rec.state.lambda = 10.0 + i;
        rec.state.mu = mu;
        rec.state.u = {0.1 * (i + 1), 0.2 * (i + 1), 0.1 * (i + 1)};
        rec.l2 = 0.123456789012345 * (i + 1);
        rec.node_count = nodes;
        rec.residual_norm = 1e-11;
        rec.stability_hint = 1;
        br.points.push_back(rec);
    }
    return br;
}

}  // namespace

TEST_CASE("branch csv round-trips to 12 digits and is byte-stable") {
    Branch br = tiny_branch(0, 1, 45.0);
    const std::string p1 = "test_branch_a.csv", p2 = "test_branch_b.csv";
    export_branch_csv(br, p1);
    export_branch_csv(br, p2);
    CHECK(slurp(p1) == slurp(p2));

    auto rows = load_branch_rows_csv(p1);
    REQUIRE(rows.size() == br.points.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].index == static_cast<int>(i));
        CHECK(std::abs(rows[i].l2 - br.points[i].l2) <= 5e-12 * br.points[i].l2);
        CHECK(rows[i].nodes == 1);
        CHECK(rows[i].mu == 45.0);
    }
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("curve csv has the documented five columns") {
    EigencurveSample s;
    s.mode = 2;
    s.lambdas = {-1.0, 0.0, 1.0};
    s.values = {1.0, 2.0, 3.0};
    s.d1 = {std::nan(""), 1.0, std::nan("")};
    s.d2 = {std::nan(""), 0.0, std::nan("")};
    export_curves_csv({s}, "test_curve.csv");
    std::ifstream in("test_curve.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,lambda,sigma,d1,d2");
    std::string row;
    std::getline(in, row);
    CHECK(std::count(row.begin(), row.end(), ',') == 4);
    CHECK(row.find("nan") != std::string::npos);
    in.close();
    std::remove("test_curve.csv");
}

TEST_CASE("diagram assembly colors series by node count and rejects mixed mu") {
    std::vector<Branch> branches{tiny_branch(0, 0, 45.0), tiny_branch(1, 1, 45.0),
                                 tiny_branch(2, 2, 45.0)};
    DiagramOptions opt;
    opt.title = "test";
    auto doc = assemble_diagram(branches, {}, opt);
    REQUIRE(doc.series.size() == 4);  // trivial axis + three branches
    CHECK(doc.series[0].role == ColorRole::Trivial);
    CHECK(doc.series[1].role == ColorRole::Positive);
    CHECK(doc.series[2].role == ColorRole::OneNode);
    CHECK(doc.series[3].role == ColorRole::TwoNode);

    std::vector<Branch> mixed{tiny_branch(0, 0, 45.0), tiny_branch(1, 1, 46.0)};
    CHECK_THROWS_AS(assemble_diagram(mixed, {}, opt), ConsistencyError);

    auto empty_doc = assemble_diagram({}, {}, opt);
    CHECK(empty_doc.series.size() == 1);  // just the trivial axis
}

TEST_CASE("svg output is deterministic and one polyline per series") {
    std::vector<Branch> branches{tiny_branch(0, 0, 45.0), tiny_branch(1, 1, 45.0)};
    DiagramOptions opt;
    opt.title = "svg test";
    auto doc = assemble_diagram(branches, {}, opt);
    export_svg(doc, "test_a.svg");
    export_svg(doc, "test_b.svg");
    std::string svg = slurp("test_a.svg");
    CHECK(svg == slurp("test_b.svg"));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);

    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == doc.series.size());
    std::remove("test_a.svg");
    std::remove("test_b.svg");
}

TEST_CASE("empty document still renders a valid svg with axes") {
    DiagramDocument doc;
    doc.title = "empty";
    export_svg(doc, "test_empty.svg");
    std::string svg = slurp("test_empty.svg");
    CHECK(svg.find("<rect") != std::string::npos);
    CHECK(svg.find("<polyline") == std::string::npos);
    std::remove("test_empty.svg");
}

TEST_CASE("profile export brackets the grid with boundary zeros") {
    Grid g = Grid::unit(3);
    SolutionRecord rec;
    rec.state.u = {1.0, 2.0, 1.0};
    export_profile_csv(g, rec, "test_profile.csv");
    auto content = slurp("test_profile.csv");
    CHECK(content.rfind("x,u\n0,0\n", 0) == 0);
    CHECK(content.find("\n1,0\n") != std::string::npos);
    std::remove("test_profile.csv");
}

TEST_CASE("formatting uses 12 significant digits") {
    CHECK(format_value(0.123456789012345) == "0.123456789012");
    CHECK(format_value(1.0) == "1");
    CHECK(format_value(std::nan("")) == "nan");
}
