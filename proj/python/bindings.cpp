#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "blockage/cell.hpp"
#include "blockage/config.hpp"
#include "blockage/mc.hpp"

namespace py = pybind11;
using namespace blockage;

PYBIND11_MODULE(mmwave_blockage, m) {
    m.doc() =
        "Blockage analysis and relay placement for mmWave cells: analytic "
        "stochastic-geometry formulas, exact multi-link correlation via "
        "blocking-region unions, and a seeded Monte Carlo oracle.";

    py::class_<Point2>(m, "Point2")
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Point2::x)
        .def_readwrite("y", &Point2::y)
        .def("__repr__", [](const Point2& p) {
            return "Point2(" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                   ")";
        });

    py::class_<ConvexPolygon>(m, "ConvexPolygon")
        .def_static("from_points",
                    [](const std::vector<std::pair<double, double>>& pts) {
                        std::vector<Point2> v;
                        for (auto [x, y] : pts) v.push_back({x, y});
                        return ConvexPolygon::from_points(std::move(v));
                    })
        .def("vertices",
             [](const ConvexPolygon& p) {
                 std::vector<std::pair<double, double>> out;
                 for (const Point2& v : p.vertices()) out.emplace_back(v.x, v.y);
                 return out;
             })
        .def("empty", &ConvexPolygon::empty)
        .def("area", [](const ConvexPolygon& p) { return polygon_area(p); });

    m.def("minkowski_segment_rect",
          [](std::pair<double, double> p0, std::pair<double, double> p1,
             double l, double w, double theta) {
              return minkowski_segment_rect({p0.first, p0.second},
                                            {p1.first, p1.second}, l, w, theta);
          },
          py::arg("p0"), py::arg("p1"), py::arg("l"), py::arg("w"),
          py::arg("theta"));
    m.def("convex_intersect", &convex_intersect);
    m.def("polygon_area", &polygon_area);
    m.def("union_area", [](const std::vector<ConvexPolygon>& polys) {
        return union_area(polys);
    });

    py::class_<ScalarDist>(m, "ScalarDist")
        .def_static("uniform", &ScalarDist::uniform, py::arg("max"))
        .def_static("deterministic", &ScalarDist::deterministic, py::arg("value"))
        .def_property_readonly("mean", &ScalarDist::mean)
        .def("cdf", &ScalarDist::cdf);

    py::class_<ShapeDistribution>(m, "ShapeDistribution")
        .def(py::init<>())
        .def_readwrite("length", &ShapeDistribution::length)
        .def_readwrite("width", &ShapeDistribution::width)
        .def_readwrite("height", &ShapeDistribution::height)
        .def_readwrite("orientation", &ShapeDistribution::orientation)
        .def_readwrite("density", &ShapeDistribution::density)
        .def("validate", &ShapeDistribution::validate);

    py::class_<Link>(m, "Link")
        .def(py::init([](std::pair<double, double> a, std::pair<double, double> b,
                         double height_a, double height_b) {
                 return Link{{a.first, a.second}, {b.first, b.second}, height_a,
                             height_b};
             }),
             py::arg("a"), py::arg("b"), py::arg("height_a"), py::arg("height_b"))
        .def_readwrite("height_a", &Link::height_a)
        .def_readwrite("height_b", &Link::height_b)
        .def("ground_distance", &Link::ground_distance);

    m.def("sweep_rate", &sweep_rate);
    m.def("footprint_coverage", &footprint_coverage);
    m.def("sweep_height_factor", &sweep_height_factor, py::arg("h_hi"),
          py::arg("h_lo"), py::arg("height"));
    m.def("footprint_height_factor", &footprint_height_factor, py::arg("h_lo"),
          py::arg("height"));
    m.def("expected_blockers", &expected_blockers);
    m.def("p_blocked", &p_blocked);
    m.def("blocking_region", &blocking_region, py::arg("link"), py::arg("l"),
          py::arg("w"), py::arg("h"), py::arg("theta"));

    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init<>())
        .def_readwrite("nodes_l", &QuadratureSpec::nodes_l)
        .def_readwrite("nodes_w", &QuadratureSpec::nodes_w)
        .def_readwrite("nodes_h", &QuadratureSpec::nodes_h)
        .def_readwrite("nodes_theta", &QuadratureSpec::nodes_theta);

    py::class_<LinkSet>(m, "LinkSet")
        .def(py::init<>())
        .def_readwrite("links", &LinkSet::links)
        .def_readwrite("clear", &LinkSet::clear);

    m.def("expected_blockers_union",
          [](const std::vector<Link>& links, const ShapeDistribution& dist,
             const QuadratureSpec& quad) {
              return expected_blockers_union(links, dist, quad);
          },
          py::arg("links"), py::arg("dist"),
          py::arg("quad") = QuadratureSpec{});
    m.def("p_all_blocked", &p_all_blocked, py::arg("link_set"), py::arg("dist"),
          py::arg("quad") = QuadratureSpec{});
    m.def("p_all_blocked_independent", &p_all_blocked_independent,
          py::arg("link_set"), py::arg("dist"), py::arg("quad") = QuadratureSpec{});

    py::class_<SampleRegion>(m, "SampleRegion")
        .def(py::init([](std::pair<double, double> center, double radius) {
                 return SampleRegion{{center.first, center.second}, radius};
             }),
             py::arg("center"), py::arg("radius"))
        .def_readwrite("radius", &SampleRegion::radius);

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("p_hat", &Estimate::p_hat)
        .def_readonly("std_error", &Estimate::std_error)
        .def_readonly("trials", &Estimate::trials)
        .def("__repr__", [](const Estimate& e) {
            return "Estimate(p_hat=" + std::to_string(e.p_hat) +
                   ", std_error=" + std::to_string(e.std_error) + ")";
        });

    m.def("default_sample_region",
          [](const std::vector<Link>& links, const ShapeDistribution& dist) {
              return default_sample_region(links, dist);
          });
    m.def("estimate_p_all_blocked", &estimate_p_all_blocked, py::arg("link_set"),
          py::arg("dist"), py::arg("region"), py::arg("trials"), py::arg("seed"));

    py::class_<LinkBudget>(m, "LinkBudget")
        .def(py::init<>())
        .def_readwrite("tx_power_dbm", &LinkBudget::tx_power_dbm)
        .def_readwrite("tx_gain_dbi", &LinkBudget::tx_gain_dbi)
        .def_readwrite("rx_gain_dbi", &LinkBudget::rx_gain_dbi)
        .def_readwrite("sensitivity_dbm", &LinkBudget::sensitivity_dbm)
        .def_readwrite("frequency_hz", &LinkBudget::frequency_hz)
        .def_readwrite("pathloss_exponent", &LinkBudget::pathloss_exponent);

    py::class_<CellScenario>(m, "CellScenario")
        .def(py::init<>())
        .def_readwrite("radius", &CellScenario::radius)
        .def_readwrite("bs_height", &CellScenario::bs_height)
        .def_readwrite("ue_height", &CellScenario::ue_height)
        .def_readwrite("relay_count", &CellScenario::relay_count)
        .def_readwrite("relay_radius", &CellScenario::relay_radius)
        .def_readwrite("relay_height", &CellScenario::relay_height)
        .def_readwrite("sectorized", &CellScenario::sectorized)
        .def_readwrite("blockers", &CellScenario::blockers)
        .def_readwrite("budget_bs_ue", &CellScenario::budget_bs_ue)
        .def_readwrite("budget_bs_rs", &CellScenario::budget_bs_rs)
        .def_readwrite("budget_rs_ue", &CellScenario::budget_rs_ue)
        .def_readwrite("bs_relay_los_assumed", &CellScenario::bs_relay_los_assumed)
        .def_readwrite("use_budgets", &CellScenario::use_budgets);

    py::class_<UserPosition>(m, "UserPosition")
        .def(py::init<double, double>(), py::arg("distance"), py::arg("azimuth"))
        .def_readwrite("distance", &UserPosition::distance)
        .def_readwrite("azimuth", &UserPosition::azimuth);

    m.def("relay_azimuths", &relay_azimuths);
    m.def("path_loss_db", &path_loss_db);
    m.def("max_allowable_path_loss", &max_allowable_path_loss);
    m.def("link_feasible", &link_feasible);
    m.def("failure_prob_at", &failure_prob_at, py::arg("user"), py::arg("scenario"),
          py::arg("quad") = QuadratureSpec{});
    m.def("failure_prob_at_independent", &failure_prob_at_independent,
          py::arg("user"), py::arg("scenario"), py::arg("quad") = QuadratureSpec{});
    m.def("average_failure_prob", &average_failure_prob, py::arg("scenario"),
          py::arg("quad") = QuadratureSpec{}, py::arg("radial_nodes") = 24,
          py::arg("azimuth_nodes") = 8);
    m.def("mean_single_link_blockage", &mean_single_link_blockage,
          py::arg("radius"), py::arg("dist"), py::arg("bs_height"),
          py::arg("ue_height"));

    py::class_<RelayPlacement>(m, "RelayPlacement")
        .def_readonly("relay_radius", &RelayPlacement::relay_radius)
        .def_readonly("relay_height", &RelayPlacement::relay_height)
        .def_readonly("failure", &RelayPlacement::failure);

    py::class_<OptimizeResult::Row>(m, "OptimizeRow")
        .def_readonly("relay_radius", &OptimizeResult::Row::relay_radius)
        .def_readonly("relay_height", &OptimizeResult::Row::relay_height)
        .def_readonly("p_blocking_only", &OptimizeResult::Row::p_blocking_only)
        .def_readonly("p_with_budget", &OptimizeResult::Row::p_with_budget);

    py::class_<OptimizeResult>(m, "OptimizeResult")
        .def_readonly("table", &OptimizeResult::table)
        .def_readonly("best", &OptimizeResult::best)
        .def_readonly("best_blocking_only", &OptimizeResult::best_blocking_only)
        .def_readonly("best_with_budget", &OptimizeResult::best_with_budget);

    m.def("optimize_relays",
          [](const CellScenario& s, const std::vector<double>& r_grid,
             const std::vector<double>& h_grid, const QuadratureSpec& quad,
             int radial_nodes, int azimuth_nodes) {
              return optimize_relays(s, r_grid, h_grid, quad, radial_nodes,
                                     azimuth_nodes);
          },
          py::arg("scenario"), py::arg("r_grid"), py::arg("h_grid"),
          py::arg("quad") = QuadratureSpec{}, py::arg("radial_nodes") = 24,
          py::arg("azimuth_nodes") = 8);

    // Table-defaults scenario, handy as a starting point.
    m.def("default_scenario", [] { return default_config().scenario; });
}
