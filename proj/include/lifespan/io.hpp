#pragma once

// Text formats: point-cloud CSV (`dim=N,norm=...` header), headerless
// distance-matrix CSV, diagram JSON/CSV, complex dumps and core files.

#include "lifespan/complexes.hpp"
#include "lifespan/metric_core.hpp"
#include "lifespan/persistence.hpp"
#include "lifespan/widths.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <variant>

namespace lifespan {

using Json = nlohmann::ordered_json;

PointCloud read_cloud(std::istream& in);
FiniteMetricSpace read_distance_matrix(std::istream& in);
/// Cloud if the first line is a `dim=` header, distance matrix otherwise.
std::variant<PointCloud, FiniteMetricSpace> read_data_file(const std::string& path);

void write_cloud(std::ostream& out, const PointCloud& cloud);
void write_distance_matrix(std::ostream& out, const FiniteMetricSpace& ms);

/// Shortest round-trip representation of a double.
std::string format_number(double x);

/// {"degrees": {"0": [[b, d], ...]}} with "inf" for infinite deaths.
Json diagram_to_json(const PersistenceDiagram& pd);
PersistenceDiagram diagram_from_json(const Json& j);
/// `degree,birth,death` rows with a header line.
std::string diagram_to_csv(const PersistenceDiagram& pd);

/// `certificate=<name>` and `status=<name>` lines, then `v;x0,x1,...` vertex
/// lines and `c;i,j[,k]` cell lines.
SimplicialCore read_core(std::istream& in);
void write_core(std::ostream& out, const SimplicialCore& core);

Json to_json(const Point& p);
Json to_json(const AffineFlat& flat);
Json to_json(const SimplicialCore& core);
Json to_json(const WidthEstimate& w);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace lifespan
