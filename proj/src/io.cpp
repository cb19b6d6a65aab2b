#include "lifespan/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace lifespan {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(trim(field));
  return out;
}

double parse_double(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    std::ostringstream os;
    os << "line " << line_no << ": cannot parse number '" << text << "'";
    throw Error(os.str());
  }
  return value;
}

}  // namespace

PointCloud read_cloud(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  std::size_t dim = 0;
  Norm norm = Norm::L2;
  bool have_dim = false;
  for (const auto& field : split(line, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error("cloud header must look like dim=N,norm=l2|linf|l1");
    const auto key = trim(field.substr(0, eq));
    const auto value = trim(field.substr(eq + 1));
    if (key == "dim") {
      dim = static_cast<std::size_t>(parse_double(value, line_no));
      have_dim = true;
    } else if (key == "norm") {
      norm = parse_norm(value);
    } else {
      throw Error("unknown cloud header key '" + key + "'");
    }
  }
  if (!have_dim || dim == 0) throw Error("cloud header must declare dim >= 1");
  std::vector<Point> points;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, ',');
    if (fields.size() != dim) {
      std::ostringstream os;
      os << "line " << line_no << ": expected " << dim << " coordinates, got " << fields.size();
      throw Error(os.str());
    }
    Point p(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) p[static_cast<Eigen::Index>(k)] = parse_double(fields[k], line_no);
    points.push_back(std::move(p));
  }
  return PointCloud(std::move(points), norm);
}

FiniteMetricSpace read_distance_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    for (const auto& f : split(line, ',')) row.push_back(parse_double(f, line_no));
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
      std::ostringstream os;
      os << "distance matrix row " << i << " has " << rows[static_cast<std::size_t>(i)].size() << " entries, expected "
         << n;
      throw Error(os.str());
    }
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return FiniteMetricSpace(std::move(d));
}

std::variant<PointCloud, FiniteMetricSpace> read_data_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string first;
  while (std::getline(in, first) && trim(first).empty()) {
  }
  in.clear();
  in.seekg(0);
  if (trim(first).rfind("dim=", 0) == 0) return read_cloud(in);
  return read_distance_matrix(in);
}

std::string format_number(double x) {
  if (x == kInfinity) return "inf";
  if (x == -kInfinity) return "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void write_cloud(std::ostream& out, const PointCloud& cloud) {
  out << "dim=" << cloud.dim() << ",norm=" << to_string(cloud.norm()) << '\n';
  for (const auto& p : cloud.points()) {
    for (Eigen::Index k = 0; k < p.size(); ++k) out << (k ? "," : "") << format_number(p[k]);
    out << '\n';
  }
}

void write_distance_matrix(std::ostream& out, const FiniteMetricSpace& ms) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = 0; j < ms.size(); ++j) out << (j ? "," : "") << format_number(ms(i, j));
    out << '\n';
  }
}

namespace {

Json number_json(double x) {
  if (x == kInfinity) return "inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinity;
    throw Error("unexpected string in diagram JSON");
  }
  return j.get<double>();
}

}  // namespace

Json diagram_to_json(const PersistenceDiagram& pd) {
  Json degrees = Json::object();
  for (const auto& iv : pd.intervals()) {
    auto& list = degrees[std::to_string(iv.degree)];
    if (list.is_null()) list = Json::array();
    list.push_back(Json::array({number_json(iv.birth), number_json(iv.death)}));
  }
  Json out = {{"degrees", degrees}};
  if (!pd.warnings().empty()) out["warnings"] = pd.warnings();
  return out;
}

PersistenceDiagram diagram_from_json(const Json& j) {
  std::vector<Interval> out;
  for (const auto& [key, list] : j.at("degrees").items())
    for (const auto& pair : list)
      out.push_back(Interval{std::stoi(key), number_from_json(pair.at(0)), number_from_json(pair.at(1))});
  return PersistenceDiagram(std::move(out));
}

std::string diagram_to_csv(const PersistenceDiagram& pd) {
  std::ostringstream os;
  os << "degree,birth,death\n";
  for (const auto& iv : pd.intervals())
    os << iv.degree << ',' << format_number(iv.birth) << ',' << format_number(iv.death) << '\n';
  return os.str();
}

SimplicialCore read_core(std::istream& in) {
  SimplicialCore core;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("certificate=", 0) == 0) {
      core.certificate = parse_certificate(trim(line.substr(12)));
    } else if (line.rfind("status=", 0) == 0) {
      const auto s = trim(line.substr(7));
      if (s == "proven")
        core.status = CertificateStatus::Proven;
      else if (s == "verified")
        core.status = CertificateStatus::Verified;
      else if (s == "assumed")
        core.status = CertificateStatus::Assumed;
      else
        throw Error("unknown certificate status '" + s + "'");
    } else if (line.rfind("v;", 0) == 0) {
      const auto fields = split(line.substr(2), ',');
      Point p(static_cast<Eigen::Index>(fields.size()));
      for (std::size_t k = 0; k < fields.size(); ++k) p[static_cast<Eigen::Index>(k)] = parse_double(fields[k], line_no);
      core.vertices.push_back(std::move(p));
    } else if (line.rfind("c;", 0) == 0) {
      std::vector<std::size_t> cell;
      for (const auto& f : split(line.substr(2), ',')) cell.push_back(static_cast<std::size_t>(parse_double(f, line_no)));
      std::sort(cell.begin(), cell.end());
      core.cells.push_back(std::move(cell));
    } else {
      std::ostringstream os;
      os << "core file line " << line_no << ": unrecognized record";
      throw Error(os.str());
    }
  }
  core.close_under_faces();
  core.validate();
  // File cores are never trusted as proven.
  if (core.status == CertificateStatus::Proven && core.certificate == CoreCertificate::Tree)
    core.status = CertificateStatus::Assumed;
  return core;
}

void write_core(std::ostream& out, const SimplicialCore& core) {
  out << "certificate=" << to_string(core.certificate) << '\n';
  out << "status=" << to_string(core.status) << '\n';
  for (const auto& v : core.vertices) {
    out << "v;";
    for (Eigen::Index k = 0; k < v.size(); ++k) out << (k ? "," : "") << format_number(v[k]);
    out << '\n';
  }
  for (const auto& c : core.cells) {
    out << "c;";
    for (std::size_t k = 0; k < c.size(); ++k) out << (k ? "," : "") << c[k];
    out << '\n';
  }
}

Json to_json(const Point& p) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < p.size(); ++k) out.push_back(p[k]);
  return out;
}

Json to_json(const AffineFlat& flat) {
  Json dirs = Json::array();
  for (Eigen::Index j = 0; j < flat.directions.cols(); ++j) dirs.push_back(to_json(Point(flat.directions.col(j))));
  return {{"base", to_json(flat.base)}, {"directions", dirs}};
}

Json to_json(const SimplicialCore& core) {
  Json verts = Json::array();
  for (const auto& v : core.vertices) verts.push_back(to_json(v));
  Json cells = Json::array();
  for (const auto& c : core.cells)
    if (c.size() > 1) cells.push_back(c);
  return {{"certificate", to_string(core.certificate)},
          {"status", to_string(core.status)},
          {"vertices", verts},
          {"cells", cells}};
}

Json to_json(const WidthEstimate& w) {
  Json out = {{"kind", to_string(w.kind)}, {"k", w.k}, {"value", w.value}, {"exactness", to_string(w.exactness)}};
  if (const auto* flat = std::get_if<AffineFlat>(&w.witness)) out["witness"] = to_json(*flat);
  if (const auto* core = std::get_if<SimplicialCore>(&w.witness)) out["witness"] = to_json(*core);
  if (const auto* subset = std::get_if<std::vector<std::size_t>>(&w.witness)) out["witness"] = *subset;
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace lifespan
