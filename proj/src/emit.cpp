#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "error.hpp"
#include "harness.hpp"
#include "numfmt.hpp"

namespace shc {

namespace {

using json = nlohmann::ordered_json;

// Non-finite values have no JSON number form; they are written as strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(ErrorCode::InvalidInput, "expected a number, got " + j.dump());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

const char* to_string(Format f) noexcept {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Svg: return "svg";
  }
  return "unknown";
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  if (name == "svg") return Format::Svg;
  fail(ErrorCode::InvalidInput, "unknown format '" + name + "' (csv, json, svg)");
}

std::string to_csv(const SweepResult& r) {
  std::ostringstream os;
  os << kSweepHeader << '\n';
  for (const SweepRow& row : r.rows) {
    os << format_double(row.alpha) << ',' << format_double(row.b) << ','
       << format_double(row.sigma) << ',' << format_double(row.lambda1) << ','
       << format_double(row.lambda2) << ',' << row.regime << ',' << format_double(row.sigma0)
       << ',' << row.method << ',' << row.error << '\n';
  }
  return os.str();
}

std::string to_json(const SweepResult& r) {
  json rows = json::array();
  for (const SweepRow& row : r.rows) {
    json j;
    j["alpha"] = number(row.alpha);
    j["b"] = number(row.b);
    j["sigma"] = number(row.sigma);
    j["lambda1"] = number(row.lambda1);
    j["lambda2"] = number(row.lambda2);
    j["regime"] = row.regime;
    j["sigma0"] = number(row.sigma0);
    j["method"] = row.method;
    j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  json doc;
  doc["rows"] = std::move(rows);
  return dump(doc);
}

SweepResult sweep_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed sweep JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
    fail(ErrorCode::InvalidInput, "sweep JSON needs a 'rows' array");
  }
  SweepResult r;
  try {
    for (const json& j : doc["rows"]) {
      SweepRow row;
      row.alpha = read_number(j.at("alpha"));
      row.b = read_number(j.at("b"));
      row.sigma = read_number(j.at("sigma"));
      row.lambda1 = read_number(j.at("lambda1"));
      row.lambda2 = read_number(j.at("lambda2"));
      row.regime = j.at("regime").get<std::string>();
      row.sigma0 = read_number(j.at("sigma0"));
      row.method = j.at("method").get<std::string>();
      row.error = j.at("error").get<std::string>();
      r.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed sweep row: ") + e.what());
  }
  return r;
}

std::string to_svg(const SweepResult& r) {
  constexpr double W = 640, H = 400, L = 60, R = 20, T = 20, B = 50;
  using Key = std::tuple<double, double, std::string>;
  std::map<Key, std::vector<std::pair<double, double>>> slices;
  std::map<Key, double> marks;
  double xmin = INFINITY, xmax = -INFINITY, ymin = 0.0, ymax = 0.0;
  for (const SweepRow& row : r.rows) {
    if (!std::isfinite(row.lambda1) || !row.error.empty()) continue;
    const Key k{row.alpha, row.b, row.method};
    slices[k].emplace_back(row.sigma, row.lambda1);
    marks[k] = row.sigma0;
    xmin = std::min(xmin, row.sigma);
    xmax = std::max(xmax, row.sigma);
    ymin = std::min(ymin, row.lambda1);
    ymax = std::max(ymax, row.lambda1);
  }
  if (slices.empty()) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return T + (ymax - y) / (ymax - ymin) * (H - T - B); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = xmin + (xmax - xmin) * i / 4.0, y = ymin + (ymax - ymin) * i / 4.0;
    os << "<text x=\"" << fixed(sx(x)) << "\" y=\"" << H - B + 16
       << "\" font-size=\"11\" text-anchor=\"middle\">" << label(x) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << fixed(sy(y) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << label(y) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10
     << "\" font-size=\"13\" text-anchor=\"middle\">sigma</text>\n";
  os << "<text x=\"14\" y=\"" << (T + H - B) / 2 << "\" font-size=\"13\" text-anchor=\"middle\""
     << " transform=\"rotate(-90 14 " << (T + H - B) / 2 << ")\">lambda1</text>\n";
  os << "<line class=\"zero\" x1=\"" << L << "\" y1=\"" << fixed(sy(0.0)) << "\" x2=\"" << W - R
     << "\" y2=\"" << fixed(sy(0.0)) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  std::size_t ci = 0;
  for (const auto& [key, points] : slices) {
    const char* color = colors[ci++ % std::size(colors)];
    os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      os << (i ? " " : "") << fixed(sx(points[i].first)) << ',' << fixed(sy(points[i].second));
    }
    os << "\"><title>alpha=" << format_double(std::get<0>(key))
       << " b=" << format_double(std::get<1>(key)) << ' ' << std::get<2>(key)
       << "</title></polyline>\n";
    const double s0 = marks[key];
    if (std::isfinite(s0) && s0 >= xmin && s0 <= xmax) {
      os << "<circle class=\"sigma0\" cx=\"" << fixed(sx(s0)) << "\" cy=\"" << fixed(sy(0.0))
         << "\" r=\"4\" fill=\"none\" stroke=\"" << color << "\"><title>sigma0="
         << format_double(s0) << "</title></circle>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string to_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream os;
  os << "alpha,sigma0\n";
  for (const CurvePoint& c : curve) {
    os << format_double(c.alpha) << ',' << format_double(c.sigma0) << '\n';
  }
  return os.str();
}

std::string to_json(const std::vector<CurvePoint>& curve) {
  json points = json::array();
  for (const CurvePoint& c : curve) {
    json j;
    j["alpha"] = number(c.alpha);
    j["sigma0"] = number(c.sigma0);
    points.push_back(std::move(j));
  }
  json doc;
  doc["curve"] = std::move(points);
  return dump(doc);
}

std::string to_csv(const DensityGrid& g) {
  std::ostringstream os;
  os << "phi,p\n";
  for (std::size_t k = 0; k < g.phi.size(); ++k) {
    os << format_double(g.phi[k]) << ',' << format_double(g.p[k]) << '\n';
  }
  return os.str();
}

std::string to_json(const DensityGrid& g) {
  json doc;
  doc["n"] = g.n;
  doc["flux"] = number(g.flux);
  json phi = json::array(), p = json::array();
  for (double x : g.phi) phi.push_back(number(x));
  for (double x : g.p) p.push_back(number(x));
  doc["phi"] = std::move(phi);
  doc["p"] = std::move(p);
  return dump(doc);
}

std::string to_csv(const PullbackResult& r) {
  std::ostringstream os;
  os << "t,diameter\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    os << format_double(r.times[k]) << ',' << format_double(r.diameters[k]) << '\n';
  }
  return os.str();
}

std::string to_json(const PullbackResult& r) {
  json doc;
  json t = json::array(), d = json::array(), cloud = json::array();
  for (double x : r.times) t.push_back(number(x));
  for (double x : r.diameters) d.push_back(number(x));
  for (const CloudPoint& c : r.cloud) cloud.push_back(json::array({number(c.y), number(c.theta)}));
  doc["t"] = std::move(t);
  doc["diameter"] = std::move(d);
  doc["cloud"] = std::move(cloud);
  return dump(doc);
}

namespace {

[[noreturn]] void no_svg(const char* what) {
  fail(ErrorCode::InvalidInput, std::string("svg output is only available for sweeps, not ") + what);
}

}  // namespace

std::string render(const SweepResult& r, Format f) {
  switch (f) {
    case Format::Csv: return to_csv(r);
    case Format::Json: return to_json(r);
    case Format::Svg: return to_svg(r);
  }
  return {};
}

std::string render(const std::vector<CurvePoint>& curve, Format f) {
  if (f == Format::Svg) no_svg("curves");
  return f == Format::Csv ? to_csv(curve) : to_json(curve);
}

std::string render(const DensityGrid& g, Format f) {
  if (f == Format::Svg) no_svg("densities");
  return f == Format::Csv ? to_csv(g) : to_json(g);
}

std::string render(const PullbackResult& r, Format f) {
  if (f == Format::Svg) no_svg("diameter series");
  return f == Format::Csv ? to_csv(r) : to_json(r);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  os << text;
  os.flush();
  if (!os) fail(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::IoFailure, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << is.rdbuf();
  if (is.bad()) fail(ErrorCode::IoFailure, "read from '" + path + "' failed");
  return os.str();
}

}  // namespace shc
