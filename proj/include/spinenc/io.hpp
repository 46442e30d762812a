#pragma once

// CSV output with a provenance header and a small SVG line plotter.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spinenc/errors.hpp"

namespace spinenc {

inline std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    require(row.size() == columns.size(), "csv: row has " + std::to_string(row.size()) + " cells, expected " +
                                               std::to_string(columns.size()));
    rows.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw ValidationError("csv: no column '" + name + "'");
  }

  std::vector<double> numeric(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[c] == "nan" || r[c].empty() ? std::nan("") : std::stod(r[c]));
    return out;
  }
};

// Header lines are written as "# ..." before the column row.
inline void write_csv(const std::string& path, const std::vector<std::string>& header, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "csv: cannot open " + path + " for writing");
  for (const auto& line : header) out << "# " << line << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "csv: cannot open " + path);
  CsvTable t;
  std::string line;
  bool haveHeader = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!haveHeader) {
      t.columns = std::move(cells);
      haveHeader = true;
    } else {
      cells.resize(t.columns.size());
      t.rows.push_back(std::move(cells));
    }
  }
  require(haveHeader, "csv: " + path + " has no column row");
  return t;
}

// ---------------------------------------------------------------------------

struct PlotSeries {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;
  bool log;

  double map(double v, double a, double b) const {
    const double f = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return a + f * (b - a);
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double e = std::floor(lo); e <= std::ceil(hi) + 1e-9; e += 1.0)
        if (e >= lo - 1e-9 && e <= hi + 1e-9) t.push_back(std::pow(10.0, e));
      return t;
    }
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (raw <= m * mag) {
        step = m * mag;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return t;
  }
};

inline Axis make_axis(const std::vector<PlotSeries>& series, bool useX, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series)
    for (double v : useX ? s.xs : s.ys) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      const double w = log ? std::log10(v) : v;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

}  // namespace detail

inline std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const double W = 640, H = 440, left = 70, right = 170, top = 40, bottom = 55;
  const double x0 = left, x1 = W - right, y0 = H - bottom, y1 = top;
  const auto ax = detail::make_axis(series, true, spec.logx);
  const auto ay = detail::make_axis(series, false, spec.logy);
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << detail::xml_escape(spec.title) << "</text>\n";
  o << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    const double px = ax.map(t, x0, x1);
    o << "<line x1=\"" << fmt_num(px) << "\" y1=\"" << y0 << "\" x2=\"" << fmt_num(px) << "\" y2=\"" << y0 + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << fmt_num(px) << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">" << fmt_num(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double py = ay.map(t, y0, y1);
    o << "<line x1=\"" << x0 - 5 << "\" y1=\"" << fmt_num(py) << "\" x2=\"" << x0 << "\" y2=\"" << fmt_num(py) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << x0 - 8 << "\" y=\"" << fmt_num(py + 4) << "\" text-anchor=\"end\">" << fmt_num(t) << "</text>\n";
  }
  o << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << detail::xml_escape(spec.xlabel) << "</text>\n";
  o << "<text transform=\"translate(18," << (y0 + y1) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << detail::xml_escape(spec.ylabel) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 8];
    std::string pts;
    for (std::size_t i = 0; i < series[s].xs.size() && i < series[s].ys.size(); ++i) {
      const double x = series[s].xs[i], y = series[s].ys[i];
      if (!std::isfinite(x) || !std::isfinite(y) || (spec.logx && x <= 0) || (spec.logy && y <= 0)) continue;
      const double px = ax.map(x, x0, x1), py = ay.map(y, y0, y1);
      pts += fmt_num(px) + "," + fmt_num(py) + " ";
      o << "<circle cx=\"" << fmt_num(px) << "\" cy=\"" << fmt_num(py) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << pts << "\"/>\n";
    const double ly = y1 + 14 + 18.0 * s;
    o << "<line x1=\"" << x1 + 12 << "\" y1=\"" << ly << "\" x2=\"" << x1 + 32 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\"/>";
    o << "<text x=\"" << x1 + 38 << "\" y=\"" << ly + 4 << "\">" << detail::xml_escape(series[s].name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

inline void write_svg(const std::string& path, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "svg: cannot open " + path + " for writing");
  out << render_svg(spec, series);
}

}  // namespace spinenc
