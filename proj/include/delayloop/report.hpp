#pragma once

// CSV and SVG writers for chart curves, tuned points, the reference table and traces.
// Floats are printed with 9 significant digits so output is diff-stable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "delayloop/tuning.hpp"

namespace delayloop::report {

inline std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline std::string chart_csv(const std::vector<ChartCurve>& curves)
{
    std::ostringstream os;
    os << "curve,x,y\n";
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            os << c.label << ',' << num(p.x) << ',' << num(p.y) << '\n';
        }
    }
    return os.str();
}

struct TimeSeries {
    std::vector<double> t, y, v;
};

inline std::string series_csv(const TimeSeries& s)
{
    std::ostringstream os;
    os << "t,y,v\n";
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        os << num(s.t[k]) << ',' << num(s.y[k]) << ',' << num(s.v[k]) << '\n';
    }
    return os.str();
}

inline std::string tuned_header() { return "controller,tp,h,hi,hi_tp,po_y,po_v,po_b,ise,slack_po_y,slack_po_v,binding\n"; }

inline std::string tuned_row(const TunedPoint& p)
{
    std::ostringstream os;
    os << to_string(p.controller) << ',' << num(p.tp) << ',' << num(p.gains.h) << ',' << num(p.gains.hi) << ','
       << num(p.gains.hi * p.tp) << ',' << num(p.indices.po_y) << ',' << num(p.indices.po_v) << ','
       << num(p.indices.po_b) << ',' << num(p.indices.ise) << ',' << num(p.slack.po_y) << ',' << num(p.slack.po_v)
       << ',' << p.binding << '\n';
    return os.str();
}

inline std::string table1_csv(const std::vector<Table1Row>& rows)
{
    std::ostringstream os;
    os << "tp,pi_h,pi_h_ref,pi_hi,pi_hi_ref,pi_ise,pi_ise_ref,pi_ise_tuned,pi_po_y,pi_po_v,"
          "sp_h,sp_h_ref,sp_hi,sp_hi_ref,sp_ise,sp_ise_ref,"
          "prop_hi,prop_hi_ref,prop_ise,prop_ise_ref,prop_po_y,violations\n";
    for (const auto& r : rows) {
        const auto& p = r.reference;
        std::string bad;
        for (const auto& v : r.violations) {
            bad += (bad.empty() ? "" : ";") + v.substr(0, v.find(':'));
        }
        os << num(p.tp) << ',' << num(r.pi.gains.h) << ',' << num(p.pi_h) << ',' << num(r.pi.gains.hi) << ','
           << num(p.pi_hi) << ',' << num(r.pi_ise_at_published) << ',' << num(p.pi_ise) << ','
           << num(r.pi.indices.ise) << ',' << num(r.pi.indices.po_y) << ',' << num(r.pi.indices.po_v) << ','
           << num(r.sp.gains.h) << ',' << num(p.sp_h) << ',' << num(r.sp.gains.hi) << ',' << num(p.sp_hi) << ','
           << num(r.sp_ise_at_published) << ',' << num(p.sp_ise) << ',' << num(r.prop.gains.hi) << ','
           << num(p.prop_hi) << ',' << num(r.prop_ise_at_published) << ',' << num(p.prop_ise) << ','
           << num(r.prop.indices.po_y) << ',' << bad << '\n';
    }
    return os.str();
}

/// Plain SVG rendering of chart polylines with axes and labels.
inline std::string chart_svg(const std::vector<ChartCurve>& curves, const std::string& title)
{
    constexpr double width = 640.0, height = 480.0, margin = 60.0;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    }
    if (!(x1 > x0)) {
        x0 = 0.0;
        x1 = 1.0;
    }
    if (!(y1 > y0)) {
        y0 = 0.0;
        y1 = 1.0;
    }
    y0 = std::min(y0, 0.0);
    auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
    auto py = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };

    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    const ChartAxes axes = curves.empty() ? ChartAxes{"x", "y"} : curves.front().axes;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\">" << title << "</text>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
       << height - margin << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 36 << "\" text-anchor=\"end\">" << axes.x
       << "</text>\n";
    os << "<text x=\"" << margin - 8 << "\" y=\"" << margin - 12 << "\">" << axes.y << "</text>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0;
        const double yv = y0 + (y1 - y0) * k / 4.0;
        os << "<text x=\"" << num(px(xv)) << "\" y=\"" << height - margin + 16 << "\" text-anchor=\"middle\" "
           << "font-size=\"11\">" << num(xv) << "</text>\n";
        os << "<text x=\"" << margin - 6 << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\" "
           << "font-size=\"11\">" << num(yv) << "</text>\n";
    }
    std::size_t ci = 0;
    for (const auto& c : curves) {
        const char* color = colors[ci++ % std::size(colors)];
        if (c.points.empty()) {
            continue;
        }
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (const auto& p : c.points) {
            os << num(px(p.x)) << ',' << num(py(p.y)) << ' ';
        }
        os << "\"/>\n";
        const auto& last = c.points.back();
        os << "<text x=\"" << num(px(last.x) + 4) << "\" y=\"" << num(py(last.y)) << "\" font-size=\"11\" fill=\""
           << color << "\">" << c.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace delayloop::report
