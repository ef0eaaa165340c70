#include "adiapower/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adiapower {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::invalid_argument("csv row width does not match column count");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string trajectory_csv(const Trajectory& t) {
    const std::size_t n = t.size();
    if (t.theta.size() != n || t.epsilon.size() != n || t.ratio.size() != n)
        throw std::invalid_argument("trajectory must be annotated before serialization");
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i)
        rows[i] = {t.times[i],        t.a_S[i].real(), t.a_S[i].imag(), t.a_D[i].real(),
                   t.a_D[i].imag(),   t.E_S[i],        t.E_D[i],        t.kappa[i],
                   t.delta[i],        t.theta[i],      t.epsilon[i],    t.ratio[i],
                   t.acc_S[i],        t.acc_D[i]};
    return to_csv({"t", "re_aS", "im_aS", "re_aD", "im_aD", "E_S", "E_D", "kappa", "delta",
                   "theta", "epsilon", "r", "acc_S", "acc_D"},
                  rows);
}

std::string trajectory_svg(const Trajectory& t) {
    const double w = 900.0, h = 480.0, margin = 60.0;
    const double t0 = t.times.front(), t1 = t.times.back();
    double e_max = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        e_max = std::max({e_max, t.E_S[i], t.E_D[i]});
    if (e_max <= 0.0) e_max = 1.0;

    auto x_of = [&](double time) { return margin + (w - 2 * margin) * (time - t0) / (t1 - t0); };
    auto y_of = [&](double e) { return h - margin - (h - 2 * margin) * e / e_max; };
    auto polyline = [&](const std::vector<double>& e, const char* color) {
        std::ostringstream p;
        p << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < t.size(); ++i)
            p << x_of(t.times[i]) << ',' << y_of(e[i]) << ' ';
        p << "\"/>\n";
        return p.str();
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "  <line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << w - margin
        << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n"
        << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n"
        << polyline(t.E_S, "#1f77b4") << polyline(t.E_D, "#d62728")
        << "  <text x=\"" << margin << "\" y=\"" << margin - 10
        << "\" font-family=\"sans-serif\" font-size=\"14\">"
        << "<tspan fill=\"#1f77b4\">source energy</tspan>"
        << "  <tspan fill=\"#d62728\">drain energy</tspan></text>\n"
        << "  <text x=\"" << w - margin << "\" y=\"" << h - margin + 30
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">t = "
        << format_double(t1) << " s</text>\n"
        << "  <text x=\"" << margin - 8 << "\" y=\"" << margin
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << format_double(e_max) << "</text>\n"
        << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

} // namespace adiapower
