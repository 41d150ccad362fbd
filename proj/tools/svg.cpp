#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

namespace egodist::plot {

namespace {

constexpr std::array<const char*, 9> palette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                "#8c564b", "#e377c2", "#7f7f7f", "#17becf"};

std::string esc(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(4);
    s << std::fixed << v;
    return s.str();
}

struct Frame {
    double x, y, w, h;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

    double px(double v) const { return x + (v - xmin) / (xmax - xmin) * w; }
    double py(double v) const { return y + h - (v - ymin) / (ymax - ymin) * h; }
};

void header(std::ostream& out, double w, double h, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
        << w << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << esc(title)
        << "</text>\n";
}

void axes(std::ostream& out, const Frame& f, const std::string& xlabel, const std::string& ylabel, int ticks = 5) {
    out << "<rect x=\"" << f.x << "\" y=\"" << f.y << "\" width=\"" << f.w << "\" height=\"" << f.h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= ticks; ++i) {
        const double vx = f.xmin + (f.xmax - f.xmin) * i / ticks;
        const double vy = f.ymin + (f.ymax - f.ymin) * i / ticks;
        out << "<text x=\"" << num(f.px(vx)) << "\" y=\"" << num(f.y + f.h + 14) << "\" text-anchor=\"middle\">"
            << num(vx).substr(0, 5) << "</text>\n";
        out << "<text x=\"" << num(f.x - 4) << "\" y=\"" << num(f.py(vy) + 4) << "\" text-anchor=\"end\">"
            << num(vy).substr(0, 5) << "</text>\n";
    }
    out << "<text x=\"" << num(f.x + f.w / 2) << "\" y=\"" << num(f.y + f.h + 30) << "\" text-anchor=\"middle\">"
        << esc(xlabel) << "</text>\n";
    out << "<text transform=\"translate(" << num(f.x - 40) << ',' << num(f.y + f.h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << esc(ylabel) << "</text>\n";
}

void polyline(std::ostream& out, const std::vector<std::pair<double, double>>& pts, const std::string& style) {
    out << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& [x, y] : pts) out << num(x) << ',' << num(y) << ' ';
    out << "\"/>\n";
}

}  // namespace

void pr_curves(std::ostream& out, const std::string& title,
               const std::vector<std::pair<std::string, const PrCurve*>>& curves) {
    const double W = 560, H = 440;
    header(out, W, H, title);
    Frame f{60, 35, 360, 360};
    // iso-F1 lines: P = f R / (2R - f)
    for (double f1 = 0.2; f1 < 0.95; f1 += 0.2) {
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i <= 200; ++i) {
            const double r = f1 / 2 + (1 - f1 / 2) * i / 200.0;
            const double p = f1 * r / (2 * r - f1);
            if (p <= 1.0) pts.emplace_back(f.px(r), f.py(p));
        }
        polyline(out, pts, "stroke=\"#cccccc\" stroke-dasharray=\"3,3\"");
        out << "<text x=\"" << num(f.px(1.0) + 2) << "\" y=\"" << num(f.py(f1 / (2 - f1)) + 4)
            << "\" fill=\"#999999\">F1=" << num(f1).substr(0, 3) << "</text>\n";
    }
    axes(out, f, "Recall", "Precision");
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto& c = *curves[k].second;
        std::vector<std::pair<double, double>> pts;
        pts.emplace_back(f.px(0.0), f.py(c.points.empty() ? 1.0 : c.points.front().precision));
        for (const auto& p : c.points) pts.emplace_back(f.px(p.recall), f.py(p.precision));
        const std::string color = palette[k % palette.size()];
        polyline(out, pts, "stroke=\"" + color + "\" stroke-width=\"1.5\"");
        const double ly = 45 + 16.0 * static_cast<double>(k);
        out << "<line x1=\"450\" x2=\"470\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"474\" y=\"" << ly + 4 << "\">" << esc(curves[k].first) << ' ' << num(c.aupr).substr(0, 5)
            << "</text>\n";
    }
    out << "</svg>\n";
}

void heatmap(std::ostream& out, const DistanceMatrix& m, const std::string& title) {
    const std::size_t n = m.size();
    const double side = 500, cell = side / static_cast<double>(std::max<std::size_t>(n, 1));
    header(out, side + 140, side + 60, title);
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) hi = std::max(hi, m(i, j));
    if (hi <= 0.0) hi = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const int shade = static_cast<int>(std::lround(255.0 * m(i, j) / hi));
            out << "<rect x=\"" << num(40 + cell * static_cast<double>(j)) << "\" y=\""
                << num(30 + cell * static_cast<double>(i)) << "\" width=\"" << num(cell) << "\" height=\"" << num(cell)
                << "\" fill=\"rgb(" << shade << ',' << shade << ",255)\"/>\n";
        }
    if (n <= 40)
        for (std::size_t i = 0; i < n; ++i)
            out << "<text x=\"36\" y=\"" << num(30 + cell * (static_cast<double>(i) + 0.5) + 4)
                << "\" text-anchor=\"end\" font-size=\"9\">" << esc(m.labels()[i]) << "</text>\n";
    out << "<text x=\"" << side + 60 << "\" y=\"40\">0 .. " << num(hi) << "</text>\n";
    out << "</svg>\n";
}

void timeline(std::ostream& out, const std::vector<std::string>& labels, const Timeline& tl, const std::string& title) {
    const std::size_t steps = tl.steps.size();
    const double W = 640, panel = 160;
    const double H = 60 + panel * static_cast<double>(1 + tl.features.size()) + 40 * static_cast<double>(tl.features.size());
    header(out, W, H, title);
    const double xmax = static_cast<double>(std::max<std::size_t>(steps, 2) - 1);

    Frame top{70, 35, 520, panel, 0, xmax, 0, 1};
    double dmax = 0.0;
    for (const auto& s : tl.steps) dmax = std::max(dmax, s.distance);
    top.ymax = dmax > 0 ? dmax * 1.05 : 1.0;
    axes(out, top, "step", "distance to baseline");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t t = 0; t < steps; ++t) pts.emplace_back(top.px(static_cast<double>(t)), top.py(tl.steps[t].distance));
    polyline(out, pts, "stroke=\"#1f77b4\" stroke-width=\"1.5\"");

    for (std::size_t k = 0; k < tl.features.size(); ++k) {
        Frame f{70, top.y + (panel + 40) * static_cast<double>(k + 1), 520, panel, -0.5, xmax + 0.5, 0, 1};
        axes(out, f, "step", std::string(feature_name(tl.features[k])) + " quartiles");
        const double bw = std::min(20.0, f.w / static_cast<double>(steps + 1) * 0.6);
        for (std::size_t t = 0; t < steps; ++t) {
            const auto& q = tl.steps[t].feature_stats[k];
            const double cx = f.px(static_cast<double>(t));
            out << "<rect x=\"" << num(cx - bw / 2) << "\" y=\"" << num(f.py(q.q75)) << "\" width=\"" << num(bw)
                << "\" height=\"" << num(f.py(q.q25) - f.py(q.q75)) << "\" fill=\"#aec7e8\" stroke=\"#1f77b4\"/>\n";
            out << "<line x1=\"" << num(cx - bw / 2) << "\" x2=\"" << num(cx + bw / 2) << "\" y1=\"" << num(f.py(q.q50))
                << "\" y2=\"" << num(f.py(q.q50)) << "\" stroke=\"black\"/>\n";
        }
    }
    if (steps <= 30)
        for (std::size_t t = 0; t < steps && t < labels.size(); ++t)
            out << "<text x=\"" << num(top.px(static_cast<double>(t))) << "\" y=\"" << num(top.y - 3)
                << "\" text-anchor=\"middle\" font-size=\"8\">" << esc(labels[t]) << "</text>\n";
    out << "</svg>\n";
}

void dendrogram(std::ostream& out, const Dendrogram& tree, const std::string& title) {
    const std::size_t n = tree.labels.size();
    const double row = 14, W = 640, H = 70 + row * static_cast<double>(n);
    header(out, W, H, title);
    const double top_height = tree.merges.empty() ? 1.0 : tree.merges.back().height;
    Frame f{20, 35, 440, row * static_cast<double>(n), 0, top_height > 0 ? top_height : 1.0, 0,
            static_cast<double>(n)};
    // leaf order from a depth-first walk so that no branches cross
    std::vector<double> y(n + tree.merges.size());
    double next_row = 0.5;
    std::function<void(std::size_t)> place = [&](std::size_t id) {
        if (id < n) {
            y[id] = next_row;
            next_row += 1.0;
            return;
        }
        const auto& mg = tree.merges[id - n];
        place(mg.left);
        place(mg.right);
        y[id] = (y[mg.left] + y[mg.right]) / 2;
    };
    if (!tree.merges.empty()) place(n + tree.merges.size() - 1);
    // height 0 at the right edge, leaves labelled there
    auto xh = [&](double h) { return f.x + f.w - (h / f.xmax) * f.w; };
    auto yy = [&](double v) { return f.y + v * row; };
    auto height = [&](std::size_t id) { return id < n ? 0.0 : tree.merges[id - n].height; };
    for (std::size_t k = 0; k < tree.merges.size(); ++k) {
        const auto& mg = tree.merges[k];
        const double xp = xh(mg.height);
        out << "<path fill=\"none\" stroke=\"black\" d=\"M" << num(xh(height(mg.left))) << ',' << num(yy(y[mg.left]))
            << " H" << num(xp) << " V" << num(yy(y[mg.right])) << " H" << num(xh(height(mg.right))) << "\"/>\n";
    }
    for (std::size_t i = 0; i < n; ++i)
        out << "<text x=\"" << num(f.x + f.w + 4) << "\" y=\"" << num(yy(y[i]) + 4) << "\">" << esc(tree.labels[i])
            << "</text>\n";
    out << "<line x1=\"" << f.x << "\" x2=\"" << f.x + f.w << "\" y1=\"" << H - 25 << "\" y2=\"" << H - 25
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << f.x << "\" y=\"" << H - 10 << "\">" << num(top_height) << "</text>\n";
    out << "<text x=\"" << f.x + f.w << "\" y=\"" << H - 10 << "\" text-anchor=\"end\">0</text>\n";
    out << "</svg>\n";
}

}  // namespace egodist::plot
