#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <ostream>

#include "cli/commands.hpp"

namespace nacmint::cli {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 60, kRight = 160, kTop = 20, kBottom = 50;
constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

double px(double a) { return kLeft + a / 100.0 * (kWidth - kLeft - kRight); }
double py(double f) { return kHeight - kBottom - f / 100.0 * (kHeight - kTop - kBottom); }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

// Scatter of (abstractiveness, factuality) per series with its trend line.
void write_svg(const std::vector<SeriesReport>& reports, std::ostream& out) {
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, kHeight);
  out << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);

  for (int t = 0; t <= 100; t += 20) {
    out << fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4}</text>\n",
        px(t), py(0), py(100), py(0) + 15, t);
    out << fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5}</text>\n",
        px(0), py(t), px(100), px(0) - 6, py(t) + 4, t);
  }
  out << fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">abstractiveness (MINT %)</text>\n",
      px(50), kHeight - 12);
  out << fmt::format(
      "<text transform=\"translate(16 {:.2f}) rotate(-90)\" text-anchor=\"middle\">"
      "factuality (%)</text>\n",
      py(50));

  for (std::size_t s = 0; s < reports.size(); ++s) {
    const auto& r = reports[s];
    const char* color = kPalette[s % kPalette.size()];
    out << fmt::format("<g class=\"series\" fill=\"{0}\" stroke=\"{0}\">\n", color);
    for (const auto& p : r.points) {
      out << fmt::format(
          "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\"><title>{}: {}</title></circle>\n",
          px(p.abstractiveness), py(p.factuality), xml_escape(r.series), xml_escape(p.label));
    }
    if (r.fit) {
      auto [lo, hi] = std::minmax_element(
          r.points.begin(), r.points.end(),
          [](const auto& a, const auto& b) { return a.abstractiveness < b.abstractiveness; });
      const double a0 = lo->abstractiveness, a1 = hi->abstractiveness;
      const double f0 = std::clamp(f_at(*r.fit, a0), 0.0, 100.0);
      const double f1 = std::clamp(f_at(*r.fit, a1), 0.0, 100.0);
      out << fmt::format(
          "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke-width=\"1.5\" "
          "stroke-dasharray=\"5,3\"/>\n",
          px(a0), py(f0), px(a1), py(f1));
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
    out << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\"/>\n", kWidth - kRight + 16, ly);
    std::string legend = xml_escape(r.series);
    if (r.fit) legend += fmt::format(" (F@50 {:.1f})", f_at(*r.fit, 50.0));
    out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" stroke=\"none\">{}</text>\n",
                       kWidth - kRight + 26, ly + 4, legend);
    out << "</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace nacmint::cli
