#include "fuelcast/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <vector>

#include "fuelcast/errors.hpp"

namespace fuelcast {

namespace {

constexpr double kWidth = 900;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;

void appendf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  out += buf;
}

// 1, 2 or 5 times a power of ten, giving about `target` intervals over `span`.
double nice_step(double span, int target) {
  double raw = span / target;
  double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * magnitude) return m * magnitude;
  }
  return 10.0 * magnitude;
}

}  // namespace

std::string render_state_chart(const Projection& projection, StateId state) {
  std::vector<std::pair<MonthKey, double>> actual;
  std::vector<std::pair<MonthKey, double>> predicted;
  for (const auto& e : projection.entries()) {
    if (e.state != state) continue;
    (e.source == Source::actual ? actual : predicted).emplace_back(e.when, e.mgal);
  }
  if (actual.empty() && predicted.empty()) {
    throw DataError("no projection entries for " + std::string(state.code()));
  }

  MonthKey first = (actual.empty() ? predicted : actual).front().first;
  MonthKey last = first;
  double lo = 0.0;
  double hi = 0.0;
  bool seeded = false;
  for (const auto* series : {&actual, &predicted}) {
    for (const auto& [when, v] : *series) {
      first = std::min(first, when);
      last = std::max(last, when);
      lo = seeded ? std::min(lo, v) : v;
      hi = seeded ? std::max(hi, v) : v;
      seeded = true;
    }
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  double step = nice_step(hi - lo, 5);
  lo = std::floor(lo / step) * step;
  hi = std::ceil(hi / step) * step;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const int span = std::max(1, months_between(first, last));
  auto px = [&](MonthKey t) { return kLeft + plot_w * months_between(first, t) / span; };
  auto py = [&](double v) { return kTop + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  std::string out;
  appendf(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
          kWidth, kHeight, kWidth, kHeight);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  appendf(out,
          "<text x=\"%.1f\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">%s (%s): actual vs. "
          "predicted %s consumption</text>\n",
          kWidth / 2, std::string(state.info().name).c_str(),
          std::string(state.code()).c_str(), projection.kind() == FuelKind::gasoline ? "gasoline" : "special fuel");

  // axes
  appendf(out, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", kLeft, kTop + plot_h,
          kLeft + plot_w, kTop + plot_h);
  appendf(out, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", kLeft, kTop, kLeft,
          kTop + plot_h);

  for (int k = 0;; ++k) {
    double v = lo + k * step;
    if (v > hi + step * 1e-9) break;
    double y = py(v);
    appendf(out, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n", kLeft, y, kLeft + plot_w, y);
    appendf(out,
            "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">%g</text>\n",
            kLeft - 6, y + 4, v);
  }
  for (int year = first.year(); year <= last.year(); ++year) {
    MonthKey jan(year, 1);
    if (jan < first) continue;
    double x = px(jan);
    appendf(out, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", x, kTop + plot_h, x,
            kTop + plot_h + 5);
    appendf(out,
            "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">%d</text>\n",
            x, kTop + plot_h + 18, year);
  }
  appendf(out,
          "<text x=\"16\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
          "transform=\"rotate(-90 16 %.1f)\">million gallons</text>\n",
          kTop + plot_h / 2, kTop + plot_h / 2);

  auto path = [&](const std::vector<std::pair<MonthKey, double>>& series, const char* colour, const char* dash) {
    if (series.empty()) return;
    out += "<path fill=\"none\" stroke=\"";
    out += colour;
    out += "\" stroke-width=\"1.5\"";
    if (dash != nullptr) appendf(out, " stroke-dasharray=\"%s\"", dash);
    out += " d=\"";
    for (std::size_t i = 0; i < series.size(); ++i) {
      appendf(out, "%s%.2f %.2f", i == 0 ? "M" : " L", px(series[i].first), py(series[i].second));
    }
    out += "\"/>\n";
  };
  path(actual, "#1f77b4", nullptr);
  path(predicted, "#ff7f0e", "6 3");

  // legend
  double lx = kLeft + 12;
  double ly = kTop + 12;
  appendf(out, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n", lx, ly,
          lx + 24, ly);
  appendf(out, "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\">Actual</text>\n", lx + 30, ly + 4);
  appendf(out,
          "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ff7f0e\" stroke-width=\"2\" "
          "stroke-dasharray=\"6 3\"/>\n",
          lx, ly + 18, lx + 24, ly + 18);
  appendf(out, "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\">Predicted</text>\n", lx + 30,
          ly + 22);
  out += "</svg>\n";
  return out;
}

}  // namespace fuelcast
