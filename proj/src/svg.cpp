#include "emt/svg.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace emt::svg {

namespace {

constexpr double kExtent = 1.5;
constexpr double kScale = 1000.0 / (2.0 * kExtent);

// Two decimals is plenty at this resolution and keeps output byte-stable.
std::string num(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                       std::chars_format::fixed, 2);
  return std::string(buf.data(), end);
}

double px(double x) { return 500.0 + kScale * x; }
double py(double y) { return 500.0 - kScale * y; }

std::string point(double x, double y) { return num(px(x)) + " " + num(py(y)); }

double potential(const field::FieldSolution& s, double x, double y) {
  return field::eval_potential(s, std::hypot(x, y), std::atan2(y, x));
}

struct Spiral {
  double phi;
  double r_in;
  double r_out;
};

std::optional<Spiral> spiral_of(const field::FieldSolution& s) {
  if (!s.geometry) return std::nullopt;
  if (const auto* g = std::get_if<SpiralWithCore>(&*s.geometry))
    return Spiral{g->spiral.phi, g->r0, 1.0};
  if (const auto* g = std::get_if<BasicSpiral>(&*s.geometry)) return Spiral{g->phi, 0.02, 1.0};
  if (const auto* g = std::get_if<SpiralWithShell>(&*s.geometry))
    return Spiral{g->spiral.phi, 0.02, g->r0};
  return std::nullopt;
}

void equipotentials(const field::FieldSolution& s, std::string& out) {
  constexpr int n = 150;
  const double h = 2.0 * kExtent / n;
  std::vector<double> u((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) u[j * (n + 1) + i] = potential(s, -kExtent + i * h, -kExtent + j * h);

  out += "<g fill=\"none\" stroke=\"#3060a0\" stroke-width=\"1.2\">\n";
  for (int level = -7; level <= 7; ++level) {
    const double c = 0.2 * level;
    std::string path;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double x0 = -kExtent + i * h;
        const double y0 = -kExtent + j * h;
        // Corners counter-clockwise from bottom-left, edges between them.
        const std::array<double, 4> v{u[j * (n + 1) + i], u[j * (n + 1) + i + 1],
                                      u[(j + 1) * (n + 1) + i + 1], u[(j + 1) * (n + 1) + i]};
        const std::array<std::array<double, 2>, 4> p{{{x0, y0}, {x0 + h, y0}, {x0 + h, y0 + h}, {x0, y0 + h}}};
        std::vector<std::array<double, 2>> hits;
        for (int e = 0; e < 4; ++e) {
          const double a = v[e] - c;
          const double b = v[(e + 1) % 4] - c;
          if ((a < 0.0) != (b < 0.0)) {
            const double t = a / (a - b);
            hits.push_back({p[e][0] + t * (p[(e + 1) % 4][0] - p[e][0]),
                            p[e][1] + t * (p[(e + 1) % 4][1] - p[e][1])});
          }
        }
        for (std::size_t k = 0; k + 1 < hits.size(); k += 2)
          path += "M" + point(hits[k][0], hits[k][1]) + "L" + point(hits[k + 1][0], hits[k + 1][1]);
      }
    }
    if (!path.empty()) out += "<path d=\"" + path + "\"/>\n";
  }
  out += "</g>\n";
}

void arrows(const field::FieldSolution& s, std::string& out) {
  out += "<g stroke=\"#c03020\" stroke-width=\"1.5\" fill=\"#c03020\">\n";
  const double len = 0.07;
  for (int ring = 0; ring <= 9; ++ring) {
    const double r = 0.15 * ring;
    const int count = ring == 0 ? 1 : 6 * ring;
    for (int k = 0; k < count; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / count;
      const auto j = field::eval_current(s, r, theta);
      const double jx = j.j_r * std::cos(theta) - j.j_theta * std::sin(theta);
      const double jy = j.j_r * std::sin(theta) + j.j_theta * std::cos(theta);
      const double m = std::hypot(jx, jy);
      if (!(m > 1e-12)) continue;
      const double dx = len * jx / m;
      const double dy = len * jy / m;
      const double x = r * std::cos(theta);
      const double y = r * std::sin(theta);
      const double tx = x + 0.5 * dx;
      const double ty = y + 0.5 * dy;
      out += "<line x1=\"" + num(px(x - 0.5 * dx)) + "\" y1=\"" + num(py(y - 0.5 * dy)) +
             "\" x2=\"" + num(px(tx)) + "\" y2=\"" + num(py(ty)) + "\"/>";
      // Arrow head: a small triangle at the tip.
      const double bx = tx - 0.35 * dx;
      const double by = ty - 0.35 * dy;
      out += "<polygon points=\"" + num(px(tx)) + "," + num(py(ty)) + " " +
             num(px(bx - 0.2 * dy)) + "," + num(py(by + 0.2 * dx)) + " " +
             num(px(bx + 0.2 * dy)) + "," + num(py(by - 0.2 * dx)) + "\"/>\n";
    }
  }
  out += "</g>\n";
}

}  // namespace

std::string field_plot(const field::FieldSolution& s) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" "
      "viewBox=\"0 0 1000 1000\">\n"
      "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n";

  if (const auto sp = spiral_of(s); sp && std::abs(sp->phi) > 1e-12) {
    out += "<g fill=\"none\" stroke=\"#a0a0a0\" stroke-width=\"0.8\">\n";
    const double slope = std::tan(sp->phi);
    for (int k = 0; k < 16; ++k) {
      const double theta0 = 2.0 * std::numbers::pi * k / 16;
      std::string path;
      constexpr int samples = 200;
      for (int i = 0; i <= samples; ++i) {
        const double r = sp->r_in * std::pow(sp->r_out / sp->r_in, static_cast<double>(i) / samples);
        const double theta = theta0 + slope * std::log(r);
        path += (i == 0 ? "M" : "L") + point(r * std::cos(theta), r * std::sin(theta));
      }
      out += "<path d=\"" + path + "\"/>\n";
    }
    out += "</g>\n";
  }

  equipotentials(s, out);

  out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"2\" stroke-dasharray=\"8 4\">\n";
  for (const auto& layer : s.layers)
    out += "<circle cx=\"500.00\" cy=\"500.00\" r=\"" + num(kScale * layer.r_outer) + "\"/>\n";
  out += "</g>\n";

  arrows(s, out);
  out += "</svg>\n";
  return out;
}

}  // namespace emt::svg
