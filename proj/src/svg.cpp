#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "navcon/errors.hpp"
#include "navcon/trace_io.hpp"

namespace navcon {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

void appendf(std::string& s, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  s += buf;
}

// World y points up; SVG y points down.
double flip(double y) { return -y; }

void arrow(std::string& s, Vec2 p, double heading, double len, const char* color) {
  const Vec2 tip{p.x + len * std::cos(heading), p.y + len * std::sin(heading)};
  appendf(s,
          "  <line class=\"arrow\" x1=\"%.6g\" y1=\"%.6g\" x2=\"%.6g\" y2=\"%.6g\" "
          "stroke=\"%s\" stroke-width=\"0.04\" marker-end=\"url(#ah)\"/>\n",
          p.x, flip(p.y), tip.x, flip(tip.y), color);
}

}  // namespace

std::string render_svg(const SimTrace& trace) {
  if (trace.records.empty()) throw InvalidInput("render_svg: empty trace");

  const double R = trace.spec.params.workspace_radius;
  const double margin = 0.08 * R + 0.3;
  const double lo = -(R + margin);
  const double size = 2.0 * (R + margin);
  const bool unicycle = trace.spec.mode == SimMode::rendezvous;
  const StepRecord& first = trace.records.front();
  const StepRecord& last = trace.records.back();
  const std::size_t n = first.agents.size();

  std::string s;
  appendf(s,
          "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6g %.6g %.6g %.6g\">\n",
          lo, lo, size, size);
  s += "  <defs><marker id=\"ah\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" "
       "markerWidth=\"5\" markerHeight=\"5\" orient=\"auto\">"
       "<path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>\n";
  appendf(s,
          "  <circle class=\"workspace\" cx=\"0\" cy=\"0\" r=\"%.6g\" fill=\"none\" "
          "stroke=\"#333\" stroke-width=\"0.05\"/>\n",
          R);

  for (const Vec2& o : trace.spec.obstacles)
    appendf(s, "  <circle class=\"obstacle\" cx=\"%.6g\" cy=\"%.6g\" r=\"0.08\" fill=\"#000\"/>\n",
            o.x, flip(o.y));

  // Final maintained links.
  for (const auto& [i, j] : last.links)
    appendf(s,
            "  <line class=\"link\" x1=\"%.6g\" y1=\"%.6g\" x2=\"%.6g\" y2=\"%.6g\" "
            "stroke=\"#999\" stroke-width=\"0.03\"/>\n",
            last.agents[i].position.x, flip(last.agents[i].position.y),
            last.agents[j].position.x, flip(last.agents[j].position.y));

  for (std::size_t i = 0; i < n; ++i) {
    const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
    s += "  <polyline class=\"traj\" fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"0.05\" points=\"";
    for (const StepRecord& rec : trace.records) {
      appendf(s, "%.6g,%.6g ", rec.agents[i].position.x, flip(rec.agents[i].position.y));
    }
    s += "\"/>\n";
    if (unicycle) {
      arrow(s, first.agents[i].position, first.agents[i].heading, 0.35, color);
      arrow(s, last.agents[i].position, last.agents[i].heading, 0.35, color);
    }
  }

  s += "</svg>\n";
  return s;
}

}  // namespace navcon
