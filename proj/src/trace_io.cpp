#include "navcon/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include "navcon/errors.hpp"
#include "navcon/kernels.hpp"

namespace navcon {

namespace {

void append_g17(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

}  // namespace

std::string write_trace(const SimTrace& trace) {
  if (trace.records.empty()) throw InvalidInput("write_trace: empty trace");

  std::string out = "time,agent,x,y,heading,phi,grad_x,grad_y,fiedler,events\n";
  for (const StepRecord& rec : trace.records) {
    for (std::size_t i = 0; i < rec.agents.size(); ++i) {
      const AgentRecord& a = rec.agents[i];
      append_g17(out, rec.time);
      out += ',';
      out += std::to_string(i);
      out += ',';
      append_g17(out, a.position.x);
      out += ',';
      append_g17(out, a.position.y);
      out += ',';
      append_g17(out, a.heading);
      out += ',';
      append_g17(out, a.phi);
      out += ',';
      append_g17(out, a.gradient.x);
      out += ',';
      append_g17(out, a.gradient.y);
      out += ',';
      append_g17(out, rec.fiedler);
      out += ',';
      bool first = true;
      for (const Event& e : rec.events) {
        if (e.agent != -1 && e.agent != static_cast<int>(i) &&
            e.other != static_cast<int>(i))
          continue;
        if (!first) out += ';';
        out += event_name(e.kind);
        first = false;
      }
      out += '\n';
    }
  }
  return out;
}

std::string export_field_grid(const BatchFieldFn& eval, const GridBounds& bounds,
                              int n) {
  if (n < 2) throw InvalidInput("export_field_grid: resolution must be >= 2");
  if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin))
    throw InvalidInput("export_field_grid: degenerate bounds");

  const std::size_t total = static_cast<std::size_t>(n) * n;
  std::vector<double> xs(total), ys(total), values(total);
  for (int iy = 0; iy < n; ++iy) {
    const double y = bounds.ymin + (bounds.ymax - bounds.ymin) * iy / (n - 1);
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      xs[k] = bounds.xmin + (bounds.xmax - bounds.xmin) * ix / (n - 1);
      ys[k] = y;
    }
  }
  eval(xs, ys, values);

  std::string out = "x,y,value\n";
  out.reserve(total * 40);
  for (std::size_t k = 0; k < total; ++k) {
    append_g17(out, xs[k]);
    out += ',';
    append_g17(out, ys[k]);
    out += ',';
    append_g17(out, values[k]);
    out += '\n';
  }
  return out;
}

BatchFieldFn make_grid_evaluator(const ScenarioSpec& spec) {
  if (spec.random_agents > 0)
    throw InvalidInput("make_grid_evaluator: resolve the deployment first");

  if (spec.mode == SimMode::rendezvous) {
    kernels::DipolarFieldSpec f;
    f.dest_x = spec.destination.x;
    f.dest_y = spec.destination.y;
    f.axis_x = std::cos(spec.goal_heading);
    f.axis_y = std::sin(spec.goal_heading);
    f.alpha = spec.params.alpha;
    f.eps_nh = spec.params.eps_nh;
    f.delta1 = spec.params.delta1;
    f.workspace_radius = spec.params.workspace_radius;
    return [f](std::span<const double> xs, std::span<const double> ys,
               std::span<double> out) { kernels::dipolar_values(xs, ys, out, f); };
  }

  // Formation: agent 0's field, everyone else frozen at the initial pose.
  struct Frozen {
    std::vector<double> fn_x, fn_y, off_x, off_y, ag_x, ag_y, ob_x, ob_y;
  };
  auto frozen = std::make_shared<Frozen>();
  for (int j : spec.formation_neighbors_of(0)) {
    frozen->fn_x.push_back(spec.agents[j].position.x);
    frozen->fn_y.push_back(spec.agents[j].position.y);
    const Vec2 c = spec.formation_offsets.at({0, j});
    frozen->off_x.push_back(c.x);
    frozen->off_y.push_back(c.y);
  }
  for (std::size_t j = 1; j < spec.agents.size(); ++j) {
    frozen->ag_x.push_back(spec.agents[j].position.x);
    frozen->ag_y.push_back(spec.agents[j].position.y);
  }
  for (const Vec2& o : spec.obstacles) {
    frozen->ob_x.push_back(o.x);
    frozen->ob_y.push_back(o.y);
  }
  const FieldParams p = spec.params;
  return [frozen, p](std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out) {
    kernels::FormationFieldSpec f;
    f.fn_x = frozen->fn_x;
    f.fn_y = frozen->fn_y;
    f.off_x = frozen->off_x;
    f.off_y = frozen->off_y;
    f.ag_x = frozen->ag_x;
    f.ag_y = frozen->ag_y;
    f.ob_x = frozen->ob_x;
    f.ob_y = frozen->ob_y;
    f.alpha = p.alpha;
    f.comm_radius = p.comm_radius;
    f.delta1 = p.delta1;
    f.delta2 = p.delta2;
    f.workspace_radius = p.workspace_radius;
    kernels::formation_values(xs, ys, out, f);
  };
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw RuntimeFailure("cannot open for writing: " + tmp);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw RuntimeFailure("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace navcon
