#pragma once

#include <functional>
#include <span>
#include <string>

#include "navcon/sim.hpp"

namespace navcon {

/// CSV trace: one header line, then one row per record per agent in
/// (time, id) order:
///   time,agent,x,y,heading,phi,grad_x,grad_y,fiedler,events
/// Floats are written with 17 significant digits so identical traces produce
/// identical bytes. `events` is a ';'-joined list of event names touching the
/// row's agent (or the whole world) at that step, empty when there are none.
std::string write_trace(const SimTrace& trace);

struct GridBounds {
  double xmin = -5.0, xmax = 5.0;
  double ymin = -5.0, ymax = 5.0;
};

/// Batch field evaluator: fills out[k] with the field value at (xs[k], ys[k]).
using BatchFieldFn = std::function<void(
    std::span<const double>, std::span<const double>, std::span<double>)>;

/// n x n samples "x,y,value" (header line included), row-major with y as the
/// outer loop, endpoints inclusive. The evaluator is expected to report 1 for
/// points outside the workspace (the kernels do). Throws InvalidInput for n < 2.
std::string export_field_grid(const BatchFieldFn& eval, const GridBounds& bounds,
                              int n);

/// Batch evaluator for the scenario's field surface: the informed agent's
/// dipolar field (rendezvous) or agent 0's formation field with every other
/// agent frozen at its initial pose (formation). `agents` must be the resolved
/// explicit initial states.
BatchFieldFn make_grid_evaluator(const ScenarioSpec& spec);

/// SVG rendering of a run: workspace circle, obstacles, per-agent trajectory
/// polylines, final maintained links, and initial/final heading arrows in
/// unicycle mode.
std::string render_svg(const SimTrace& trace);

/// Atomic file write (write to <path>.tmp, then rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace navcon
