#include "navcon/potential.hpp"

#include <cmath>
#include <numbers>

#include "navcon/detail/curves.hpp"
#include "navcon/errors.hpp"
#include "navcon/rng.hpp"

namespace navcon {

void FieldParams::validate() const {
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be > 0");
  if (!(comm_radius > 0.0)) throw InvalidInput("comm_radius must be > 0");
  if (!(delta1 > 0.0 && delta1 < comm_radius))
    throw InvalidInput("delta1 must satisfy 0 < delta1 < comm_radius");
  if (!(delta2 > 0.0 && delta2 < comm_radius))
    throw InvalidInput("delta2 must satisfy 0 < delta2 < comm_radius");
  if (!(workspace_radius > 0.0)) throw InvalidInput("workspace_radius must be > 0");
  if (!(eps_nh > 0.0)) throw InvalidInput("eps_nh must be > 0");
}

Curve edge_tension(double d, const FieldParams& params) {
  const double rc = params.comm_radius;
  const double d2 = params.delta2;
  if (d <= rc - d2) return {1.0, 0.0};
  const double s = d + 2.0 * d2 - rc;
  const double deriv = 2.0 / d2 - (2.0 * s) / (d2 * d2);
  if (d > rc) return {0.0, 0.0};
  // At exactly d = rc the value is 0 but the reported slope is the ring
  // piece's; the constraint gradient must still point back inside.
  if (d == rc) return {0.0, deriv};
  return {detail::tension_value(d, rc, d2), deriv};
}

Curve collision_factor(double d, const FieldParams& params) {
  const double d1 = params.delta1;
  if (d >= d1) return {1.0, 0.0};
  return {detail::collision_value(d, d1), 2.0 / d1 - (2.0 * d) / (d1 * d1)};
}

BoundaryEval boundary_factor(Vec2 position, const FieldParams& params) {
  const double r = position.norm();
  if (r > params.workspace_radius)
    throw InvalidInput("boundary_factor: position outside the workspace");
  const double d0 = params.workspace_radius - r;
  const Curve c = collision_factor(d0, params);
  Vec2 grad{};
  if (c.deriv != 0.0 && r >= kCoincidenceGuard) {
    // d(d0)/dp = -p/||p||; zero vector at the origin.
    grad = c.deriv * Vec2{-position.x / r, -position.y / r};
  }
  return {c.value, grad};
}

GoalEval formation_goal(const FormationContext& ctx) {
  GoalEval g;
  for (const FormationNeighbor& nb : ctx.formation_neighbors) {
    const Vec2 e = ctx.self_position - nb.position - nb.offset;
    g.gamma += e.norm2();
    g.gradient += 2.0 * e;
  }
  return g;
}

namespace {

struct Factor {
  double value = 1.0;
  Vec2 gradient{};  // chain-ruled with respect to the self position
};

// Chain rule for a curve of the distance to a fixed point. Coincident points
// have a singular unit vector; for collision-type factors (collision != null)
// that means contact: the factor is zeroed, its gradient dropped, and the
// collision reported. Tension factors are flat at d = 0, nothing to suppress.
Factor distance_factor(Vec2 self, Vec2 other, const Curve& c, bool* collision) {
  const double d = (self - other).norm();
  if (collision != nullptr && d < kCoincidenceGuard) {
    *collision = true;
    return {0.0, Vec2{}};
  }
  if (c.deriv == 0.0 || d < kCoincidenceGuard) return {c.value, Vec2{}};
  const Vec2 dir{(self.x - other.x) / d, (self.y - other.y) / d};
  return {c.value, c.deriv * dir};
}

// grad(prod f_k) = sum_k (prod_{j != k} f_j) grad f_k via prefix/suffix
// products; no division, so vanishing factors are handled exactly.
ConstraintEval combine_factors(const std::vector<Factor>& factors, bool collision) {
  const std::size_t n = factors.size();
  std::vector<double> prefix(n + 1, 1.0);
  std::vector<double> suffix(n + 1, 1.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] * factors[k].value;
  for (std::size_t k = n; k > 0; --k) suffix[k - 1] = suffix[k] * factors[k - 1].value;

  ConstraintEval out;
  out.collision = collision;
  out.beta = std::min(std::max(prefix[n], 0.0), 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double others = prefix[k] * suffix[k + 1];
    if (others != 0.0) out.gradient += others * factors[k].gradient;
  }
  return out;
}

}  // namespace

ConstraintEval formation_constraint(const FormationContext& ctx,
                                    const FieldParams& params) {
  bool collision = false;
  std::vector<Factor> factors;
  factors.reserve(1 + ctx.formation_neighbors.size() +
                  ctx.proximity_neighbors.size() + ctx.obstacles.size());

  const BoundaryEval b0 = boundary_factor(ctx.self_position, params);
  factors.push_back({b0.value, b0.gradient});

  for (const FormationNeighbor& nb : ctx.formation_neighbors) {
    const double d = (ctx.self_position - nb.position).norm();
    factors.push_back(
        distance_factor(ctx.self_position, nb.position, edge_tension(d, params), nullptr));
  }
  for (const Vec2& p : ctx.proximity_neighbors) {
    const double d = (ctx.self_position - p).norm();
    factors.push_back(
        distance_factor(ctx.self_position, p, collision_factor(d, params), &collision));
  }
  for (const Vec2& p : ctx.obstacles) {
    const double d = (ctx.self_position - p).norm();
    factors.push_back(
        distance_factor(ctx.self_position, p, collision_factor(d, params), &collision));
  }
  return combine_factors(factors, collision);
}

FieldEval nf_compose(double gamma, Vec2 grad_gamma, double beta_term,
                     Vec2 grad_beta, double alpha) {
  if (gamma < 1e-15 && beta_term < 1e-15)
    throw RuntimeFailure(
        "nf_compose: degenerate configuration, goal and constraint vanish together");

  FieldEval out;
  out.gamma = gamma;
  out.beta_term = beta_term;
  out.value = detail::nf_value(gamma, beta_term, alpha);

  const double base = std::pow(gamma, alpha) + beta_term;
  const double scale = std::pow(base, -(1.0 + alpha) / alpha);
  out.gradient = scale * (beta_term * grad_gamma - (gamma / alpha) * grad_beta);
  return out;
}

DipolarEval dipolar_factor(const RendezvousContext& ctx, const FieldParams& params) {
  const Vec2 nd{std::cos(ctx.desired_heading), std::sin(ctx.desired_heading)};
  const double proj = (ctx.self_position - ctx.destination).dot(nd);
  return {params.eps_nh + proj * proj, (2.0 * proj) * nd};
}

FieldEval nf_informed(const RendezvousContext& ctx, const FieldParams& params) {
  const Vec2 diff = ctx.self_position - ctx.destination;
  const double gamma = diff.norm2();
  const Vec2 grad_gamma = 2.0 * diff;

  const BoundaryEval b0 = boundary_factor(ctx.self_position, params);
  const DipolarEval hd = dipolar_factor(ctx, params);
  const double beta_term = hd.hd * b0.value;
  const Vec2 grad_beta = b0.value * hd.gradient + hd.hd * b0.gradient;
  return nf_compose(gamma, grad_gamma, beta_term, grad_beta, params.alpha);
}

FieldEval nf_follower(const RendezvousContext& ctx, const FieldParams& params) {
  if (ctx.neighbors.empty())
    throw RuntimeFailure("nf_follower: connectivity lost, no maintained neighbors");

  double gamma = 0.0;
  Vec2 grad_gamma{};
  std::vector<Factor> factors;
  factors.reserve(ctx.neighbors.size());
  for (const Vec2& p : ctx.neighbors) {
    const Vec2 diff = ctx.self_position - p;
    gamma += diff.norm2();
    grad_gamma += 2.0 * diff;
    factors.push_back(
        distance_factor(ctx.self_position, p, edge_tension(diff.norm(), params), nullptr));
  }
  const ConstraintEval beta = combine_factors(factors, false);
  return nf_compose(gamma, grad_gamma, beta.beta, beta.gradient, params.alpha);
}

FormationFieldEval nf_formation(const FormationContext& ctx,
                                const FieldParams& params) {
  const GoalEval goal = formation_goal(ctx);
  const ConstraintEval beta = formation_constraint(ctx, params);
  FormationFieldEval out;
  out.collision = beta.collision;
  out.field =
      nf_compose(goal.gamma, goal.gradient, beta.beta, beta.gradient, params.alpha);
  return out;
}

Vec2 finite_diff_gradient(const std::function<double(Vec2)>& field, Vec2 position,
                          double step) {
  const double fxp = field({position.x + step, position.y});
  const double fxm = field({position.x - step, position.y});
  const double fyp = field({position.x, position.y + step});
  const double fym = field({position.x, position.y - step});
  if (!std::isfinite(fxp) || !std::isfinite(fxm) || !std::isfinite(fyp) ||
      !std::isfinite(fym))
    throw InvalidInput("finite_diff_gradient: non-finite field sample");
  return {(fxp - fxm) / (2.0 * step), (fyp - fym) / (2.0 * step)};
}

// ---------------------------------------------------------------------------
// Gradient-check harness
// ---------------------------------------------------------------------------

namespace {

constexpr double kBreakMargin = 1e-3;  // keep samples off piecewise breakpoints
constexpr double kFdStep = 1e-5;

bool near(double d, double breakpoint) { return std::abs(d - breakpoint) < kBreakMargin; }

// Distance clear of every breakpoint of both factor curves.
double clear_distance(SeededRng& rng, double lo, double hi, const FieldParams& p) {
  for (;;) {
    const double d = rng.uniform(lo, hi);
    if (near(d, p.delta1) || near(d, p.comm_radius - p.delta2) ||
        near(d, p.comm_radius))
      continue;
    return d;
  }
}

Vec2 interior_point(SeededRng& rng, const FieldParams& p) {
  for (;;) {
    const double r = (p.workspace_radius - 2.0 * kBreakMargin) * std::sqrt(rng.uniform01());
    if (near(p.workspace_radius - r, p.delta1)) continue;  // boundary-curve breakpoint
    const double a = rng.angle();
    return {r * std::cos(a), r * std::sin(a)};
  }
}

struct Sample {
  Vec2 position;
  Vec2 analytic;
  std::function<double(Vec2)> value_at;
};

Sample sample_informed(SeededRng& rng) {
  FieldParams p;
  p.workspace_radius = 5.0;
  p.comm_radius = 2.0;
  p.alpha = rng.uniform(1.1, 2.0);

  RendezvousContext ctx;
  ctx.role = AgentRole::informed;
  const double rd = 0.4 * p.workspace_radius * std::sqrt(rng.uniform01());
  const double ad = rng.angle();
  ctx.destination = {rd * std::cos(ad), rd * std::sin(ad)};
  ctx.desired_heading = rng.angle();
  ctx.self_position = interior_point(rng, p);

  return {ctx.self_position, nf_informed(ctx, p).gradient, [ctx, p](Vec2 q) {
            RendezvousContext c = ctx;
            c.self_position = q;
            return nf_informed(c, p).value;
          }};
}

Sample sample_follower(SeededRng& rng) {
  FieldParams p;
  p.workspace_radius = 5.0;
  p.comm_radius = 2.0;
  p.alpha = rng.uniform(1.1, 2.0);

  RendezvousContext ctx;
  ctx.role = AgentRole::follower;
  ctx.self_position = interior_point(rng, p);
  const int count = 1 + static_cast<int>(rng.below(4));
  for (int k = 0; k < count; ++k) {
    const double d = clear_distance(rng, 0.05, p.comm_radius - 2.0 * kBreakMargin, p);
    const double a = rng.angle();
    ctx.neighbors.push_back(ctx.self_position + Vec2{d * std::cos(a), d * std::sin(a)});
  }

  return {ctx.self_position, nf_follower(ctx, p).gradient, [ctx, p](Vec2 q) {
            RendezvousContext c = ctx;
            c.self_position = q;
            return nf_follower(c, p).value;
          }};
}

Sample sample_formation(SeededRng& rng) {
  FieldParams p;
  p.workspace_radius = 10.0;
  p.comm_radius = 2.0;
  p.alpha = rng.uniform(1.1, 2.0);

  FormationContext ctx;
  ctx.self_position = interior_point(rng, p);
  const int nf = 1 + static_cast<int>(rng.below(3));
  for (int k = 0; k < nf; ++k) {
    const double d = clear_distance(rng, 0.05, p.comm_radius - 2.0 * kBreakMargin, p);
    const double a = rng.angle();
    const Vec2 pos = ctx.self_position + Vec2{d * std::cos(a), d * std::sin(a)};
    const double ca = rng.angle();
    const double cr = rng.uniform(0.2, 1.2);
    ctx.formation_neighbors.push_back({pos, Vec2{cr * std::cos(ca), cr * std::sin(ca)}});
    ctx.proximity_neighbors.push_back(pos);  // formation neighbors are sensed too
  }
  const int extra = static_cast<int>(rng.below(3));
  for (int k = 0; k < extra; ++k) {
    const double d = clear_distance(rng, 0.05, p.comm_radius, p);
    const double a = rng.angle();
    ctx.proximity_neighbors.push_back(ctx.self_position +
                                      Vec2{d * std::cos(a), d * std::sin(a)});
  }
  const int obs = static_cast<int>(rng.below(3));
  for (int k = 0; k < obs; ++k) {
    const double d = clear_distance(rng, 0.05, p.comm_radius, p);
    const double a = rng.angle();
    ctx.obstacles.push_back(ctx.self_position + Vec2{d * std::cos(a), d * std::sin(a)});
  }

  return {ctx.self_position, nf_formation(ctx, p).field.gradient, [ctx, p](Vec2 q) {
            FormationContext c = ctx;
            c.self_position = q;
            return nf_formation(c, p).field.value;
          }};
}

}  // namespace

GradCheckReport gradient_check(std::uint64_t seed, int trials_per_variant) {
  if (trials_per_variant < 1)
    throw InvalidInput("gradient_check: trials must be >= 1");

  SeededRng rng(seed);
  GradCheckReport report;
  report.trials_per_variant = trials_per_variant;

  for (int variant = 0; variant < 3; ++variant) {
    for (int t = 0; t < trials_per_variant; ++t) {
      // Redraw configurations whose gradient is too small for a meaningful
      // relative comparison (near-critical points).
      for (int attempt = 0; attempt < 100; ++attempt) {
        Sample s = variant == 0   ? sample_informed(rng)
                   : variant == 1 ? sample_follower(rng)
                                  : sample_formation(rng);
        const Vec2 fd = finite_diff_gradient(s.value_at, s.position, kFdStep);
        const double denom = std::max(fd.norm(), s.analytic.norm());
        if (denom < 1e-2) continue;
        const double rel = (s.analytic - fd).norm() / denom;
        if (rel > report.worst_rel_error) {
          report.worst_rel_error = rel;
          report.worst_variant = variant;
          report.worst_position = s.position;
        }
        break;
      }
    }
  }
  return report;
}

}  // namespace navcon
