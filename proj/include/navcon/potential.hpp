#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "navcon/vec2.hpp"

namespace navcon {

/// Tuning parameters shared by every potential-field ingredient.
struct FieldParams {
  double alpha = 1.5;            // navigation-function tuning exponent
  double comm_radius = 2.0;      // sensing/communication radius R_c (or R)
  double delta1 = 0.4;           // collision buffer
  double delta2 = 0.4;           // escape-ring (link-break) buffer
  double workspace_radius = 10.0;
  double eps_nh = 0.01;          // dipolar regularizer

  /// Throws InvalidInput unless 0 < delta1 < comm_radius,
  /// 0 < delta2 < comm_radius, alpha > 0, eps_nh > 0, workspace_radius > 0.
  void validate() const;

  bool operator==(const FieldParams&) const = default;
};

/// Value and gradient of a potential at one point, with its goal/constraint
/// decomposition. For the formation and follower fields beta_term is the
/// constraint product in [0, 1]; for the informed dipolar field it is the
/// composed H_d * beta_d, which can exceed 1.
struct FieldEval {
  double value = 0.0;
  Vec2 gradient{};
  double gamma = 0.0;
  double beta_term = 0.0;
};

/// A scalar factor curve evaluated at a distance: value and d(value)/dd.
struct Curve {
  double value = 0.0;
  double deriv = 0.0;
};

struct BoundaryEval {
  double value = 0.0;
  Vec2 gradient{};
};

struct GoalEval {
  double gamma = 0.0;
  Vec2 gradient{};
};

struct ConstraintEval {
  double beta = 1.0;
  Vec2 gradient{};
  bool collision = false;  // a distance fell below the coincidence guard
};

struct DipolarEval {
  double hd = 0.0;
  Vec2 gradient{};
};

struct FormationNeighbor {
  Vec2 position{};
  Vec2 offset{};  // desired q_self - q_neighbor
};

/// Everything the formation field of one agent sees: its formation neighbors
/// with offsets, the agents currently inside its sensing disk, and the sensed
/// obstacles. Pure snapshot; the caller (sim) keeps it current.
struct FormationContext {
  Vec2 self_position{};
  std::vector<FormationNeighbor> formation_neighbors;
  std::vector<Vec2> proximity_neighbors;
  std::vector<Vec2> obstacles;
};

enum class AgentRole { informed, follower };

struct RendezvousContext {
  Vec2 self_position{};
  std::vector<Vec2> neighbors;  // maintained-link peers (followers use these)
  Vec2 destination{};
  double desired_heading = 0.0;  // theta*, in (-pi, pi]
  AgentRole role = AgentRole::follower;
};

// Distances below this are treated as a collision: the factor is zeroed and
// its singular unit-vector direction is suppressed.
inline constexpr double kCoincidenceGuard = 1e-12;

/// Link-tension curve b(d) with derivative. The derivative at exactly
/// d = comm_radius is the escape-ring piece's (the value is already 0 there);
/// at the inner breakpoint both sides agree on 0.
Curve edge_tension(double d, const FieldParams& params);

/// Collision curve B(d) with derivative; both sides agree on 0 at d = delta1.
Curve collision_factor(double d, const FieldParams& params);

/// Collision curve applied to the boundary distance d0 = R_w - ||p||, with
/// the chain-ruled gradient (zero at the origin). Throws InvalidInput when
/// the position lies outside the workspace.
BoundaryEval boundary_factor(Vec2 position, const FieldParams& params);

/// gamma_i = sum over formation neighbors of ||q_i - q_j - c_ij||^2.
GoalEval formation_goal(const FormationContext& ctx);

/// beta_i = B_i0 * prod b_ij (formation neighbors) * prod B_ik (sensed agents
/// and obstacles), gradient by the product rule, clamped to [0, 1].
ConstraintEval formation_constraint(const FormationContext& ctx,
                                    const FieldParams& params);

/// phi = gamma / (gamma^alpha + beta_term)^(1/alpha) and its closed-form
/// gradient (gamma^alpha + beta_term)^(-(1+alpha)/alpha) *
/// (beta_term * grad_gamma - (gamma/alpha) * grad_beta).
/// Throws RuntimeFailure if gamma and beta_term are both ~0 (degenerate).
FieldEval nf_compose(double gamma, Vec2 grad_gamma, double beta_term,
                     Vec2 grad_beta, double alpha);

/// H_d = eps_nh + ((p - p*) . n_d)^2 with n_d = (cos theta*, sin theta*).
DipolarEval dipolar_factor(const RendezvousContext& ctx, const FieldParams& params);

/// Dipolar navigation function of the informed agent:
/// gamma_d = ||p - p*||^2 composed against H_d * beta_d.
FieldEval nf_informed(const RendezvousContext& ctx, const FieldParams& params);

/// Follower consensus field: gamma = sum ||p - p_j||^2 over maintained
/// neighbors, beta = prod b_ij. Throws RuntimeFailure on an empty neighbor
/// list (a follower with no links is a disconnected failure state).
FieldEval nf_follower(const RendezvousContext& ctx, const FieldParams& params);

/// Formation field phi_i composed from formation_goal and
/// formation_constraint, plus the constraint's collision flag.
struct FormationFieldEval {
  FieldEval field;
  bool collision = false;
};
FormationFieldEval nf_formation(const FormationContext& ctx,
                                const FieldParams& params);

/// Central finite differences per coordinate. Throws InvalidInput if any
/// sample is non-finite.
Vec2 finite_diff_gradient(const std::function<double(Vec2)>& field, Vec2 position,
                          double step);

/// Seeded analytic-vs-finite-difference comparison over random configurations
/// of each field variant, sampled away from the piecewise breakpoints.
struct GradCheckReport {
  double worst_rel_error = 0.0;
  int worst_variant = -1;    // 0 informed, 1 follower, 2 formation
  Vec2 worst_position{};
  int trials_per_variant = 0;

  bool passed(double tol = 1e-6) const { return worst_rel_error < tol; }
};
GradCheckReport gradient_check(std::uint64_t seed, int trials_per_variant);

}  // namespace navcon
