#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "navcon/errors.hpp"
#include "navcon/potential.hpp"
#include "navcon/rng.hpp"

using namespace navcon;

namespace {

FieldParams rendezvous_params() {
  FieldParams p;
  p.alpha = 1.2;
  p.comm_radius = 2.0;
  p.delta1 = 0.4;
  p.delta2 = 0.4;
  p.workspace_radius = 5.0;
  return p;
}

}  // namespace

TEST_CASE("edge tension: worked values and breakpoints") {
  const FieldParams p = rendezvous_params();  // R_c = 2, delta2 = 0.4

  CHECK(edge_tension(1.0, p).value == 1.0);
  CHECK(edge_tension(1.0, p).deriv == 0.0);
  CHECK(edge_tension(1.8, p).value == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(edge_tension(2.0, p).value == 0.0);
  CHECK(edge_tension(2.5, p).value == 0.0);
  CHECK(edge_tension(2.5, p).deriv == 0.0);

  // Inner breakpoint: value 1 and derivative 0 from both sides.
  CHECK(edge_tension(1.6, p).value == 1.0);
  CHECK(edge_tension(1.6, p).deriv == 0.0);
  const Curve just_above = edge_tension(1.6 + 1e-9, p);
  CHECK(just_above.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(just_above.deriv) < 2e-8);

  // At exactly R_c the value is 0 but the slope comes from the ring piece.
  CHECK(edge_tension(2.0, p).deriv == doctest::Approx(-2.0 / p.delta2).epsilon(1e-12));

  // Continuity across the ring.
  double prev = edge_tension(1.6, p).value;
  for (double d = 1.6; d <= 2.0 + 1e-9; d += 0.001) {
    const double v = edge_tension(d, p).value;
    CHECK(v <= prev + 1e-12);  // non-increasing on the ring
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-12);
    prev = v;
  }
}

TEST_CASE("collision factor: worked values and breakpoints") {
  const FieldParams p = rendezvous_params();  // delta1 = 0.4

  CHECK(collision_factor(0.0, p).value == 0.0);
  CHECK(collision_factor(0.2, p).value == 0.75);
  CHECK(collision_factor(0.4, p).value == 1.0);
  CHECK(collision_factor(0.4, p).deriv == 0.0);
  CHECK(collision_factor(1.0, p).value == 1.0);

  // Quadratic side of the breakpoint also flattens to derivative 0.
  const Curve below = collision_factor(0.4 - 1e-9, p);
  CHECK(below.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(below.deriv) < 2e-8);

  // At contact the interior piece's slope applies.
  CHECK(collision_factor(0.0, p).deriv == doctest::Approx(2.0 / p.delta1).epsilon(1e-12));
}

TEST_CASE("boundary factor applies the collision curve to the rim distance") {
  const FieldParams p = rendezvous_params();  // R_w = 5

  const BoundaryEval center = boundary_factor({0, 0}, p);
  CHECK(center.value == 1.0);
  CHECK(center.gradient == Vec2{0, 0});

  const BoundaryEval near = boundary_factor({4.8, 0}, p);
  CHECK(near.value == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(near.gradient.x == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(near.gradient.y == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  CHECK(boundary_factor({5.0, 0}, p).value == 0.0);
  CHECK_THROWS_AS(boundary_factor({5.01, 0}, p), InvalidInput);
}

TEST_CASE("formation goal matches the offset-sum definition") {
  FormationContext ctx;
  ctx.self_position = {0, 0};
  ctx.formation_neighbors = {{{1, 0}, {-1, 0}}};
  GoalEval g = formation_goal(ctx);
  CHECK(g.gamma == 0.0);
  CHECK(g.gradient == Vec2{0, 0});

  ctx.formation_neighbors = {{{2, 0}, {-1, 0}}};
  g = formation_goal(ctx);
  CHECK(g.gamma == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.gradient.x == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(g.gradient.y == 0.0);

  ctx.formation_neighbors = {{{1, 0}, {-1, 0}}, {{0, 1}, {0, -1}}};
  CHECK(formation_goal(ctx).gamma == 0.0);

  ctx.formation_neighbors.clear();
  CHECK(formation_goal(ctx).gamma == 0.0);
}

TEST_CASE("formation constraint multiplies its factor family") {
  FieldParams p = rendezvous_params();
  p.workspace_radius = 10.0;

  FormationContext ctx;
  ctx.self_position = {0, 0};
  ConstraintEval c = formation_constraint(ctx, p);
  CHECK(c.beta == 1.0);
  CHECK(c.gradient == Vec2{0, 0});
  CHECK_FALSE(c.collision);

  // One formation neighbor in the escape ring: beta equals the tension value.
  ctx.formation_neighbors = {{{1.8, 0}, {-1.0, 0}}};
  c = formation_constraint(ctx, p);
  CHECK(c.beta == doctest::Approx(0.75).epsilon(1e-14));

  // An obstacle in contact zeroes the product and flags a collision.
  ctx.formation_neighbors.clear();
  ctx.obstacles = {{0, 0}};
  c = formation_constraint(ctx, p);
  CHECK(c.beta == 0.0);
  CHECK(c.collision);
  CHECK(c.gradient == Vec2{0, 0});  // singular direction suppressed
}

TEST_CASE("nf composition: polar, admissible, worked value") {
  CHECK(nf_compose(0.0, {0, 0}, 1.0, {0, 0}, 1.5).value == 0.0);
  CHECK(nf_compose(2.0, {1, 0}, 0.0, {0, 0}, 1.5).value == 1.0);
  CHECK(nf_compose(1.0, {0, 0}, 1.0, {0, 0}, 1.0).value == 0.5);
  CHECK_THROWS_AS(nf_compose(0.0, {0, 0}, 0.0, {0, 0}, 1.5), RuntimeFailure);
}

TEST_CASE("dipolar factor penalizes displacement along the heading axis") {
  const FieldParams p = rendezvous_params();
  RendezvousContext ctx;
  ctx.destination = {0, 0};
  ctx.desired_heading = 0.0;

  ctx.self_position = {0, 2.0};  // perpendicular to n_d
  DipolarEval d = dipolar_factor(ctx, p);
  CHECK(d.hd == p.eps_nh);
  CHECK(d.gradient == Vec2{0, 0});

  ctx.self_position = {1, 1};
  d = dipolar_factor(ctx, p);
  CHECK(d.hd == doctest::Approx(1.01).epsilon(1e-15));
  CHECK(d.gradient.x == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d.gradient.y == 0.0);

  ctx.self_position = {0, 0};
  CHECK(dipolar_factor(ctx, p).hd == p.eps_nh);

  // H_d == eps exactly on the perpendicular plane, larger everywhere else.
  SeededRng rng(3);
  for (int t = 0; t < 100; ++t) {
    ctx.self_position = {rng.uniform(-4, 4), rng.uniform(-4, 4)};
    const double hd = dipolar_factor(ctx, p).hd;
    if (ctx.self_position.x == 0.0)
      CHECK(hd == p.eps_nh);
    else
      CHECK(hd > p.eps_nh);
  }
}

TEST_CASE("informed field: polar at destination, admissible at the rim") {
  const FieldParams p = rendezvous_params();
  RendezvousContext ctx;
  ctx.destination = {0.5, -0.25};
  ctx.desired_heading = 0.3;
  ctx.role = AgentRole::informed;

  ctx.self_position = ctx.destination;
  CHECK(nf_informed(ctx, p).value == 0.0);

  ctx.self_position = {5.0, 0.0};  // on the rim: beta_d = 0
  CHECK(nf_informed(ctx, p).value == 1.0);

  ctx.self_position = {3.0, 4.0};
  ctx.destination = {0.0, 0.0};
  CHECK(nf_informed(ctx, p).gamma == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("follower field: consensus goal against link tension") {
  const FieldParams p = rendezvous_params();
  RendezvousContext ctx;
  ctx.role = AgentRole::follower;

  ctx.self_position = {1, 1};
  ctx.neighbors = {{1, 1}};
  CHECK(nf_follower(ctx, p).value == 0.0);

  ctx.neighbors = {{1 + p.comm_radius, 1}};  // at distance R: b = 0
  CHECK(nf_follower(ctx, p).value == 1.0);

  FieldParams p1 = p;
  p1.alpha = 1.0;
  ctx.neighbors = {{2, 1}};  // distance 1: gamma 1, beta 1
  CHECK(nf_follower(ctx, p1).value == 0.5);

  ctx.neighbors.clear();
  CHECK_THROWS_AS(nf_follower(ctx, p), RuntimeFailure);
}

TEST_CASE("finite differences recover polynomial gradients") {
  const auto f = [](Vec2 q) { return q.x * q.x; };
  const Vec2 g = finite_diff_gradient(f, {1, 0}, 1e-5);
  CHECK(std::abs(g.x - 2.0) < 1e-8);
  CHECK(std::abs(g.y) < 1e-8);

  const auto c = [](Vec2) { return 3.0; };
  CHECK(finite_diff_gradient(c, {0.3, -0.2}, 1e-5) == Vec2{0, 0});

  const auto bad = [](Vec2) { return std::nan(""); };
  CHECK_THROWS_AS(finite_diff_gradient(bad, {0, 0}, 1e-5), InvalidInput);
}

TEST_CASE("analytic gradients match the finite-difference oracle") {
  const GradCheckReport report = gradient_check(2024, 400);
  CHECK(report.worst_rel_error < 1e-6);
  CHECK(report.trials_per_variant == 400);
}

TEST_CASE("gradient check is deterministic per seed") {
  const GradCheckReport a = gradient_check(5, 50);
  const GradCheckReport b = gradient_check(5, 50);
  CHECK(a.worst_rel_error == b.worst_rel_error);
  CHECK(a.worst_variant == b.worst_variant);
  CHECK(a.worst_position == b.worst_position);
  CHECK_THROWS_AS(gradient_check(5, 0), InvalidInput);
}

TEST_CASE("field values stay in [0, 1] across the free workspace") {
  const FieldParams p = rendezvous_params();
  RendezvousContext ctx;
  ctx.destination = {1.0, 0.5};
  ctx.desired_heading = -0.7;
  ctx.role = AgentRole::informed;

  SeededRng rng(77);
  for (int t = 0; t < 500; ++t) {
    const double r = p.workspace_radius * std::sqrt(rng.uniform01());
    const double a = rng.angle();
    ctx.self_position = {r * std::cos(a), r * std::sin(a)};
    const FieldEval f = nf_informed(ctx, p);
    CHECK(f.value >= 0.0);
    CHECK(f.value <= 1.0);
    // Polar: zero value exactly at zero goal.
    CHECK((f.value == 0.0) == (f.gamma == 0.0));
  }
}

TEST_CASE("downstream gain scaling cannot change the descent direction") {
  const FieldParams p = rendezvous_params();
  RendezvousContext ctx;
  ctx.destination = {0, 0};
  ctx.role = AgentRole::informed;
  ctx.self_position = {2.0, 1.0};
  const Vec2 g = nf_informed(ctx, p).gradient;
  const Vec2 u1 = -1.0 * g;
  const Vec2 u5 = -5.0 * g;
  const double cross = u1.x * u5.y - u1.y * u5.x;
  CHECK(cross == 0.0);
  CHECK(u1.dot(u5) > 0.0);
}
