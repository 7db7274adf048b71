#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "navcon/kernels.hpp"
#include "navcon/potential.hpp"
#include "navcon/rng.hpp"

using namespace navcon;

namespace {

struct Batch {
  std::vector<double> xs, ys;
};

// Random sample points covering the workspace interior, the boundary ring and
// the outside, so every blend path of the piecewise curves is exercised.
Batch random_points(SeededRng& rng, std::size_t count, double radius) {
  Batch b;
  for (std::size_t i = 0; i < count; ++i) {
    const double r = rng.uniform(0.0, 1.3 * radius);
    const double a = rng.angle();
    b.xs.push_back(r * std::cos(a));
    b.ys.push_back(r * std::sin(a));
  }
  return b;
}

}  // namespace

#if defined(__x86_64__)
#define REQUIRE_AVX2()                                        \
  if (!kernels::avx2_available()) {                           \
    MESSAGE("AVX2 not available on this host; scalar only");  \
    return;                                                   \
  }

TEST_CASE("dipolar kernel: AVX2 matches scalar bit for bit") {
  REQUIRE_AVX2();
  SeededRng rng(101);
  for (int t = 0; t < 20; ++t) {
    kernels::DipolarFieldSpec spec;
    spec.workspace_radius = 5.0;
    spec.dest_x = rng.uniform(-2, 2);
    spec.dest_y = rng.uniform(-2, 2);
    const double th = rng.angle();
    spec.axis_x = std::cos(th);
    spec.axis_y = std::sin(th);
    spec.alpha = rng.uniform(1.05, 2.0);
    const Batch b = random_points(rng, 257, spec.workspace_radius);

    std::vector<double> ref(b.xs.size()), simd(b.xs.size());
    kernels::scalar::dipolar_values(b.xs, b.ys, ref, spec);
    kernels::avx2::dipolar_values(b.xs, b.ys, simd, spec);
    CHECK(ref == simd);
  }
}

TEST_CASE("follower kernel: AVX2 matches scalar bit for bit") {
  REQUIRE_AVX2();
  SeededRng rng(103);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> nx, ny;
    const int count = 1 + static_cast<int>(rng.below(5));
    for (int k = 0; k < count; ++k) {
      nx.push_back(rng.uniform(-4, 4));
      ny.push_back(rng.uniform(-4, 4));
    }
    kernels::FollowerFieldSpec spec;
    spec.nb_x = nx;
    spec.nb_y = ny;
    spec.workspace_radius = 5.0;
    spec.alpha = rng.uniform(1.05, 2.0);
    const Batch b = random_points(rng, 123, spec.workspace_radius);

    std::vector<double> ref(b.xs.size()), simd(b.xs.size());
    kernels::scalar::follower_values(b.xs, b.ys, ref, spec);
    kernels::avx2::follower_values(b.xs, b.ys, simd, spec);
    CHECK(ref == simd);
  }
}

TEST_CASE("formation kernel: AVX2 matches scalar bit for bit") {
  REQUIRE_AVX2();
  SeededRng rng(107);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> fx, fy, cx, cy, ax, ay, ox, oy;
    const int nf = 1 + static_cast<int>(rng.below(3));
    for (int k = 0; k < nf; ++k) {
      fx.push_back(rng.uniform(-6, 6));
      fy.push_back(rng.uniform(-6, 6));
      cx.push_back(rng.uniform(-1, 1));
      cy.push_back(rng.uniform(-1, 1));
    }
    for (int k = 0; k < 3; ++k) {
      ax.push_back(rng.uniform(-6, 6));
      ay.push_back(rng.uniform(-6, 6));
      ox.push_back(rng.uniform(-6, 6));
      oy.push_back(rng.uniform(-6, 6));
    }
    kernels::FormationFieldSpec spec;
    spec.fn_x = fx;
    spec.fn_y = fy;
    spec.off_x = cx;
    spec.off_y = cy;
    spec.ag_x = ax;
    spec.ag_y = ay;
    spec.ob_x = ox;
    spec.ob_y = oy;
    spec.workspace_radius = 10.0;
    spec.alpha = rng.uniform(1.05, 2.0);
    const Batch b = random_points(rng, 97, spec.workspace_radius);

    std::vector<double> ref(b.xs.size()), simd(b.xs.size());
    kernels::scalar::formation_values(b.xs, b.ys, ref, spec);
    kernels::avx2::formation_values(b.xs, b.ys, simd, spec);
    CHECK(ref == simd);
  }
}

TEST_CASE("pairwise-distance kernel: AVX2 matches scalar bit for bit") {
  REQUIRE_AVX2();
  SeededRng rng(109);
  for (std::size_t n : {2u, 3u, 5u, 8u, 13u, 20u, 33u}) {
    Batch b = random_points(rng, n, 5.0);
    std::vector<double> ref(n * (n - 1) / 2), simd(n * (n - 1) / 2);
    kernels::scalar::pairwise_distances(b.xs, b.ys, ref);
    kernels::avx2::pairwise_distances(b.xs, b.ys, simd);
    CHECK(ref == simd);
  }
}
#endif  // __x86_64__

TEST_CASE("dispatched kernels agree with the scalar reference") {
  SeededRng rng(113);
  kernels::DipolarFieldSpec spec;
  spec.workspace_radius = 5.0;
  const Batch b = random_points(rng, 64, spec.workspace_radius);
  std::vector<double> ref(b.xs.size()), out(b.xs.size());
  kernels::scalar::dipolar_values(b.xs, b.ys, ref, spec);
  kernels::dipolar_values(b.xs, b.ys, out, spec);
  CHECK(ref == out);
  CHECK((kernels::active_backend() == kernels::Backend::avx2 ||
         kernels::active_backend() == kernels::Backend::scalar));
}

TEST_CASE("batch kernels agree with the single-point potential module") {
  SeededRng rng(127);
  FieldParams params;
  params.workspace_radius = 5.0;
  params.comm_radius = 2.0;
  params.alpha = 1.2;

  // Informed/dipolar field.
  kernels::DipolarFieldSpec dip;
  dip.dest_x = 0.7;
  dip.dest_y = -0.3;
  dip.axis_x = std::cos(0.5);
  dip.axis_y = std::sin(0.5);
  dip.alpha = params.alpha;
  dip.eps_nh = params.eps_nh;
  dip.delta1 = params.delta1;
  dip.workspace_radius = params.workspace_radius;

  RendezvousContext ctx;
  ctx.destination = {dip.dest_x, dip.dest_y};
  ctx.desired_heading = 0.5;
  ctx.role = AgentRole::informed;

  std::vector<double> xs, ys;
  for (int t = 0; t < 200; ++t) {
    const double r = (params.workspace_radius - 1e-9) * std::sqrt(rng.uniform01());
    const double a = rng.angle();
    xs.push_back(r * std::cos(a));
    ys.push_back(r * std::sin(a));
  }
  std::vector<double> batch(xs.size());
  kernels::dipolar_values(xs, ys, batch, dip);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ctx.self_position = {xs[i], ys[i]};
    CHECK(nf_informed(ctx, params).value == batch[i]);
  }

  // Follower consensus field.
  std::vector<double> nx{0.4, -1.1}, ny{0.2, 0.9};
  kernels::FollowerFieldSpec fol;
  fol.nb_x = nx;
  fol.nb_y = ny;
  fol.alpha = params.alpha;
  fol.comm_radius = params.comm_radius;
  fol.delta2 = params.delta2;
  fol.workspace_radius = params.workspace_radius;
  kernels::follower_values(xs, ys, batch, fol);

  RendezvousContext fctx;
  fctx.role = AgentRole::follower;
  fctx.neighbors = {{nx[0], ny[0]}, {nx[1], ny[1]}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fctx.self_position = {xs[i], ys[i]};
    CHECK(nf_follower(fctx, params).value == batch[i]);
  }
}

TEST_CASE("grid kernels emit exactly 1 outside the workspace") {
  kernels::DipolarFieldSpec spec;
  spec.workspace_radius = 5.0;
  const std::vector<double> xs{5.1, -7.0, 0.0, 6.0};
  const std::vector<double> ys{0.0, 0.2, 5.2, -6.0};
  std::vector<double> out(4);
  kernels::dipolar_values(xs, ys, out, spec);
  for (double v : out) CHECK(v == 1.0);
}
