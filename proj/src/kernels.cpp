#include "navcon/kernels.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>

#include "navcon/detail/curves.hpp"

namespace navcon::kernels {

// ---------------------------------------------------------------------------
// Scalar reference kernels. These define the per-element operation sequence;
// the AVX2 variants replay the same sequence four lanes at a time.
// ---------------------------------------------------------------------------

namespace scalar {

using detail::collision_value;
using detail::nf_value;
using detail::tension_value;

void dipolar_values(std::span<const double> xs, std::span<const double> ys,
                    std::span<double> out, const DipolarFieldSpec& spec) {
  assert(xs.size() == ys.size() && xs.size() == out.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double y = ys[i];
    const double r = std::sqrt(x * x + y * y);
    if (r > spec.workspace_radius) {
      out[i] = 1.0;
      continue;
    }
    const double dx = x - spec.dest_x;
    const double dy = y - spec.dest_y;
    const double gamma = dx * dx + dy * dy;
    const double proj = dx * spec.axis_x + dy * spec.axis_y;
    const double hd = spec.eps_nh + proj * proj;
    const double d0 = spec.workspace_radius - r;
    const double beta = std::max(collision_value(d0, spec.delta1), 0.0);
    out[i] = nf_value(gamma, hd * beta, spec.alpha);
  }
}

void follower_values(std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out, const FollowerFieldSpec& spec) {
  assert(xs.size() == ys.size() && xs.size() == out.size());
  assert(spec.nb_x.size() == spec.nb_y.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double y = ys[i];
    const double r = std::sqrt(x * x + y * y);
    if (r > spec.workspace_radius) {
      out[i] = 1.0;
      continue;
    }
    double gamma = 0.0;
    double beta = 1.0;
    for (std::size_t k = 0; k < spec.nb_x.size(); ++k) {
      const double dx = x - spec.nb_x[k];
      const double dy = y - spec.nb_y[k];
      const double dd = dx * dx + dy * dy;
      gamma += dd;
      beta *= tension_value(std::sqrt(dd), spec.comm_radius, spec.delta2);
    }
    beta = std::min(std::max(beta, 0.0), 1.0);
    out[i] = nf_value(gamma, beta, spec.alpha);
  }
}

void formation_values(std::span<const double> xs, std::span<const double> ys,
                      std::span<double> out, const FormationFieldSpec& spec) {
  assert(xs.size() == ys.size() && xs.size() == out.size());
  assert(spec.fn_x.size() == spec.fn_y.size() &&
         spec.fn_x.size() == spec.off_x.size() &&
         spec.fn_x.size() == spec.off_y.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double y = ys[i];
    const double r = std::sqrt(x * x + y * y);
    if (r > spec.workspace_radius) {
      out[i] = 1.0;
      continue;
    }
    const double d0 = spec.workspace_radius - r;
    double gamma = 0.0;
    double beta = collision_value(d0, spec.delta1);
    for (std::size_t k = 0; k < spec.fn_x.size(); ++k) {
      const double dx = x - spec.fn_x[k];
      const double dy = y - spec.fn_y[k];
      const double ex = dx - spec.off_x[k];
      const double ey = dy - spec.off_y[k];
      gamma += ex * ex + ey * ey;
      const double d = std::sqrt(dx * dx + dy * dy);
      beta *= tension_value(d, spec.comm_radius, spec.delta2);
    }
    for (std::size_t k = 0; k < spec.ag_x.size(); ++k) {
      const double dx = x - spec.ag_x[k];
      const double dy = y - spec.ag_y[k];
      beta *= collision_value(std::sqrt(dx * dx + dy * dy), spec.delta1);
    }
    for (std::size_t k = 0; k < spec.ob_x.size(); ++k) {
      const double dx = x - spec.ob_x[k];
      const double dy = y - spec.ob_y[k];
      beta *= collision_value(std::sqrt(dx * dx + dy * dy), spec.delta1);
    }
    beta = std::min(std::max(beta, 0.0), 1.0);
    out[i] = nf_value(gamma, beta, spec.alpha);
  }
}

void pairwise_distances(std::span<const double> xs, std::span<const double> ys,
                        std::span<double> out) {
  assert(xs.size() == ys.size());
  assert(out.size() == xs.size() * (xs.size() - 1) / 2);
  std::size_t k = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      out[k++] = std::sqrt(dx * dx + dy * dy);
    }
  }
}

}  // namespace scalar

// ---------------------------------------------------------------------------
// Runtime dispatch
// ---------------------------------------------------------------------------

bool avx2_available() {
#if defined(NAVCON_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend active_backend() {
  static const Backend backend = [] {
    if (std::getenv("NAVCON_FORCE_SCALAR") != nullptr) return Backend::scalar;
    return avx2_available() ? Backend::avx2 : Backend::scalar;
  }();
  return backend;
}

const char* backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

#if defined(NAVCON_HAVE_AVX2)
#define NAVCON_DISPATCH(fn, ...)                                  \
  if (active_backend() == Backend::avx2) return avx2::fn(__VA_ARGS__); \
  return scalar::fn(__VA_ARGS__)
#else
#define NAVCON_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void dipolar_values(std::span<const double> xs, std::span<const double> ys,
                    std::span<double> out, const DipolarFieldSpec& spec) {
  NAVCON_DISPATCH(dipolar_values, xs, ys, out, spec);
}

void follower_values(std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out, const FollowerFieldSpec& spec) {
  NAVCON_DISPATCH(follower_values, xs, ys, out, spec);
}

void formation_values(std::span<const double> xs, std::span<const double> ys,
                      std::span<double> out, const FormationFieldSpec& spec) {
  NAVCON_DISPATCH(formation_values, xs, ys, out, spec);
}

void pairwise_distances(std::span<const double> xs, std::span<const double> ys,
                        std::span<double> out) {
  NAVCON_DISPATCH(pairwise_distances, xs, ys, out);
}

#undef NAVCON_DISPATCH

}  // namespace navcon::kernels
