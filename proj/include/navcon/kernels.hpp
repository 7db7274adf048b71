#pragma once

#include <span>

namespace navcon::kernels {

// Batch arithmetic kernels for the data-parallel paths: potential-field values
// sampled over many points (grid exports) and pairwise distance blocks (graph
// construction, metrics). Each kernel has a scalar reference implementation
// and an AVX2 variant selected at runtime; both compute the identical
// operation sequence per element, so results match bit for bit (the project is
// built with -ffp-contract=off to keep it that way). Transcendentals (pow) run
// per lane through libm in both paths.
//
// Inputs are SoA spans; all spans of one call must have equal length.

enum class Backend { scalar, avx2 };

/// Backend the dispatched entry points will use on this machine.
Backend active_backend();
const char* backend_name();
bool avx2_available();

/// Informed-agent dipolar navigation field, sampled at arbitrary points.
/// Factors: goal distance^2, dipolar alignment term eps_nh + ((p - p*).n_d)^2,
/// workspace-boundary collision curve with buffer delta1. Points outside the
/// workspace evaluate to exactly 1.
struct DipolarFieldSpec {
  double dest_x = 0.0, dest_y = 0.0;  // p*
  double axis_x = 1.0, axis_y = 0.0;  // n_d = (cos theta*, sin theta*)
  double alpha = 1.2;
  double eps_nh = 0.01;
  double delta1 = 0.4;
  double workspace_radius = 5.0;
};

/// Follower consensus field: goal = sum of squared distances to maintained
/// neighbors, constraint = product of link-tension curves (radius comm_radius,
/// buffer delta2). Points outside the workspace evaluate to exactly 1.
struct FollowerFieldSpec {
  std::span<const double> nb_x, nb_y;  // maintained neighbors
  double alpha = 1.2;
  double comm_radius = 2.0;
  double delta2 = 0.4;
  double workspace_radius = 5.0;
};

/// Formation field of one agent with every other agent frozen: offset goal
/// over formation neighbors, boundary factor, link-tension over formation
/// neighbors, collision factors over agents and obstacles. Points outside the
/// workspace evaluate to exactly 1.
struct FormationFieldSpec {
  std::span<const double> fn_x, fn_y;    // formation neighbors
  std::span<const double> off_x, off_y;  // desired offsets c_ij (same length)
  std::span<const double> ag_x, ag_y;    // other agents (collision factors)
  std::span<const double> ob_x, ob_y;    // obstacles
  double alpha = 1.5;
  double comm_radius = 2.0;
  double delta1 = 0.4;
  double delta2 = 0.4;
  double workspace_radius = 10.0;
};

void dipolar_values(std::span<const double> xs, std::span<const double> ys,
                    std::span<double> out, const DipolarFieldSpec& spec);
void follower_values(std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out, const FollowerFieldSpec& spec);
void formation_values(std::span<const double> xs, std::span<const double> ys,
                      std::span<double> out, const FormationFieldSpec& spec);

/// Condensed upper-triangle distances: out[k] = ||p_i - p_j|| for i < j in
/// row-major pair order. out.size() must be n*(n-1)/2.
void pairwise_distances(std::span<const double> xs, std::span<const double> ys,
                        std::span<double> out);

namespace scalar {
void dipolar_values(std::span<const double> xs, std::span<const double> ys,
                    std::span<double> out, const DipolarFieldSpec& spec);
void follower_values(std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out, const FollowerFieldSpec& spec);
void formation_values(std::span<const double> xs, std::span<const double> ys,
                      std::span<double> out, const FormationFieldSpec& spec);
void pairwise_distances(std::span<const double> xs, std::span<const double> ys,
                        std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void dipolar_values(std::span<const double> xs, std::span<const double> ys,
                    std::span<double> out, const DipolarFieldSpec& spec);
void follower_values(std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out, const FollowerFieldSpec& spec);
void formation_values(std::span<const double> xs, std::span<const double> ys,
                      std::span<double> out, const FormationFieldSpec& spec);
void pairwise_distances(std::span<const double> xs, std::span<const double> ys,
                        std::span<double> out);
}  // namespace avx2
#endif

}  // namespace navcon::kernels
