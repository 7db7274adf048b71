#include <immintrin.h>

#include <cassert>
#include <cmath>

#include "navcon/kernels.hpp"

// AVX2 variants of the batch kernels: four points per iteration, remainders
// delegated to the scalar reference. Piecewise curves are evaluated on all
// lanes and resolved with blends; the per-lane arithmetic replays the scalar
// sequence exactly, so the two backends agree bit for bit.

namespace navcon::kernels::avx2 {

namespace {

inline __m256d select(__m256d mask, __m256d a, __m256d b) {
  return _mm256_blendv_pd(b, a, mask);
}

// pow has no AVX2 form; run the lanes through libm so both backends share it.
inline __m256d pow_lanes(__m256d base, double e) {
  alignas(32) double t[4];
  _mm256_store_pd(t, base);
  t[0] = std::pow(t[0], e);
  t[1] = std::pow(t[1], e);
  t[2] = std::pow(t[2], e);
  t[3] = std::pow(t[3], e);
  return _mm256_load_pd(t);
}

inline __m256d tension4(__m256d d, double comm_radius, double delta2) {
  const __m256d s = _mm256_sub_pd(
      _mm256_add_pd(d, _mm256_set1_pd(2.0 * delta2)), _mm256_set1_pd(comm_radius));
  const __m256d mid = _mm256_sub_pd(
      _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), s), _mm256_set1_pd(delta2)),
      _mm256_div_pd(_mm256_mul_pd(s, s), _mm256_set1_pd(delta2 * delta2)));
  __m256d v = select(_mm256_cmp_pd(d, _mm256_set1_pd(comm_radius), _CMP_GE_OQ),
                     _mm256_setzero_pd(), mid);
  v = select(_mm256_cmp_pd(d, _mm256_set1_pd(comm_radius - delta2), _CMP_LE_OQ),
             _mm256_set1_pd(1.0), v);
  return v;
}

inline __m256d collision4(__m256d d, double delta1) {
  const __m256d mid = _mm256_sub_pd(
      _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), d), _mm256_set1_pd(delta1)),
      _mm256_div_pd(_mm256_mul_pd(d, d), _mm256_set1_pd(delta1 * delta1)));
  return select(_mm256_cmp_pd(d, _mm256_set1_pd(delta1), _CMP_GE_OQ),
                _mm256_set1_pd(1.0), mid);
}

inline __m256d nf_value4(__m256d gamma, __m256d beta_term, double alpha) {
  const __m256d base = _mm256_add_pd(pow_lanes(gamma, alpha), beta_term);
  const __m256d val = _mm256_mul_pd(gamma, pow_lanes(base, -1.0 / alpha));
  return _mm256_min_pd(val, _mm256_set1_pd(1.0));
}

inline __m256d norm4(__m256d x, __m256d y) {
  return _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)));
}

}  // namespace

void dipolar_values(std::span<const double> xs, std::span<const double> ys,
                    std::span<double> out, const DipolarFieldSpec& spec) {
  assert(xs.size() == ys.size() && xs.size() == out.size());
  const __m256d rw = _mm256_set1_pd(spec.workspace_radius);
  const __m256d ones = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= xs.size(); i += 4) {
    const __m256d x = _mm256_loadu_pd(&xs[i]);
    const __m256d y = _mm256_loadu_pd(&ys[i]);
    const __m256d r = norm4(x, y);
    const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(spec.dest_x));
    const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(spec.dest_y));
    const __m256d gamma =
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d proj =
        _mm256_add_pd(_mm256_mul_pd(dx, _mm256_set1_pd(spec.axis_x)),
                      _mm256_mul_pd(dy, _mm256_set1_pd(spec.axis_y)));
    const __m256d hd =
        _mm256_add_pd(_mm256_set1_pd(spec.eps_nh), _mm256_mul_pd(proj, proj));
    const __m256d d0 = _mm256_sub_pd(rw, r);
    const __m256d beta =
        _mm256_max_pd(collision4(d0, spec.delta1), _mm256_setzero_pd());
    const __m256d val = nf_value4(gamma, _mm256_mul_pd(hd, beta), spec.alpha);
    const __m256d res = select(_mm256_cmp_pd(r, rw, _CMP_GT_OQ), ones, val);
    _mm256_storeu_pd(&out[i], res);
  }
  scalar::dipolar_values(xs.subspan(i), ys.subspan(i), out.subspan(i), spec);
}

void follower_values(std::span<const double> xs, std::span<const double> ys,
                     std::span<double> out, const FollowerFieldSpec& spec) {
  assert(xs.size() == ys.size() && xs.size() == out.size());
  const __m256d rw = _mm256_set1_pd(spec.workspace_radius);
  const __m256d ones = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= xs.size(); i += 4) {
    const __m256d x = _mm256_loadu_pd(&xs[i]);
    const __m256d y = _mm256_loadu_pd(&ys[i]);
    const __m256d r = norm4(x, y);
    __m256d gamma = _mm256_setzero_pd();
    __m256d beta = ones;
    for (std::size_t k = 0; k < spec.nb_x.size(); ++k) {
      const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(spec.nb_x[k]));
      const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(spec.nb_y[k]));
      const __m256d dd =
          _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      gamma = _mm256_add_pd(gamma, dd);
      beta = _mm256_mul_pd(
          beta, tension4(_mm256_sqrt_pd(dd), spec.comm_radius, spec.delta2));
    }
    beta = _mm256_min_pd(_mm256_max_pd(beta, _mm256_setzero_pd()), ones);
    const __m256d val = nf_value4(gamma, beta, spec.alpha);
    const __m256d res = select(_mm256_cmp_pd(r, rw, _CMP_GT_OQ), ones, val);
    _mm256_storeu_pd(&out[i], res);
  }
  scalar::follower_values(xs.subspan(i), ys.subspan(i), out.subspan(i), spec);
}

void formation_values(std::span<const double> xs, std::span<const double> ys,
                      std::span<double> out, const FormationFieldSpec& spec) {
  assert(xs.size() == ys.size() && xs.size() == out.size());
  const __m256d rw = _mm256_set1_pd(spec.workspace_radius);
  const __m256d ones = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= xs.size(); i += 4) {
    const __m256d x = _mm256_loadu_pd(&xs[i]);
    const __m256d y = _mm256_loadu_pd(&ys[i]);
    const __m256d r = norm4(x, y);
    const __m256d d0 = _mm256_sub_pd(rw, r);
    __m256d gamma = _mm256_setzero_pd();
    __m256d beta = collision4(d0, spec.delta1);
    for (std::size_t k = 0; k < spec.fn_x.size(); ++k) {
      const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(spec.fn_x[k]));
      const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(spec.fn_y[k]));
      const __m256d ex = _mm256_sub_pd(dx, _mm256_set1_pd(spec.off_x[k]));
      const __m256d ey = _mm256_sub_pd(dy, _mm256_set1_pd(spec.off_y[k]));
      gamma = _mm256_add_pd(
          gamma, _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey)));
      beta = _mm256_mul_pd(
          beta, tension4(norm4(dx, dy), spec.comm_radius, spec.delta2));
    }
    for (std::size_t k = 0; k < spec.ag_x.size(); ++k) {
      const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(spec.ag_x[k]));
      const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(spec.ag_y[k]));
      beta = _mm256_mul_pd(beta, collision4(norm4(dx, dy), spec.delta1));
    }
    for (std::size_t k = 0; k < spec.ob_x.size(); ++k) {
      const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(spec.ob_x[k]));
      const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(spec.ob_y[k]));
      beta = _mm256_mul_pd(beta, collision4(norm4(dx, dy), spec.delta1));
    }
    beta = _mm256_min_pd(_mm256_max_pd(beta, _mm256_setzero_pd()), ones);
    const __m256d val = nf_value4(gamma, beta, spec.alpha);
    const __m256d res = select(_mm256_cmp_pd(r, rw, _CMP_GT_OQ), ones, val);
    _mm256_storeu_pd(&out[i], res);
  }
  scalar::formation_values(xs.subspan(i), ys.subspan(i), out.subspan(i), spec);
}

void pairwise_distances(std::span<const double> xs, std::span<const double> ys,
                        std::span<double> out) {
  assert(xs.size() == ys.size());
  assert(out.size() == xs.size() * (xs.size() - 1) / 2);
  const std::size_t n = xs.size();
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d xi = _mm256_set1_pd(xs[i]);
    const __m256d yi = _mm256_set1_pd(ys[i]);
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4, k += 4) {
      const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(&xs[j]));
      const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(&ys[j]));
      _mm256_storeu_pd(&out[k], norm4(dx, dy));
    }
    for (; j < n; ++j, ++k) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      out[k] = std::sqrt(dx * dx + dy * dy);
    }
  }
}

}  // namespace navcon::kernels::avx2
