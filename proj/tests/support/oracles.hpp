#pragma once

// Independent reference implementations used to check the library. They are
// written as plain loops over raw arrays and deliberately share no code with
// the implementations under test.

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "contact/annotations.hpp"
#include "contact/evaluation.hpp"

namespace oracle {

using Matrix = std::vector<double>;  // row-major

// A[p][q] = sum_c (sum_a H[p][a] Wa[a][c]) * (sum_b U[q][b] Wb[b][c]).
Matrix affinity(const Matrix& h, const Matrix& u, const Matrix& wa, const Matrix& wb, std::size_t n, std::size_t d);

// H + GroupNorm(softmax_rows(A) U) with per-channel scale/shift.
Matrix cross_attend(const Matrix& h, const Matrix& u, const Matrix& wa, const Matrix& wb, const Matrix& scale,
                    const Matrix& shift, std::size_t groups, double eps, std::size_t n, std::size_t d);

// (1/L) sum_l sum_p a_l[p] (U Theta_l)[p][s], a_l = softmax_p(U w_l).
std::array<double, 4> spatial_scores(const Matrix& u, const Matrix& w, const Matrix& theta, std::size_t n,
                                     std::size_t d, std::size_t maps);

// Shoelace area over the vertex list.
double shoelace(std::span<const contact::geom::Point> pts);

// Smallest axis-aligned bounding area over `steps` rotations evenly covering
// [0, 180) degrees (180 steps: whole degrees).
double angle_sweep_min_area(std::span<const contact::geom::Point> pts, int steps = 180);

// All-point AP by enumerating every rank cutoff: for each prefix of the
// score-sorted detections the matching is recomputed from scratch, then the
// envelope is taken as a maximum over later cutoffs. Returns -1 when the
// state has no positives.
double exhaustive_ap(std::span<const contact::eval::DetectionRecord> dets,
                     std::span<const contact::ImageRecord> gts, std::size_t state);

struct EvalFixture {
  std::string name;
  std::vector<contact::ImageRecord> annotations;
  std::vector<contact::eval::DetectionRecord> detections;
  std::array<double, 4> expected_ap{-2, -2, -2, -2};  // -2: no hand-computed value; -1: undefined
};

std::vector<EvalFixture> load_eval_fixtures(const std::filesystem::path& dir);

std::filesystem::path fixture_dir();

}  // namespace oracle
