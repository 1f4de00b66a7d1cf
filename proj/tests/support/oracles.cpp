#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "contact/records_io.hpp"

namespace oracle {

Matrix affinity(const Matrix& h, const Matrix& u, const Matrix& wa, const Matrix& wb, std::size_t n, std::size_t d) {
  Matrix a(n * n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        double left = 0.0, right = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          left += h[p * d + k] * wa[k * d + c];
          right += u[q * d + k] * wb[k * d + c];
        }
        acc += left * right;
      }
      a[p * n + q] = acc;
    }
  }
  return a;
}

Matrix cross_attend(const Matrix& h, const Matrix& u, const Matrix& wa, const Matrix& wb, const Matrix& scale,
                    const Matrix& shift, std::size_t groups, double eps, std::size_t n, std::size_t d) {
  const Matrix a = affinity(h, u, wa, wb, n, d);
  Matrix pooled(n * d, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    double m = a[p * n];
    for (std::size_t q = 1; q < n; ++q) m = std::max(m, a[p * n + q]);
    double z = 0.0;
    for (std::size_t q = 0; q < n; ++q) z += std::exp(a[p * n + q] - m);
    for (std::size_t q = 0; q < n; ++q) {
      const double weight = std::exp(a[p * n + q] - m) / z;
      for (std::size_t c = 0; c < d; ++c) pooled[p * d + c] += weight * u[q * d + c];
    }
  }
  const std::size_t per = d / groups;
  Matrix out(h);
  for (std::size_t g = 0; g < groups; ++g) {
    double mean = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t c = g * per; c < (g + 1) * per; ++c) mean += pooled[p * d + c];
    mean /= static_cast<double>(n * per);
    double var = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t c = g * per; c < (g + 1) * per; ++c) var += (pooled[p * d + c] - mean) * (pooled[p * d + c] - mean);
    var /= static_cast<double>(n * per);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t c = g * per; c < (g + 1) * per; ++c)
        out[p * d + c] += scale[c] * (pooled[p * d + c] - mean) / std::sqrt(var + eps) + shift[c];
  }
  return out;
}

std::array<double, 4> spatial_scores(const Matrix& u, const Matrix& w, const Matrix& theta, std::size_t n,
                                     std::size_t d, std::size_t maps) {
  std::array<double, 4> s{};
  for (std::size_t l = 0; l < maps; ++l) {
    std::vector<double> logits(n, 0.0);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t c = 0; c < d; ++c) logits[p] += u[p * d + c] * w[c * maps + l];
    const double m = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double v : logits) z += std::exp(v - m);
    for (std::size_t p = 0; p < n; ++p) {
      const double att = std::exp(logits[p] - m) / z;
      for (std::size_t k = 0; k < 4; ++k) {
        double proj = 0.0;
        for (std::size_t c = 0; c < d; ++c) proj += u[p * d + c] * theta[(l * d + c) * 4 + k];
        s[k] += att * proj;
      }
    }
  }
  for (auto& v : s) v /= static_cast<double>(maps);
  return s;
}

double shoelace(std::span<const contact::geom::Point> pts) {
  double twice = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % pts.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

double angle_sweep_min_area(std::span<const contact::geom::Point> pts, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int step = 0; step < steps; ++step) {
    const double t = step * std::numbers::pi / steps;
    const double c = std::cos(t), s = std::sin(t);
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& p : pts) {
      const double x = c * p.x + s * p.y;
      const double y = -s * p.x + c * p.y;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    best = std::min(best, (x1 - x0) * (y1 - y0));
  }
  return best;
}

namespace {

double box_iou(const contact::geom::AxisBox& a, const contact::geom::AxisBox& b) {
  const double iw = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double ih = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = iw * ih;
  const double uni = (a.x_max - a.x_min) * (a.y_max - a.y_min) + (b.x_max - b.x_min) * (b.y_max - b.y_min) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

contact::geom::AxisBox quad_box(const contact::geom::Quadrilateral& q) {
  contact::geom::AxisBox b{q.vertices[0].x, q.vertices[0].y, q.vertices[0].x, q.vertices[0].y};
  for (const auto& v : q.vertices) {
    b.x_min = std::min(b.x_min, v.x);
    b.y_min = std::min(b.y_min, v.y);
    b.x_max = std::max(b.x_max, v.x);
    b.y_max = std::max(b.y_max, v.y);
  }
  return b;
}

}  // namespace

double exhaustive_ap(std::span<const contact::eval::DetectionRecord> dets,
                     std::span<const contact::ImageRecord> gts, std::size_t state) {
  using contact::TriState;
  std::size_t positives = 0;
  for (const auto& r : gts)
    for (const auto& h : r.hands) positives += h.contact[state] == TriState::kYes;
  if (positives == 0) return -1.0;

  auto image_of = [&](const std::string& id) -> const contact::ImageRecord& {
    for (const auto& r : gts)
      if (r.image_id == id) return r;
    throw std::runtime_error("unknown image " + id);
  };

  // Surviving detections, ordered by joint score with earlier input first on ties.
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const auto& r = image_of(dets[i].image_id);
    double best = 0.0;
    int best_hand = -1;
    for (std::size_t h = 0; h < r.hands.size(); ++h) {
      const double o = box_iou(dets[i].box, quad_box(r.hands[h].quad));
      if (o > best) {
        best = o;
        best_hand = static_cast<int>(h);
      }
    }
    if (best_hand >= 0 && best > 0.5 && r.hands[best_hand].contact[state] == TriState::kUnsure) continue;
    kept.push_back(i);
  }
  auto joint = [&](std::size_t i) { return dets[i].det_score * dets[i].contact_probs[state]; };
  for (std::size_t a = 1; a < kept.size(); ++a)
    for (std::size_t b = a; b > 0 && joint(kept[b]) > joint(kept[b - 1]); --b) std::swap(kept[b], kept[b - 1]);

  std::vector<double> recall(kept.size()), precision(kept.size());
  for (std::size_t cut = 1; cut <= kept.size(); ++cut) {
    std::vector<std::pair<std::string, std::size_t>> taken;
    std::size_t tp = 0;
    for (std::size_t k = 0; k < cut; ++k) {
      const auto& det = dets[kept[k]];
      const auto& r = image_of(det.image_id);
      double best = 0.0;
      int best_hand = -1;
      for (std::size_t h = 0; h < r.hands.size(); ++h) {
        if (r.hands[h].contact[state] != TriState::kYes) continue;
        const double o = box_iou(det.box, quad_box(r.hands[h].quad));
        if (o > best) {
          best = o;
          best_hand = static_cast<int>(h);
        }
      }
      if (best_hand < 0 || !(best > 0.5)) continue;
      const std::pair<std::string, std::size_t> key{r.image_id, static_cast<std::size_t>(best_hand)};
      if (std::find(taken.begin(), taken.end(), key) != taken.end()) continue;
      taken.push_back(key);
      ++tp;
    }
    recall[cut - 1] = static_cast<double>(tp) / static_cast<double>(positives);
    precision[cut - 1] = static_cast<double>(tp) / static_cast<double>(cut);
  }
  double ap = 0.0;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    double env = 0.0;
    for (std::size_t j = k; j < kept.size(); ++j) env = std::max(env, precision[j]);
    ap += (recall[k] - (k ? recall[k - 1] : 0.0)) * env;
  }
  return ap;
}

std::vector<EvalFixture> load_eval_fixtures(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<EvalFixture> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    const auto j = nlohmann::json::parse(in);
    EvalFixture fx;
    fx.name = f.stem().string();
    for (const auto& a : j.at("annotations")) fx.annotations.push_back(contact::io::parse_image_record(a));
    for (const auto& d : j.at("detections")) fx.detections.push_back(contact::io::parse_detection(d));
    if (j.contains("expected_ap")) {
      for (std::size_t s = 0; s < 4; ++s) {
        const std::string key(contact::kStateNames[s]);
        if (!j["expected_ap"].contains(key)) continue;
        const auto& v = j["expected_ap"][key];
        fx.expected_ap[s] = v.is_null() ? -1.0 : v.get<double>();
      }
    }
    out.push_back(std::move(fx));
  }
  return out;
}

std::filesystem::path fixture_dir() { return CONTACT_FIXTURE_DIR; }

}  // namespace oracle
