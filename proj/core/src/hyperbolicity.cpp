#include "hypstab/hyperbolicity.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "hypstab/errors.hpp"
#include "hypstab/triple_space.hpp"

namespace hypstab {

void SampleSpec::validate() const {
  if (samples == 0) throw InvalidInput("sample spec: samples must be positive");
}

int scan_distance(const Ball& ball, VertexId u, VertexId v) {
  if (!ball.is_tube()) {
    if (auto d = ball.group_distance(u, v)) return *d;
  }
  return ball.distance(u, v);
}

namespace {

std::vector<VertexId> inner_vertices(const Ball& ball, int inner) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < ball.size(); ++v) {
    if (ball.dist_origin(v) <= inner) out.push_back(v);
  }
  return out;
}

void require_inner(const Ball& ball, int inner) {
  if (ball.is_tube()) throw InvalidInput("hyperbolicity scans need a ball");
  if (inner < 0 || 2 * inner > ball.radius()) {
    throw InvalidInput("inner radius " + std::to_string(inner) + " must satisfy 0 <= inner <= radius/2 (radius " +
                       std::to_string(ball.radius()) + ")");
  }
}

VertexId relative_or_throw(const Ball& ball, VertexId u, VertexId v) {
  if (auto r = ball.relative(u, v)) return *r;
  throw ContainmentError("relative element u^-1 v lies outside the ball");
}

}  // namespace

HalfInt corner_defect(const Ball& ball, VertexId y, VertexId z) {
  const VertexId e = ball.origin();
  if (y == z || y == e || z == e) return HalfInt(0);
  const int dy = ball.dist_origin(y);
  const int dz = ball.dist_origin(z);
  const int dyz = scan_distance(ball, y, z);
  const HalfInt product = half_of(static_cast<std::int64_t>(dy) + dz - dyz);
  const auto iy = ball.interval_from_origin(y);
  const auto iz = ball.interval_from_origin(z);
  int worst = 0;
  for (std::int64_t t = 1; t <= product.floor(); ++t) {
    for (VertexId p : iy[static_cast<std::size_t>(t)]) {
      for (VertexId q : iz[static_cast<std::size_t>(t)]) {
        if (p != q) worst = std::max(worst, scan_distance(ball, p, q));
      }
    }
  }
  return HalfInt(worst);
}

HalfInt triangle_defect(const Ball& ball, VertexId x, VertexId y, VertexId z) {
  if (x == y || y == z || x == z) return HalfInt(0);
  HalfInt worst(0);
  const VertexId corners[3][3] = {{x, y, z}, {y, z, x}, {z, x, y}};
  for (const auto& c : corners) {
    const VertexId a = relative_or_throw(ball, c[0], c[1]);
    const VertexId b = relative_or_throw(ball, c[0], c[2]);
    worst = std::max(worst, corner_defect(ball, a, b));
  }
  return worst;
}

namespace {

// Scans triangles (e, y, z) with y, z in B_inner.  Triangles with defect
// above `report_above` are passed to `report`.
template <typename Report>
HalfInt thin_scan(const Ball& ball, int inner, const SampleSpec& sample, std::size_t* checked, Report report) {
  require_inner(ball, inner);
  sample.validate();
  const auto verts = inner_vertices(ball, inner);
  const VertexId e = ball.origin();
  HalfInt worst(0);
  std::size_t count = 0;
  auto visit = [&](VertexId y, VertexId z) {
    const HalfInt d = triangle_defect(ball, e, y, z);
    report(y, z, d);
    worst = std::max(worst, d);
    ++count;
  };
  if (verts.size() <= sample.exhaustive_limit) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      for (std::size_t j = i + 1; j < verts.size(); ++j) visit(verts[i], verts[j]);
    }
  } else {
    std::mt19937_64 rng(sample.seed);
    std::uniform_int_distribution<std::size_t> pick(0, verts.size() - 1);
    for (std::size_t s = 0; s < sample.samples; ++s) visit(verts[pick(rng)], verts[pick(rng)]);
  }
  if (checked) *checked = count;
  return worst;
}

}  // namespace

HalfInt thin_constant(const Ball& ball, int inner, const SampleSpec& sample) {
  return thin_scan(ball, inner, sample, nullptr, [](VertexId, VertexId, HalfInt) {});
}

namespace {

constexpr std::size_t kFourPointExhaustiveLimit = 1000;

// Twice the Gromov products <v_i, v_j>_e for all pairs.
std::vector<int> product_table(const Ball& ball, const std::vector<VertexId>& verts) {
  const std::size_t n = verts.size();
  std::vector<int> table(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const int d = i == j ? 0 : scan_distance(ball, verts[i], verts[j]);
      const int twice = ball.dist_origin(verts[i]) + ball.dist_origin(verts[j]) - d;
      table[i * n + j] = twice;
      table[j * n + i] = twice;
    }
  }
  return table;
}

}  // namespace

namespace {

// Reports (a, b, c, twice the excess) for every quadruple with positive
// excess min{<a,c>_e, <b,c>_e} - <a,b>_e.
template <typename Report>
HalfInt four_point_scan(const Ball& ball, int inner, const SampleSpec& sample, std::size_t* checked,
                        Report report) {
  require_inner(ball, inner);
  sample.validate();
  const auto verts = inner_vertices(ball, inner);
  const std::size_t n = verts.size();
  int worst = 0;
  std::size_t count = 0;
  if (n <= std::min(sample.exhaustive_limit, kFourPointExhaustiveLimit)) {
    const auto table = product_table(ball, verts);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const int ab = table[i * n + j];
        for (std::size_t k = 0; k < n; ++k) {
          const int excess = std::min(table[i * n + k], table[j * n + k]) - ab;
          if (excess > 0) report(verts[i], verts[j], verts[k], excess);
          worst = std::max(worst, excess);
        }
        count += n;
      }
    }
  } else {
    std::mt19937_64 rng(sample.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    auto twice_product = [&](VertexId a, VertexId b) {
      return ball.dist_origin(a) + ball.dist_origin(b) - (a == b ? 0 : scan_distance(ball, a, b));
    };
    for (std::size_t s = 0; s < sample.samples; ++s) {
      const VertexId a = verts[pick(rng)];
      const VertexId b = verts[pick(rng)];
      const VertexId c = verts[pick(rng)];
      const int excess = std::min(twice_product(a, c), twice_product(b, c)) - twice_product(a, b);
      if (excess > 0) report(a, b, c, excess);
      worst = std::max(worst, excess);
    }
    count = sample.samples;
  }
  if (checked) *checked = count;
  return HalfInt::from_twice(worst);
}

}  // namespace

HalfInt four_point_delta(const Ball& ball, int inner, const SampleSpec& sample) {
  return four_point_scan(ball, inner, sample, nullptr, [](VertexId, VertexId, VertexId, int) {});
}

namespace {

std::vector<BoundaryPoint> certification_pool(const Ball& ball, const CertifyOptions& options) {
  const GroupModel& m = ball.model();
  std::vector<BoundaryPoint> pool;
  auto add = [&](const Word& period) {
    try {
      BoundaryPoint p(m, Word{}, period);
      p.verify(ball, ball.radius());
      pool.push_back(std::move(p));
    } catch (const InvalidInput&) {
    }
  };
  if (!options.periods.empty()) {
    for (const Word& w : options.periods) add(w);
    return pool;
  }
  for (int r = 0; r < m.degree(); ++r) add(Word{letter_from_rank(r)});
  for (int r1 = 0; r1 < m.degree(); ++r1) {
    for (int r2 = 0; r2 < m.degree(); ++r2) {
      const Letter x = letter_from_rank(r1), y = letter_from_rank(r2);
      if (x != y && x != inverse(y)) add(Word{x, y});
    }
  }
  return pool;
}

bool distinct_at(const Ball& ball, const BoundaryPoint& x, const BoundaryPoint& y, int depth, HalfInt nu) {
  if (x == y) return false;
  try {
    return !gromov_product_infinity(ball, ball.origin(), x, y, std::max(1, depth), nu).not_distinct;
  } catch (const PrecisionError&) {
    return false;
  }
}

}  // namespace

HyperbolicityCertificate certify_delta(const Ball& ball, HalfInt candidate, const CertifyOptions& options) {
  HyperbolicityCertificate cert;
  cert.ball_radius = ball.radius();
  cert.inner_radius = options.inner >= 0 ? options.inner : ball.radius() / 2;
  cert.delta_certified = candidate;
  const GroupModel& m = ball.model();
  auto record = [&](Violation v) {
    if (cert.violations.size() < options.max_violations) cert.violations.push_back(std::move(v));
  };

  // (delta1) thin triangles.
  cert.nu_thin = thin_scan(ball, cert.inner_radius, options.sample, &cert.triangles_checked,
                           [&](VertexId y, VertexId z, HalfInt d) {
                             if (d > candidate) {
                               record({"delta1", "triangle (e, " + m.format(ball.word(y)) + ", " +
                                                     m.format(ball.word(z)) + ") is not thin enough",
                                       d, candidate});
                             }
                           });

  // (delta3) Gromov-product inequality.
  cert.delta4 = four_point_scan(ball, cert.inner_radius, options.sample, &cert.quadruples_checked,
                                [&](VertexId a, VertexId b, VertexId c, int twice_excess) {
                                  const HalfInt excess = HalfInt::from_twice(twice_excess);
                                  if (excess > candidate) {
                                    record({"delta3", "a=" + m.format(ball.word(a)) + " b=" + m.format(ball.word(b)) +
                                                          " c=" + m.format(ball.word(c)) + " at e",
                                            excess, candidate});
                                  }
                                });

  const int depth = options.depth >= 0 ? options.depth : default_projection_depth(ball);
  const std::vector<BoundaryPoint> pool = certification_pool(ball, options);
  ProjectionEngine engine(ball, depth);
  const std::size_t n = pool.size();
  std::vector<char> distinct(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      distinct[i * n + j] = distinct[j * n + i] = distinct_at(ball, pool[i], pool[j], depth, cert.nu_thin);
    }
  }

  // (delta4) every vertex of B_1 lies in the projection of some triple.
  for (VertexId p = 0; p < ball.size(); ++p) {
    if (ball.dist_origin(p) > 1) continue;
    ++cert.delta4_points_checked;
    bool found = false;
    for (std::size_t i = 0; i < n && !found; ++i) {
      for (std::size_t j = i + 1; j < n && !found; ++j) {
        if (!distinct[i * n + j]) continue;
        for (std::size_t k = j + 1; k < n && !found; ++k) {
          if (!distinct[i * n + k] || !distinct[j * n + k]) continue;
          found = engine.contains(Triple{pool[i], pool[j], pool[k]}, candidate, p);
        }
      }
    }
    if (!found) record({"delta4", "no sampled triple projects onto " + m.format(ball.word(p)), HalfInt(0), candidate});
  }

  // (delta5) projections of (a, b, *) cover the geodesics from a to b.  The
  // third point is drawn from the pool or leaves the geodesic at z.  Only
  // vertices strictly inside the truncation depth are checked: a third
  // point leaving at depth N cannot be told apart from a or b there.
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n && pairs < options.delta5_pairs; ++i) {
    for (std::size_t j = i + 1; j < n && pairs < options.delta5_pairs; ++j) {
      if (!distinct[i * n + j]) continue;
      ++pairs;
      const BoundaryPoint& a = pool[i];
      const BoundaryPoint& b = pool[j];
      const VertexId ua = ball.at(a.truncate(static_cast<std::size_t>(depth)));
      const VertexId ub = ball.at(b.truncate(static_cast<std::size_t>(depth)));
      for (const auto& layer : ball.interval(ua, ub)) {
        for (VertexId z : layer) {
          if (ball.dist_origin(z) >= depth) continue;
          ++cert.delta5_points_checked;
          std::vector<BoundaryPoint> thirds;
          for (int r = 0; r < m.degree(); ++r) {
            try {
              BoundaryPoint c(m, ball.word(z), Word{letter_from_rank(r)});
              c.verify(ball, ball.radius());
              thirds.push_back(std::move(c));
            } catch (const InvalidInput&) {
            }
          }
          for (std::size_t k = 0; k < n; ++k) {
            if (k != i && k != j) thirds.push_back(pool[k]);
          }
          bool found = false;
          for (const BoundaryPoint& c : thirds) {
            if (!distinct_at(ball, a, c, depth, cert.nu_thin) || !distinct_at(ball, b, c, depth, cert.nu_thin)) {
              continue;
            }
            if (engine.contains(Triple{a, b, c}, candidate, z)) {
              found = true;
              break;
            }
          }
          if (!found) {
            record({"delta5", "vertex " + m.format(ball.word(z)) + " on a geodesic from " + a.str(m) + " to " +
                                  b.str(m) + " is in no sampled projection",
                    HalfInt(0), candidate});
          }
        }
      }
    }
  }
  return cert;
}

RayProductReport ray_product_bound_check(const Ball& ball, VertexId p, const GeodesicPath& ray_a,
                                         const GeodesicPath& ray_b, HalfInt nu) {
  if (ray_a.vertices.empty() || ray_b.vertices.empty() || ray_a.front() != p || ray_b.front() != p) {
    throw InvalidInput("rays are not anchored at the base point");
  }
  const std::size_t na = ray_a.vertices.size();
  const std::size_t nb = ray_b.vertices.size();
  // twice <a_i, b_j>_p; rays are geodesic so d(p, a_i) = i.
  std::vector<std::int64_t> twice(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const int d = scan_distance(ball, ray_a.vertices[i], ray_b.vertices[j]);
      twice[i * nb + j] = static_cast<std::int64_t>(i + j) - d;
    }
  }
  // best[i][j] = max over i' <= i, j' <= j of twice[i'][j'].
  std::vector<std::int64_t> best(na * nb);
  RayProductReport report;
  report.max_violation = HalfInt(std::numeric_limits<std::int32_t>::min());
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      std::int64_t b = twice[i * nb + j];
      if (i > 0) b = std::max(b, best[(i - 1) * nb + j]);
      if (j > 0) b = std::max(b, best[i * nb + (j - 1)]);
      best[i * nb + j] = b;
      const HalfInt excess = HalfInt::from_twice(b) - 2 * nu - HalfInt::from_twice(twice[i * nb + j]);
      report.max_violation = std::max(report.max_violation, excess);
      report.pairs_checked += (i + 1) * (j + 1);
    }
  }
  if (report.pairs_checked == 0) report.max_violation = HalfInt(0);
  report.pass = report.max_violation <= HalfInt(0);
  return report;
}

}  // namespace hypstab
