#include "hypstab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypstab/errors.hpp"

namespace hypstab {

BoundaryPoint::BoundaryPoint(const GroupModel& model, Word prefix, Word period)
    : prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.empty()) throw InvalidInput("boundary point needs a nonempty period");
  if (!is_freely_reduced(prefix_)) throw InvalidInput("boundary point prefix is not freely reduced");
  if (!is_freely_reduced(period_ * period_)) throw InvalidInput("boundary point period is not cyclically reduced");
  if (!is_freely_reduced(prefix_ * period_)) throw InvalidInput("boundary point prefix and period cancel");
  if (model.is_trivial(period_)) throw InvalidInput("boundary point period is trivial");
}

BoundaryPoint BoundaryPoint::parse(const GroupModel& model, std::string_view literal) {
  const auto bar = literal.find('|');
  if (bar == std::string_view::npos || literal.find('|', bar + 1) != std::string_view::npos) {
    throw InvalidInput("boundary point literal must look like 'prefix|period': '" + std::string(literal) + "'");
  }
  return BoundaryPoint(model, model.parse_word(literal.substr(0, bar)), model.parse_word(literal.substr(bar + 1)));
}

Word BoundaryPoint::truncate(std::size_t n) const {
  Word w;
  w.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.push_back(i < prefix_.size() ? prefix_[i] : period_[(i - prefix_.size()) % period_.size()]);
  }
  return w;
}

std::string BoundaryPoint::str(const GroupModel& model) const {
  return model.format(prefix_) + "|" + model.format(period_);
}

void BoundaryPoint::verify(const Ball& ball, int depth) const {
  if (ball.is_tube()) {
    verify(ball.model(), depth);
    return;
  }
  const int in_ball = std::min(depth, ball.radius());
  const Word w = truncate(static_cast<std::size_t>(in_ball));
  const auto v = ball.find(w);
  if (!v || ball.dist_origin(*v) != in_ball) {
    throw InvalidInput("boundary point " + str(ball.model()) + " is not geodesic at depth " + std::to_string(in_ball));
  }
  if (depth > in_ball) verify(ball.model(), depth);
}

void BoundaryPoint::verify(const GroupModel& model, int depth) const {
  if (!is_geodesic_word(model, truncate(static_cast<std::size_t>(std::max(0, depth))))) {
    throw InvalidInput("boundary point " + str(model) + " is not geodesic at depth " + std::to_string(depth));
  }
}

namespace {

int exact_distance(const Ball& ball, VertexId u, VertexId v) {
  if (ball.is_tube()) return ball.distance(u, v);
  const auto d = ball.group_distance(u, v);
  if (!d) throw ContainmentError("truncation distance exceeds the ball radius; lower the depth");
  return *d;
}

std::vector<VertexId> truncation_vertices(const Ball& ball, const BoundaryPoint& p, int depth) {
  std::vector<VertexId> out;
  for (int i = 0; i <= depth; ++i) {
    const auto v = ball.find(p.truncate(static_cast<std::size_t>(i)));
    if (!v) throw ContainmentError("truncation of " + p.str(ball.model()) + " at depth " + std::to_string(i) +
                                   " leaves the Cayley region");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

ProductInterval gromov_product_infinity(const Ball& ball, VertexId p, const BoundaryPoint& alpha,
                                        const BoundaryPoint& beta, int depth, HalfInt nu) {
  if (depth < 1) throw InvalidInput("product depth must be positive");
  const auto as = truncation_vertices(ball, alpha, depth);
  const auto bs = truncation_vertices(ball, beta, depth);
  std::vector<int> dpa, dpb;
  for (VertexId v : as) dpa.push_back(exact_distance(ball, p, v));
  for (VertexId v : bs) dpb.push_back(exact_distance(ball, p, v));

  // best[n] = max product over i, j <= n.
  std::vector<int> best(static_cast<std::size_t>(depth) + 1, std::numeric_limits<int>::min());
  for (int i = 0; i <= depth; ++i) {
    for (int j = 0; j <= depth; ++j) {
      const int twice = dpa[static_cast<std::size_t>(i)] + dpb[static_cast<std::size_t>(j)] -
                        exact_distance(ball, as[static_cast<std::size_t>(i)], bs[static_cast<std::size_t>(j)]);
      const auto n = static_cast<std::size_t>(std::max(i, j));
      best[n] = std::max(best[n], twice);
    }
  }
  for (std::size_t n = 1; n < best.size(); ++n) best[n] = std::max(best[n], best[n - 1]);

  ProductInterval out;
  const int top = best.back();
  out.max_truncation_product = HalfInt::from_twice(top);
  out.stabilized_at = static_cast<int>(std::find(best.begin(), best.end(), top) - best.begin());
  out.not_distinct = as.back() == bs.back() || top >= 2 * depth;
  if (!out.not_distinct && best[best.size() - 2] < top) {
    throw PrecisionError("Gromov product of " + alpha.str(ball.model()) + " and " + beta.str(ball.model()) +
                         " still grows at depth " + std::to_string(depth));
  }
  out.hi = out.max_truncation_product;
  out.lo = std::max(HalfInt(0), out.hi - 2 * nu);
  return out;
}

void VisualMetricParams::validate() const {
  if (!(lambda > 1.0)) throw InvalidInput("visual metric needs lambda > 1");
  if (!(k1 > 0.0) || !(k2 >= k1)) throw InvalidInput("visual metric needs k2 >= k1 > 0");
  if (depth < 4) throw InvalidInput("visual metric depth must be at least 4");
}

DistanceInterval visual_distance(const VisualMetricParams& params, const ProductInterval& product) {
  return {params.k1 * std::pow(params.lambda, -product.hi.to_double()),
          params.k2 * std::pow(params.lambda, -product.lo.to_double())};
}

MinsepResult minsep(const Ball& ball, const Triple& t, const VisualMetricParams& params, HalfInt nu) {
  params.validate();
  const BoundaryPoint* pts[3] = {&t.a, &t.b, &t.c};
  MinsepResult out{std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const ProductInterval pr = gromov_product_infinity(ball, ball.origin(), *pts[i], *pts[j], params.depth, nu);
      if (pr.not_distinct) {
        throw DomainError("triple has repeated point " + pts[i]->str(ball.model()) + " ~ " +
                          pts[j]->str(ball.model()) + " at depth " + std::to_string(params.depth));
      }
      const DistanceInterval d = visual_distance(params, pr);
      out.value = std::min(out.value, d.mid());
      out.uncertainty = std::max(out.uncertainty, 0.5 * (d.hi - d.lo));
    }
  }
  return out;
}

BoundaryPoint random_boundary_point(const Ball& ball, std::mt19937_64& rng, int max_prefix, int max_period,
                                    int verify_depth) {
  const GroupModel& m = ball.model();
  std::uniform_int_distribution<int> letter(0, m.degree() - 1);
  std::uniform_int_distribution<int> prefix_len(0, std::max(0, max_prefix));
  std::uniform_int_distribution<int> period_len(1, std::max(1, max_period));
  auto grow = [&](Word w, int len) {
    while (static_cast<int>(w.size()) < len) {
      const Letter x = letter_from_rank(letter(rng));
      if (!w.empty() && w.back() == inverse(x)) continue;
      w.push_back(x);
    }
    return w;
  };
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Word prefix = grow(Word{}, prefix_len(rng));
    const Word period = grow(Word{}, period_len(rng));
    if (!is_freely_reduced(period * period) || !is_freely_reduced(prefix * period)) continue;
    try {
      BoundaryPoint p(m, prefix, period);
      p.verify(ball, verify_depth);
      return p;
    } catch (const InvalidInput&) {
    }
  }
  throw ResourceError("could not sample a geodesic boundary point");
}

bool is_geodesic_word(const GroupModel& model, const Word& w, int thickness) {
  if (!is_freely_reduced(w)) return false;
  if (model.is_free() || w.size() <= 1) return true;
  const Ball tube = build_tube(model, w, thickness);
  return tube.distance(tube.seed(0), tube.seed(w.size())) == static_cast<int>(w.size());
}

}  // namespace hypstab
