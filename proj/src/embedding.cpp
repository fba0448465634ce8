#include "graphdrift/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "graphdrift/errors.hpp"
#include "graphdrift/parallel.hpp"
#include "graphdrift/rng.hpp"

namespace graphdrift {

Eigen::VectorXd embed(const AttributedGraph& g, const PrototypeSet& prototypes,
                      const DistanceFn& distance) {
  if (prototypes.prototypes.empty())
    throw std::invalid_argument("embed: empty prototype set");
  Eigen::VectorXd y(static_cast<Eigen::Index>(prototypes.prototypes.size()));
  for (std::size_t m = 0; m < prototypes.prototypes.size(); ++m)
    y(static_cast<Eigen::Index>(m)) = distance(g, prototypes.prototypes[m]);
  return y;
}

Eigen::MatrixXd embed_all(const std::vector<const AttributedGraph*>& graphs,
                          const PrototypeSet& prototypes, const DistanceFn& distance,
                          int threads) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(prototypes.prototypes.size()),
                      static_cast<Eigen::Index>(graphs.size()));
  parallel_for(graphs.size(), threads, [&](std::size_t i) {
    out.col(static_cast<Eigen::Index>(i)) = embed(*graphs[i], prototypes, distance);
  });
  return out;
}

Eigen::MatrixXd embed_all(const std::vector<AttributedGraph>& graphs,
                          const PrototypeSet& prototypes, const DistanceFn& distance,
                          int threads) {
  std::vector<const AttributedGraph*> ptrs(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) ptrs[i] = &graphs[i];
  return embed_all(ptrs, prototypes, distance, threads);
}

Eigen::MatrixXd pairwise_distances(const std::vector<AttributedGraph>& graphs,
                                   const DistanceFn& distance, int threads) {
  const std::size_t n = graphs.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  // Row-indexed parallelism; each worker fills disjoint cells.
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = distance(graphs[i], graphs[j]);
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  });
  return d;
}

namespace {

struct SingleRun {
  std::vector<std::size_t> centres;
  double radius = std::numeric_limits<double>::infinity();
  std::vector<double> objective_trace;
};

// One alternating run from the given initial centres. Distances are looked
// up in the precomputed matrix, candidates for recentring range over the
// whole collection.
SingleRun k_centres_single(const Eigen::MatrixXd& d, std::size_t m,
                           std::vector<std::size_t> centres) {
  const std::size_t n = static_cast<std::size_t>(d.rows());
  std::vector<std::size_t> assign(n, 0);
  std::vector<double> trace;
  const int max_rounds = 100;  // cycle guard; fixed points arrive much earlier
  for (int round = 0; round < max_rounds; ++round) {
    // Assignment step; ties go to the lowest centre slot.
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t c = 0; c < m; ++c) {
        double v = d(static_cast<Eigen::Index>(centres[c]), static_cast<Eigen::Index>(i));
        if (v < best) {
          best = v;
          arg = c;
        }
      }
      assign[i] = arg;
    }
    // A centre that lost every point restarts on the point farthest from all
    // current centres.
    for (std::size_t c = 0; c < m; ++c) {
      bool empty = true;
      for (std::size_t i = 0; i < n && empty; ++i)
        if (assign[i] == c) empty = false;
      if (!empty) continue;
      double far = -1.0;
      std::size_t pick = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t c2 = 0; c2 < m; ++c2)
          nearest = std::min(nearest, d(static_cast<Eigen::Index>(centres[c2]),
                                        static_cast<Eigen::Index>(i)));
        if (nearest > far) {
          far = nearest;
          pick = i;
        }
      }
      centres[c] = pick;
      assign[pick] = c;
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      obj = std::max(obj, d(static_cast<Eigen::Index>(centres[assign[i]]),
                            static_cast<Eigen::Index>(i)));
    trace.push_back(obj);
    // Recentre: candidate minimising the worst distance to the cluster,
    // ties to the lowest collection index.
    std::vector<std::size_t> updated(m);
    for (std::size_t c = 0; c < m; ++c) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = centres[c];
      for (std::size_t cand = 0; cand < n; ++cand) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (assign[i] != c) continue;
          worst = std::max(worst, d(static_cast<Eigen::Index>(cand),
                                    static_cast<Eigen::Index>(i)));
          if (worst >= best) break;
        }
        if (worst < best) {
          best = worst;
          arg = cand;
        }
      }
      updated[c] = arg;
    }
    if (updated == centres) break;
    centres = std::move(updated);
  }

  // Covering radius under the final assignment.
  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m; ++c)
      nearest = std::min(nearest, d(static_cast<Eigen::Index>(centres[c]),
                                    static_cast<Eigen::Index>(i)));
    radius = std::max(radius, nearest);
  }
  return SingleRun{std::move(centres), radius, std::move(trace)};
}

}  // namespace

KCentresResult k_centres_on_matrix(const Eigen::MatrixXd& pairwise, std::size_t m,
                                   int repeats, std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(pairwise.rows());
  if (pairwise.rows() != pairwise.cols())
    throw std::invalid_argument("k_centres: distance matrix must be square");
  if (m == 0 || m > n)
    throw std::invalid_argument("k_centres: need 1 <= m <= collection size");
  if (repeats < 1) throw std::invalid_argument("k_centres: repeats must be >= 1");

  SingleRun best;
  for (int r = 0; r < repeats; ++r) {
    SplitMix64 rng(derive_seed(seed, seed_tag::kKCentres, static_cast<std::uint64_t>(r)));
    SingleRun run = k_centres_single(pairwise, m, sample_distinct(rng, n, m));
    if (run.radius < best.radius) best = std::move(run);
  }
  std::sort(best.centres.begin(), best.centres.end());
  return KCentresResult{std::move(best.centres), best.radius, std::move(best.objective_trace)};
}

PrototypeSet k_centres(const std::vector<AttributedGraph>& training, std::size_t m,
                       const DistanceFn& distance, int repeats, std::uint64_t seed,
                       int threads) {
  if (training.empty()) throw std::invalid_argument("k_centres: empty training collection");
  Eigen::MatrixXd d = pairwise_distances(training, distance, threads);
  KCentresResult picked = k_centres_on_matrix(d, m, repeats, seed);

  PrototypeSet out;
  out.source_indices = picked.centres;
  out.covering_radius = picked.radius;
  out.prototypes.reserve(m);
  for (std::size_t idx : picked.centres) out.prototypes.push_back(training[idx]);
  out.pairwise.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      out.pairwise(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          d(static_cast<Eigen::Index>(picked.centres[a]),
            static_cast<Eigen::Index>(picked.centres[b]));
  return out;
}

ScalingModel classical_scaling(const Eigen::MatrixXd& pairwise, double tol) {
  const Eigen::Index m = pairwise.rows();
  if (m != pairwise.cols() || m < 1)
    throw std::invalid_argument("classical_scaling: need a square distance matrix");
  if (!pairwise.isApprox(pairwise.transpose(), 1e-12))
    throw std::invalid_argument("classical_scaling: distance matrix must be symmetric");

  Eigen::MatrixXd d2 = pairwise.array().square().matrix();
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(m, m) -
                      Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  Eigen::MatrixXd b = -0.5 * j * d2 * j;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success)
    throw GeometryError("classical_scaling: eigendecomposition failed");
  Eigen::VectorXd lambda = solver.eigenvalues();  // ascending
  Eigen::MatrixXd vectors = solver.eigenvectors();

  double largest = lambda(m - 1);
  if (largest <= 0.0) {
    // All points coincide: a single zero coordinate is a valid configuration.
    if (pairwise.cwiseAbs().maxCoeff() > tol)
      throw GeometryError("classical_scaling: no positive eigenvalue for nonzero distances");
    ScalingModel flat;
    flat.x = Eigen::MatrixXd::Zero(1, m);
    flat.eigenvalues = Eigen::VectorXd::Zero(1);
    return flat;
  }
  double cutoff = tol * largest;
  if (lambda(0) < -cutoff)
    throw GeometryError("classical_scaling: distances are not Euclidean (negative eigenvalue)");

  // Positive part of the spectrum, descending.
  std::vector<std::pair<double, Eigen::Index>> pos;
  double mass = 0.0;
  for (Eigen::Index i = m - 1; i >= 0; --i) {
    if (lambda(i) > cutoff) {
      pos.emplace_back(lambda(i), i);
      mass += lambda(i);
    }
  }
  // Keep the smallest leading block covering essentially all of the mass.
  double covered = 0.0;
  std::size_t k = 0;
  for (; k < pos.size(); ++k) {
    covered += pos[k].first;
    if (covered >= (1.0 - 1e-6) * mass) {
      ++k;
      break;
    }
  }
  if (k == 0) k = 1;

  ScalingModel model;
  model.x.resize(static_cast<Eigen::Index>(k), m);
  model.eigenvalues.resize(static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < k; ++r) {
    model.eigenvalues(static_cast<Eigen::Index>(r)) = pos[r].first;
    model.x.row(static_cast<Eigen::Index>(r)) =
        std::sqrt(pos[r].first) * vectors.col(pos[r].second).transpose();
  }
  return model;
}

Eigen::VectorXd u_transform(const Eigen::VectorXd& y, const ScalingModel& scaling) {
  const Eigen::Index m = scaling.x.cols();
  if (y.size() != m)
    throw std::invalid_argument("u_transform: vector length must match prototype count");
  Eigen::VectorXd y2 = y.array().square().matrix();
  Eigen::VectorXd centered = y2.array() - y2.mean();
  return scaling.x * centered;
}

}  // namespace graphdrift
