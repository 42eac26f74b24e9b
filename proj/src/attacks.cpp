#include "mixprof/attacks.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace mixprof {

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::Sda: return "sda";
    case AttackKind::Sda0: return "sda0";
    case AttackKind::Sda1: return "sda1";
    case AttackKind::Sda2: return "sda2";
    case AttackKind::Lsda: return "lsda";
  }
  return "?";
}

std::optional<AttackKind> attack_from_string(std::string_view name) {
  if (name == "sda") return AttackKind::Sda;
  if (name == "sda0") return AttackKind::Sda0;
  if (name == "sda1") return AttackKind::Sda1;
  if (name == "sda2") return AttackKind::Sda2;
  if (name == "lsda") return AttackKind::Lsda;
  return std::nullopt;
}

namespace {

using std::int64_t;

// Every inner product in the per-user estimators is a dot of small integer
// vectors, so numerators and denominators are accumulated exactly in 64-bit
// integers; only the final ratios are floating point.

// Per-user view of one input column: the rounds where the user sent, the
// counts there, and the scalar products that every estimator needs.
struct UserSlice {
  std::vector<int> rounds;          // indices with x > 0, ascending
  std::vector<int> counts;          // x at those rounds
  int64_t active = 0;               // x+' 1
  int64_t sent = 0;                 // x' 1  (= x+' x)
  int64_t sent_sq = 0;              // x' x
  std::vector<int64_t> plus_dot;    // x+' y_j per recipient
  std::vector<int64_t> weight_dot;  // x' y_j per recipient

  UserSlice(const IntMatrix& x, const IntMatrix& y, int i) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const int v = x(r, i);
      if (v > 0) {
        rounds.push_back(static_cast<int>(r));
        counts.push_back(v);
        ++active;
        sent += v;
        sent_sq += static_cast<int64_t>(v) * v;
      }
    }
    const auto n = static_cast<std::size_t>(y.cols());
    plus_dot.assign(n, 0);
    weight_dot.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      const int* col = y.col(static_cast<Eigen::Index>(j)).data();
      int64_t p = 0, w = 0;
      for (std::size_t k = 0; k < rounds.size(); ++k) {
        const int v = col[rounds[k]];
        p += v;
        w += static_cast<int64_t>(counts[k]) * v;
      }
      plus_dot[j] = p;
      weight_dot[j] = w;
    }
  }
};

std::vector<int64_t> recipient_totals(const IntMatrix& y) {
  std::vector<int64_t> totals(static_cast<std::size_t>(y.cols()), 0);
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    int64_t s = 0;
    for (Eigen::Index r = 0; r < y.rows(); ++r) s += y(r, j);
    totals[static_cast<std::size_t>(j)] = s;
  }
  return totals;
}

std::optional<BackgroundEstimate> background_from(const UserSlice& u, int64_t rho,
                                                  int t,
                                                  const std::vector<int64_t>& totals) {
  const int64_t idle = rho - u.active;
  if (idle <= 0) return std::nullopt;
  BackgroundEstimate bg;
  bg.rounds_used = idle;
  bg.value.resize(static_cast<Eigen::Index>(totals.size()));
  // (1 - x+)' y_j = 1' y_j - x+' y_j
  const double denom = static_cast<double>(t) * static_cast<double>(idle);
  for (std::size_t j = 0; j < totals.size(); ++j)
    bg.value(static_cast<Eigen::Index>(j)) =
        static_cast<double>(totals[j] - u.plus_dot[j]) / denom;
  return bg;
}

std::optional<Vector> sda_from(const UserSlice& u, int t, int n_users) {
  if (u.active == 0) return std::nullopt;
  const auto n = static_cast<Eigen::Index>(u.plus_dot.size());
  Vector est(n);
  for (Eigen::Index j = 0; j < n; ++j)
    est(j) = static_cast<double>(u.plus_dot[static_cast<std::size_t>(j)]) / u.active -
             static_cast<double>(t - 1) / n_users;
  return est;
}

std::optional<Vector> sda0_from(const UserSlice& u, int64_t rho, int t,
                                const std::vector<int64_t>& totals) {
  if (u.active == 0) return std::nullopt;
  const auto bg = background_from(u, rho, t, totals);
  if (!bg) return std::nullopt;
  // x+' x_i is the total sent; x+' x_b = t * active - total sent.
  const auto denom = static_cast<double>(u.sent);
  const auto cross = static_cast<double>(static_cast<int64_t>(t) * u.active - u.sent);
  Vector est(bg->value.size());
  for (Eigen::Index j = 0; j < est.size(); ++j)
    est(j) = (static_cast<double>(u.plus_dot[static_cast<std::size_t>(j)]) -
              cross * bg->value(j)) /
             denom;
  return est;
}

std::optional<Vector> sda1_from(const UserSlice& u, int64_t rho, int t,
                                const std::vector<int64_t>& totals) {
  if (u.active == 0) return std::nullopt;
  const auto bg = background_from(u, rho, t, totals);
  if (!bg) return std::nullopt;
  // x_i' x_b = t * sent - x_i' x_i.
  const auto denom = static_cast<double>(u.sent_sq);
  const auto cross = static_cast<double>(static_cast<int64_t>(t) * u.sent - u.sent_sq);
  Vector est(bg->value.size());
  for (Eigen::Index j = 0; j < est.size(); ++j)
    est(j) = (static_cast<double>(u.weight_dot[static_cast<std::size_t>(j)]) -
              cross * bg->value(j)) /
             denom;
  return est;
}

std::optional<Vector> sda2_from(const UserSlice& u, int64_t rho, int t,
                                const std::vector<int64_t>& totals) {
  // Gram matrix of U = (x_i, x_b) has integer entries, so the singularity
  // test (x_i and x_b collinear, e.g. x_i constant or zero) is exact.
  const int64_t tt = t;
  const int64_t d = u.sent_sq;                         // x_i' x_i
  const int64_t h = tt * u.sent - u.sent_sq;           // x_i' x_b
  const int64_t e = tt * tt * rho - 2 * tt * u.sent + d;  // x_b' x_b
  const int64_t det = d * e - h * h;
  if (det == 0) return std::nullopt;
  const auto n = static_cast<Eigen::Index>(totals.size());
  Vector est(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const auto r1 = static_cast<double>(u.weight_dot[sj]);                  // x_i' y_j
    const auto r2 = static_cast<double>(tt * totals[sj] - u.weight_dot[sj]);  // x_b' y_j
    est(j) = (static_cast<double>(e) * r1 - static_cast<double>(h) * r2) /
             static_cast<double>(det);
  }
  return est;
}

void check_user_index(const ObservationPair& obs, int i) {
  if (i < 0 || i >= obs.n_users()) {
    std::ostringstream msg;
    msg << "user index " << i << " out of range [0, " << obs.n_users() << ")";
    throw std::out_of_range(msg.str());
  }
}

}  // namespace

std::optional<BackgroundEstimate> estimate_background(const ObservationPair& obs,
                                                      int i, int threshold) {
  check_user_index(obs, i);
  return background_from(UserSlice(obs.x, obs.y, i), obs.rounds(), threshold,
                         recipient_totals(obs.y));
}

std::optional<Vector> sda(const ObservationPair& obs, int i, int threshold,
                          int n_users) {
  check_user_index(obs, i);
  return sda_from(UserSlice(obs.x, obs.y, i), threshold, n_users);
}

std::optional<Vector> sda0(const ObservationPair& obs, int i, int threshold) {
  check_user_index(obs, i);
  return sda0_from(UserSlice(obs.x, obs.y, i), obs.rounds(), threshold,
                   recipient_totals(obs.y));
}

std::optional<Vector> sda1(const ObservationPair& obs, int i, int threshold) {
  check_user_index(obs, i);
  return sda1_from(UserSlice(obs.x, obs.y, i), obs.rounds(), threshold,
                   recipient_totals(obs.y));
}

std::optional<Vector> sda2(const ObservationPair& obs, int i, int threshold) {
  check_user_index(obs, i);
  return sda2_from(UserSlice(obs.x, obs.y, i), obs.rounds(), threshold,
                   recipient_totals(obs.y));
}

SingularNormalEquations::SingularNormalEquations(Eigen::Index rank, Eigen::Index size)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "X'X is singular: rank " << rank << " of " << size
            << "; the instance does not identify all profiles "
               "(enable the minimum-norm fallback to force a solution)";
        return msg.str();
      }()),
      rank_(rank),
      size_(size) {}

EstimatedProfiles lsda(const ObservationPair& obs, const LsdaOptions& options) {
  const int n = obs.n_users();
  // Counts are small integers, so these products are exact in doubles.
  const Matrix xd = obs.x.cast<double>();
  const Matrix yd = obs.y.cast<double>();
  const Matrix gram = xd.transpose() * xd;
  const Matrix rhs = xd.transpose() * yd;

  Eigen::SelfAdjointEigenSolver<Matrix> eigen(gram);
  const Vector& lambda = eigen.eigenvalues();  // ascending
  const double lambda_max = lambda(n - 1);
  const double tol = lambda_max * n * std::numeric_limits<double>::epsilon();
  Eigen::Index rank = 0;
  for (int k = 0; k < n; ++k)
    if (lambda(k) > tol) ++rank;

  EstimatedProfiles out;
  out.attack_name = "lsda";
  out.condition_number = (rank == n && lambda(0) > 0.0)
                             ? lambda_max / lambda(0)
                             : std::numeric_limits<double>::infinity();

  Matrix solution;  // solution(i, j) = estimated p(j | i)
  if (rank < n) {
    if (!options.allow_rank_deficient) throw SingularNormalEquations(rank, n);
    Vector inv = Vector::Zero(n);
    for (int k = 0; k < n; ++k)
      if (lambda(k) > tol) inv(k) = 1.0 / lambda(k);
    solution = eigen.eigenvectors() * inv.asDiagonal() *
               eigen.eigenvectors().transpose() * rhs;
  } else {
    solution = gram.ldlt().solve(rhs);
  }
  out.est = solution.transpose();
  return out;
}

EstimatedProfiles run_attack(AttackKind kind, const ObservationPair& obs,
                             const MixConfig& config, const LsdaOptions& options) {
  if (kind == AttackKind::Lsda) return lsda(obs, options);

  const int n = obs.n_users();
  const int t = config.threshold;
  const int64_t rho = obs.rounds();
  EstimatedProfiles out;
  out.attack_name = to_string(kind);
  out.est.resize(n, n);

  const auto totals = recipient_totals(obs.y);
  for (int i = 0; i < n; ++i) {
    const UserSlice u(obs.x, obs.y, i);
    std::optional<Vector> col;
    switch (kind) {
      case AttackKind::Sda: col = sda_from(u, t, n); break;
      case AttackKind::Sda0: col = sda0_from(u, rho, t, totals); break;
      case AttackKind::Sda1: col = sda1_from(u, rho, t, totals); break;
      case AttackKind::Sda2: col = sda2_from(u, rho, t, totals); break;
      case AttackKind::Lsda: break;  // handled above
    }
    if (col) {
      out.est.col(i) = *col;
    } else {
      out.est.col(i).setConstant(std::numeric_limits<double>::quiet_NaN());
      out.undefined_users.insert(i);
    }
  }
  return out;
}

}  // namespace mixprof
