#include "ecd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "ecd/errors.hpp"

namespace ecd {

namespace {

constexpr double coupling_tol = 1e-12;

void check_sector_couplings(const Matrix& m, const SectorLabels& labels, const char* what) {
  const double scale = m.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (labels[i] != labels[j] && std::abs(m(i, j)) > coupling_tol * scale) {
        std::ostringstream os;
        os << "sector declaration inconsistent: " << what << " couples basis states " << i << " and " << j
           << " across sectors";
        throw DomainError(os.str());
      }
    }
  }
}

void fix_initial_phases(Matrix& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index r = 0;
    v.col(c).cwiseAbs().maxCoeff(&r);
    const cplx p = v(r, c);
    if (std::abs(p) > 0.0) v.col(c) *= std::conj(p) / std::abs(p);
  }
}

std::optional<Eigensystem> match(const Eigensystem& from, const Eigensystem& target, double min_overlap) {
  const Matrix overlap = from.vectors.adjoint() * target.vectors;
  const Eigen::Index n = overlap.rows();
  std::vector<char> taken(n, 0);
  Eigensystem out = target;
  for (Eigen::Index row = 0; row < n; ++row) {
    Eigen::Index best = 0;
    const double best_abs = overlap.row(row).cwiseAbs().maxCoeff(&best);
    if (best_abs <= min_overlap || taken[best]) return std::nullopt;
    taken[best] = 1;
    const cplx o = overlap(row, best);
    out.energies(row) = target.energies(best);
    out.vectors.col(row) = target.vectors.col(best) * (std::conj(o) / std::abs(o));
    out.column_sector[row] = target.column_sector[best];
  }
  return out;
}

Eigensystem continue_rec(const ControlHamiltonian& h, const Eigensystem& from, double la, double lb,
                         const SpectralOptions& options, int depth) {
  const Eigensystem target = diagonalize(h.at(lb), options);
  if (auto matched = match(from, target, options.min_overlap)) return *matched;
  if (depth >= options.max_refinements) {
    std::ostringstream os;
    os << "eigenstate continuation failed between lambda=" << la << " and lambda=" << lb;
    throw Error(os.str());
  }
  const double mid = 0.5 * (la + lb);
  const Eigensystem half = continue_rec(h, from, la, mid, options, depth + 1);
  return continue_rec(h, half, mid, lb, options, depth + 1);
}

}  // namespace

Eigensystem diagonalize(const Matrix& h, const SpectralOptions& options) {
  const Eigen::Index n = h.rows();
  if (h.cols() != n || n == 0) throw DimensionError("diagonalize: square non-empty matrix required");
  Eigensystem out;
  out.energies.resize(n);
  out.vectors = Matrix::Zero(n, n);
  out.column_sector.assign(static_cast<std::size_t>(n), 0);

  if (!options.sectors) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw Error("diagonalize: eigensolver failed");
    out.energies = es.eigenvalues();
    out.vectors = es.eigenvectors();
  } else {
    const SectorLabels& labels = *options.sectors;
    if (static_cast<Eigen::Index>(labels.size()) != n) {
      throw DimensionError("sector labels: expected " + std::to_string(n) + " labels, got " +
                           std::to_string(labels.size()));
    }
    check_sector_couplings(h, labels, "Hamiltonian");
    std::map<int, std::vector<Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < n; ++i) groups[labels[i]].push_back(i);
    Eigen::Index col = 0;
    for (const auto& [label, idx] : groups) {
      const auto k = static_cast<Eigen::Index>(idx.size());
      Matrix block(k, k);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) block(a, b) = h(idx[a], idx[b]);
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(block);
      if (es.info() != Eigen::Success) throw Error("diagonalize: eigensolver failed");
      for (Eigen::Index c = 0; c < k; ++c, ++col) {
        out.energies(col) = es.eigenvalues()(c);
        for (Eigen::Index a = 0; a < k; ++a) out.vectors(idx[a], col) = es.eigenvectors()(a, c);
        out.column_sector[col] = label;
      }
    }
  }

  out.min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 1; c < n; ++c) {
    if (out.column_sector[c] == out.column_sector[c - 1]) {
      out.min_gap = std::min(out.min_gap, out.energies(c) - out.energies(c - 1));
    }
  }
  const double range = out.energies.maxCoeff() - out.energies.minCoeff();
  out.gap_floor = options.gap_floor_rel * range;
  return out;
}

Eigensystem continue_eigensystem(const ControlHamiltonian& h, const Eigensystem& from, double lambda_from,
                                 double lambda_to, const SpectralOptions& options) {
  return continue_rec(h, from, lambda_from, lambda_to, options, 0);
}

SpectralFrame::SpectralFrame(std::vector<double> grid, std::vector<Eigensystem> points,
                             std::vector<Eigen::VectorXcd> berry, SpectralOptions options)
    : grid_(std::move(grid)), points_(std::move(points)), berry_(std::move(berry)), options_(std::move(options)) {}

double SpectralFrame::lambda_min() const {
  return std::min(grid_.front(), grid_.back());
}

double SpectralFrame::lambda_max() const {
  return std::max(grid_.front(), grid_.back());
}

bool SpectralFrame::covers(double lambda) const {
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lambda_min()), std::abs(lambda_max())));
  return lambda >= lambda_min() - slack && lambda <= lambda_max() + slack;
}

std::size_t SpectralFrame::nearest_index(double lambda) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid_.size(); ++k) {
    if (std::abs(grid_[k] - lambda) < std::abs(grid_[best] - lambda)) best = k;
  }
  return best;
}

Eigensystem SpectralFrame::at(const ControlHamiltonian& h, double lambda) const {
  if (!covers(lambda)) throw DomainError("lambda outside the spectral frame grid");
  const std::size_t k = nearest_index(lambda);
  if (grid_[k] == lambda) return points_[k];
  return continue_eigensystem(h, points_[k], grid_[k], lambda, options_);
}

SpectralFrame eigendecompose_continuous(const ControlHamiltonian& h, const std::vector<double>& grid,
                                        const SpectralOptions& options) {
  if (grid.size() < 2) throw DomainError("spectral grid needs at least 2 points");
  const bool increasing = grid[1] > grid[0];
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const bool ok = increasing ? grid[k] > grid[k - 1] : grid[k] < grid[k - 1];
    if (!ok) throw DomainError("spectral grid must be strictly monotone");
  }

  std::vector<Eigensystem> points;
  points.reserve(grid.size());
  Eigensystem first = diagonalize(h.at(grid[0]), options);
  fix_initial_phases(first.vectors);
  points.push_back(std::move(first));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0) points.push_back(continue_eigensystem(h, points[k - 1], grid[k - 1], grid[k], options));
    if (points[k].min_gap <= points[k].gap_floor) throw NearDegeneracyError(grid[k], points[k].min_gap);
  }

  const Eigen::Index n = h.dim();
  std::vector<Eigen::VectorXcd> berry(grid.size(), Eigen::VectorXcd::Zero(n));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == grid.size() ? k : k + 1;
    const double dl = grid[hi] - grid[lo];
    for (Eigen::Index c = 0; c < n; ++c) {
      const cplx fwd = points[k].vectors.col(c).dot(points[hi].vectors.col(c));
      const cplx bwd = points[k].vectors.col(c).dot(points[lo].vectors.col(c));
      // <n|dn> is imaginary for normalized states; keep the gauge-relevant part.
      const double im = (fwd - bwd).imag() / dl;
      berry[k](c) = cplx(-im, 0.0);
    }
  }
  return SpectralFrame(grid, std::move(points), std::move(berry), options);
}

Matrix cd_field_matrix(const Matrix& h, const Matrix& dh, double lambda, double lambda_dot,
                       const SpectralOptions& options) {
  const Eigen::Index n = h.rows();
  if (dh.rows() != n || dh.cols() != n) throw DimensionError("cd_field: H and dH dimensions differ");
  if (lambda_dot == 0.0) return Matrix::Zero(n, n);
  if (options.sectors) check_sector_couplings(dh, *options.sectors, "dH/dlambda");

  const Eigensystem es = diagonalize(h, options);
  if (es.min_gap <= es.gap_floor) throw DegeneracyError(lambda, es.min_gap);

  const Matrix d = es.vectors.adjoint() * dh * es.vectors;
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (r == c || es.column_sector[r] != es.column_sector[c]) continue;
      m(r, c) = d(r, c) / (es.energies(c) - es.energies(r));
    }
  }
  Matrix out = cplx(0.0, lambda_dot) * (es.vectors * m * es.vectors.adjoint());
  return 0.5 * (out + out.adjoint());
}

Operator cd_field(const ControlHamiltonian& h, double lambda, double lambda_dot, const SpectralOptions& options) {
  return Operator::hermitian(cd_field_matrix(h.at(lambda), h.derivative_at(lambda), lambda, lambda_dot, options));
}

Operator cd_field(const SpectralFrame& frame, const ControlHamiltonian& h, double lambda, double lambda_dot) {
  if (!frame.covers(lambda)) throw DomainError("cd_field: lambda outside the spectral frame grid");
  if (h.dim() != frame.vectors(0).rows()) throw DimensionError("cd_field: frame and Hamiltonian dimensions differ");
  return cd_field(h, lambda, lambda_dot, frame.options());
}

double cd_field_lz(double lambda, double lambda_dot, double omega) {
  if (omega == 0.0) throw DomainError("cd_field_lz: Omega must be nonzero (levels cross)");
  return -0.5 * lambda_dot * omega / (lambda * lambda + omega * omega);
}

}  // namespace ecd
