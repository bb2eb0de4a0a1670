#pragma once

#include <optional>
#include <vector>

#include "ecd/control_hamiltonian.hpp"

namespace ecd {

/// One integer label per basis state; couplings between different labels must vanish.
using SectorLabels = std::vector<int>;

struct SpectralOptions {
  std::optional<SectorLabels> sectors;
  /// Gap floor relative to the spectral range of the full Hamiltonian.
  double gap_floor_rel = 1e-8;
  /// Minimum overlap accepted when continuing eigenvectors between grid points.
  double min_overlap = 0.8;
  /// Maximum bisection depth when continuation fails.
  int max_refinements = 40;
};

struct Eigensystem {
  Eigen::VectorXd energies;
  Matrix vectors;
  /// Sector label of each column (all zero when no sectors are declared).
  std::vector<int> column_sector;
  /// Smallest within-sector gap.
  double min_gap = 0.0;
  /// Gap floor that applied to this point.
  double gap_floor = 0.0;
};

/// Sector-resolved diagonalization. Columns are grouped by sector label and
/// sorted by energy inside each sector; no gap check is done here.
Eigensystem diagonalize(const Matrix& h, const SpectralOptions& options = {});

/// Eigensystem at lambda_to continued from `from` (valid at lambda_from): columns
/// matched by maximum overlap, phases fixed so <n_from|n_to> is real and positive.
/// Bisects the interval until every matched overlap exceeds options.min_overlap.
Eigensystem continue_eigensystem(const ControlHamiltonian& h, const Eigensystem& from, double lambda_from,
                                 double lambda_to, const SpectralOptions& options = {});

class SpectralFrame {
 public:
  SpectralFrame(std::vector<double> grid, std::vector<Eigensystem> points, std::vector<Eigen::VectorXcd> berry,
                SpectralOptions options);

  std::size_t size() const { return grid_.size(); }
  const std::vector<double>& grid() const { return grid_; }
  const Eigen::VectorXd& energies(std::size_t k) const { return points_[k].energies; }
  const Matrix& vectors(std::size_t k) const { return points_[k].vectors; }
  const Eigensystem& point(std::size_t k) const { return points_[k]; }
  /// i <n|d_lambda n> in the continuity gauge (central differences).
  const Eigen::VectorXcd& berry_connection(std::size_t k) const { return berry_[k]; }
  const SpectralOptions& options() const { return options_; }

  double lambda_min() const;
  double lambda_max() const;
  bool covers(double lambda) const;
  std::size_t nearest_index(double lambda) const;

  /// Eigensystem at an arbitrary lambda inside the grid, continued from the nearest grid point.
  Eigensystem at(const ControlHamiltonian& h, double lambda) const;

 private:
  std::vector<double> grid_;
  std::vector<Eigensystem> points_;
  std::vector<Eigen::VectorXcd> berry_;
  SpectralOptions options_;
};

/// Throws NearDegeneracyError when a within-sector gap falls to the floor.
SpectralFrame eigendecompose_continuous(const ControlHamiltonian& h, const std::vector<double>& grid,
                                        const SpectralOptions& options = {});

/// H_CD = i lambda_dot sum_{n != m} |n><n| dH |m><m| / (E_m - E_n), sums restricted to sectors.
Operator cd_field(const SpectralFrame& frame, const ControlHamiltonian& h, double lambda, double lambda_dot);

/// Frame-free evaluation; the gauge-invariant field needs no tracking.
Operator cd_field(const ControlHamiltonian& h, double lambda, double lambda_dot, const SpectralOptions& options = {});

/// Same sum from explicit matrices.
Matrix cd_field_matrix(const Matrix& h, const Matrix& dh, double lambda, double lambda_dot,
                       const SpectralOptions& options = {});

/// Closed form for H = lambda sigma_z + Omega sigma_x: coefficient of sigma_y.
double cd_field_lz(double lambda, double lambda_dot, double omega);

}  // namespace ecd
