#pragma once

#include <string>
#include <vector>

#include "ibm/domain.hpp"
#include "ibm/scattering.hpp"

namespace ibm {

// Polar p-quadrature: trapezoid in angle (n_dirs, even), Gauss-Legendre in |p| on [0, p_max].
struct PolarRule {
    int n_dirs = 16, n_radii = 8;
    double p_max = 1;
    std::vector<Vec2> nodes;  // direction-major: index = i_radius * n_dirs + i_dir
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    // index of -p for node i
    std::size_t mirror(std::size_t i) const;
};

PolarRule polar_rule(int n_dirs, int n_radii, double p_max);

struct ReconstructionGrid {
    double radius = 1, spacing = 0;
    int side = 0;             // points per axis of the enclosing square
    std::vector<Vec2> points;  // square lattice points inside the disk, row-major in (y, x)
};

// square lattice of the given spacing clipped to the disk
ReconstructionGrid lattice_grid(double radius, double spacing);
// spacing = pi / (refine * p_max), capped at radius / 8
ReconstructionGrid reconstruction_grid(const Domain& domain, double p_max, double refine = 4);

struct ReconstructedPotential {
    std::vector<double> values;
    ReconstructionGrid grid;
    double p_max = 0;
    std::string provenance;
    int used = 0, dropped = 0;  // dataset entries kept / discarded by the condition filter
    double imag_residue = 0;    // max |Im| before taking the real part, relative to max |Re|
    double condition_soft = 0, condition_max = 0;
};

// Pairs at the rule's nodes, in rule order. |p| > 2 sqrt(E) (or E <= 0) needs the complex pair.
std::vector<MomentumPair> sample_momentum_set(double E, const PolarRule& rule, bool allow_faddeev = false);
std::vector<MomentumPair> sample_momentum_set(double E, int n_dirs, int n_radii, double p_max,
                                              bool allow_faddeev = false);

struct InversionOptions {
    double condition_soft = 1e4;  // weights scale as soft / cond above this
    double condition_max = 1e8;   // entries above are dropped
};

// v(x) = (2pi)^-2 sum_p w_p vhat(p) e^{ipx}, vhat(p) = (2pi)^2 datum(p), Hermitian-symmetrized.
ReconstructedPotential born_invert(const ScatteringDataset& data, const PolarRule& rule,
                                   const ReconstructionGrid& grid, const InversionOptions& opt = {});

// v filtered to the rule's band by the same quadrature: (2pi)^-2 sum_p w_p vhat(p) e^{ipx}
std::vector<double> lowpass_reference(const PotentialField& v, const PolarRule& rule, const ReconstructionGrid& grid);

// Dataset of exact Born values vhat(p) / (2pi)^2 (quadrature transform of v) at the rule's nodes.
ScatteringDataset born_dataset(const PotentialField& v, double E, const PolarRule& rule, bool allow_faddeev = false);

struct ErrorMetrics {
    double rel_l2 = 0, max_abs = 0;
    double support_localization = 1;
};

// support_localization: share of sum |recon| inside the disk of radius support + corr_length about center
ErrorMetrics error_metrics(const std::vector<double>& recon, const std::vector<double>& reference,
                           const ReconstructionGrid& grid, double support_radius, double corr_length,
                           Vec2 center = {});

}  // namespace ibm
