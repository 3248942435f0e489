#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace ibm {

using cplx = std::complex<double>;

struct Vec2 {
    double x = 0, y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a);

// Complex 2-vector; k.k uses the bilinear (not Hermitian) product.
struct CVec2 {
    cplx x = 0, y = 0;
};
inline cplx dot(CVec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline cplx dot(CVec2 a, CVec2 b) { return a.x * b.x + a.y * b.y; }

struct Domain {
    double radius = 1.0;
};

struct BoundaryGrid {
    double radius = 1.0;
    int n = 0;
    std::vector<double> theta;
    std::vector<Vec2> points;
    std::vector<Vec2> normals;
    std::vector<double> weights;

    double weight() const { return weights.empty() ? 0.0 : weights[0]; }
    bool same_as(const BoundaryGrid& o) const { return n == o.n && radius == o.radius; }
};

BoundaryGrid build_boundary_grid(const Domain& domain, int n);

struct RadialPanel {
    double a = 0, b = 0;
    int first = 0;  // index of the first radial node in this panel
    int count = 0;
};

// Polar tensor grid. Radial Gauss-Legendre nodes (n_r per panel) times an
// angular trapezoid rule; node index = i_r * n_theta + i_theta.
struct VolumeGrid {
    double radius = 1.0;
    int n_r = 0;
    int n_theta = 0;
    std::vector<double> breaks;  // panel end points, 0 and radius included
    std::vector<RadialPanel> panels;
    std::vector<double> r;         // radial nodes
    std::vector<double> r_weight;  // Gauss-Legendre weights (without the r factor)
    std::vector<double> theta;
    std::vector<Vec2> nodes;
    std::vector<double> weights;  // r_weight * r * 2 pi / n_theta

    int n_radial() const { return static_cast<int>(r.size()); }
    std::size_t size() const { return nodes.size(); }
    int panel_of(double rr) const;
    std::string descriptor() const;
};

// Interior radial break points (e.g. potential knots) are added to the panel set.
VolumeGrid build_volume_grid(const Domain& domain, int n_r, int n_theta,
                             const std::vector<double>& interior_breaks = {});

enum class PotentialKind { zero, radial_profile, gaussian_mixture, grid_samples };

struct Gaussian {
    double amplitude = 0;
    Vec2 center;
    double sigma = 1;
};

struct PotentialSpec {
    PotentialKind kind = PotentialKind::zero;
    std::vector<Gaussian> gaussians;
    // radial_profile: knots r_1 < ... < r_K with values; "constant" gives v_i on
    // [r_{i-1}, r_i), "linear" interpolates between (r_i, v_i) (first knot must be 0).
    std::vector<double> knots;
    std::vector<double> knot_values;
    bool linear = false;
    // grid_samples: values on a reference grid
    std::shared_ptr<const VolumeGrid> sample_grid;
    std::vector<double> samples;
    // explicit support radius; <= 0 means the kind default
    double support_radius = -1;
    std::string id = "v";

    double value(Vec2 p, double domain_radius) const;
    bool is_radial() const;
    double effective_support(double domain_radius) const;
    std::vector<double> radial_breaks(double domain_radius) const;
};

inline constexpr double max_support_fraction = 0.9;

PotentialSpec zero_potential();
PotentialSpec gaussian_potential(double amplitude, double sigma, Vec2 center = {});
PotentialSpec radial_step(double height, double radius);

struct PotentialField {
    std::shared_ptr<const VolumeGrid> grid;
    std::vector<double> values;
    double support_radius = 0;
    PotentialSpec spec;

    bool is_zero() const;
    bool is_radial() const;
    double max_abs() const;
    // radial profile at the grid's radial nodes (only meaningful when is_radial())
    std::vector<double> radial_values() const;
};

PotentialField sample_potential(const PotentialSpec& spec, std::shared_ptr<const VolumeGrid> grid);

// Convenience: builds a grid whose panels follow the potential's knots and support.
std::shared_ptr<const VolumeGrid> grid_for(const Domain& domain, const PotentialSpec& spec, int n_r,
                                           int n_theta);

cplx fourier_transform_potential(const PotentialField& v, Vec2 p);

struct ScatteringConfig {
    double energy = 1.0;
    double alpha = 1.5707963267948966;
    int dimension = 2;
};

}  // namespace ibm
