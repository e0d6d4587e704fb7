#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace coulombflow {

// Uniform cell-centred grid on the unit torus T^d, d in {1, 2}.
// Cell (i, j) has flat index i + n*j; axis 0 is the contiguous one.
struct TorusGrid {
    int dim = 1;
    int n = 0;
    double h = 0.0;
    double cell_measure = 0.0;

    std::size_t size() const { return dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n); }
    double coord(int i) const { return (i + 0.5) * h; }
    bool operator==(const TorusGrid& o) const { return dim == o.dim && n == o.n; }
};

TorusGrid make_grid(int dim, int n);

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const TorusGrid& grid, double value = 0.0);
    ScalarField(const TorusGrid& grid, std::vector<double> values);

    const TorusGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    const std::vector<double>& data() const { return values_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    double min() const;
    double max() const;

private:
    TorusGrid grid_{};
    std::vector<double> values_;
};

enum class Staggering { cell, face };

// Component a of a face field lives at x + (h/2) e_a, i.e. on the face between
// cell i and its +e_a neighbour; both layouts use the cell index space.
struct VectorField {
    TorusGrid grid;
    Staggering staggering = Staggering::cell;
    std::vector<std::vector<double>> components;
};

ScalarField coulomb_potential(const ScalarField& u);
VectorField coulomb_field(const ScalarField& u, Staggering staggering);

// Spectral Laplacian, used to check the Coulomb solve round trip.
ScalarField spectral_laplacian(const ScalarField& u);

// Gaussian mollification u * w_sigma with a positive periodic kernel.
ScalarField mollify(const ScalarField& u, double width);

double lp_norm(const ScalarField& u, double p);
double linf_norm(const ScalarField& u);
double mean(const ScalarField& u);
double interaction_energy(const ScalarField& u);
double hminus1_norm(const ScalarField& u);

// L1 distance on the torus, sum |u_i - v_i| * cell_measure.
double l1_distance(const ScalarField& u, const ScalarField& v);

} // namespace coulombflow
