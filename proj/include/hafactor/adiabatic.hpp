#pragma once

#include "hafactor/hamiltonian.hpp"

#include <Eigen/Dense>

#include <numbers>
#include <vector>

namespace hafactor
{

enum class Interpolation : std::uint8_t
{
	Linear,
};

/// Piecewise-constant schedule: M steps of duration T/M, step m using s = m/M.
struct Schedule
{
	double total_time = 3.5;
	int steps = 20;
	Interpolation interpolation = Interpolation::Linear;
	/// Multiplies Hamiltonian coefficients to get angular frequencies. The
	/// default reads coefficients as cycles per unit time.
	double angular_factor = 2.0 * std::numbers::pi;

	[[nodiscard]] double tau() const { return total_time / steps; }
	/// Interpolation parameter of step m (m = 0 is the initial Hamiltonian).
	[[nodiscard]] double s(int m) const { return static_cast<double>(m) / steps; }
};

void validate(const Schedule& schedule);

using StateVector = Eigen::VectorXcd;

/// Registers up to this size are evolved with dense eigendecompositions and
/// get the full spectrum at every step; larger ones are propagated matrix-free.
inline constexpr int default_dense_qubit_limit = 8;

struct TraceStep
{
	int step = 0;
	double s = 0.0;
	/// |<b|psi>|^2 over the computational basis.
	Eigen::VectorXd probabilities;
	/// Sorted eigenvalues of H(s). Empty on intermediate matrix-free steps.
	Eigen::VectorXd eigenvalues;
	/// NaN where the spectrum was not computed.
	double gap = 0.0;
	/// Overlap with the instantaneous ground-state distribution; NaN where the
	/// spectrum was not computed.
	double fidelity = 0.0;
	double norm = 1.0;
	/// max |U^dagger U - I| of the step unitary (0 for step 0). Matrix-free
	/// steps have no explicit U and report the step's change of norm.
	double unitarity_error = 0.0;
};

struct AdiabaticTrace
{
	int qubits = 0;
	std::vector<TraceStep> steps;
	StateVector final_state;

	[[nodiscard]] const TraceStep& last() const { return steps.back(); }
};

/// (1 - s) H_i + s H_f.
Eigen::MatrixXd interpolate(const Eigen::MatrixXd& initial, const Eigen::MatrixXd& final, double s);
Eigen::MatrixXd interpolate(const HamiltonianSpec& h, double s);

/// exp(-i H tau) through H = V diag(lambda) V^T.
Eigen::MatrixXcd step_unitary(const Eigen::MatrixXd& h, double tau);

double unitarity_error(const Eigen::MatrixXcd& u);

/// |-...->: amplitude (-1)^popcount(b) / sqrt(2^k).
StateVector prepare_initial_ground(int k);

/// Gap between the ground level and the next level. With
/// `skip_ground_degeneracy` the degenerate copies of E_0 are skipped.
double spectral_gap(const Eigen::VectorXd& sorted_eigenvalues, bool skip_ground_degeneracy);

/// Ground-state distribution over the basis; a degenerate ground space is
/// averaged.
Eigen::VectorXd ground_distribution(const Eigen::VectorXd& sorted_eigenvalues, const Eigen::MatrixXd& eigenvectors);

/// (1 - s) sum_i sigma_x^i psi + s diag(H_f) psi without forming a matrix.
StateVector apply_hamiltonian(const Eigen::VectorXd& final_diagonal, int k, double s, const StateVector& psi);

/// exp(-i H(s) tau) psi by Lanczos iteration, accurate to about `tolerance`.
StateVector krylov_step(const Eigen::VectorXd& final_diagonal, int k, double s, double tau, const StateVector& psi,
                        double tolerance = 1e-13);

AdiabaticTrace evolve(const HamiltonianSpec& h, const Schedule& schedule, int qubit_cap = default_qubit_cap,
                      int dense_limit = default_dense_qubit_limit);

/// sum p q / sqrt(sum p^2 sum q^2). Throws std::invalid_argument on
/// mismatched lengths, negative entries or an all-zero input.
double fidelity(const Eigen::VectorXd& expected, const Eigen::VectorXd& actual);

struct SpectrumSample
{
	double s = 0.0;
	Eigen::VectorXd eigenvalues;
	double gap = 0.0;
};

struct SpectrumTrace
{
	std::vector<SpectrumSample> samples;
	double min_gap = 0.0;
	double min_gap_s = 0.0;
};

/// Eigenvalues of H(s) at `samples` uniformly spaced s in [0, 1]. Needs dense
/// matrices, so registers above `dense_limit` throw CapExceeded.
SpectrumTrace spectrum_trace(const HamiltonianSpec& h, int samples, int dense_limit = default_dense_qubit_limit);

struct TimeEstimate
{
	double total_time = 0.0;
	double min_gap = 0.0;
	double derivative_norm = 0.0;
	/// The sampled gap fell below the floor; total_time is +inf.
	bool unbounded = false;
};

/// T = max ||dH/ds|| / (epsilon * gap^2) for the linear schedule; diagnostic only.
TimeEstimate adiabatic_time_estimate(const Eigen::MatrixXd& initial, const Eigen::MatrixXd& final, double epsilon,
                                     int samples, double gap_floor = 1e-9);
TimeEstimate adiabatic_time_estimate(const HamiltonianSpec& h, double epsilon, int samples, double gap_floor = 1e-9);

} // namespace hafactor
