#include "hafactor/adiabatic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace hafactor
{

namespace
{

constexpr double degeneracy_tolerance = 1e-9;

bool same_level(double a, double b)
{
	return std::abs(a - b) <= degeneracy_tolerance * std::max(1.0, std::abs(a));
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> diagonalize(const Eigen::MatrixXd& h)
{
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
	if(es.info() != Eigen::Success) {
		throw std::runtime_error("eigendecomposition did not converge");
	}
	return es;
}

Eigen::MatrixXcd unitary_from(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es, double tau)
{
	const Eigen::VectorXcd phases =
	    (std::complex<double>(0.0, -tau) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
	const Eigen::MatrixXcd v = es.eigenvectors().cast<std::complex<double>>();
	return v * phases.asDiagonal() * v.adjoint();
}

} // namespace

void validate(const Schedule& schedule)
{
	if(!(schedule.total_time >= 0.0) || schedule.steps < 1) {
		throw std::invalid_argument("schedule needs T >= 0 and at least one step");
	}
}

Eigen::MatrixXd interpolate(const Eigen::MatrixXd& initial, const Eigen::MatrixXd& final, double s)
{
	if(s < 0.0 || s > 1.0) {
		throw std::invalid_argument("interpolation parameter outside [0, 1]");
	}
	return (1.0 - s) * initial + s * final;
}

Eigen::MatrixXd interpolate(const HamiltonianSpec& h, double s)
{
	return interpolate(to_matrix(h, HamiltonianPart::Initial), to_matrix(h, HamiltonianPart::Final), s);
}

Eigen::MatrixXcd step_unitary(const Eigen::MatrixXd& h, double tau)
{
	return unitary_from(diagonalize(h), tau);
}

double unitarity_error(const Eigen::MatrixXcd& u)
{
	const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
	return d.cwiseAbs().maxCoeff();
}

StateVector prepare_initial_ground(int k)
{
	if(k < 1) {
		throw std::invalid_argument("need at least one qubit");
	}
	const auto dim = Eigen::Index{1} << k;
	const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
	StateVector psi(dim);
	for(Eigen::Index b = 0; b < dim; ++b) {
		psi(b) = (std::popcount(static_cast<std::uint64_t>(b)) % 2 == 0) ? amp : -amp;
	}
	return psi;
}

double spectral_gap(const Eigen::VectorXd& e, bool skip_ground_degeneracy)
{
	if(e.size() < 2) {
		return 0.0;
	}
	if(!skip_ground_degeneracy) {
		return e(1) - e(0);
	}
	for(Eigen::Index j = 1; j < e.size(); ++j) {
		if(!same_level(e(j), e(0))) {
			return e(j) - e(0);
		}
	}
	return 0.0;
}

Eigen::VectorXd ground_distribution(const Eigen::VectorXd& e, const Eigen::MatrixXd& v)
{
	Eigen::VectorXd p = Eigen::VectorXd::Zero(v.rows());
	Eigen::Index g = 0;
	while(g < e.size() && same_level(e(g), e(0))) {
		p += v.col(g).cwiseAbs2();
		++g;
	}
	return p / static_cast<double>(g);
}

StateVector apply_hamiltonian(const Eigen::VectorXd& final_diagonal, int k, double s, const StateVector& psi)
{
	const Eigen::Index dim = psi.size();
	StateVector out = s * final_diagonal.cast<std::complex<double>>().cwiseProduct(psi);
	const double field = 1.0 - s;
	for(Eigen::Index b = 0; b < dim; ++b) {
		std::complex<double> acc = 0.0;
		for(int j = 0; j < k; ++j) {
			acc += psi(b ^ (Eigen::Index{1} << j));
		}
		out(b) += field * acc;
	}
	return out;
}

namespace
{

constexpr int krylov_max_dim = 40;

/// One Lanczos attempt over the full interval; empty if the basis ran out first.
std::optional<StateVector> lanczos_exp(const Eigen::VectorXd& d, int k, double s, double tau, const StateVector& psi,
                                       double tolerance)
{
	const double beta0 = psi.norm();
	std::vector<StateVector> basis{psi / beta0};
	std::vector<double> alpha;
	std::vector<double> beta;
	for(int j = 0; j < krylov_max_dim; ++j) {
		StateVector w = apply_hamiltonian(d, k, s, basis[static_cast<std::size_t>(j)]);
		alpha.push_back(basis[static_cast<std::size_t>(j)].dot(w).real());
		// full reorthogonalisation, twice
		for(int pass = 0; pass < 2; ++pass) {
			for(const auto& v : basis) {
				w -= v.dot(w) * v;
			}
		}
		const double b = w.norm();

		const auto m = static_cast<Eigen::Index>(alpha.size());
		Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
		for(Eigen::Index i = 0; i < m; ++i) {
			t(i, i) = alpha[static_cast<std::size_t>(i)];
			if(i + 1 < m) {
				t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
			}
		}
		const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
		const Eigen::VectorXcd phases =
		    (std::complex<double>(0.0, -tau) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
		const Eigen::MatrixXcd v = es.eigenvectors().cast<std::complex<double>>();
		const Eigen::VectorXcd y = v * phases.asDiagonal() * v.row(0).transpose();

		const bool exhausted = b < 1e-14;
		if(exhausted || b * std::abs(y(m - 1)) < tolerance) {
			StateVector out = StateVector::Zero(psi.size());
			for(Eigen::Index i = 0; i < m; ++i) {
				out += y(i) * basis[static_cast<std::size_t>(i)];
			}
			return StateVector(beta0 * out);
		}
		beta.push_back(b);
		basis.push_back(w / b);
	}
	return std::nullopt;
}

} // namespace

StateVector krylov_step(const Eigen::VectorXd& final_diagonal, int k, double s, double tau, const StateVector& psi,
                        double tolerance)
{
	if(psi.norm() == 0.0 || tau == 0.0) {
		return psi;
	}
	StateVector out = psi;
	double remaining = tau;
	double chunk = tau;
	while(remaining > 0.0) {
		chunk = std::min(chunk, remaining);
		if(auto next = lanczos_exp(final_diagonal, k, s, chunk, out, tolerance)) {
			out = std::move(*next);
			remaining -= chunk;
		} else {
			chunk /= 2.0;
		}
	}
	return out;
}

namespace
{

AdiabaticTrace evolve_dense(const HamiltonianSpec& h, const Schedule& schedule, int qubit_cap)
{
	const Eigen::MatrixXd hi = to_matrix(h, HamiltonianPart::Initial, qubit_cap);
	const Eigen::MatrixXd hf = to_matrix(h, HamiltonianPart::Final, qubit_cap);
	const double phase_step = schedule.angular_factor * schedule.tau();

	AdiabaticTrace trace;
	trace.qubits = h.qubits;
	StateVector psi = prepare_initial_ground(h.qubits);

	auto record = [&](int m, const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es, double uerr) {
		TraceStep st;
		st.step = m;
		st.s = schedule.s(m);
		st.probabilities = psi.cwiseAbs2();
		st.eigenvalues = es.eigenvalues();
		st.gap = spectral_gap(st.eigenvalues, m == schedule.steps);
		st.fidelity = fidelity(ground_distribution(es.eigenvalues(), es.eigenvectors()), st.probabilities);
		st.norm = psi.norm();
		st.unitarity_error = uerr;
		trace.steps.push_back(std::move(st));
	};

	record(0, diagonalize(hi), 0.0);
	for(int m = 1; m <= schedule.steps; ++m) {
		const auto es = diagonalize(interpolate(hi, hf, schedule.s(m)));
		const Eigen::MatrixXcd u = unitary_from(es, phase_step);
		psi = u * psi;
		record(m, es, unitarity_error(u));
	}
	trace.final_state = psi;
	return trace;
}

/// Uniform distribution over the minimal entries of a diagonal Hamiltonian.
Eigen::VectorXd diagonal_ground(const Eigen::VectorXd& d)
{
	const double e0 = d.minCoeff();
	Eigen::VectorXd p(d.size());
	for(Eigen::Index b = 0; b < d.size(); ++b) {
		p(b) = same_level(d(b), e0) ? 1.0 : 0.0;
	}
	return p / p.sum();
}

Eigen::VectorXd sorted(Eigen::VectorXd v)
{
	std::sort(v.begin(), v.end());
	return v;
}

AdiabaticTrace evolve_matrix_free(const HamiltonianSpec& h, const Schedule& schedule, int qubit_cap)
{
	const int k = h.qubits;
	const Eigen::VectorXd d = final_diagonal(h, qubit_cap);
	const double phase_step = schedule.angular_factor * schedule.tau();
	const double nan = std::numeric_limits<double>::quiet_NaN();

	AdiabaticTrace trace;
	trace.qubits = k;
	StateVector psi = prepare_initial_ground(k);

	auto record = [&](int m, double uerr) {
		TraceStep st;
		st.step = m;
		st.s = schedule.s(m);
		st.probabilities = psi.cwiseAbs2();
		st.norm = psi.norm();
		st.unitarity_error = uerr;
		st.gap = nan;
		st.fidelity = nan;
		if(m == 0) {
			// sum_i sigma_x^i has level -k + 2 popcount(b) and ground state |-...->
			Eigen::VectorXd levels(d.size());
			for(Eigen::Index b = 0; b < d.size(); ++b) {
				levels(b) = -k + 2.0 * std::popcount(static_cast<std::uint64_t>(b));
			}
			st.eigenvalues = sorted(levels);
			st.gap = spectral_gap(st.eigenvalues, false);
			st.fidelity = fidelity(prepare_initial_ground(k).cwiseAbs2(), st.probabilities);
		} else if(m == schedule.steps) {
			st.eigenvalues = sorted(d);
			st.gap = spectral_gap(st.eigenvalues, true);
			st.fidelity = fidelity(diagonal_ground(d), st.probabilities);
		}
		trace.steps.push_back(std::move(st));
	};

	record(0, 0.0);
	for(int m = 1; m <= schedule.steps; ++m) {
		const double before = psi.norm();
		psi = krylov_step(d, k, schedule.s(m), phase_step, psi);
		record(m, std::abs(psi.norm() - before));
	}
	trace.final_state = psi;
	return trace;
}

} // namespace

AdiabaticTrace evolve(const HamiltonianSpec& h, const Schedule& schedule, int qubit_cap, int dense_limit)
{
	validate(schedule);
	if(h.qubits > qubit_cap) {
		throw CapExceeded(std::to_string(h.qubits) + " qubits exceed the simulator cap of " + std::to_string(qubit_cap));
	}
	if(h.qubits <= dense_limit) {
		return evolve_dense(h, schedule, qubit_cap);
	}
	return evolve_matrix_free(h, schedule, qubit_cap);
}

double fidelity(const Eigen::VectorXd& expected, const Eigen::VectorXd& actual)
{
	if(expected.size() != actual.size()) {
		throw std::invalid_argument("fidelity: distributions differ in length");
	}
	if((expected.array() < 0.0).any() || (actual.array() < 0.0).any()) {
		throw std::invalid_argument("fidelity: negative probability");
	}
	const double a = expected.squaredNorm();
	const double b = actual.squaredNorm();
	if(a == 0.0 || b == 0.0) {
		throw std::invalid_argument("fidelity: all-zero distribution");
	}
	return expected.dot(actual) / std::sqrt(a * b);
}

SpectrumTrace spectrum_trace(const HamiltonianSpec& h, int samples, int dense_limit)
{
	if(samples < 2) {
		throw std::invalid_argument("spectrum needs at least two samples");
	}
	const Eigen::MatrixXd hi = to_matrix(h, HamiltonianPart::Initial, dense_limit);
	const Eigen::MatrixXd hf = to_matrix(h, HamiltonianPart::Final, dense_limit);
	SpectrumTrace out;
	out.min_gap = std::numeric_limits<double>::infinity();
	for(int j = 0; j < samples; ++j) {
		const double s = (j == samples - 1) ? 1.0 : static_cast<double>(j) / (samples - 1);
		SpectrumSample sample;
		sample.s = s;
		sample.eigenvalues = diagonalize(interpolate(hi, hf, s)).eigenvalues();
		sample.gap = spectral_gap(sample.eigenvalues, j == samples - 1);
		if(sample.gap < out.min_gap) {
			out.min_gap = sample.gap;
			out.min_gap_s = s;
		}
		out.samples.push_back(std::move(sample));
	}
	return out;
}

TimeEstimate adiabatic_time_estimate(const Eigen::MatrixXd& initial, const Eigen::MatrixXd& final, double epsilon,
                                     int samples, double gap_floor)
{
	if(!(epsilon > 0.0 && epsilon < 1.0)) {
		throw std::invalid_argument("epsilon must lie in (0, 1)");
	}
	if(samples < 2) {
		throw std::invalid_argument("time estimate needs at least two samples");
	}
	TimeEstimate est;
	// linear schedule: dH/ds = H_f - H_i for every s
	est.derivative_norm = diagonalize(final - initial).eigenvalues().cwiseAbs().maxCoeff();
	est.min_gap = std::numeric_limits<double>::infinity();
	for(int j = 0; j < samples; ++j) {
		const double s = (j == samples - 1) ? 1.0 : static_cast<double>(j) / (samples - 1);
		const auto e = diagonalize(interpolate(initial, final, s)).eigenvalues();
		est.min_gap = std::min(est.min_gap, spectral_gap(e, j == samples - 1));
	}
	if(est.min_gap < gap_floor) {
		est.unbounded = true;
		est.total_time = std::numeric_limits<double>::infinity();
		return est;
	}
	est.total_time = est.derivative_norm / (epsilon * est.min_gap * est.min_gap);
	return est;
}

TimeEstimate adiabatic_time_estimate(const HamiltonianSpec& h, double epsilon, int samples, double gap_floor)
{
	return adiabatic_time_estimate(to_matrix(h, HamiltonianPart::Initial), to_matrix(h, HamiltonianPart::Final),
	                               epsilon, samples, gap_floor);
}

} // namespace hafactor
