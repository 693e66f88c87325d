#include "hafactor/adiabatic.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace hafactor;
using cd = std::complex<double>;

namespace
{

HamiltonianSpec hamiltonian_551()
{
	const auto system = build_equations(551, make_split(551, 5, 5));
	return build_bitwise_hamiltonian(propagate(system, refine_bounds(system, init_bounds(system.split))));
}

double pair_probability(const Eigen::VectorXd& p)
{
	return p(3) + p(4);
}

Schedule schedule(double t, int m)
{
	Schedule s;
	s.total_time = t;
	s.steps = m;
	return s;
}

} // namespace

TEST_CASE("interpolate examples")
{
	Eigen::Matrix2d hi;
	hi << 0, 1, 1, 0;
	Eigen::Matrix2d hf;
	hf << 1, 0, 0, -1;
	CHECK(interpolate(hi, hf, 0.0) == Eigen::MatrixXd(hi));
	CHECK(interpolate(hi, hf, 1.0) == Eigen::MatrixXd(hf));
	Eigen::Matrix2d half;
	half << 0.5, 0.5, 0.5, -0.5;
	CHECK(interpolate(hi, hf, 0.5) == Eigen::MatrixXd(half));
	CHECK_THROWS_AS(interpolate(hi, hf, 1.5), std::invalid_argument);
	CHECK_THROWS_AS(interpolate(hi, hf, -0.1), std::invalid_argument);
}

TEST_CASE("step_unitary examples")
{
	Eigen::Matrix2d x;
	x << 0, 1, 1, 0;
	const Eigen::MatrixXcd u0 = step_unitary(x, 0.0);
	CHECK((u0 - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

	// exp(-i X pi/2) = -i X
	const Eigen::MatrixXcd u = step_unitary(x, std::numbers::pi / 2);
	const Eigen::MatrixXcd expected = cd(0, -1) * x.cast<cd>();
	CHECK((u - expected).cwiseAbs().maxCoeff() < 1e-12);

	Eigen::Vector3d e(0.3, -1.0, 2.5);
	const Eigen::MatrixXcd ud = step_unitary(e.asDiagonal().toDenseMatrix(), 0.7);
	for(int b = 0; b < 3; ++b) {
		CHECK(std::abs(ud(b, b) - std::exp(cd(0, -e(b) * 0.7))) < 1e-12);
	}
	CHECK(unitarity_error(ud) < 1e-12);
}

TEST_CASE("prepare_initial_ground examples")
{
	const auto one = prepare_initial_ground(1);
	CHECK(std::abs(one(0) - cd(1 / std::sqrt(2.0), 0)) < 1e-15);
	CHECK(std::abs(one(1) - cd(-1 / std::sqrt(2.0), 0)) < 1e-15);

	const auto three = prepare_initial_ground(3);
	for(int b = 0; b < 8; ++b) {
		const double sign = (__builtin_popcount(static_cast<unsigned>(b)) % 2 == 0) ? 1.0 : -1.0;
		CHECK(std::abs(three(b) - cd(sign / std::sqrt(8.0), 0)) < 1e-15);
	}
	const Eigen::VectorXcd applied = transverse_field(3).cast<cd>() * three;
	CHECK((applied + 3.0 * three).cwiseAbs().maxCoeff() < 1e-14);
	CHECK_THROWS_AS(prepare_initial_ground(0), std::invalid_argument);
}

TEST_CASE("evolve 551 at the default schedule")
{
	const auto trace = evolve(hamiltonian_551(), Schedule{});
	REQUIRE(trace.steps.size() == 21);
	CHECK(trace.last().s == 1.0);
	CHECK(pair_probability(trace.last().probabilities) >= 0.98);
	CHECK(trace.last().fidelity >= 0.99);
	// the ground pair is doubly degenerate; the reported final gap skips it
	CHECK(trace.last().gap == doctest::Approx(2.0));
}

TEST_CASE("zero-time evolution leaves the uniform distribution")
{
	const auto trace = evolve(hamiltonian_551(), schedule(0.0, 1));
	for(int b = 0; b < 8; ++b) {
		CHECK(trace.last().probabilities(b) == doctest::Approx(0.125).epsilon(1e-12));
	}
}

TEST_CASE("long evolution approaches the ground pair")
{
	const auto trace = evolve(hamiltonian_551(), schedule(50.0, 500));
	CHECK(pair_probability(trace.last().probabilities) > 1.0 - 1e-3);
}

TEST_CASE("fidelity examples")
{
	Eigen::VectorXd p(4);
	p << 0.1, 0.2, 0.3, 0.4;
	CHECK(fidelity(p, p) == doctest::Approx(1.0));

	Eigen::VectorXd a(4);
	a << 0.5, 0.5, 0, 0;
	Eigen::VectorXd b(4);
	b << 0, 0, 0.5, 0.5;
	CHECK(fidelity(a, b) == 0.0);

	Eigen::VectorXd th = Eigen::VectorXd::Zero(8);
	th(0) = th(1) = 0.5;
	CHECK(fidelity(th, Eigen::VectorXd::Constant(8, 0.125)) == doctest::Approx(0.5));

	CHECK_THROWS_AS(fidelity(Eigen::VectorXd::Zero(4), p), std::invalid_argument);
	CHECK_THROWS_AS(fidelity(p, Eigen::VectorXd::Zero(3)), std::invalid_argument);
	Eigen::VectorXd negative = p;
	negative(0) = -0.1;
	CHECK_THROWS_AS(fidelity(negative, p), std::invalid_argument);
}

TEST_CASE("property: fidelity is symmetric, bounded and 1 on itself")
{
	std::mt19937_64 rng(3);
	std::uniform_real_distribution<double> u(0.0, 1.0);
	for(int t = 0; t < 500; ++t) {
		Eigen::VectorXd a(8);
		Eigen::VectorXd b(8);
		for(int i = 0; i < 8; ++i) {
			a(i) = u(rng) < 0.3 ? 0.0 : u(rng);
			b(i) = u(rng) < 0.3 ? 0.0 : u(rng);
		}
		a(0) += 1e-3;
		b(1) += 1e-3;
		REQUIRE(fidelity(a, a) == doctest::Approx(1.0));
		REQUIRE(fidelity(a, b) == doctest::Approx(fidelity(b, a)));
		REQUIRE(fidelity(a, b) >= 0.0);
		REQUIRE(fidelity(a, b) <= 1.0 + 1e-12);
	}
}

TEST_CASE("spectrum_trace examples")
{
	const auto h = hamiltonian_551();
	const auto spectrum = spectrum_trace(h, 101);
	REQUIRE(spectrum.samples.size() == 101);

	Eigen::VectorXd end(8);
	end << 0, 0, 2, 2, 2, 2, 2, 2;
	CHECK((spectrum.samples.back().eigenvalues - end).cwiseAbs().maxCoeff() < 1e-12);

	Eigen::VectorXd start(8);
	start << -3, -1, -1, -1, 1, 1, 1, 3;
	CHECK((spectrum.samples.front().eigenvalues - start).cwiseAbs().maxCoeff() < 1e-12);

	for(std::size_t j = 0; j + 1 < spectrum.samples.size(); ++j) {
		const auto& e = spectrum.samples[j].eigenvalues;
		REQUIRE(e(1) - e(0) > 1e-6);
	}
	CHECK(std::abs(spectrum.samples.back().eigenvalues(1) - spectrum.samples.back().eigenvalues(0)) < 1e-12);
	CHECK(spectrum.min_gap > 0.0);
	CHECK_THROWS_AS(spectrum_trace(h, 1), std::invalid_argument);
}

TEST_CASE("spectral_gap skips a degenerate ground level only on request")
{
	Eigen::VectorXd e(4);
	e << 0, 0, 2, 3;
	CHECK(spectral_gap(e, false) == 0.0);
	CHECK(spectral_gap(e, true) == 2.0);
}

TEST_CASE("adiabatic_time_estimate")
{
	const auto h = hamiltonian_551();
	const Eigen::MatrixXd hi = to_matrix(h, HamiltonianPart::Initial);
	const Eigen::MatrixXd hf = to_matrix(h, HamiltonianPart::Final);
	const auto loose = adiabatic_time_estimate(hi, hf, 0.9, 101);
	const auto tight = adiabatic_time_estimate(hi, hf, 0.1, 101);
	CHECK(std::isfinite(loose.total_time));
	CHECK(loose.total_time > 0.0);
	CHECK(loose.total_time < tight.total_time);
	CHECK(loose.min_gap > 0.0);

	const auto same = adiabatic_time_estimate(hi, hi, 0.5, 11);
	CHECK(same.total_time == 0.0);

	// every level stays degenerate, so the gap is closed throughout
	Eigen::Matrix2d zero = Eigen::Matrix2d::Zero();
	const auto closed = adiabatic_time_estimate(zero, zero + Eigen::Matrix2d::Identity(), 0.5, 11);
	CHECK(closed.unbounded);
	CHECK(std::isinf(closed.total_time));

	CHECK_THROWS_AS(adiabatic_time_estimate(h, 0.0, 11), std::invalid_argument);
	CHECK_THROWS_AS(adiabatic_time_estimate(h, 1.0, 11), std::invalid_argument);
}

TEST_CASE("schedule validation")
{
	CHECK_THROWS_AS(validate(schedule(-1.0, 10)), std::invalid_argument);
	CHECK_THROWS_AS(validate(schedule(1.0, 0)), std::invalid_argument);
	CHECK(schedule(3.5, 20).tau() == doctest::Approx(0.175));
	CHECK(schedule(3.5, 20).s(20) == 1.0);
}

TEST_CASE("property: norm and unitarity hold along every trace")
{
	const auto h = hamiltonian_551();
	for(const auto& [t, m] : std::vector<std::pair<double, int>>{{3.5, 20}, {10, 60}, {1, 7}, {50, 500}}) {
		const auto trace = evolve(h, schedule(t, m));
		for(const auto& st : trace.steps) {
			REQUIRE(std::abs(st.norm - 1.0) < 1e-9);
			REQUIRE(std::abs(st.probabilities.sum() - 1.0) < 1e-9);
			REQUIRE(st.unitarity_error < 1e-10);
		}
	}
}

TEST_CASE("property: refining the step count converges")
{
	const auto h = hamiltonian_551();
	std::vector<double> changes;
	Eigen::VectorXd previous = evolve(h, schedule(3.5, 20)).last().probabilities;
	for(int m = 40; m <= 640; m *= 2) {
		const Eigen::VectorXd p = evolve(h, schedule(3.5, m)).last().probabilities;
		changes.push_back((p - previous).cwiseAbs().maxCoeff());
		previous = p;
	}
	for(std::size_t i = 1; i < changes.size(); ++i) {
		CHECK(changes[i] < changes[i - 1]);
	}
}

TEST_CASE("property: mass outside the ground pair shrinks with total time")
{
	const auto h = hamiltonian_551();
	double previous = 1.0;
	for(const auto& [t, m] : std::vector<std::pair<double, int>>{{3.5, 20}, {10, 60}, {50, 500}}) {
		const double outside = 1.0 - pair_probability(evolve(h, schedule(t, m)).last().probabilities);
		CHECK(outside < previous);
		previous = outside;
	}
}

TEST_CASE("matrix-free Hamiltonian action matches the dense matrix")
{
	const auto h = hamiltonian_551();
	const Eigen::VectorXd d = final_diagonal(h);
	std::mt19937_64 rng(5);
	std::normal_distribution<double> g;
	StateVector psi(8);
	for(int b = 0; b < 8; ++b) {
		psi(b) = cd(g(rng), g(rng));
	}
	for(const double s : {0.0, 0.3, 1.0}) {
		const Eigen::MatrixXcd dense = interpolate(h, s).cast<cd>();
		CHECK((apply_hamiltonian(d, 3, s, psi) - dense * psi).cwiseAbs().maxCoeff() < 1e-13);
		const Eigen::VectorXcd expected = step_unitary(interpolate(h, s), 0.9) * psi;
		CHECK((krylov_step(d, 3, s, 0.9, psi) - expected).cwiseAbs().maxCoeff() < 1e-11);
		// long steps exhaust the Krylov basis and are split
		const Eigen::VectorXcd far = step_unitary(interpolate(h, s), 40.0) * psi;
		CHECK((krylov_step(d, 3, s, 40.0, psi) - far).cwiseAbs().maxCoeff() < 1e-10);
	}
}

TEST_CASE("matrix-free evolution agrees with the dense evolution")
{
	// a 6-qubit residual with a carry ancilla
	const auto system = build_equations(1111, make_split(1111, 7, 4));
	const auto h6 = build_bitwise_hamiltonian(propagate(system, refine_bounds(system, init_bounds(system.split))));
	for(const auto& h : {hamiltonian_551(), h6}) {
		const auto dense = evolve(h, schedule(3.5, 20));
		const auto free = evolve(h, schedule(3.5, 20), default_qubit_cap, 0);
		REQUIRE(free.steps.size() == dense.steps.size());
		CHECK((free.last().probabilities - dense.last().probabilities).cwiseAbs().maxCoeff() < 1e-9);
		CHECK(free.last().fidelity == doctest::Approx(dense.last().fidelity).epsilon(1e-9));
		CHECK(free.last().gap == doctest::Approx(dense.last().gap));
		CHECK(free.steps.front().fidelity == doctest::Approx(1.0));
		CHECK((free.steps.front().eigenvalues - dense.steps.front().eigenvalues).cwiseAbs().maxCoeff() < 1e-12);
		CHECK(std::isnan(free.steps[5].gap));
		for(const auto& st : free.steps) {
			CHECK(std::abs(st.norm - 1.0) < 1e-9);
			CHECK(st.unitarity_error < 1e-10);
		}
	}
}

TEST_CASE("spectrum_trace refuses registers above the dense limit")
{
	CHECK_THROWS_AS(spectrum_trace(hamiltonian_551(), 11, 2), CapExceeded);
}
