#include "hafactor/pipeline.hpp"

#include <algorithm>
#include <numeric>

namespace hafactor
{

std::string to_string(Method m)
{
	switch(m) {
	case Method::ClassicalOnly:
		return "ClassicalOnly";
	case Method::HybridAdiabatic:
		return "HybridAdiabatic";
	case Method::PengGlobal:
		return "PengGlobal";
	}
	return "?";
}

void validate(const PipelineConfig& cfg)
{
	validate(cfg.schedule);
	if(!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) {
		throw InvalidInput("probability threshold must lie in (0, 1)");
	}
	if(cfg.qubit_cap < 1 || cfg.retries < 0) {
		throw InvalidInput("qubit cap must be positive and retries non-negative");
	}
}

bool is_prime(std::uint64_t n)
{
	if(n < 2) {
		return false;
	}
	for(std::uint64_t d = 2; d <= n / d; ++d) {
		if(n % d == 0) {
			return false;
		}
	}
	return true;
}

std::pair<std::uint64_t, std::uint64_t> brute_force_factor(std::uint64_t n)
{
	for(std::uint64_t d = 2; d <= n / d; ++d) {
		if(n % d == 0) {
			return {d, n / d};
		}
	}
	throw NotFactorable(std::to_string(n) + " has no nontrivial factor");
}

namespace
{

std::uint64_t assemble(const Assignment& a, VarKind kind, int length)
{
	std::uint64_t value = 0;
	for(int j = 0; j < length; ++j) {
		const Variable v{kind, j, {0, 1}};
		if(a.at(v) != 0) {
			value |= std::uint64_t{1} << j;
		}
	}
	return value;
}

bool multiplies_to(std::uint64_t p, std::uint64_t q, std::uint64_t n)
{
	return p > 1 && q > 1 && static_cast<unsigned __int128>(p) * q == n;
}

} // namespace

Decoded decode(std::uint64_t b, const QubitMap& map, const ResidualSystem& residual, const BitSplit& split,
               bool require_solution)
{
	if(b >= (std::uint64_t{1} << map.size())) {
		throw std::out_of_range("basis index " + std::to_string(b) + " outside the register");
	}
	Decoded out;
	Assignment local = map.assignment(b);
	for(const auto& [v, value] : residual.fixed) {
		if(!local.contains(v)) {
			local.set(v, value);
		}
	}
	out.solution = std::all_of(residual.equations.begin(), residual.equations.end(),
	                           [&](const Polynomial& e) { return evaluate(e, local) == 0; });
	if(require_solution && !out.solution) {
		throw std::domain_error("basis state " + std::to_string(b) + " violates the residual equations");
	}
	Assignment free_values;
	for(const auto& v : residual.free) {
		if(v.is_binary()) {
			free_values.set(v, local.at(v));
		}
	}
	out.assignment = replay(residual, free_values);
	out.p = assemble(out.assignment, VarKind::FactorBitP, split.l_p);
	out.q = assemble(out.assignment, VarKind::FactorBitQ, split.l_q);
	return out;
}

std::uint64_t encode_factors(std::uint64_t p, std::uint64_t q, const QubitMap& map, const ResidualSystem& residual,
                             const BitSplit& split)
{
	Assignment a;
	for(int j = 0; j < split.l_p; ++j) {
		a.set(Variable::p(j), bit(p, j));
	}
	for(int k = 0; k < split.l_q; ++k) {
		a.set(Variable::q(k), bit(q, k));
	}
	// column-by-column carries of the long multiplication
	const std::uint64_t n = p * q;
	std::int64_t carry = 0;
	std::map<int, std::int64_t> carries;
	for(int m = 0; m < split.l_p + split.l_q - 1; ++m) {
		const auto [alpha, beta] = column_span(split, m);
		std::int64_t column = carry;
		for(int k = alpha; k <= beta; ++k) {
			column += bit(p, m - k) * bit(q, k);
		}
		carry = (column - bit(n, m)) / 2;
		carries[m + 1] = carry;
	}
	for(const auto& enc : map.carries) {
		const std::int64_t excess = carries.at(enc.carry.index) - enc.offset;
		for(std::size_t t = 0; t < enc.ancillas.size(); ++t) {
			a.set(enc.ancillas[t], (excess >> t) & 1);
		}
	}
	(void)residual;
	return map.basis_index(a);
}

namespace
{

struct Attempt
{
	bool ok = false;
	Decoded decoded;
	AdiabaticTrace trace;
	Schedule schedule;
};

/// Anneal, then decode every basis state above threshold, most probable first.
Attempt anneal_and_read(const HamiltonianSpec& h, const ResidualSystem& residual, const BitSplit& split,
                        std::uint64_t n, const PipelineConfig& cfg, std::vector<std::string>& diagnostics)
{
	Attempt att;
	att.schedule = cfg.schedule;
	for(int round = 0; round <= cfg.retries; ++round) {
		att.trace = evolve(h, att.schedule, cfg.qubit_cap);
		const Eigen::VectorXd& probs = att.trace.last().probabilities;
		std::vector<std::uint64_t> order(static_cast<std::size_t>(probs.size()));
		std::iota(order.begin(), order.end(), std::uint64_t{0});
		std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
			return probs(static_cast<Eigen::Index>(a)) > probs(static_cast<Eigen::Index>(b));
		});
		for(const auto b : order) {
			if(probs(static_cast<Eigen::Index>(b)) <= cfg.threshold) {
				break;
			}
			const Decoded d = decode(b, h.map, residual, split);
			if(multiplies_to(d.p, d.q, n)) {
				att.ok = true;
				att.decoded = d;
				return att;
			}
			diagnostics.push_back("read-out " + std::to_string(d.p) + " x " + std::to_string(d.q) +
			                      " does not verify");
		}
		diagnostics.push_back("no verified read-out at T=" + std::to_string(att.schedule.total_time) +
		                      ", M=" + std::to_string(att.schedule.steps));
		att.schedule.total_time *= 2.0;
		att.schedule.steps *= 2;
	}
	return att;
}

void finish(FactorResult& r, std::uint64_t p, std::uint64_t q)
{
	r.p = std::min(p, q);
	r.q = std::max(p, q);
	r.verified = multiplies_to(r.p, r.q, r.n);
	r.biprime = is_prime(r.p) && is_prime(r.q);
}

} // namespace

FactorResult factor(std::uint64_t n, const PipelineConfig& cfg)
{
	validate(cfg);
	if(n < 2) {
		throw InvalidInput("cannot factor " + std::to_string(n));
	}
	FactorResult result;
	result.n = n;

	if(n % 2 == 0) {
		if(n == 2) {
			throw NotFactorable("2 is prime");
		}
		result.method = Method::ClassicalOnly;
		finish(result, 2, n / 2);
		return result;
	}
	if(n < 9) {
		throw NotFactorable(std::to_string(n) + " is prime");
	}

	std::vector<BitSplit> splits;
	if(cfg.split_override) {
		splits.push_back(make_split(n, cfg.split_override->first, cfg.split_override->second));
	} else {
		splits = enumerate_splits(n);
	}

	bool cap_hit = false;
	for(const auto& split : splits) {
		ResidualSystem residual;
		std::optional<EquationSystem> system;
		if(cfg.mode == Mode::Peng) {
			residual = peng_residual(n, split);
		} else {
			try {
				system = build_equations(n, split);
				const BoundTable table = refine_bounds(*system, init_bounds(split));
				residual = propagate(*system, table, cfg.simplifier);
			} catch(const InfeasibleSplit& e) {
				result.diagnostics.push_back(to_string(split) + ": infeasible (" + e.what() + ")");
				continue;
			}
			if(residual.free.empty()) {
				const Assignment full = replay(residual, {});
				const auto p = assemble(full, VarKind::FactorBitP, split.l_p);
				const auto q = assemble(full, VarKind::FactorBitQ, split.l_q);
				if(!multiplies_to(p, q, n)) {
					result.diagnostics.push_back(to_string(split) + ": classical solution does not verify");
					continue;
				}
				result.method = Method::ClassicalOnly;
				result.split = split;
				result.system = std::move(system);
				result.residual = std::move(residual);
				finish(result, p, q);
				return result;
			}
		}

		HamiltonianSpec h;
		try {
			h = cfg.mode == Mode::Peng ? build_peng_hamiltonian(n, split, cfg.qubit_cap)
			                           : build_bitwise_hamiltonian(residual);
			if(h.qubits > cfg.qubit_cap) {
				throw CapExceeded(std::to_string(h.qubits) + " qubits exceed the cap");
			}
		} catch(const CapExceeded& e) {
			cap_hit = true;
			result.diagnostics.push_back(to_string(split) + ": " + e.what());
			continue;
		}

		if(h.qubits == 0) {
			const Decoded d = decode(0, h.map, residual, split);
			if(!multiplies_to(d.p, d.q, n)) {
				result.diagnostics.push_back(to_string(split) + ": no factor pair");
				continue;
			}
			result.method = Method::PengGlobal;
			result.split = split;
			result.residual = std::move(residual);
			result.hamiltonian = std::move(h);
			finish(result, d.p, d.q);
			return result;
		}

		Attempt att = anneal_and_read(h, residual, split, n, cfg, result.diagnostics);
		if(!att.ok) {
			result.diagnostics.push_back(to_string(split) + ": adiabatic read-out failed");
			continue;
		}
		result.method = cfg.mode == Mode::Peng ? Method::PengGlobal : Method::HybridAdiabatic;
		result.split = split;
		result.residual_vars = residual.free.size();
		result.qubits = h.qubits;
		result.final_fidelity = att.trace.last().fidelity;
		result.system = std::move(system);
		result.residual = std::move(residual);
		result.hamiltonian = std::move(h);
		result.trace = std::move(att.trace);
		result.schedule = att.schedule;
		finish(result, att.decoded.p, att.decoded.q);
		return result;
	}
	if(cap_hit) {
		throw CapExceeded("every feasible split of " + std::to_string(n) + " exceeds the qubit cap");
	}
	throw NotFactorable(std::to_string(n) + " is prime or has no factorization reachable by any split");
}

} // namespace hafactor
