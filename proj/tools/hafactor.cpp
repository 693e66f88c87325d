#include "hafactor/pipeline.hpp"
#include "hafactor/serialize.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace hafactor;

namespace
{

enum ExitCode
{
	ok = 0,
	not_factorable = 2,
	cap_exceeded = 3,
	invalid_input = 4,
};

void write_file(const std::string& path, const std::string& text)
{
	std::ofstream out(path);
	if(!out) {
		throw InvalidInput("cannot open " + path + " for writing");
	}
	out << text;
}

std::optional<std::pair<int, int>> parse_split(const std::vector<int>& v)
{
	if(v.empty()) {
		return std::nullopt;
	}
	if(v.size() != 2) {
		throw InvalidInput("--split expects LP,LQ");
	}
	return std::pair{v[0], v[1]};
}

/// Hamiltonian of the first split whose residual leaves something to anneal.
HamiltonianSpec hamiltonian_for(std::uint64_t n, const PipelineConfig& cfg)
{
	if(n % 2 == 0 || n < 9) {
		throw InvalidInput("spectrum needs an odd n >= 9");
	}
	std::vector<BitSplit> splits;
	if(cfg.split_override) {
		splits.push_back(make_split(n, cfg.split_override->first, cfg.split_override->second));
	} else {
		splits = enumerate_splits(n);
	}
	for(const auto& split : splits) {
		if(cfg.mode == Mode::Peng) {
			auto h = build_peng_hamiltonian(n, split, cfg.qubit_cap);
			if(h.qubits > 0) {
				return h;
			}
			continue;
		}
		try {
			const auto system = build_equations(n, split);
			const auto residual = propagate(system, refine_bounds(system, init_bounds(split)), cfg.simplifier);
			if(!residual.free.empty()) {
				return build_bitwise_hamiltonian(residual);
			}
		} catch(const InfeasibleSplit&) {
		}
	}
	throw NotFactorable("no split of " + std::to_string(n) + " leaves a residual to anneal");
}

Mode parse_mode(const std::string& s)
{
	return s == "peng" ? Mode::Peng : Mode::Hybrid;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Factor integers with classical carry simplification and simulated adiabatic evolution"};
	app.require_subcommand(1);

	std::uint64_t n = 0;
	PipelineConfig cfg;
	std::string mode = "hybrid";
	std::vector<int> split;
	std::string residual_path;
	std::string hamiltonian_path;
	std::string trace_path;
	bool json = false;

	auto* factor_cmd = app.add_subcommand("factor", "Factor n");
	factor_cmd->add_option("n", n, "Number to factor")->required();
	factor_cmd->add_option("--steps", cfg.schedule.steps, "Evolution steps M");
	factor_cmd->add_option("--total-time", cfg.schedule.total_time, "Total evolution time T");
	factor_cmd->add_option("--mode", mode, "hybrid or peng")->check(CLI::IsMember({"hybrid", "peng"}));
	factor_cmd->add_option("--split", split, "Factor bit lengths LP,LQ")->delimiter(',')->expected(2);
	factor_cmd->add_option("--qubit-cap", cfg.qubit_cap, "Largest simulated register");
	factor_cmd->add_option("--dump-residual", residual_path, "Write the residual system as JSON");
	factor_cmd->add_option("--dump-hamiltonian", hamiltonian_path, "Write the final Hamiltonian as JSON");
	factor_cmd->add_option("--trace", trace_path, "Write the evolution trace as CSV");
	factor_cmd->add_flag("--json", json, "Print the result as JSON");

	int samples = 101;
	std::string out_path;
	auto* spectrum_cmd = app.add_subcommand("spectrum", "Instantaneous spectrum of H(s) for n");
	spectrum_cmd->add_option("n", n, "Number to encode")->required();
	spectrum_cmd->add_option("--samples", samples, "Number of s values in [0, 1]")->required();
	spectrum_cmd->add_option("--out", out_path, "CSV output path")->required();
	spectrum_cmd->add_option("--mode", mode, "hybrid or peng")->check(CLI::IsMember({"hybrid", "peng"}));
	spectrum_cmd->add_option("--split", split, "Factor bit lengths LP,LQ")->delimiter(',')->expected(2);

	try {
		app.parse(argc, argv);
	} catch(const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? ok : invalid_input;
	}

	try {
		cfg.mode = parse_mode(mode);
		cfg.split_override = parse_split(split);

		if(*spectrum_cmd) {
			const auto h = hamiltonian_for(n, cfg);
			const auto spectrum = spectrum_trace(h, samples);
			std::ofstream out(out_path);
			if(!out) {
				throw InvalidInput("cannot open " + out_path + " for writing");
			}
			write_spectrum_csv(out, spectrum);
			std::cout << "qubits " << h.qubits << ", minimum gap " << spectrum.min_gap << " at s = "
			          << spectrum.min_gap_s << '\n';
			return ok;
		}

		const FactorResult r = factor(n, cfg);
		if(!residual_path.empty()) {
			if(!r.residual || !r.split) {
				std::cerr << "no residual system for " << n << '\n';
			} else {
				write_file(residual_path, to_json(*r.residual, *r.split).dump(2) + "\n");
			}
		}
		if(!hamiltonian_path.empty()) {
			if(!r.hamiltonian) {
				std::cerr << "no Hamiltonian for " << n << '\n';
			} else {
				write_file(hamiltonian_path, to_json(*r.hamiltonian).dump(2) + "\n");
			}
		}
		if(!trace_path.empty()) {
			if(!r.trace) {
				std::cerr << "no evolution was run for " << n << '\n';
			} else {
				std::ofstream out(trace_path);
				if(!out) {
					throw InvalidInput("cannot open " + trace_path + " for writing");
				}
				write_trace_csv(out, *r.trace);
			}
		}
		if(json) {
			std::cout << to_json(r).dump(2) << '\n';
		} else {
			std::cout << r.n << " = " << r.p << " x " << r.q << "  [" << to_string(r.method);
			if(r.split) {
				std::cout << ", split " << to_string(*r.split);
			}
			if(r.qubits > 0) {
				std::cout << ", " << r.qubits << " qubits";
			}
			if(r.final_fidelity) {
				std::cout << ", F = " << *r.final_fidelity;
			}
			std::cout << "]\n";
		}
		return r.verified ? ok : not_factorable;
	} catch(const NotFactorable& e) {
		std::cerr << e.what() << '\n';
		return not_factorable;
	} catch(const CapExceeded& e) {
		std::cerr << e.what() << '\n';
		return cap_exceeded;
	} catch(const std::invalid_argument& e) {
		std::cerr << e.what() << '\n';
		return invalid_input;
	}
}
