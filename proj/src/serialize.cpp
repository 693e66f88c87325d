#include "hafactor/serialize.hpp"

#include <iomanip>

namespace hafactor
{

namespace
{

Json split_json(const BitSplit& s)
{
	return Json{{"l_n", s.l_n}, {"l_p", s.l_p}, {"l_q", s.l_q}, {"case", s.split_case == SplitCase::A ? "A" : "B"}};
}

Json assignment_json(const Assignment& a)
{
	Json out = Json::object();
	for(const auto& [v, value] : a) {
		out[v.name()] = value;
	}
	return out;
}

Json carries_json(const BoundTable& table)
{
	Json out = Json::object();
	for(const auto& [i, r] : table) {
		out["C" + std::to_string(i)] = Json::array({r.lo, r.hi});
	}
	return out;
}

} // namespace

Json to_json(const EquationSystem& system)
{
	Json eqs = Json::array();
	for(const auto& eq : system.equations) {
		Json row{{"m", eq.order}, {"lhs", eq.lhs.to_string()}, {"n_m", eq.rhs_bit}};
		row["carry_out"] = eq.carry_out ? Json(eq.carry_out->name()) : Json(nullptr);
		eqs.push_back(std::move(row));
	}
	const MatrixView mv = matrix_view(system);
	return Json{{"n", system.n},
	            {"split", split_json(system.split)},
	            {"equations", std::move(eqs)},
	            {"fixed", assignment_json(system.fixed)},
	            {"matrix",
	             {{"q", mv.q_matrix},
	              {"p", mv.p_vector},
	              {"carry_in", mv.carry_in},
	              {"carry_out", mv.carry_out},
	              {"rhs", mv.rhs}}}};
}

Json to_json(const ResidualSystem& residual, const BitSplit& split)
{
	Json eqs = Json::array();
	for(const auto& e : residual.equations) {
		eqs.push_back(e.to_string() + " = 0");
	}
	Json free = Json::array();
	for(const auto& v : residual.free) {
		free.push_back(v.name());
	}
	Json subs = Json::array();
	for(const auto& s : residual.eliminated) {
		subs.push_back({{"variable", s.variable.name()}, {"expression", s.expression.to_string()}});
	}
	return Json{{"split", split_json(split)},
	            {"equations", std::move(eqs)},
	            {"free", std::move(free)},
	            {"carries", carries_json(residual.carries)},
	            {"substitutions", std::move(subs)},
	            {"fixed", assignment_json(residual.fixed)}};
}

Json to_json(const HamiltonianSpec& h)
{
	Json map = Json::array();
	for(int i = 0; i < h.map.size(); ++i) {
		map.push_back({{"qubit", i}, {"variable", h.map.qubits[static_cast<std::size_t>(i)].name()}});
	}
	Json carries = Json::array();
	for(const auto& enc : h.map.carries) {
		carries.push_back({{"carry", enc.carry.name()}, {"offset", enc.offset}, {"qubits", enc.qubits}});
	}
	Json terms = Json::array();
	for(const auto& t : h.final_terms) {
		terms.push_back({{"z", t.z}, {"coeff", t.coeff.to_double()}, {"exact", t.coeff.to_string()}});
	}
	return Json{{"qubits", h.qubits},
	            {"map", std::move(map)},
	            {"carry_encodings", std::move(carries)},
	            {"terms", std::move(terms)}};
}

Json to_json(const FactorResult& r)
{
	Json out{{"n", r.n}, {"p", r.p}, {"q", r.q}, {"method", to_string(r.method)}};
	out["split"] = r.split ? split_json(*r.split) : Json(nullptr);
	out["residual_vars"] = r.residual_vars;
	out["qubits"] = r.qubits;
	out["final_fidelity"] = r.final_fidelity ? Json(*r.final_fidelity) : Json(nullptr);
	out["verified"] = r.verified;
	return out;
}

void write_trace_csv(std::ostream& os, const AdiabaticTrace& trace)
{
	const std::uint64_t dim = std::uint64_t{1} << trace.qubits;
	os << "step,s";
	for(std::uint64_t j = 0; j < dim; ++j) {
		os << ",E_" << j;
	}
	os << ",gap,fidelity";
	for(std::uint64_t j = 0; j < dim; ++j) {
		os << ",P_" << j;
	}
	os << '\n' << std::setprecision(12);
	for(const auto& st : trace.steps) {
		os << st.step << ',' << st.s;
		for(const double e : st.eigenvalues) {
			os << ',' << e;
		}
		os << ',' << st.gap << ',' << st.fidelity;
		for(const double p : st.probabilities) {
			os << ',' << p;
		}
		os << '\n';
	}
}

void write_spectrum_csv(std::ostream& os, const SpectrumTrace& spectrum)
{
	if(spectrum.samples.empty()) {
		return;
	}
	os << 's';
	for(Eigen::Index j = 0; j < spectrum.samples.front().eigenvalues.size(); ++j) {
		os << ",E_" << j;
	}
	os << ",gap\n" << std::setprecision(12);
	for(const auto& sample : spectrum.samples) {
		os << sample.s;
		for(const double e : sample.eigenvalues) {
			os << ',' << e;
		}
		os << ',' << sample.gap << '\n';
	}
}

} // namespace hafactor
