#include "hafactor/carry_simplifier.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hafactor
{

Range BoundTable::at(int index) const
{
	const auto it = ranges_.find(index);
	if(it == ranges_.end()) {
		throw std::out_of_range("no bounds for C" + std::to_string(index));
	}
	return it->second;
}

std::int64_t BoundTable::total_width() const
{
	std::int64_t w = 0;
	for(const auto& [i, r] : ranges_) {
		w += r.width();
	}
	return w;
}

BoundTable init_bounds(const BitSplit& split)
{
	BoundTable table;
	const int terminal = split.terminal_carry();
	for(int i = 1; i < terminal; ++i) {
		table.set(i, {0, absolute_carry_bound(split, i)});
	}
	const std::int64_t t = split.split_case == SplitCase::A ? 1 : 0;
	table.set(terminal, {t, t});
	return table;
}

Range ResidualSystem::domain(const Variable& v) const
{
	if(v.kind == VarKind::Carry) {
		return carry_ranges.contains(v.index) ? carry_ranges.at(v.index) : v.bound;
	}
	return {0, 1};
}

std::size_t ResidualSystem::free_binary_count() const
{
	return static_cast<std::size_t>(
	    std::count_if(free.begin(), free.end(), [](const Variable& v) { return v.is_binary(); }));
}

namespace
{

Coeff floor_div(Coeff a, Coeff b)
{
	Coeff q = a / b;
	if((a % b != 0) && ((a < 0) != (b < 0))) {
		--q;
	}
	return q;
}

Coeff ceil_div(Coeff a, Coeff b)
{
	return -floor_div(-a, b);
}

struct CompiledTerm
{
	Coeff coeff = 0;
	std::vector<std::size_t> vars;
};

struct CompiledEquation
{
	Coeff constant = 0;
	std::vector<CompiledTerm> terms;
};

/// Interval of a monomial whose unassigned factors range over their domains.
/// Every domain is non-negative here, so the product is monotone in each factor.
std::pair<Coeff, Coeff> term_range(const CompiledTerm& t, const std::vector<std::int64_t>& value,
                                   const std::vector<Range>& doms, std::size_t depth)
{
	std::int64_t lo = 1;
	std::int64_t hi = 1;
	for(const auto k : t.vars) {
		if(k < depth) {
			lo *= value[k];
			hi *= value[k];
		} else {
			lo *= doms[k].lo;
			hi *= doms[k].hi;
		}
	}
	return t.coeff > 0 ? std::pair<Coeff, Coeff>{t.coeff * lo, t.coeff * hi}
	                   : std::pair<Coeff, Coeff>{t.coeff * hi, t.coeff * lo};
}

bool may_vanish(const CompiledEquation& e, const std::vector<std::int64_t>& value, const std::vector<Range>& doms,
                std::size_t depth)
{
	Coeff lo = e.constant;
	Coeff hi = e.constant;
	for(const auto& t : e.terms) {
		const auto [a, b] = term_range(t, value, doms, depth);
		lo += a;
		hi += b;
	}
	return lo <= 0 && 0 <= hi;
}

CompiledEquation compile(const Polynomial& e, const std::map<Variable, std::size_t>& index)
{
	CompiledEquation c;
	c.constant = e.constant();
	for(const auto& [m, coeff] : e.terms()) {
		CompiledTerm t{coeff, {}};
		for(const auto& v : m) {
			const auto it = index.find(v);
			if(it == index.end()) {
				throw MissingVariable("equation variable " + v.name() + " is not free");
			}
			t.vars.push_back(it->second);
		}
		c.terms.push_back(std::move(t));
	}
	return c;
}

/// Depth-first enumeration of every joint value of `doms` satisfying all of
/// `eqs`, cutting branches where an equation can no longer reach 0.
template<class Visit>
void enumerate_roots(const std::vector<CompiledEquation>& eqs, const std::vector<Range>& doms, Visit&& visit)
{
	for(const auto& d : doms) {
		if(d.lo < 0) {
			throw std::domain_error("root enumeration needs non-negative domains");
		}
	}
	std::vector<std::vector<std::size_t>> touches(doms.size());
	for(std::size_t i = 0; i < eqs.size(); ++i) {
		for(const auto& t : eqs[i].terms) {
			for(const auto k : t.vars) {
				if(touches[k].empty() || touches[k].back() != i) {
					touches[k].push_back(i);
				}
			}
		}
	}
	for(const auto& e : eqs) {
		if(!may_vanish(e, {}, doms, 0)) {
			return;
		}
	}
	std::vector<std::int64_t> value(doms.size());
	const auto search = [&](auto&& self, std::size_t depth) -> void {
		if(depth > 0) {
			for(const auto i : touches[depth - 1]) {
				if(!may_vanish(eqs[i], value, doms, depth)) {
					return;
				}
			}
		}
		if(depth == doms.size()) {
			visit(value);
			return;
		}
		for(std::int64_t x = doms[depth].lo; x <= doms[depth].hi; ++x) {
			value[depth] = x;
			self(self, depth + 1);
		}
	};
	search(search, 0);
}

/// Mutable working copy of the system during propagation.
struct State
{
	std::vector<Polynomial> eqs;
	BoundTable table;
	Assignment fixed;
	std::vector<Substitution> log;
	/// Equations, with their domains, that support filtering left unchanged.
	std::vector<std::pair<Polynomial, std::vector<Range>>> support_stable;

	[[nodiscard]] Range domain(const Variable& v) const
	{
		if(v.kind == VarKind::Carry) {
			return table.contains(v.index) ? table.at(v.index) : v.bound;
		}
		return {0, 1};
	}

	[[nodiscard]] DomainFn domain_fn() const
	{
		return [this](const Variable& v) { return domain(v); };
	}

	void fix(const Variable& v, std::int64_t value)
	{
		if(!domain(v).contains(value) || !v.bound.contains(value)) {
			throw InfeasibleSplit(v.name() + " = " + std::to_string(value) + " is outside its range");
		}
		if(fixed.contains(v)) {
			if(fixed.at(v) != value) {
				throw InfeasibleSplit(v.name() + " forced to two values");
			}
			return;
		}
		fixed.set(v, value);
		if(v.kind == VarKind::Carry) {
			table.set(v.index, {value, value});
		}
		Assignment single;
		single.set(v, value);
		for(auto& e : eqs) {
			if(e.contains(v)) {
				e = substitute(e, single);
			}
		}
	}

	void eliminate(const Variable& v, const Polynomial& expr)
	{
		for(auto& e : eqs) {
			if(e.contains(v)) {
				e = substitute(e, v, expr);
			}
		}
		log.push_back({v, expr});
	}
};

/// Carry interval refinement over every equation; returns true if any range shrank.
bool tighten_carries(State& st, std::vector<std::int64_t>* history = nullptr)
{
	bool any = false;
	bool changed = true;
	while(changed) {
		changed = false;
		for(const auto& e : st.eqs) {
			for(const auto& c : e.variables()) {
				if(c.kind != VarKind::Carry || st.fixed.contains(c)) {
					continue;
				}
				const Coeff a = e.linear_coefficient(c);
				if(a == 0) {
					continue;
				}
				const Polynomial rest = e - Polynomial::variable(c, a);
				const ValueBounds rb = bounds(rest, {}, st.domain_fn());
				Coeff lo;
				Coeff hi;
				if(a > 0) {
					lo = ceil_div(-rb.max, a);
					hi = floor_div(-rb.min, a);
				} else {
					lo = ceil_div(rb.min, -a);
					hi = floor_div(rb.max, -a);
				}
				const Range old = st.domain(c);
				const Range next{static_cast<std::int64_t>(std::max<Coeff>(lo, old.lo)),
				                 static_cast<std::int64_t>(std::min<Coeff>(hi, old.hi))};
				if(next.empty()) {
					throw InfeasibleSplit("no feasible value for " + c.name());
				}
				if(next != old) {
					st.table.set(c.index, next);
					changed = true;
					any = true;
				}
			}
		}
		if(changed && history) {
			history->push_back(st.table.total_width());
		}
	}
	return any;
}

/// R4: drop satisfied constant equations, reject violated ones.
bool drop_constants(State& st)
{
	const auto before = st.eqs.size();
	for(const auto& e : st.eqs) {
		if(e.is_constant() && e.constant() != 0) {
			throw InfeasibleSplit("equation reduced to " + to_string(e.constant()) + " = 0");
		}
	}
	std::erase_if(st.eqs, [](const Polynomial& e) { return e.is_zero(); });
	return st.eqs.size() != before;
}

/// R1: carries whose range collapsed to a point become constants.
bool fix_pinned_carries(State& st)
{
	std::vector<Variable> pinned;
	for(const auto& e : st.eqs) {
		for(const auto& v : e.variables()) {
			if(v.kind == VarKind::Carry && st.domain(v).singleton()) {
				pinned.push_back(v);
			}
		}
	}
	for(const auto& v : pinned) {
		if(!st.fixed.contains(v)) {
			st.fix(v, st.domain(v).lo);
		}
	}
	return !pinned.empty();
}

/// R2: an equation whose interval bounds touch zero at one end forces every
/// term to that extreme; a single linear unknown is solved directly.
bool force_collapsed(State& st)
{
	for(std::size_t i = 0; i < st.eqs.size(); ++i) {
		const Polynomial e = st.eqs[i];
		const ValueBounds b = bounds(e, {}, st.domain_fn());
		if(b.min > 0 || b.max < 0) {
			throw InfeasibleSplit("equation " + e.to_string() + " = 0 cannot hold");
		}
		std::vector<std::pair<Variable, std::int64_t>> forced;
		const auto vars = e.variables();
		if(vars.size() == 1 && e.degree() == 1) {
			const Coeff a = e.linear_coefficient(vars.front());
			if((-e.constant()) % a != 0) {
				throw InfeasibleSplit("equation " + e.to_string() + " has no integer root");
			}
			forced.emplace_back(vars.front(), static_cast<std::int64_t>(-e.constant() / a));
		} else if(b.min == 0 || b.max == 0) {
			// at min: positive terms at their minimum, negative terms at their maximum
			const int dir = b.min == 0 ? 1 : -1;
			for(const auto& [m, c] : e.terms()) {
				const bool wants_low = (c > 0) == (dir > 0);
				if(m.size() == 1) {
					const Range r = st.domain(m.front());
					forced.emplace_back(m.front(), wants_low ? r.lo : r.hi);
				} else if(!wants_low &&
				          std::all_of(m.begin(), m.end(), [](const Variable& v) { return v.is_binary(); })) {
					for(const auto& v : m) {
						forced.emplace_back(v, 1);
					}
				}
			}
		}
		if(!forced.empty()) {
			for(const auto& [v, value] : forced) {
				st.fix(v, value);
			}
			return true;
		}
	}
	return false;
}

/// Exact support filtering: enumerate each small equation over the current
/// domains and keep only values that occur in some solution of it.
bool filter_support(State& st, std::size_t cap)
{
	if(cap == 0) {
		return false;
	}
	for(std::size_t i = 0; i < st.eqs.size(); ++i) {
		const Polynomial e = st.eqs[i];
		auto vars = e.variables();
		std::vector<Range> doms;
		std::size_t combos = 1;
		bool too_big = false;
		for(const auto& v : vars) {
			doms.push_back(st.domain(v));
			combos *= static_cast<std::size_t>(doms.back().width() + 1);
			if(combos > cap) {
				too_big = true;
				break;
			}
		}
		if(too_big) {
			continue;
		}
		const auto seen = std::find_if(st.support_stable.begin(), st.support_stable.end(),
		                               [&](const auto& entry) { return entry.first == e && entry.second == doms; });
		if(seen != st.support_stable.end()) {
			continue;
		}
		const std::vector<Range> key_doms = doms;
		// branch on the heaviest variables first so the interval cut bites early
		std::map<Variable, Coeff> weight;
		for(const auto& [m, c] : e.terms()) {
			for(const auto& v : m) {
				weight[v] += (c < 0 ? -c : c) * st.domain(v).width();
			}
		}
		std::stable_sort(vars.begin(), vars.end(),
		                 [&](const Variable& x, const Variable& y) { return weight[x] > weight[y]; });
		for(std::size_t k = 0; k < vars.size(); ++k) {
			doms[k] = st.domain(vars[k]);
		}
		std::map<Variable, std::size_t> index;
		for(std::size_t k = 0; k < vars.size(); ++k) {
			index.emplace(vars[k], k);
		}
		std::vector<Range> support(vars.size(), Range{1, 0});
		bool any = false;
		enumerate_roots({compile(e, index)}, doms, [&](const std::vector<std::int64_t>& value) {
			any = true;
			for(std::size_t k = 0; k < vars.size(); ++k) {
				auto& s = support[k];
				if(s.empty()) {
					s = {value[k], value[k]};
				} else {
					s.lo = std::min(s.lo, value[k]);
					s.hi = std::max(s.hi, value[k]);
				}
			}
		});
		if(!any) {
			throw InfeasibleSplit("equation " + e.to_string() + " = 0 has no solution in the current domains");
		}
		bool changed = false;
		for(std::size_t k = 0; k < vars.size(); ++k) {
			if(support[k] == doms[k]) {
				continue;
			}
			changed = true;
			if(support[k].singleton()) {
				st.fix(vars[k], support[k].lo);
			} else {
				st.table.set(vars[k].index, support[k]);
			}
		}
		if(changed) {
			return true;
		}
		st.support_stable.emplace_back(e, key_doms);
	}
	return false;
}

/// R3: x + y - 1 = 0 over two binaries eliminates the later variable as 1 - x.
bool substitute_pairs(State& st)
{
	for(const auto& e : st.eqs) {
		if(e.terms().size() != 2 || e.degree() != 1) {
			continue;
		}
		const auto vars = e.variables();
		if(!vars[0].is_binary() || !vars[1].is_binary()) {
			continue;
		}
		const Coeff a = e.linear_coefficient(vars[0]);
		const Coeff b = e.linear_coefficient(vars[1]);
		if(a != b || (a != 1 && a != -1) || e.constant() != -a) {
			continue;
		}
		st.eliminate(vars[1], Polynomial(1) - Polynomial::variable(vars[0]));
		return true;
	}
	return false;
}

void run_rules(State& st, const SimplifierOptions& opt)
{
	bool progress = true;
	while(progress) {
		progress = false;
		progress |= tighten_carries(st);
		progress |= drop_constants(st);
		progress |= fix_pinned_carries(st);
		progress |= drop_constants(st);
		progress |= force_collapsed(st);
		progress |= filter_support(st, opt.support_enumeration_cap);
		if(opt.pairwise_substitution) {
			progress |= substitute_pairs(st);
		}
		// x(1 - x) = 0 is applied by the polynomial canonical form itself.
		progress |= drop_constants(st);
	}
}

void probe_carries(State& st, const SimplifierOptions& opt)
{
	SimplifierOptions inner = opt;
	inner.probe_carries = false;
	bool changed = true;
	while(changed) {
		changed = false;
		std::set<Variable> open;
		for(const auto& e : st.eqs) {
			for(const auto& v : e.variables()) {
				if(v.kind == VarKind::Carry && !st.fixed.contains(v)) {
					open.insert(v);
				}
			}
		}
		for(const auto& c : open) {
			const Range r = st.domain(c);
			if(r.width() + 1 > opt.probe_domain_cap) {
				continue;
			}
			std::vector<std::int64_t> viable;
			for(std::int64_t v = r.lo; v <= r.hi; ++v) {
				State trial = st;
				try {
					trial.fix(c, v);
					run_rules(trial, inner);
					viable.push_back(v);
				} catch(const InfeasibleSplit&) {
				}
			}
			if(viable.empty()) {
				throw InfeasibleSplit("every value of " + c.name() + " leads to a contradiction");
			}
			const Range hull{viable.front(), viable.back()};
			if(hull != r) {
				if(hull.singleton()) {
					st.fix(c, hull.lo);
				} else {
					st.table.set(c.index, hull);
				}
				run_rules(st, opt);
				changed = true;
				break;
			}
		}
	}
}

State initial_state(const EquationSystem& system, const BoundTable& table)
{
	State st;
	st.table = table;
	for(const auto& e : system.equations) {
		st.eqs.push_back(e.residual());
	}
	for(const auto& [v, value] : system.fixed) {
		st.fix(v, value);
	}
	return st;
}

} // namespace

BoundTable refine_bounds(const EquationSystem& system, const BoundTable& table, std::vector<std::int64_t>* width_history)
{
	State st = initial_state(system, table);
	if(width_history) {
		width_history->push_back(st.table.total_width());
	}
	tighten_carries(st, width_history);
	return st.table;
}

ResidualSystem propagate(const EquationSystem& system, const BoundTable& table, const SimplifierOptions& options)
{
	State st = initial_state(system, table);
	if(options.reverse_order) {
		std::reverse(st.eqs.begin(), st.eqs.end());
	}
	run_rules(st, options);
	if(options.probe_carries) {
		probe_carries(st, options);
	}
	if(options.reverse_order) {
		std::reverse(st.eqs.begin(), st.eqs.end());
	}

	ResidualSystem out;
	out.equations = st.eqs;
	out.fixed = st.fixed;
	out.eliminated = st.log;
	out.carries = st.table;

	std::set<Variable> eliminated;
	for(const auto& s : st.log) {
		eliminated.insert(s.variable);
	}
	std::set<Variable> free;
	for(const auto& e : st.eqs) {
		for(const auto& v : e.variables()) {
			free.insert(v);
		}
	}
	// an undecided bit that left every equation satisfies them with either
	// value (the p <-> q mirror of a balanced split); pin it
	for(const auto& v : system.variables) {
		if(!st.fixed.contains(v) && eliminated.count(v) == 0 && free.count(v) == 0) {
			if(v.is_binary()) {
				st.fix(v, 0);
			} else {
				free.insert(v);
			}
		}
	}
	out.fixed = st.fixed;
	out.carries = st.table;
	out.free.assign(free.begin(), free.end());
	for(const auto& v : out.free) {
		if(v.kind == VarKind::Carry) {
			out.carry_ranges.set(v.index, st.domain(v));
		}
	}
	return out;
}

std::vector<Assignment> solve_residual_exhaustively(const ResidualSystem& residual, std::size_t cap)
{
	const auto& vars = residual.free;
	if(vars.size() > cap) {
		throw std::length_error("residual has " + std::to_string(vars.size()) + " free variables, cap is " +
		                        std::to_string(cap));
	}
	std::vector<Range> doms;
	for(const auto& v : vars) {
		doms.push_back(residual.domain(v));
		if(doms.back().empty()) {
			return {};
		}
	}
	std::map<Variable, std::size_t> index;
	for(std::size_t k = 0; k < vars.size(); ++k) {
		index.emplace(vars[k], k);
	}
	std::vector<CompiledEquation> eqs;
	for(const auto& e : residual.equations) {
		eqs.push_back(compile(e, index));
	}
	std::vector<std::vector<std::int64_t>> found;
	enumerate_roots(eqs, doms, [&](const std::vector<std::int64_t>& v) { found.push_back(v); });

	// enumeration order: the first free variable varies fastest
	std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
		return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
	});
	std::vector<Assignment> out;
	for(const auto& f : found) {
		Assignment a;
		for(std::size_t k = 0; k < vars.size(); ++k) {
			a.set(vars[k], f[k]);
		}
		out.push_back(std::move(a));
	}
	return out;
}

Assignment replay(const ResidualSystem& residual, const Assignment& solution)
{
	Assignment full = residual.fixed;
	for(const auto& [v, value] : solution) {
		full.set(v, value);
	}
	for(auto it = residual.eliminated.rbegin(); it != residual.eliminated.rend(); ++it) {
		full.set(it->variable, static_cast<std::int64_t>(evaluate(it->expression, full)));
	}
	return full;
}

} // namespace hafactor
