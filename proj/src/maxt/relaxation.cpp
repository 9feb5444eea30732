#include "migsched/lp.hpp"
#include "migsched/maxt.hpp"

#include <algorithm>
#include <stdexcept>

namespace migsched {

Rational alpha_of(int hosts, const Rational& lambda) {
  const Rational one(1);
  return lambda * (one - lambda) / (one - lambda + lambda / hosts);
}

Rational omega_split(int hosts, const Rational& lambda) {
  const Rational a = alpha_of(hosts, lambda);
  return (1 - a) * (1 - lambda) - a * lambda / hosts;
}

Rational omega_pairing(int hosts, const Rational& lambda) {
  return Rational(1, 2) - lambda * (Rational(1, 2) + Rational(1, hosts));
}

namespace {

std::vector<TimeWindow> distinct_windows(const Instance& instance) {
  std::set<TimeWindow> seen;
  for (const auto& j : instance.jobs()) seen.insert(j.window());
  return {seen.begin(), seen.end()};
}

bool fractional(const Rational& v) { return v > 0 && v < 1; }

// Denser first, then lower id.
bool denser(const Job& a, const Job& b) {
  const Rational da = a.weight / area(a);
  const Rational db = b.weight / area(b);
  return da != db ? da > db : a.id < b.id;
}

FractionalSelection area_lp(const Instance& instance, const Rational& scale) {
  lp::LinearProgram program(lp::Sense::Maximize);
  for (const auto& j : instance.jobs()) program.add_variable(j.weight, 0, Rational(1));
  for (const auto& w : distinct_windows(instance)) {
    std::vector<lp::Term> terms;
    for (std::size_t i = 0; i < instance.size(); ++i) {
      const Job& j = instance.jobs()[i];
      if (w.contains(j.window())) terms.push_back({static_cast<int>(i), area(j)});
    }
    program.add_row(std::move(terms), lp::Relation::LessEqual, scale * instance.hosts() * w.size());
  }
  const lp::LpSolution sol = lp::solve(program);
  if (sol.status != lp::Status::Optimal) throw std::logic_error("area LP not optimal");
  FractionalSelection out;
  for (std::size_t i = 0; i < instance.size(); ++i) out.x[instance.jobs()[i].id] = sol.primal[i];
  out.objective = sol.objective;
  return out;
}

}  // namespace

FractionalSelection solve_relaxation(const Instance& laminar, const Rational& omega) {
  const auto windows = distinct_windows(laminar);
  if (!windows.empty() && !is_laminar(windows)) throw std::invalid_argument("solve_relaxation needs laminar windows");
  if (omega <= 0) throw std::invalid_argument("omega must be positive");
  return area_lp(laminar, omega);
}

Rational maxt_lp_bound(const Instance& instance) { return area_lp(instance, 1).objective; }

FractionalSelection normalize_selection(const Instance& laminar, const FractionalSelection& x) {
  FractionalSelection out = x;
  std::map<TimeWindow, std::vector<const Job*>> by_window;
  for (const auto& j : laminar.jobs()) by_window[j.window()].push_back(&j);
  for (auto& [w, jobs] : by_window) {
    std::sort(jobs.begin(), jobs.end(), [](const Job* a, const Job* b) { return denser(*a, *b); });
    for (;;) {
      const Job* hi = nullptr;
      const Job* lo = nullptr;
      for (const Job* j : jobs) {
        if (!fractional(out.x[j->id])) continue;
        if (!hi) hi = j;
        lo = j;
      }
      if (!hi || hi == lo) break;
      const Rational a_hi = area(*hi);
      const Rational a_lo = area(*lo);
      const Rational delta = rational_min(a_lo * out.x[lo->id], a_hi * (1 - out.x[hi->id]));
      out.x[hi->id] += delta / a_hi;
      out.x[lo->id] -= delta / a_lo;
    }
  }
  out.objective = 0;
  for (const auto& j : laminar.jobs()) out.objective += j.weight * out.x[j.id];
  return out;
}

RoundingTrace round_selection_trace(const Instance& laminar, const LaminarTree& tree, const FractionalSelection& x) {
  RoundingTrace trace;
  trace.normalized = normalize_selection(laminar, x);
  std::map<int, Rational> xh = trace.normalized.x;

  // Jobs per node, and per node the set of nodes in its subtree (excluding itself).
  const auto order = tree.post_order();
  std::vector<std::vector<int>> below(tree.size());
  for (int v : order) {
    for (int c : tree.node(v).children) {
      below[v].push_back(c);
      below[v].insert(below[v].end(), below[c].begin(), below[c].end());
    }
  }

  for (int v : order) {
    const Job* owner = nullptr;
    for (int idx : tree.node(v).jobs) {
      const Job& j = laminar.jobs()[idx];
      if (fractional(xh[j.id])) {
        if (owner) throw std::logic_error("two fractional jobs share window " + to_string(j.window()));
        owner = &j;
      }
    }
    if (!owner) continue;

    std::vector<const Job*> fracs;
    for (int u : below[v]) {
      for (int idx : tree.node(u).jobs) {
        const Job& j = laminar.jobs()[idx];
        if (fractional(xh[j.id])) fracs.push_back(&j);
      }
    }
    if (fracs.empty()) continue;
    std::sort(fracs.begin(), fracs.end(), [](const Job* a, const Job* b) { return denser(*a, *b); });

    Rational room = 0;
    for (const Job* k : fracs) room += area(*k) * (1 - xh[k->id]);
    const Rational a_owner = area(*owner);
    Rational delta = rational_min(a_owner * xh[owner->id], room);
    xh[owner->id] -= delta / a_owner;
    for (const Job* k : fracs) {
      if (delta == 0) break;
      const Rational a_k = area(*k);
      const Rational step = rational_min(delta, a_k * (1 - xh[k->id]));
      xh[k->id] += step / a_k;
      delta -= step;
    }
  }

  trace.transferred = xh;
  for (const auto& [id, v] : xh) {
    if (v > 0) trace.selected.insert(id);
  }
  return trace;
}

std::set<int> round_selection(const Instance& laminar, const LaminarTree& tree, const FractionalSelection& x) {
  return round_selection_trace(laminar, tree, x).selected;
}

}  // namespace migsched
