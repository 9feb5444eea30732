#include "migsched/maxt.hpp"

#include <algorithm>

namespace migsched {

BinState::BinState(int hosts, int horizon)
    : hosts_(hosts),
      horizon_(std::max(1, horizon)),
      colors_(static_cast<std::size_t>(hosts) * horizon_, BinColor::White),
      loads_(static_cast<std::size_t>(hosts) * horizon_),
      residents_(static_cast<std::size_t>(hosts) * horizon_) {}

void BinState::add(int job, const Rational& height, Placement p) {
  const std::size_t i = index(p.host, p.slot);
  loads_[i] += height;
  residents_[i].push_back(job);
}

std::optional<Placement> allocate_one_slot(int job, const Rational& height, std::span<const int> avail,
                                           BinState& bins) {
  std::optional<Placement> gray;
  std::optional<Placement> white;
  for (int h = 0; h < bins.hosts(); ++h) {
    for (int t : avail) {
      const BinColor c = bins.color(h, t);
      if (c == BinColor::Gray) {
        if (bins.load(h, t) + height <= 1) {
          bins.add(job, height, {h, t});
          return Placement{h, t};
        }
        if (!gray) gray = Placement{h, t};
      } else if (c == BinColor::White && !white) {
        white = Placement{h, t};
      }
    }
  }
  if (!white) return std::nullopt;
  bins.add(job, height, *white);
  if (gray) {
    bins.set_color(*gray, BinColor::Black);
    bins.set_color(*white, BinColor::Black);
    bins.pair(*gray, *white);
  } else {
    bins.set_color(*white, BinColor::Gray);
  }
  return white;
}

namespace {

std::optional<Placement> smallfit_one_slot(int job, const Rational& height, std::span<const int> avail,
                                           BinState& bins) {
  for (int t : avail) {
    for (int h = 0; h < bins.hosts(); ++h) {
      if (bins.load(h, t) + height <= 1) {
        bins.add(job, height, {h, t});
        bins.set_color({h, t}, BinColor::Gray);
        return Placement{h, t};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Schedule schedule_selected(const Instance& laminar, const std::set<int>& selected, const LaminarTree& tree,
                           AllocationMode mode, const std::map<int, std::set<int>>& forbidden, BinState* bins_out) {
  BinState bins(laminar.hosts(), laminar.horizon());
  Schedule schedule;
  for (int v : tree.post_order()) {
    for (int idx : tree.node(v).jobs) {
      const Job& j = laminar.jobs()[idx];
      if (!selected.count(j.id)) continue;
      const Rational height = j.height();
      std::vector<int> avail;
      auto forb = forbidden.find(j.id);
      for (int t = j.release; t <= j.due; ++t) {
        if (forb == forbidden.end() || !forb->second.count(t)) avail.push_back(t);
      }
      for (int unit = 0; unit < j.length; ++unit) {
        auto placed = mode == AllocationMode::Pairing ? allocate_one_slot(j.id, height, avail, bins)
                                                      : smallfit_one_slot(j.id, height, avail, bins);
        if (!placed) {
          throw AllocationFailure(j.id, "no bin for job " + std::to_string(j.id) + " unit " + std::to_string(unit + 1));
        }
        schedule.place(j.id, *placed);
        avail.erase(std::find(avail.begin(), avail.end(), placed->slot));
      }
    }
  }
  if (bins_out) *bins_out = std::move(bins);
  return schedule;
}

}  // namespace migsched
