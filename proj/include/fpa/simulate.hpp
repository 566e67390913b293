#pragma once

// Draw i.i.d. auction outcomes from a configured model.  Winning bids use
// the max-of-uniforms shortcut W = B_n(U^{1/n}) unless per-bid columns are
// requested, in which case every participant's signal is drawn.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fpa/entry.hpp"
#include "fpa/numeric/rng.hpp"
#include "fpa/outcome.hpp"
#include "fpa/reserve.hpp"
#include "fpa/winning_mixture.hpp"

namespace fpa {

struct SimConfig {
  enum class ModelKind { Benchmark, Reserve, Entry };
  ModelKind kind = ModelKind::Benchmark;

  // benchmark primitives
  ValueQuantile V;
  CompetitionPMF pmf;
  double theta = 1.0;

  // participation primitives
  int n_potential = 2;
  Info info = Info::KnownN;
  std::function<double(double)> reserve_fn;  // reserve models
  ConditionalFamily family;                  // entry models
  std::function<double(double)> cost_fn;     // entry models

  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<double, double>> instruments;  // (z, weight)
  int n_covariates = 0;  // iid U(0,1) covariates appended to each record
  bool emit_bids = false;
  std::size_t grid_nodes = 1001;
  std::string echo;
};

namespace detail {

struct ModelTables {
  // per instrument (single entry when no instrument):
  std::vector<double> zs;
  std::vector<double> cum_weights;
  std::vector<double> screening;                    // q(z) or s(z)
  std::vector<std::vector<BidQuantile>> per_n;      // KnownN: n = 2..nbar
  std::vector<BidQuantile> pooled;                  // UnknownN
  double atom_price_for(const SimConfig& c, std::size_t zi) const {
    return c.kind == SimConfig::ModelKind::Reserve ? c.reserve_fn(zs[zi]) : 0.0;
  }
};

inline ModelTables build_tables(const SimConfig& c) {
  if (c.sample_size < 1) throw config_error("simulate: sample_size must be >= 1");
  ModelTables t;
  if (c.instruments.empty()) {
    t.zs = {0.0};
    t.cum_weights = {1.0};
  } else {
    double sum = 0.0;
    for (auto& [z, w] : c.instruments) {
      if (!(w > 0.0)) throw config_error("simulate: instrument weights > 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw config_error("simulate: instrument weights must sum to 1");
    double acc = 0.0;
    for (auto& [z, w] : c.instruments) {
      t.zs.push_back(z);
      acc += w;
      t.cum_weights.push_back(acc);
    }
    t.cum_weights.back() = 1.0;
  }

  const auto grid = chebyshev_grid(c.grid_nodes);
  switch (c.kind) {
    case SimConfig::ModelKind::Benchmark: {
      std::vector<BidQuantile> bids;
      for (int n = c.pmf.n_lo; n <= c.pmf.n_hi; ++n)
        bids.push_back(bid_quantile_from_value(c.V, n, c.theta, grid));
      t.per_n.assign(t.zs.size(), bids);
      t.screening.assign(t.zs.size(), 0.0);
      break;
    }
    case SimConfig::ModelKind::Reserve: {
      ReserveModel m{c.V, c.n_potential, c.reserve_fn, c.info};
      for (double z : t.zs) {
        const double q = screening_level(m, z);
        t.screening.push_back(q);
        auto Vq = conditional_value_quantile(c.V, q);
        if (c.info == Info::KnownN) {
          std::vector<BidQuantile> bids;
          for (int n = 2; n <= c.n_potential; ++n)
            bids.push_back(bid_quantile_from_value(Vq, n, 1.0, grid));
          t.per_n.push_back(std::move(bids));
        } else {
          t.pooled.push_back(
              detail::pooled_bid_unknown(Vq, c.n_potential, q, grid));
        }
      }
      break;
    }
    case SimConfig::ModelKind::Entry: {
      EntryModel m{c.family, c.n_potential, c.cost_fn, c.info};
      for (double z : t.zs) {
        const auto th = entry_threshold(m, z);
        if (th.status != ThresholdResult::Status::Interior)
          throw config_error("simulate: entry threshold not interior at z=" +
                             std::to_string(z));
        t.screening.push_back(th.s);
        auto Vc = entry_value_quantile(c.family, th.s);
        if (c.info == Info::KnownN) {
          std::vector<BidQuantile> bids;
          for (int n = 2; n <= c.n_potential; ++n)
            bids.push_back(bid_quantile_from_value(Vc, n, 1.0, grid));
          t.per_n.push_back(std::move(bids));
        } else {
          t.pooled.push_back(
              detail::pooled_bid_unknown(Vc, c.n_potential, th.s, grid));
        }
      }
      break;
    }
  }
  return t;
}

}  // namespace detail

inline OutcomeSample simulate(const SimConfig& c) {
  const auto tables = detail::build_tables(c);
  OutcomeSample out;
  out.provenance = c.echo;
  out.records.resize(c.sample_size);

  for (std::size_t i = 0; i < c.sample_size; ++i) {
    RecordStream rng(c.seed, i);
    OutcomeRecord& rec = out.records[i];

    std::size_t zi = 0;
    if (!c.instruments.empty()) {
      zi = rng.next_index(tables.cum_weights.data(), tables.cum_weights.size());
      rec.z = tables.zs[zi];
    }

    auto draw_winning = [&](const BidQuantile& B, int n) {
      if (c.emit_bids) {
        double w = -1.0;
        for (int j = 0; j < n; ++j) {
          const double bid = B(rng.next_uniform());
          rec.bids.push_back(bid);
          w = std::max(w, bid);
        }
        return w;
      }
      const double u = rng.next_uniform();
      return B(std::pow(u, 1.0 / double(n)));
    };

    if (c.kind == SimConfig::ModelKind::Benchmark) {
      std::vector<double> cum(c.pmf.weights.size());
      double acc = 0.0;
      for (std::size_t k = 0; k < cum.size(); ++k) {
        acc += c.pmf.weights[k];
        cum[k] = acc;
      }
      cum.back() = 1.0;
      const std::size_t ni = rng.next_index(cum.data(), cum.size());
      const int n = c.pmf.n_lo + int(ni);
      rec.status = OutcomeRecord::Status::SoldCompetitive;
      rec.winning_bid = draw_winning(tables.per_n[zi][ni], n);
    } else {
      const double q = tables.screening[zi];
      int active = 0;
      for (int j = 0; j < c.n_potential; ++j)
        if (rng.next_uniform() > q) ++active;
      if (active == 0) {
        rec.status = OutcomeRecord::Status::NotSold;
        rec.winning_bid = 0.0;
      } else if (active == 1) {
        rec.status = OutcomeRecord::Status::SoldAtAtom;
        rec.winning_bid = tables.atom_price_for(c, zi);
      } else {
        rec.status = OutcomeRecord::Status::SoldCompetitive;
        const BidQuantile& B = (c.info == Info::KnownN)
                                   ? tables.per_n[zi][std::size_t(active - 2)]
                                   : tables.pooled[zi];
        rec.winning_bid = draw_winning(B, active);
      }
    }

    for (int k = 0; k < c.n_covariates; ++k)
      rec.covariates.push_back(rng.next_uniform());
  }
  return out;
}

}  // namespace fpa
