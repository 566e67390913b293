#pragma once

// Observed auction records: the raw material of the inverse pipeline.

#include <optional>
#include <string>
#include <vector>

namespace fpa {

struct OutcomeRecord {
  enum class Status { NotSold, SoldAtAtom, SoldCompetitive };
  Status status = Status::SoldCompetitive;
  double winning_bid = 0.0;  // atom price for SoldAtAtom; unused for NotSold
  std::optional<double> z;
  std::vector<double> covariates;
  std::vector<double> bids;  // per-bid columns, when available

  bool sold() const { return status != Status::NotSold; }
};

struct OutcomeSample {
  std::vector<OutcomeRecord> records;
  std::string provenance;  // config echo or ingestion note

  std::vector<double> sold_competitive_bids() const {
    std::vector<double> out;
    for (const auto& r : records)
      if (r.status == OutcomeRecord::Status::SoldCompetitive)
        out.push_back(r.winning_bid);
    return out;
  }
};

}  // namespace fpa
