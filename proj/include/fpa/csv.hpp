#pragma once

// CSV schema shared by the simulator and the estimation commands.
// Columns: winning_bid (empty if not sold), sold (0/1), atom (0/1,
// optional), z (optional), x1, x2 (optional), b1..bk (optional).

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fpa/numeric/errors.hpp"
#include "fpa/outcome.hpp"

namespace fpa {

namespace detail {
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace detail

inline void write_outcomes_csv(const std::string& path,
                               const OutcomeSample& sample) {
  std::ofstream f(path);
  if (!f) throw data_error("cannot open for writing: " + path);

  bool has_z = false;
  std::size_t n_cov = 0, n_bids = 0;
  for (const auto& r : sample.records) {
    has_z = has_z || r.z.has_value();
    n_cov = std::max(n_cov, r.covariates.size());
    n_bids = std::max(n_bids, r.bids.size());
  }

  f << "winning_bid,sold,atom";
  if (has_z) f << ",z";
  for (std::size_t k = 0; k < n_cov; ++k) f << ",x" << (k + 1);
  for (std::size_t k = 0; k < n_bids; ++k) f << ",b" << (k + 1);
  f << "\n";

  for (const auto& r : sample.records) {
    if (r.status == OutcomeRecord::Status::NotSold)
      f << ",0,0";
    else
      f << detail::format_double(r.winning_bid) << ",1,"
        << (r.status == OutcomeRecord::Status::SoldAtAtom ? 1 : 0);
    if (has_z) {
      f << ",";
      if (r.z) f << detail::format_double(*r.z);
    }
    for (std::size_t k = 0; k < n_cov; ++k) {
      f << ",";
      if (k < r.covariates.size()) f << detail::format_double(r.covariates[k]);
    }
    for (std::size_t k = 0; k < n_bids; ++k) {
      f << ",";
      if (k < r.bids.size()) f << detail::format_double(r.bids[k]);
    }
    f << "\n";
  }
}

struct IngestReport {
  OutcomeSample sample;
  std::vector<std::pair<std::size_t, std::string>> rejected;  // (row, reason)
};

inline IngestReport ingest_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw data_error("cannot open input file: " + path);

  std::string header;
  if (!std::getline(f, header)) throw data_error("empty file: " + path);
  auto cols = detail::split_csv_line(header);
  int c_wb = -1, c_sold = -1, c_atom = -1, c_z = -1;
  std::vector<int> c_cov, c_bids;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const std::string& name = cols[i];
    if (name == "winning_bid") c_wb = int(i);
    else if (name == "sold") c_sold = int(i);
    else if (name == "atom") c_atom = int(i);
    else if (name == "z") c_z = int(i);
    else if (name.size() >= 2 && name[0] == 'x') c_cov.push_back(int(i));
    else if (name.size() >= 2 && name[0] == 'b') c_bids.push_back(int(i));
  }
  if (c_wb < 0) throw data_error(path + ": missing required column winning_bid");
  if (c_sold < 0) throw data_error(path + ": missing required column sold");

  IngestReport rep;
  rep.sample.provenance = "ingested from " + path;
  std::string line;
  std::size_t row = 1;
  auto parse = [](const std::string& s, double& out) {
    std::size_t pos = 0;
    try {
      out = std::stod(s, &pos);
    } catch (...) {
      return false;
    }
    return pos == s.size();
  };

  std::size_t data_rows = 0;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    ++data_rows;
    auto fields = detail::split_csv_line(line);
    auto get = [&](int c) -> std::string {
      return (c >= 0 && std::size_t(c) < fields.size()) ? fields[std::size_t(c)]
                                                        : std::string();
    };
    const std::string wb_s = get(c_wb), sold_s = get(c_sold);
    double sold = 0.0;
    if (!parse(sold_s, sold) || (sold != 0.0 && sold != 1.0)) {
      rep.rejected.emplace_back(row, "sold is not 0/1");
      continue;
    }
    OutcomeRecord rec;
    if (sold == 0.0) {
      if (!wb_s.empty()) {
        rep.rejected.emplace_back(row, "sold=0 with nonempty winning_bid");
        continue;
      }
      rec.status = OutcomeRecord::Status::NotSold;
    } else {
      double wb = 0.0;
      if (wb_s.empty() || !parse(wb_s, wb)) {
        rep.rejected.emplace_back(row, "non-numeric or empty winning_bid");
        continue;
      }
      double atom = 0.0;
      const std::string atom_s = get(c_atom);
      if (!atom_s.empty() && !parse(atom_s, atom)) {
        rep.rejected.emplace_back(row, "non-numeric atom flag");
        continue;
      }
      rec.status = atom == 1.0 ? OutcomeRecord::Status::SoldAtAtom
                               : OutcomeRecord::Status::SoldCompetitive;
      rec.winning_bid = wb;
    }
    if (c_z >= 0) {
      const std::string zs = get(c_z);
      if (!zs.empty()) {
        double z = 0.0;
        if (!parse(zs, z)) {
          rep.rejected.emplace_back(row, "non-numeric z");
          continue;
        }
        rec.z = z;
      }
    }
    bool bad = false;
    for (int c : c_cov) {
      const std::string s = get(c);
      if (s.empty()) continue;
      double x = 0.0;
      if (!parse(s, x)) {
        rep.rejected.emplace_back(row, "non-numeric covariate");
        bad = true;
        break;
      }
      rec.covariates.push_back(x);
    }
    if (bad) continue;
    for (int c : c_bids) {
      const std::string s = get(c);
      if (s.empty()) continue;
      double x = 0.0;
      if (!parse(s, x)) {
        rep.rejected.emplace_back(row, "non-numeric bid column");
        bad = true;
        break;
      }
      rec.bids.push_back(x);
    }
    if (bad) continue;
    rep.sample.records.push_back(std::move(rec));
  }
  if (data_rows == 0) throw data_error("empty file: " + path);
  return rep;
}

// Two-column serialization used for tabulated quantile/cdf objects.
inline void write_tabulation_csv(const std::string& path,
                                 const std::string& xname,
                                 const std::string& yname,
                                 const std::vector<double>& x,
                                 const std::vector<double>& y) {
  if (x.size() != y.size())
    throw config_error("write_tabulation_csv: size mismatch");
  std::ofstream f(path);
  if (!f) throw data_error("cannot open for writing: " + path);
  f << xname << "," << yname << "\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    f << detail::format_double(x[i]) << "," << detail::format_double(y[i])
      << "\n";
}

}  // namespace fpa
