#ifndef CKDV_IO_HPP
#define CKDV_IO_HPP

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "ckdv/charges.hpp"
#include "ckdv/error.hpp"
#include "ckdv/fields.hpp"
#include "ckdv/grid.hpp"

namespace ckdv {

/// Shortest-safe decimal form: 17 significant digits, locale independent.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// State files.
//
// Line 1 is a JSON header {"format":"ckdv-state","version":1,"L":...,
// "n_points":...,"K":...,"t":...,"lambda":...,"seed":...}; line 2 is the CSV
// header x,u,phi_1..phi_K; then n_points rows of 17-digit decimals.

struct StateFile {
  FieldState state;
  double lambda = 1.0;
  std::uint64_t seed = 0;
};

inline void write_state(std::ostream& os, const FieldState& s, double lambda,
                        std::uint64_t seed) {
  nlohmann::ordered_json header;
  header["format"] = "ckdv-state";
  header["version"] = 1;
  header["L"] = s.grid().length();
  header["n_points"] = s.grid().size();
  header["K"] = s.components();
  header["t"] = s.time();
  header["lambda"] = lambda;
  header["seed"] = seed;
  os << header.dump() << '\n';
  os << "x,u";
  for (std::size_t i = 0; i < s.components(); ++i) os << ",phi_" << (i + 1);
  os << '\n';
  for (std::size_t j = 0; j < s.grid().size(); ++j) {
    os << format_double(s.grid().x(j)) << ',' << format_double(s.u()[j]);
    for (const auto& phi : s.phi()) os << ',' << format_double(phi[j]);
    os << '\n';
  }
}

inline StateFile read_state(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("state file is empty");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad state header: ") + e.what());
  }
  double length = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
  double t = 0.0;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  try {
    if (header.value("format", "") != "ckdv-state") {
      throw ParseError("state header has wrong format tag");
    }
    length = header.at("L").get<double>();
    n = header.at("n_points").get<std::size_t>();
    k = header.at("K").get<std::size_t>();
    t = header.at("t").get<double>();
    lambda = header.at("lambda").get<double>();
    seed = header.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad state header: ") + e.what());
  }
  Grid grid = [&] {
    try {
      return Grid(length, n);
    } catch (const ContractViolation& e) {
      throw ParseError(std::string("bad grid in state header: ") + e.what());
    }
  }();

  if (!std::getline(is, line)) throw ParseError("state file lacks column header");
  const auto cols = detail::split_csv(detail::trim_cr(line));
  if (cols.size() != k + 2 || cols[0] != "x" || cols[1] != "u") {
    throw ParseError("state column header does not match K=" + std::to_string(k));
  }

  Samples u(n);
  std::vector<Samples> phi(k, Samples(n));
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::getline(is, line)) {
      throw ParseError("state file truncated: expected " + std::to_string(n) +
                       " rows, got " + std::to_string(j));
    }
    const auto cells = detail::split_csv(detail::trim_cr(line));
    if (cells.size() != k + 2) {
      throw ParseError("row " + std::to_string(j) + " has " +
                       std::to_string(cells.size()) + " columns, expected " +
                       std::to_string(k + 2));
    }
    parse_double(cells[0]);
    u[j] = parse_double(cells[1]);
    for (std::size_t i = 0; i < k; ++i) phi[i][j] = parse_double(cells[i + 2]);
  }
  try {
    return StateFile{FieldState(grid, std::move(u), std::move(phi), t), lambda, seed};
  } catch (const BlowUp&) {
    throw ParseError("state file contains non-finite values");
  }
}

// ---------------------------------------------------------------------------
// Charge series. A leading comment line "# {json}" carries the seed, lambda
// and K; the mandatory header row follows, then one row per sample.

inline void write_charge_header(std::ostream& os, std::size_t components,
                                double lambda, std::uint64_t seed) {
  nlohmann::ordered_json meta;
  meta["seed"] = seed;
  meta["lambda"] = lambda;
  meta["K"] = components;
  os << "# " << meta.dump() << '\n';
  os << "t,h1,h3,h5,nonlocal,l2,sobolev_h1";
  for (std::size_t i = 0; i < components; ++i) os << ",h_half_" << (i + 1);
  os << '\n';
}

inline void write_charge_row(std::ostream& os, const ChargeReport& r) {
  os << format_double(r.t) << ',' << format_double(r.h1) << ','
     << format_double(r.h3) << ',' << format_double(r.h5) << ','
     << format_double(r.nonlocal) << ',' << format_double(r.l2) << ','
     << format_double(r.sobolev_h1);
  for (double h : r.h_half) os << ',' << format_double(h);
  os << '\n';
}

inline std::vector<ChargeReport> read_charges(std::istream& is) {
  std::string line;
  bool have_header = false;
  std::size_t k = 0;
  std::vector<ChargeReport> rows;
  while (std::getline(is, line)) {
    const std::string_view view = detail::trim_cr(line);
    if (view.empty() || view.front() == '#') continue;
    const auto cells = detail::split_csv(view);
    if (!have_header) {
      if (cells.size() < 7 || cells[0] != "t") throw ParseError("charge CSV lacks header");
      k = cells.size() - 7;
      have_header = true;
      continue;
    }
    if (cells.size() != k + 7) throw ParseError("charge CSV row has wrong column count");
    ChargeReport r;
    r.t = parse_double(cells[0]);
    r.h1 = parse_double(cells[1]);
    r.h3 = parse_double(cells[2]);
    r.h5 = parse_double(cells[3]);
    r.nonlocal = parse_double(cells[4]);
    r.l2 = parse_double(cells[5]);
    r.sobolev_h1 = parse_double(cells[6]);
    for (std::size_t i = 0; i < k; ++i) r.h_half.push_back(parse_double(cells[7 + i]));
    rows.push_back(std::move(r));
  }
  if (!have_header) throw ParseError("charge CSV lacks header");
  return rows;
}

}  // namespace ckdv

#endif
