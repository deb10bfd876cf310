#include "seqsub/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace seqsub {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_model(const Instance& inst, const ObservationModel& model) {
  switch (model.kind) {
    case ObservationKind::kExact:
      return;
    case ObservationKind::kBernoulli:
      require(inst.bernoulli_compatible,
              "Bernoulli observations need a bernoulli-compatible instance "
              "(max F <= 1)");
      return;
    case ObservationKind::kBoundedNoise:
      require(std::isfinite(model.noise_half_width) && model.noise_half_width >= 0.0,
              "noise half-width must be finite and nonnegative");
      return;
  }
  throw std::invalid_argument("unknown observation kind");
}

double observe(const Instance& inst, const Sequence& seq,
               const ObservationModel& model, Rng& rng) {
  const double value = sequence_value(inst, seq);
  switch (model.kind) {
    case ObservationKind::kExact:
      return value;
    case ObservationKind::kBernoulli: {
      require(value >= -1e-12 && value <= 1.0 + 1e-12,
              "Bernoulli observation needs F in [0, 1]");
      const double p = std::clamp(value, 0.0, 1.0);
      return rng.bernoulli(p) ? 1.0 : 0.0;
    }
    case ObservationKind::kBoundedNoise:
      return value + rng.uniform(-model.noise_half_width, model.noise_half_width);
  }
  throw std::invalid_argument("unknown observation kind");
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_real(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("dataset file: bad ") + what + " '" +
                             text + "'");
  }
}

long long parse_int(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("dataset file: bad ") + what + " '" +
                             text + "'");
  }
}

}  // namespace

namespace {

// Core draw without the per-call validation; pool is reusable scratch.
SampleRecord draw_one(const Instance& inst, const ObservationModel& model,
                      Rng& rng, std::vector<ItemId>& pool) {
  const int n = inst.n();
  const int t = 1 + rng.bounded_int(inst.k);

  // Partial Fisher-Yates: after j swaps the first j entries are a uniform
  // ordered j-tuple of distinct ids.
  pool.resize(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int j = 0; j < t; ++j) {
    const int pick = j + rng.bounded_int(n - j);
    std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
  }

  Sequence seq(std::vector<ItemId>(pool.begin(), pool.begin() + t));
  const double phi = observe(inst, seq, model, rng);
  return SampleRecord{std::move(seq), phi};
}

}  // namespace

SampleRecord draw_two_stage(const Instance& inst, const ObservationModel& model,
                            Rng& rng) {
  inst.validate();
  check_model(inst, model);
  std::vector<ItemId> pool;
  return draw_one(inst, model, rng, pool);
}

Dataset build_dataset(const Instance& inst, const ObservationModel& model,
                      std::size_t m, std::uint64_t seed) {
  require(m >= 1, "dataset needs at least one sample");
  inst.validate();
  check_model(inst, model);

  Rng rng(seed);
  Dataset ds;
  ds.n = inst.n();
  ds.k = inst.k;
  ds.records.reserve(m);
  std::vector<ItemId> pool;
  double max_phi = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    ds.records.push_back(draw_one(inst, model, rng, pool));
    max_phi = std::max(max_phi, ds.records.back().phi);
  }
  ds.delta = model.value_bound.value_or(max_phi);
  return ds;
}

double delta_bound(const Dataset& ds, std::optional<double> override_value) {
  if (override_value.has_value()) return *override_value;
  require(!ds.records.empty(), "delta_bound needs a nonempty dataset");
  double max_phi = ds.records.front().phi;
  for (const SampleRecord& rec : ds.records) max_phi = std::max(max_phi, rec.phi);
  return max_phi;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << ds.n << ',' << ds.k << ',' << format_real(ds.delta) << ','
      << ds.records.size() << '\n';
  std::string line;
  for (const SampleRecord& rec : ds.records) {
    line.clear();
    line += std::to_string(rec.sequence.size());
    line += ',';
    for (int j = 0; j < rec.sequence.size(); ++j) {
      if (j > 0) line += ' ';
      line += std::to_string(rec.sequence.at(j));
    }
    line += ',';
    line += format_real(rec.phi);
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset file: empty");
  const auto header = split(line, ',');
  if (header.size() != 4) throw std::runtime_error("dataset file: bad header");

  Dataset ds;
  ds.n = static_cast<int>(parse_int(header[0], "n"));
  ds.k = static_cast<int>(parse_int(header[1], "k"));
  ds.delta = parse_real(header[2], "delta");
  const long long m = parse_int(header[3], "m");
  if (ds.n < 1 || ds.k < 1 || ds.k > ds.n || m < 1) {
    throw std::runtime_error("dataset file: inconsistent header");
  }

  ds.records.reserve(static_cast<std::size_t>(m));
  const double slack = 1e-9 * std::max(1.0, std::abs(ds.delta));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 3) throw std::runtime_error("dataset file: bad record line");
    const int t = static_cast<int>(parse_int(parts[0], "length"));
    if (t < 1 || t > ds.k) throw std::runtime_error("dataset file: length out of range");
    std::vector<ItemId> items;
    items.reserve(static_cast<std::size_t>(t));
    for (const std::string& tok : split(parts[1], ' ')) {
      if (tok.empty()) continue;
      const long long id = parse_int(tok, "item id");
      if (id < 0 || id >= ds.n) throw std::runtime_error("dataset file: item id out of range");
      items.push_back(static_cast<ItemId>(id));
    }
    if (static_cast<int>(items.size()) != t) {
      throw std::runtime_error("dataset file: length does not match items");
    }
    const double phi = parse_real(parts[2], "phi");
    if (phi > ds.delta + slack) {
      throw std::runtime_error("dataset file: phi exceeds declared delta");
    }
    ds.records.push_back(SampleRecord{Sequence(std::move(items)), phi});
  }
  if (static_cast<long long>(ds.records.size()) != m) {
    throw std::runtime_error("dataset file: record count does not match header");
  }
  return ds;
}

}  // namespace seqsub
