#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "lrdcp/calibrate.hpp"
#include "lrdcp/error.hpp"
#include "lrdcp/io.hpp"

namespace lrdcp::calibrate {
namespace {

constexpr double kKeyTolerance = 1e-9;

bool same(double a, double b) { return std::abs(a - b) < kKeyTolerance; }

}  // namespace

double psi_tau(double t, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("psi_tau requires 0 < tau < 1");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("psi_tau requires 0 <= t <= 1");
  return t <= tau ? t * (1.0 - tau) : tau * (1.0 - t);
}

double empirical_quantile(std::span<const double> sorted, double alpha) {
  if (sorted.empty()) throw DomainError("empirical_quantile of an empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const double pos = std::ceil((1.0 - alpha) * static_cast<double>(sorted.size()) - 1e-9);
  const auto idx = static_cast<std::size_t>(std::clamp(pos, 1.0, static_cast<double>(sorted.size())));
  return sorted[idx - 1];
}

void CriticalValueTable::insert(const TableEntry& e) {
  for (auto& old : entries_) {
    if (old.kind == e.kind && old.n == e.n && same(old.hurst, e.hurst) && same(old.alpha, e.alpha) &&
        old.reps == e.reps) {
      old.value = e.value;
      return;
    }
  }
  entries_.push_back(e);
}

std::optional<double> CriticalValueTable::lookup(stats::StatisticKind kind, std::size_t n, double hurst,
                                                 double alpha) const {
  const TableEntry* exact = nullptr;
  const TableEntry* below = nullptr;
  const TableEntry* above = nullptr;
  for (const auto& e : entries_) {
    if (e.kind != kind || e.n != n || !same(e.alpha, alpha)) continue;
    if (same(e.hurst, hurst)) {
      if (!exact || e.reps > exact->reps) exact = &e;
    } else if (e.hurst < hurst) {
      if (!below || e.hurst > below->hurst || (same(e.hurst, below->hurst) && e.reps > below->reps)) below = &e;
    } else {
      if (!above || e.hurst < above->hurst || (same(e.hurst, above->hurst) && e.reps > above->reps)) above = &e;
    }
  }
  if (exact) return exact->value;
  if (!below || !above) return std::nullopt;
  const double w = (hurst - below->hurst) / (above->hurst - below->hurst);
  return (1.0 - w) * below->value + w * above->value;
}

std::string CriticalValueTable::to_json() const {
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end(), [](const TableEntry& a, const TableEntry& b) {
    return std::tie(a.kind, a.n, a.hurst, a.alpha, a.reps) < std::tie(b.kind, b.n, b.hurst, b.alpha, b.reps);
  });
  nlohmann::ordered_json doc;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : sorted) {
    nlohmann::ordered_json j;
    j["stat"] = stats::to_string(e.kind);
    j["n"] = e.n;
    j["H"] = e.hurst;
    j["alpha"] = e.alpha;
    j["J"] = e.reps;
    j["value"] = e.value;
    doc["entries"].push_back(std::move(j));
  }
  doc["master_seed"] = master_seed_;
  if (!created_.empty()) doc["created"] = created_;
  return doc.dump(2) + "\n";
}

CriticalValueTable CriticalValueTable::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("critical value table: ") + e.what());
  }
  try {
    CriticalValueTable table(doc.value("master_seed", std::uint64_t{0}));
    if (doc.contains("created")) table.set_created(doc.at("created").get<std::string>());
    for (const auto& j : doc.at("entries")) {
      TableEntry e;
      e.kind = stats::parse_statistic(j.at("stat").get<std::string>());
      e.n = j.at("n").get<std::size_t>();
      e.hurst = j.at("H").get<double>();
      e.alpha = j.at("alpha").get<double>();
      e.reps = j.at("J").get<std::size_t>();
      e.value = j.at("value").get<double>();
      table.insert(e);
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("critical value table: ") + e.what());
  }
}

CriticalValueTable CriticalValueTable::load(const std::filesystem::path& path) { return from_json(io::read_file(path)); }

void CriticalValueTable::save(const std::filesystem::path& path) const { io::write_file_atomic(path, to_json()); }

std::array<std::vector<double>, 4> null_raw_sample(std::size_t n, double hurst, std::size_t reps, std::uint64_t seed) {
  if (n < 2) throw DomainError("null sample requires n >= 2");
  const auto model = sim::GaussianModel::fgn(hurst);
  std::array<std::vector<double>, 4> out;
  for (auto& col : out) col.resize(reps);
  parallel_for(reps, [&](std::size_t j) {
    Rng rng(derive_seed(seed, {n, real_tag(hurst), j}));
    const auto x = sim::simulate_values(model, n, rng);
    const auto raw = stats::all_raw(x);
    for (std::size_t s = 0; s < 4; ++s) out[s][j] = raw[s];
  });
  for (auto& col : out) std::sort(col.begin(), col.end());
  return out;
}

std::vector<TableEntry> mc_critical_values(stats::StatisticKind kind, std::size_t n, double hurst,
                                           std::span<const double> alphas, std::size_t reps, std::uint64_t seed) {
  if (reps < 100) throw DomainError("Monte Carlo calibration requires J >= 100");
  const auto sample = null_raw_sample(n, hurst, reps, seed);
  const auto& col = sample[static_cast<std::size_t>(kind)];
  std::vector<TableEntry> out;
  for (double a : alphas) out.push_back({kind, n, hurst, a, reps, empirical_quantile(col, a)});
  return out;
}

double NullDistributionCache::grid_hurst(std::size_t index) noexcept {
  return static_cast<double>(50 + index) / 100.0;
}

std::pair<std::size_t, std::size_t> NullDistributionCache::bracket(double hurst) noexcept {
  const double pos = std::clamp((hurst - kGridLo) / kGridStep, 0.0, static_cast<double>(kGridPoints - 1));
  const auto lo = static_cast<std::size_t>(std::floor(pos + 1e-9));
  const std::size_t hi = std::min(kGridPoints - 1, pos - static_cast<double>(lo) > 1e-9 ? lo + 1 : lo);
  return {std::min(lo, kGridPoints - 1), hi};
}

const NullDistributionCache::Sample& NullDistributionCache::sample(std::size_t n, std::size_t index) {
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find({n, index});
    if (it != cache_.end()) return *it->second;
  }
  auto fresh = std::make_shared<const Sample>(null_raw_sample(n, grid_hurst(index), reps_, seed_));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.emplace(std::make_pair(n, index), std::move(fresh));
  return *it->second;
}

void NullDistributionCache::ensure(std::size_t n, std::size_t index) { (void)sample(n, index); }

double NullDistributionCache::critical(stats::StatisticKind kind, std::size_t n, double hurst, double alpha) {
  const auto [lo, hi] = bracket(hurst);
  const auto s = static_cast<std::size_t>(kind);
  const double q_lo = empirical_quantile(sample(n, lo)[s], alpha);
  if (lo == hi) return q_lo;
  const double q_hi = empirical_quantile(sample(n, hi)[s], alpha);
  const double w = std::clamp((hurst - grid_hurst(lo)) / kGridStep, 0.0, 1.0);
  return (1.0 - w) * q_lo + w * q_hi;
}

}  // namespace lrdcp::calibrate
