#include "slnt/app/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "slnt/app/report.hpp"

namespace slnt::app {

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::Config, "grid axis '" + text + "' must have the form key=v1,v2,...");
  }
  SweepAxis axis;
  axis.key = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    std::string item = rest.substr(pos, comma - pos);
    const char* first = item.data();
    const char* last = item.data() + item.size();
    if (!item.empty() && *first == '+') ++first;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (item.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw Error(ErrorCode::Config, "grid axis " + axis.key + ": '" + item + "' is not a number");
    }
    axis.values.push_back(v);
    pos = comma + 1;
  }
  return axis;
}

std::vector<RunConfig> expand_grid(const RunConfig& base, const std::vector<SweepAxis>& axes) {
  if (axes.empty()) return {};
  std::size_t total = 1;
  for (const auto& a : axes) {
    if (a.values.empty()) return {};
    total *= a.values.size();
    if (total > kMaxSweepCases) {
      throw Error(ErrorCode::Config, "sweep grid exceeds " + std::to_string(kMaxSweepCases) + " cases");
    }
  }
  for (const auto& a : axes) {
    if (a.key == "n" || a.key == "l" || a.key == "N") {
      for (double v : a.values) {
        if (v != std::floor(v)) throw Error(ErrorCode::Config, "grid axis " + a.key + " needs integers");
      }
    }
  }
  std::vector<RunConfig> cases;
  cases.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t c = 0; c < total; ++c) {
    RunConfig cfg = base;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const double v = axes[i].values[idx[i]];
      if (axes[i].key == "n") {
        cfg.n = static_cast<int>(v);
      } else if (axes[i].key == "l") {
        cfg.ell = static_cast<int>(v);
      } else if (axes[i].key == "N") {
        cfg.dim = static_cast<int>(v);
      } else {
        cfg.params[axes[i].key] = v;
      }
    }
    cases.push_back(std::move(cfg));
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++idx[i] < axes[i].values.size()) break;
      idx[i] = 0;
    }
  }
  return cases;
}

void run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, std::ostream& out, unsigned threads) {
  const std::vector<RunConfig> cases = expand_grid(base, axes);

  CsvLayout layout;
  std::set<std::string> names;
  for (const auto& [k, _] : base.params) names.insert(k);
  for (const auto& a : axes) {
    if (a.key != "n" && a.key != "l" && a.key != "N") names.insert(a.key);
  }
  layout.param_names.assign(names.begin(), names.end());
  layout.order = base.order;
  layout.oracle = base.oracle.enabled;
  out << layout.header();
  out.flush();
  if (cases.empty()) return;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cases.size()));

  std::vector<std::optional<std::string>> rows(cases.size());
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      std::string row;
      try {
        const CaseReport rep = run_case(cases[i]);
        row = layout.row(cases[i], &rep, "");
      } catch (const Error& e) {
        row = layout.row(cases[i], nullptr, std::string(code_name(e.code())) + ": " + e.what());
      } catch (const std::exception& e) {
        row = layout.row(cases[i], nullptr, std::string("INTERNAL: ") + e.what());
      }
      {
        std::lock_guard lock(mu);
        rows[i] = std::move(row);
      }
      ready.notify_all();
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

  for (std::size_t i = 0; i < cases.size(); ++i) {
    std::string row;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return rows[i].has_value(); });
      row = std::move(*rows[i]);
      rows[i].reset();
    }
    out << row;
    out.flush();
  }
}

}  // namespace slnt::app
