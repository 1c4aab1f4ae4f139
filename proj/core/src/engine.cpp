#include "ecc/engine.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>

#include "ecc/energy.hpp"
#include "ecc/examine.hpp"

namespace ecc {

namespace {

struct Item {
  Chain chain;
  double prob;
};

using Clock = std::chrono::steady_clock;

class Worklist {
 public:
  Worklist(const DerivedModel& model, const RunOptions& options)
      : model_(model), options_(options), start_(Clock::now()), last_report_(start_) {}

  void seed(std::vector<Item> items) { stack_ = std::move(items); }

  void run(int workers) {
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int k = 0; k < workers; ++k) pool.emplace_back([this] { work(); });
      for (auto& t : pool) t.join();
    }
    if (error_) std::rethrow_exception(error_);
  }

  EccResult take_result() {
    std::sort(result_.chains.begin(), result_.chains.end(),
              [](const FinalChain& a, const FinalChain& b) { return chain_less(a.chain, b.chain); });
    result_.wall_time_s = std::chrono::duration<double>(Clock::now() - start_).count();
    return std::move(result_);
  }

 private:
  void work() {
    const double theta = model_.theta();
    std::vector<Item> children;
    std::vector<FinalChain> finals;
    std::unique_lock lock(mutex_);
    for (;;) {
      cv_.wait(lock, [&] { return stop_ || !stack_.empty() || active_ == 0; });
      if (stop_ || stack_.empty()) break;
      if (result_.examined >= model_.config.max_chains) {
        result_.budget_exceeded = true;
        stop_ = true;
        cv_.notify_all();
        break;
      }
      Item item = std::move(stack_.back());
      stack_.pop_back();
      ++active_;
      ++result_.examined;
      lock.unlock();

      children.clear();
      finals.clear();
      Examination ex;
      try {
        ex = examine(model_, item.chain);
        if (ex.no_txs > 0.0 && item.prob * ex.no_txs >= theta) {
          finals.push_back({item.chain, item.prob * ex.no_txs,
                            chain_energy(model_, item.chain, ex.busy_ccas)});
        }
        if (ex.no_txs != 1.0) {
          for (const auto& e : ex.next) {
            const double p = item.prob * e.prob;
            if (e.prob > 0.0 && p >= theta) children.push_back({item.chain.extend(e.event, e.transmitters), p});
          }
        }
      } catch (...) {
        lock.lock();
        if (!error_) error_ = std::current_exception();
        stop_ = true;
        --active_;
        cv_.notify_all();
        break;
      }

      lock.lock();
      --active_;
      result_.max_conservation_error = std::max(result_.max_conservation_error, ex.conservation_error);
      result_.max_residual_error = std::max(result_.max_residual_error, ex.residual_error);
      if (ex.leaked > 0.0) ++result_.leaked_chains;
      for (auto& f : finals) result_.chains.push_back(std::move(f));
      // Reverse so that the earliest next event is expanded first.
      for (auto it = children.rbegin(); it != children.rend(); ++it) stack_.push_back(std::move(*it));
      report_progress();
      if (!children.empty() || (stack_.empty() && active_ == 0)) cv_.notify_all();
    }
  }

  void report_progress() {
    if (!options_.progress) return;
    const auto now = Clock::now();
    if (now - last_report_ < options_.progress_interval) return;
    last_report_ = now;
    options_.progress({result_.examined, result_.chains.size(), stack_.size(),
                       std::chrono::duration<double>(now - start_).count()});
  }

  const DerivedModel& model_;
  const RunOptions& options_;
  Clock::time_point start_;
  Clock::time_point last_report_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<Item> stack_;
  int active_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
  EccResult result_;
};

}  // namespace

EccResult run_ecc(const DerivedModel& model, const RunOptions& options) {
  std::vector<Item> seeds;
  const auto initial = initial_events(model);
  for (auto it = initial.rbegin(); it != initial.rend(); ++it) {
    if (it->prob > 0.0 && it->prob >= model.theta()) {
      seeds.push_back({Chain{}.extend(it->event, it->transmitters), it->prob});
    }
  }
  Worklist list(model, options);
  list.seed(std::move(seeds));
  list.run(model.config.workers);
  return list.take_result();
}

}  // namespace ecc
