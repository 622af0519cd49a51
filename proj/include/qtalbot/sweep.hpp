#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qtalbot {

// Calls work(i) for i in [0, count) on up to `parallelism` threads. Each
// index runs exactly once; exceptions are captured per index.
std::vector<std::exception_ptr> run_indexed(std::size_t count, std::size_t parallelism,
                                            const std::function<void(std::size_t)>& work);

template <class T>
struct Outcome {
  std::optional<T> value;
  std::string error;

  bool ok() const { return value.has_value(); }
};

// Results ordered by point index regardless of completion order.
template <class T>
std::vector<Outcome<T>> sweep(std::size_t count, std::size_t parallelism,
                              const std::function<T(std::size_t)>& work) {
  std::vector<Outcome<T>> out(count);
  const auto errors = run_indexed(count, parallelism, [&](std::size_t i) { out[i].value = work(i); });
  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    } catch (...) {
      out[i].error = "unknown failure";
    }
  }
  return out;
}

}  // namespace qtalbot
