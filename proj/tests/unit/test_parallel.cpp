#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "check_error.hpp"
#include "romanlens/lens.hpp"
#include "romanlens/parallel.hpp"
#include "test_support.hpp"

using namespace romanlens;
using namespace romanlens::testing;

namespace {

// Sets ROMANLENS_THREADS for one scope.
class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) {
    if (const char* old = std::getenv("ROMANLENS_THREADS")) saved_ = old;
    ::setenv("ROMANLENS_THREADS", value, 1);
  }
  ~ThreadsEnv() {
    if (saved_.empty()) {
      ::unsetenv("ROMANLENS_THREADS");
    } else {
      ::setenv("ROMANLENS_THREADS", saved_.c_str(), 1);
    }
  }

 private:
  std::string saved_;
};

}  // namespace

TEST_CASE("worker count follows the environment") {
  {
    ThreadsEnv env("3");
    CHECK(worker_count() == 3);
  }
  {
    ThreadsEnv env("zero");
    CHECK(worker_count() >= 1);
  }
  {
    ThreadsEnv env("-2");
    CHECK(worker_count() >= 1);
  }
}

TEST_CASE("every index runs exactly once") {
  for (const char* threads : {"1", "4", "16"}) {
    ThreadsEnv env(threads);
    for (std::size_t n : {0, 1, 7, 1000}) {
      std::vector<std::atomic<int>> hits(n);
      parallel_for(n, [&](std::size_t i) { hits[i]++; });
      for (const auto& h : hits) CHECK(h.load() == 1);
    }
  }
}

TEST_CASE("worker exceptions reach the caller") {
  ThreadsEnv env("4");
  CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                    if (i == 37) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  CHECK_ERROR_KIND(parallel_for(10, [](std::size_t) { fail(ErrorKind::Data, "bad record"); }),
                   ErrorKind::Data);
}

TEST_CASE("lens grids do not depend on the thread count") {
  const auto ckpt = Checkpoint::random(tiny_config(3, 32, 64), 90);
  std::mt19937_64 rng(91);
  const auto tokens = random_tokens(rng, 12, 64);
  const auto trace = forward(tokens, ckpt);
  LensGrid serial, threaded;
  {
    ThreadsEnv env("1");
    serial = logit_lens(trace, ckpt);
  }
  {
    ThreadsEnv env("8");
    threaded = logit_lens(trace, ckpt);
  }
  CHECK(serial.probs == threaded.probs);
  CHECK(serial.entropies == threaded.entropies);
  CHECK(serial.argmax_tokens == threaded.argmax_tokens);
}
