#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "finex/io.hpp"
#include "finex/neighbors.hpp"

namespace finex {

struct ServiceConfig {
  Backend backend = Backend::kBruteForce;
  bool with_baselines = false;
  std::string cors_origin = "*";
};

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Read-only JSON API over one index. Routes are answered with 503 until
/// load() has completed; afterwards the loaded state is never modified.
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Installs the dataset and index. The index must match the dataset.
  /// May be called once.
  void load(LoadedData data, FinexIndex index);
  bool loaded() const;

  /// Dispatches a GET request without going through the network.
  ServiceResponse get(const std::string& path, const std::multimap<std::string, std::string>& query) const;

  /// Binds to host:port (port 0 picks a free port) and returns the port.
  int bind(const std::string& host, int port);
  /// Serves requests until stop(). Requires bind().
  void run();
  void stop();
  /// Blocks until the listener accepts connections.
  void wait_until_ready() const;

 private:
  struct State;
  struct Http;

  std::shared_ptr<const State> state() const;

  ServiceConfig config_;
  mutable std::mutex mutex_;
  std::shared_ptr<const State> state_;
  std::unique_ptr<Http> http_;
};

}  // namespace finex
