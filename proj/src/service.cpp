#include "finex/service.hpp"

#include <charconv>
#include <chrono>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "finex/baseline.hpp"
#include "finex/extract.hpp"
#include "finex/queries.hpp"

namespace finex {

using nlohmann::json;

struct Service::State {
  State(LoadedData d, FinexIndex i) : data(std::move(d)), index(std::move(i)) {}

  LoadedData data;
  FinexIndex index;
  std::unique_ptr<NeighborProvider> provider;
  std::optional<ClusterOrdering> optics;
  std::string meta;
  std::string reachability;
};

struct Service::Http {
  httplib::Server server;
};

namespace {

json finite_or_null(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

ServiceResponse error(int status, const std::string& message) { return {status, json{{"error", message}}.dump()}; }

std::optional<std::string> param(const std::multimap<std::string, std::string>& query, const std::string& name) {
  const auto it = query.find(name);
  if (it == query.end()) return std::nullopt;
  return it->second;
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::string generating_pair(const GeneratingParams& p) {
  return json{{"epsilon", p.epsilon}, {"min_pts", p.min_pts}}.dump();
}

json labeling_json(const Labeling& labels, const QueryStats& stats) {
  return json{{"labels", labels.cluster},
              {"core", labels.core},
              {"num_clusters", labels.num_clusters},
              {"noise_count", labels.noise_count()},
              {"stats",
               {{"distance_computations", stats.distance_computations},
                {"candidates", stats.candidates},
                {"millis", stats.millis}}}};
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)), http_(std::make_unique<Http>()) {
  auto& srv = http_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", config_.cors_origin},
                           {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.Get(R"(/api/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
    const auto out = get(req.path, query);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  });
}

Service::~Service() { stop(); }

std::shared_ptr<const Service::State> Service::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

bool Service::loaded() const { return state() != nullptr; }

void Service::load(LoadedData data, FinexIndex index) {
  if (loaded()) throw std::logic_error("service already holds an index");
  index.check_dataset(data.data);
  auto st = std::make_shared<State>(std::move(data), std::move(index));
  const auto& params = st->index.params();
  st->provider = build_provider(st->data.data, params.epsilon, config_.backend);
  if (config_.with_baselines) st->optics = optics_build(*st->provider, params);

  st->meta = json{{"n", st->index.size()},
                  {"records", st->data.record_count()},
                  {"epsilon", params.epsilon},
                  {"min_pts", params.min_pts},
                  {"metric", std::string(to_string(st->index.metric()))},
                  {"fingerprint", to_hex(st->index.fingerprint())},
                  {"core_count", st->index.core_count()},
                  {"baselines", config_.with_baselines}}
                 .dump();
  json rows = json::array();
  for (const auto& e : st->index.ordering().entries()) {
    rows.push_back({{"pos", e.position},
                    {"object_id", e.object},
                    {"r", finite_or_null(e.reach)},
                    {"c", finite_or_null(e.core)},
                    {"n", e.hood_size},
                    {"f", e.finder}});
  }
  st->reachability = rows.dump();

  std::lock_guard lock(mutex_);
  state_ = std::move(st);
}

ServiceResponse Service::get(const std::string& path, const std::multimap<std::string, std::string>& query) const {
  const auto st = state();
  if (!st) return error(503, "index is not loaded yet");
  const auto& params = st->index.params();

  if (path == "/api/meta") return {200, st->meta};
  if (path == "/api/reachability") return {200, st->reachability};

  if (path == "/api/clustering") {
    const auto eps_text = param(query, "epsilon_star");
    const auto minpts_text = param(query, "minpts_star");
    if (eps_text && minpts_text) return error(400, "give either epsilon_star or minpts_star, not both");
    if (!eps_text && !minpts_text) return error(400, "epsilon_star or minpts_star is required");
    try {
      QueryStats stats;
      if (eps_text) {
        const auto eps_star = parse_number<double>(*eps_text);
        if (!eps_star) return error(400, "epsilon_star is not a number");
        const auto mode = param(query, "mode").value_or("exact");
        if (mode != "exact" && mode != "approx") return error(400, "mode must be exact or approx");
        if (!(*eps_star >= 0.0) || *eps_star > params.epsilon) {
          return error(400, "epsilon_star must lie in [0, epsilon] for generating pair " + generating_pair(params));
        }
        if (mode == "approx") {
          const auto start = std::chrono::steady_clock::now();
          auto scan = query_clustering(st->index.ordering(), *eps_star);
          stats.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
          return {200, labeling_json(scan.labeling, stats).dump()};
        }
        return {200, labeling_json(epsilon_star_query(st->index, *st->provider, *eps_star, &stats), stats).dump()};
      }
      const auto m_star = parse_number<std::uint64_t>(*minpts_text);
      if (!m_star) return error(400, "minpts_star is not a non-negative integer");
      if (*m_star < params.min_pts) {
        return error(400, "minpts_star must be at least min_pts for generating pair " + generating_pair(params));
      }
      return {200, labeling_json(minpts_star_query(st->index, *st->provider, *m_star, &stats), stats).dump()};
    } catch (const ContractViolation& e) {
      return error(400, e.what());
    }
  }

  if (path == "/api/compare") {
    if (!st->optics) return error(409, "server was started without baselines");
    const auto eps_text = param(query, "epsilon_star");
    if (!eps_text) return error(400, "epsilon_star is required");
    const auto eps_star = parse_number<double>(*eps_text);
    if (!eps_star) return error(400, "epsilon_star is not a number");
    if (!(*eps_star >= 0.0) || *eps_star > params.epsilon) {
      return error(400, "epsilon_star must lie in [0, epsilon] for generating pair " + generating_pair(params));
    }
    const auto exact = dbscan_exact(*st->provider, *eps_star, params.min_pts);
    const auto finex = query_clustering(st->index.ordering(), *eps_star).labeling;
    const auto optics = query_clustering(*st->optics, *eps_star).labeling;
    return {200, json{{"finex_recall", border_recall(finex, exact)},
                      {"optics_recall", border_recall(optics, exact)},
                      {"exact_cluster_count", exact.num_clusters}}
                     .dump()};
  }
  return error(404, "unknown endpoint " + path);
}

int Service::bind(const std::string& host, int port) {
  auto& srv = http_->server;
  if (port == 0) {
    const int bound = srv.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!srv.bind_to_port(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void Service::run() { http_->server.listen_after_bind(); }

void Service::stop() {
  if (http_) http_->server.stop();
}

void Service::wait_until_ready() const { http_->server.wait_until_ready(); }

}  // namespace finex
