#include "finex/cli.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "finex/baseline.hpp"
#include "finex/io.hpp"
#include "finex/queries.hpp"
#include "finex/service.hpp"

namespace finex {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct DataFlags {
  std::string input;
  std::string data;
  std::string metric;
  std::string backend;
  bool standardize = false;
  bool skip_header = false;

  void add_to(CLI::App& cmd, bool data_required) {
    cmd.add_option("--input", input, "dataset file")->required();
    auto* d = cmd.add_option("--data", data, "sets | vectors | matrix")->check(CLI::IsMember({"sets", "vectors", "matrix"}));
    if (data_required) d->required();
    cmd.add_option("--metric", metric, "jaccard | euclidean | matrix (default: implied by --data)")
        ->check(CLI::IsMember({"jaccard", "euclidean", "matrix"}));
    cmd.add_option("--backend", backend, "brute | inverted | kdtree | matrix (default: by metric)")
        ->check(CLI::IsMember({"brute", "inverted", "kdtree", "matrix"}));
    cmd.add_flag("--standardize", standardize, "scale vector dimensions to zero mean, unit variance");
    cmd.add_flag("--skip-header", skip_header, "ignore the first line of a vector file");
  }
};

MetricKind implied_metric(DataFormat f) {
  switch (f) {
    case DataFormat::kSets:
      return MetricKind::kJaccard;
    case DataFormat::kVectors:
      return MetricKind::kEuclidean;
    case DataFormat::kMatrix:
      return MetricKind::kExplicitMatrix;
  }
  return MetricKind::kEuclidean;
}

DataFormat implied_format(MetricKind m) {
  switch (m) {
    case MetricKind::kJaccard:
      return DataFormat::kSets;
    case MetricKind::kEuclidean:
      return DataFormat::kVectors;
    case MetricKind::kExplicitMatrix:
      return DataFormat::kMatrix;
  }
  return DataFormat::kVectors;
}

/// Resolves format and metric, either from flags or from a known metric.
std::pair<DataFormat, MetricKind> resolve(const DataFlags& f, std::optional<MetricKind> known) {
  std::optional<DataFormat> format;
  std::optional<MetricKind> metric = known;
  if (!f.data.empty()) format = data_format_from_string(f.data);
  if (!f.metric.empty()) {
    const auto m = metric_from_string(f.metric);
    if (metric && *metric != m) {
      throw UsageError("--metric " + f.metric + " does not match the index metric " + std::string(to_string(*metric)));
    }
    metric = m;
  }
  if (!format && !metric) throw UsageError("--data is required");
  if (!format) format = implied_format(*metric);
  if (!metric) metric = implied_metric(*format);
  if (implied_metric(*format) != *metric) {
    throw UsageError(std::string(to_string(*format)) + " data cannot be used with the " +
                     std::string(to_string(*metric)) + " metric");
  }
  if (f.standardize && *format != DataFormat::kVectors) throw UsageError("--standardize applies to vector data only");
  return {*format, *metric};
}

LoadedData load(const DataFlags& f, DataFormat format, MetricKind metric) {
  return load_dataset(f.input, format, metric, LoadOptions{f.standardize, f.skip_header});
}

Backend backend_for(const DataFlags& f, MetricKind metric) {
  return f.backend.empty() ? default_backend(metric) : backend_from_string(f.backend);
}

void check_generating(double epsilon, std::int64_t min_pts) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw UsageError("--epsilon must be a finite value >= 0");
  if (min_pts < 1) throw UsageError("--minpts must be at least 1");
}

std::string pair_text(const GeneratingParams& p) {
  std::ostringstream s;
  s << "(epsilon=" << p.epsilon << ", minpts=" << p.min_pts << ")";
  return s.str();
}

FingerprintCheck fingerprint_mode(const std::string& mode) {
  return mode == "warn" ? FingerprintCheck::kWarn : FingerprintCheck::kStrict;
}

std::size_t noise_records(const Labeling& labels, const std::vector<ObjectId>& record_to_object) {
  std::size_t count = 0;
  for (ObjectId o : record_to_object) count += labels.cluster[o] == kNoise ? 1 : 0;
  return count;
}

struct Cli {
  Cli(std::ostream& o, std::ostream& e) : out(o), err(e) {}

  std::ostream& out;
  std::ostream& err;

  DataFlags build_data;
  double build_eps = -1.0;
  std::int64_t build_minpts = 0;
  std::string build_out;
  std::optional<std::uint64_t> build_seed;

  DataFlags query_data;
  std::string query_index;
  std::optional<double> query_eps_star;
  std::optional<std::uint64_t> query_minpts_star;
  bool query_approx = false;
  std::string query_out;
  std::string query_fp = "strict";

  DataFlags compare_data;
  double compare_eps = -1.0;
  std::int64_t compare_minpts = 0;
  std::vector<double> compare_stars;
  std::optional<std::uint64_t> compare_seed;

  DataFlags serve_data;
  std::string serve_index;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  bool serve_baselines = false;
  std::string serve_cors = "*";
  std::string serve_fp = "strict";

  bool as_json = false;

  int build() {
    check_generating(build_eps, build_minpts);
    const auto [format, metric] = resolve(build_data, std::nullopt);
    const GeneratingParams params{build_eps, static_cast<std::uint64_t>(build_minpts)};
    const auto loaded = load(build_data, format, metric);
    const auto start = Clock::now();
    // Set data: all neighborhoods are computed up front; vectors query on demand.
    auto provider = build_provider(loaded.data, params.epsilon, backend_for(build_data, metric));
    if (metric == MetricKind::kJaccard) provider = materialize(std::move(provider));
    BuildStats stats;
    const auto index = finex_build(*provider, params, BuildOptions{build_seed}, &stats);
    const double ms = millis_since(start);
    const auto distances = stats.distance_computations + provider->setup_distance_computations();
    save_index(build_out, index);

    const double dedup = static_cast<double>(loaded.record_count()) / static_cast<double>(index.size());
    if (as_json) {
      out << json{{"records", loaded.record_count()},
                  {"n", index.size()},
                  {"dedup_ratio", dedup},
                  {"core_count", index.core_count()},
                  {"range_queries", stats.range_queries},
                  {"distance_computations", distances},
                  {"max_reinsertions", stats.max_reinsertions()},
                  {"build_millis", ms},
                  {"fingerprint", to_hex(index.fingerprint())},
                  {"index", build_out}}
                 .dump()
          << "\n";
    } else {
      out << "records             " << loaded.record_count() << "\n"
          << "objects             " << index.size() << "\n"
          << "dedup ratio         " << std::fixed << std::setprecision(3) << dedup << "\n"
          << "core objects        " << index.core_count() << "\n"
          << "range queries       " << stats.range_queries << "\n"
          << "distance comps      " << distances << "\n"
          << "max reinsertions    " << stats.max_reinsertions() << "\n"
          << "build time (ms)     " << std::setprecision(1) << ms << "\n"
          << "index written to    " << build_out << "\n";
    }
    return kExitOk;
  }

  int query() {
    if (query_eps_star.has_value() == query_minpts_star.has_value()) {
      throw UsageError("exactly one of --epsilon-star and --minpts-star is required");
    }
    if (query_approx && !query_eps_star) throw UsageError("--approx applies to --epsilon-star only");
    auto index = load_index(query_index);
    const auto [format, metric] = resolve(query_data, index.metric());
    const auto loaded = load(query_data, format, metric);
    index = load_index(query_index, &loaded.data, fingerprint_mode(query_fp), &err);
    const auto& params = index.params();

    if (query_eps_star && !(*query_eps_star >= 0.0 && *query_eps_star <= params.epsilon)) {
      throw ContractViolation("--epsilon-star " + std::to_string(*query_eps_star) +
                              " must lie in [0, epsilon] for the index generating pair " + pair_text(params));
    }
    if (query_minpts_star && *query_minpts_star < params.min_pts) {
      throw ContractViolation("--minpts-star " + std::to_string(*query_minpts_star) +
                              " must be at least minpts of the index generating pair " + pair_text(params));
    }

    const auto provider = build_provider(loaded.data, params.epsilon, backend_for(query_data, metric));
    QueryStats stats;
    const auto start = Clock::now();
    Labeling labels;
    std::string mode;
    if (query_eps_star && query_approx) {
      labels = query_clustering(index.ordering(), *query_eps_star).labeling;
      mode = "approx";
    } else if (query_eps_star) {
      labels = epsilon_star_query(index, *provider, *query_eps_star, &stats);
      mode = "exact";
    } else {
      labels = minpts_star_query(index, *provider, *query_minpts_star, &stats);
      mode = "minpts";
    }
    const double ms = millis_since(start);
    write_labeling(query_out, labels, loaded.record_to_object);

    const auto noise = noise_records(labels, loaded.record_to_object);
    const double noise_pct = 100.0 * static_cast<double>(noise) / static_cast<double>(loaded.record_count());
    if (as_json) {
      json j{{"mode", mode},
             {"clusters", labels.num_clusters},
             {"noise_records", noise},
             {"noise_percent", noise_pct},
             {"candidates", stats.candidates},
             {"candidates_added", stats.candidates_added},
             {"distance_computations", stats.distance_computations},
             {"range_queries", stats.range_queries},
             {"millis", ms},
             {"labels", query_out}};
      if (query_eps_star) j["epsilon_star"] = *query_eps_star;
      if (query_minpts_star) j["minpts_star"] = *query_minpts_star;
      out << j.dump() << "\n";
    } else {
      out << "mode                " << mode << "\n"
          << "clusters            " << labels.num_clusters << "\n"
          << "noise               " << noise << " (" << std::fixed << std::setprecision(2) << noise_pct << "%)\n"
          << "candidates verified " << stats.candidates_added << "/" << stats.candidates << "\n"
          << "distance comps      " << stats.distance_computations << "\n"
          << "range queries       " << stats.range_queries << "\n"
          << "wall time (ms)      " << std::setprecision(3) << ms << "\n"
          << "labels written to   " << query_out << "\n";
    }
    return kExitOk;
  }

  int compare() {
    check_generating(compare_eps, compare_minpts);
    const auto [format, metric] = resolve(compare_data, std::nullopt);
    const GeneratingParams params{compare_eps, static_cast<std::uint64_t>(compare_minpts)};
    for (double s : compare_stars) {
      if (!(s >= 0.0 && s <= params.epsilon)) {
        throw ContractViolation("epsilon* " + std::to_string(s) + " must lie in [0, epsilon] for generating pair " +
                                pair_text(params));
      }
    }
    const auto loaded = load(compare_data, format, metric);
    const auto provider = build_provider(loaded.data, params.epsilon, backend_for(compare_data, metric));
    const BuildOptions options{compare_seed};
    const auto index = finex_build(*provider, params, options);
    const auto optics = optics_build(*provider, params, options);

    json rows = json::array();
    for (double s : compare_stars) {
      std::uint64_t dbscan_distances = 0;
      const auto exact = dbscan_exact(*provider, s, params.min_pts, options, &dbscan_distances);
      QueryStats stats;
      const auto answer = epsilon_star_query(index, *provider, s, &stats);
      std::string why;
      const bool exact_ok = exact_equivalent(answer, exact, *provider, s, &why);
      rows.push_back({{"epsilon_star", s},
                      {"finex_recall", border_recall(query_clustering(index.ordering(), s).labeling, exact)},
                      {"optics_recall", border_recall(query_clustering(optics, s).labeling, exact)},
                      {"exact_clusters", exact.num_clusters},
                      {"query_exact", exact_ok},
                      {"query_distance_computations", stats.distance_computations},
                      {"dbscan_distance_computations", dbscan_distances}});
      if (!exact_ok) err << "epsilon*=" << s << ": query result differs from DBSCAN: " << why << "\n";
    }
    bool all_exact = true;
    for (const auto& r : rows) all_exact = all_exact && r["query_exact"].get<bool>();

    if (as_json) {
      out << json{{"epsilon", params.epsilon}, {"min_pts", params.min_pts}, {"rows", rows}}.dump() << "\n";
    } else {
      out << "eps*        finex   optics  clusters  exact  query-dist  dbscan-dist\n";
      for (const auto& r : rows) {
        out << std::left << std::setw(10) << r["epsilon_star"].get<double>() << std::right << std::fixed
            << std::setprecision(3) << std::setw(7) << r["finex_recall"].get<double>() << std::setw(9)
            << r["optics_recall"].get<double>() << std::setw(10) << r["exact_clusters"].get<std::int64_t>()
            << std::setw(7) << (r["query_exact"].get<bool>() ? "yes" : "NO") << std::setw(12)
            << r["query_distance_computations"].get<std::uint64_t>() << std::setw(13)
            << r["dbscan_distance_computations"].get<std::uint64_t>() << "\n";
        out.unsetf(std::ios::fixed);
        out << std::setprecision(6);
      }
    }
    return all_exact ? kExitOk : kExitData;
  }

  int serve() {
    auto index = load_index(serve_index);
    const auto [format, metric] = resolve(serve_data, index.metric());
    Service service(ServiceConfig{backend_for(serve_data, metric), serve_baselines, serve_cors});
    const int port = service.bind(serve_host, serve_port);
    std::thread listener([&service] { service.run(); });
    out << "listening on http://" << serve_host << ":" << port << std::endl;
    try {
      auto loaded = load(serve_data, format, metric);
      index = load_index(serve_index, &loaded.data, fingerprint_mode(serve_fp), &err);
      service.load(std::move(loaded), std::move(index));
      out << "index loaded" << std::endl;
    } catch (...) {
      service.stop();
      listener.join();
      throw;
    }
    listener.join();
    return kExitOk;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  CLI::App app{"Density-based clustering index: build once, query any epsilon* <= epsilon or minpts* >= minpts"};
  app.name("finex");
  app.require_subcommand(1);
  app.add_flag("--json", cli.as_json, "print a machine-readable summary");

  auto* build = app.add_subcommand("build", "build an index");
  cli.build_data.add_to(*build, true);
  build->add_option("--epsilon", cli.build_eps, "generating radius")->required();
  build->add_option("--minpts", cli.build_minpts, "generating density threshold")->required();
  build->add_option("--out", cli.build_out, "index file to write")->required();
  build->add_option("--seed", cli.build_seed, "shuffle the outer loop with this seed");
  build->add_flag("--json", cli.as_json, "print a machine-readable summary");

  auto* query = app.add_subcommand("query", "cluster with a new parameter");
  cli.query_data.add_to(*query, false);
  query->add_option("--index", cli.query_index, "index file")->required();
  query->add_option("--epsilon-star", cli.query_eps_star, "radius, at most the index epsilon");
  query->add_option("--minpts-star", cli.query_minpts_star, "density threshold, at least the index minpts");
  query->add_flag("--approx", cli.query_approx, "linear scan only (epsilon* queries)");
  query->add_option("--out", cli.query_out, "labeling CSV to write")->required();
  query->add_option("--fingerprint-check", cli.query_fp, "strict | warn")->check(CLI::IsMember({"strict", "warn"}));
  query->add_flag("--json", cli.as_json, "print a machine-readable summary");

  auto* compare = app.add_subcommand("compare", "border recall of the linear scan against DBSCAN");
  cli.compare_data.add_to(*compare, true);
  compare->add_option("--epsilon", cli.compare_eps, "generating radius")->required();
  compare->add_option("--minpts", cli.compare_minpts, "generating density threshold")->required();
  compare->add_option("--epsilon-stars", cli.compare_stars, "comma-separated radii")->required()->delimiter(',');
  compare->add_option("--seed", cli.compare_seed, "shuffle the outer loop with this seed");
  compare->add_flag("--json", cli.as_json, "print a machine-readable summary");

  auto* serve = app.add_subcommand("serve", "serve one index over HTTP");
  cli.serve_data.add_to(*serve, false);
  serve->add_option("--index", cli.serve_index, "index file")->required();
  serve->add_option("--host", cli.serve_host, "bind address");
  serve->add_option("--port", cli.serve_port, "TCP port, 0 picks a free one");
  serve->add_flag("--with-baselines", cli.serve_baselines, "enable /api/compare");
  serve->add_option("--cors-origin", cli.serve_cors, "Access-Control-Allow-Origin value");
  serve->add_option("--fingerprint-check", cli.serve_fp, "strict | warn")->check(CLI::IsMember({"strict", "warn"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (build->parsed()) return cli.build();
    if (query->parsed()) return cli.query();
    if (compare->parsed()) return cli.compare();
    return cli.serve();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "rejected: " << e.what() << "\n";
    return kExitContract;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return run_cli(static_cast<int>(args.size()), argv.data(), out, err);
}

}  // namespace finex
