// prototree: cluster dissimilarities, cut trees, and serve the browser API.
//
// Exit codes: 0 success, 2 usage or validation error, 1 internal error.
// Every flag can also be set through PROTOTREE_<FLAG> (e.g. PROTOTREE_TREE,
// PROTOTREE_MIN_SIZE).

#include <CLI11.hpp>
#include <json.hpp>

#include <pthread.h>
#include <signal.h>
#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <thread>

#include "prototree/agglomerate.hpp"
#include "prototree/digest.hpp"
#include "prototree/error.hpp"
#include "prototree/features.hpp"
#include "prototree/http_server.hpp"
#include "prototree/labels.hpp"
#include "prototree/matrix_io.hpp"
#include "prototree/service.hpp"
#include "prototree/tree_io.hpp"
#include "prototree/tree_model.hpp"

namespace {

using namespace prototree;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClusterArgs {
  fs::path input;
  std::string format;
  std::string metric;
  bool scale = false;
  std::string linkage;
  fs::path output;
};

struct CutArgs {
  fs::path tree;
  std::optional<double> height;
  std::optional<std::size_t> k;
  bool dynamic = false;
  std::optional<std::size_t> min_size;
  fs::path output;
};

struct HclustArgs {
  fs::path tree;
  fs::path output;
};

struct ServeArgs {
  fs::path tree;
  std::vector<fs::path> labels;
  fs::path assets;
  fs::path state;
  fs::path ui;
  std::string host = "127.0.0.1";
  int port = 8080;
};

long peak_rss_kib() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

std::string detect_format(const std::string& bytes) {
  return bytes.starts_with("PDM1") ? "binary" : "csv";
}

int run_cluster(const ClusterArgs& args) {
  const std::string input_bytes = read_file(args.input);
  const std::string format = args.format.empty() ? detect_format(input_bytes) : args.format;
  if (format == "features" && args.metric.empty()) throw UsageError("--format features requires --metric");
  if (format != "features" && (!args.metric.empty() || args.scale)) {
    throw UsageError("--metric and --scale apply only to --format features");
  }
  const Linkage linkage = parse_linkage(args.linkage);

  const auto start = std::chrono::steady_clock::now();
  std::optional<DissimilarityMatrix> d;
  if (format == "csv") {
    d = parse_dissimilarity_csv(input_bytes);
  } else if (format == "binary") {
    d = parse_dissimilarity_binary(input_bytes);
  } else {
    FeatureLoad load = parse_features_csv(input_bytes);
    for (const auto& row : load.rejected_rows) std::cerr << "warning: dropped incomplete row '" << row << "'\n";
    FeatureMatrix features = std::move(load.features);
    if (args.scale) {
      ScaledFeatures scaled = center_scale(features);
      for (const auto& col : scaled.dropped_columns) std::cerr << "warning: dropped constant column '" << col << "'\n";
      features = std::move(scaled.features);
    }
    d = args.metric == "corr" ? correlation_dissimilarity(features) : euclidean_dissimilarity(features);
  }
  const auto ingested = std::chrono::steady_clock::now();
  const Dendrogram dend = agglomerate(*d, linkage);
  const auto clustered = std::chrono::steady_clock::now();
  save_tree(dend, args.output);

  using seconds = std::chrono::duration<double>;
  nlohmann::ordered_json manifest{
      {"tool", "prototree"},
      {"version", PROTOTREE_VERSION},
      {"input", {{"path", fs::absolute(args.input).string()}, {"format", format},
                 {"sha256", sha256_hex(input_bytes)}, {"n", d->size()}}},
      {"metric", args.metric.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(args.metric)},
      {"scale", args.scale},
      {"linkage", to_string(linkage)},
      {"output", {{"path", fs::absolute(args.output).string()}, {"digest", tree_digest(dend)}}},
      {"timing_seconds", {{"ingest", seconds(ingested - start).count()},
                          {"agglomerate", seconds(clustered - ingested).count()}}},
      {"peak_rss_kib", peak_rss_kib()}};
  write_file(args.output.string() + ".manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << args.output.string() << " (" << d->size() << " leaves)\n";
  return kExitOk;
}

int run_cut(const CutArgs& args) {
  const int modes = args.height.has_value() + args.k.has_value() + args.dynamic;
  if (modes != 1) throw UsageError("choose exactly one of --height, --k, --dynamic");
  if (args.min_size && !args.dynamic) throw UsageError("--min-size applies only to --dynamic");
  if (args.dynamic && !args.min_size) throw UsageError("--dynamic requires --min-size");
  const Dendrogram dend = load_tree(args.tree);
  Clustering clustering;
  if (args.height) {
    clustering = cut_at_height(dend, *args.height);
  } else if (args.k) {
    clustering = cut_top_k(dend, *args.k);
  } else {
    clustering = dynamic_cut(dend, *args.min_size);
  }
  write_file(args.output, cluster_table_csv(dend, clustering));
  std::cout << "wrote " << args.output.string() << " (" << clustering.cluster_nodes.size() << " clusters)\n";
  return kExitOk;
}

int run_hclust(const HclustArgs& args) {
  write_file(args.output, hclust_table_csv(load_tree(args.tree)));
  return kExitOk;
}

int run_serve(const ServeArgs& args) {
  Dendrogram dend = load_tree(args.tree);
  std::vector<LabelSet> sets;
  HttpServer::Options options;
  if (!args.assets.empty()) options.asset_dirs.push_back(args.assets);
  for (const auto& path : args.labels) {
    LabelSet set = load_label_manifest(path);
    if (const auto missing = missing_leaves(set, dend); !missing.empty()) {
      bind_labels(set, dend);  // throws with the full list
    }
    if (set.kind == LabelKind::image) {
      const fs::path root = set.assets_root ? fs::path(*set.assets_root) : args.assets;
      if (root.empty()) throw ValidationError("image label set '" + set.id + "' needs --assets or assets_root");
      if (const auto missing = missing_images(set, root); !missing.empty()) {
        throw ValidationError("label set '" + set.id + "' has " + std::to_string(missing.size()) +
                              " missing images under " + root.string() + ", first: " + missing.front());
      }
      if (root != args.assets) options.asset_dirs.push_back(root);
    }
    sets.push_back(std::move(set));
  }
  options.ui_dir = args.ui;

  TreeService service(args.state);
  service.load(std::move(dend), std::move(sets));
  HttpServer server(service, options);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = server.bind(args.host, args.port);
  if (port < 0) throw ValidationError("cannot bind " + args.host + ":" + std::to_string(args.port));
  std::thread([&server, signals] {
    int received = 0;
    sigwait(&signals, &received);
    server.stop();
  }).detach();
  std::cout << "serving http://" << args.host << ":" << port << "/" << std::endl;
  server.listen();
  std::cout << "stopped" << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax-linkage hierarchical clustering with prototype-labelled dendrograms"};
  app.set_version_flag("--version", PROTOTREE_VERSION);
  app.require_subcommand(1);

  ClusterArgs cluster;
  auto* cmd_cluster = app.add_subcommand("cluster", "Cluster a dissimilarity matrix or feature table");
  cmd_cluster->add_option("--input", cluster.input, "Input file")->required()->envname("PROTOTREE_INPUT");
  cmd_cluster->add_option("--format", cluster.format, "csv | binary | features (default: detect csv/binary)")
      ->check(CLI::IsMember({"csv", "binary", "features"}))
      ->envname("PROTOTREE_FORMAT");
  cmd_cluster->add_option("--metric", cluster.metric, "corr | euclid, for features")
      ->check(CLI::IsMember({"corr", "euclid"}))
      ->envname("PROTOTREE_METRIC");
  cmd_cluster->add_flag("--scale", cluster.scale, "Centre and scale feature columns")->envname("PROTOTREE_SCALE");
  cmd_cluster->add_option("--linkage", cluster.linkage, "minimax | complete")
      ->required()
      ->check(CLI::IsMember({"minimax", "complete"}))
      ->envname("PROTOTREE_LINKAGE");
  cmd_cluster->add_option("--output", cluster.output, "Tree file to write")->required()->envname("PROTOTREE_OUTPUT");

  CutArgs cut;
  auto* cmd_cut = app.add_subcommand("cut", "Write a flat clustering of a tree as CSV");
  cmd_cut->add_option("--tree", cut.tree, "Tree file")->required()->envname("PROTOTREE_TREE");
  auto* opt_height = cmd_cut->add_option("--height", cut.height, "Cut at this height")->envname("PROTOTREE_HEIGHT");
  auto* opt_k = cmd_cut->add_option("--k", cut.k, "Number of clusters")
                    ->check(CLI::PositiveNumber)
                    ->envname("PROTOTREE_K");
  auto* opt_dynamic = cmd_cut->add_flag("--dynamic", cut.dynamic, "Adaptive cut")->envname("PROTOTREE_DYNAMIC");
  cmd_cut->add_option("--min-size", cut.min_size, "Smallest cluster for --dynamic")
      ->check(CLI::PositiveNumber)
      ->envname("PROTOTREE_MIN_SIZE");
  opt_height->excludes(opt_k)->excludes(opt_dynamic);
  opt_k->excludes(opt_dynamic);
  cmd_cut->add_option("--output", cut.output, "CSV to write")->required()->envname("PROTOTREE_OUTPUT");

  HclustArgs hclust;
  auto* cmd_hclust = app.add_subcommand("hclust", "Write the merge table of a tree as CSV");
  cmd_hclust->add_option("--tree", hclust.tree, "Tree file")->required()->envname("PROTOTREE_TREE");
  cmd_hclust->add_option("--output", hclust.output, "CSV to write")->required()->envname("PROTOTREE_OUTPUT");

  ServeArgs serve;
  auto* cmd_serve = app.add_subcommand("serve", "Serve a tree to the browser UI");
  cmd_serve->add_option("--tree", serve.tree, "Tree file")->required()->envname("PROTOTREE_TREE");
  cmd_serve->add_option("--labels", serve.labels, "Label manifests (first complete one is active)")
      ->delimiter(',')
      ->envname("PROTOTREE_LABELS");
  cmd_serve->add_option("--assets", serve.assets, "Directory served under /assets")->envname("PROTOTREE_ASSETS");
  cmd_serve->add_option("--state", serve.state, "Directory for saved sessions")->envname("PROTOTREE_STATE");
  cmd_serve->add_option("--ui", serve.ui, "UI bundle served at /")->envname("PROTOTREE_UI");
  cmd_serve->add_option("--host", serve.host, "Bind address")->capture_default_str()->envname("PROTOTREE_HOST");
  cmd_serve->add_option("--port", serve.port, "Port; 0 picks a free one")
      ->capture_default_str()
      ->check(CLI::Range(0, 65535))
      ->envname("PROTOTREE_PORT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cmd_cluster) return run_cluster(cluster);
    if (*cmd_cut) return run_cut(cut);
    if (*cmd_hclust) return run_hclust(hclust);
    return run_serve(serve);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const prototree::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
