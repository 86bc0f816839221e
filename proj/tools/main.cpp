#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cwemap/errors.hpp"
#include "cwemap/pipeline.hpp"
#include "cwemap/report.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonFlags {
  std::string config;
  std::string manifest;
  std::string nvd_mapping;
  std::string stopwords;
  std::string out;
  std::string schemes;
  std::string gram_orders;
  std::string lsa;
  std::string similarity;
  double beta = -1.0;
  double lsa_threshold = -1.0;
  int threads = 0;
  bool dump_vocab = false;
  bool dump_weights = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "JSON config file; flags override its values");
  cmd->add_option("--manifest", flags.manifest, "corpus manifest (JSON)");
  cmd->add_option("--nvd-mapping", flags.nvd_mapping, "CVE-to-CWE mapping CSV");
  cmd->add_option("--stopwords", flags.stopwords, "stop word list, one word per line");
  cmd->add_option("--out", flags.out, "output directory for artifacts");
  cmd->add_option("--schemes", flags.schemes,
                  "comma-separated subset of tf,tf-log,tf-bool,tf-idf,dlm-idf");
  cmd->add_option("--k", flags.gram_orders, "comma-separated gram orders from 1,2,3");
  cmd->add_option("--lsa", flags.lsa, "rank reduction: off, on, or both");
  cmd->add_option("--beta", flags.beta, "pivot parameter for length normalization");
  cmd->add_option("--lsa-threshold", flags.lsa_threshold,
                  "singular values at or below this are zeroed");
  cmd->add_option("--similarity", flags.similarity, "cosine (default) or jaccard");
  cmd->add_option("--threads", flags.threads, "worker threads for independent grid cells");
  cmd->add_flag("--dump-vocab", flags.dump_vocab, "also write vocabulary CSVs");
  cmd->add_flag("--dump-weights", flags.dump_weights, "also write weight matrix triplet CSVs");
}

cwemap::RunConfig resolve_config(const CommonFlags& flags) {
  cwemap::RunConfig config;
  if (!flags.config.empty()) {
    config = cwemap::load_config_file(flags.config);
  }
  if (!flags.manifest.empty()) config.manifest = flags.manifest;
  if (!flags.nvd_mapping.empty()) config.nvd_mapping = flags.nvd_mapping;
  if (!flags.stopwords.empty()) config.stopwords = flags.stopwords;
  if (!flags.out.empty()) config.out = flags.out;
  if (!flags.schemes.empty()) config.schemes = cwemap::parse_scheme_list(flags.schemes);
  if (!flags.gram_orders.empty()) {
    config.gram_orders = cwemap::parse_gram_order_list(flags.gram_orders);
  }
  if (!flags.lsa.empty()) config.lsa = cwemap::parse_lsa_mode(flags.lsa);
  if (!flags.similarity.empty()) {
    config.similarity = cwemap::parse_similarity_kind(flags.similarity);
  }
  if (flags.beta >= 0.0) config.beta = flags.beta;
  if (flags.lsa_threshold >= 0.0) config.lsa_threshold = flags.lsa_threshold;
  if (flags.threads > 0) config.threads = static_cast<unsigned>(flags.threads);
  if (flags.dump_vocab) config.dump_vocab = true;
  if (flags.dump_weights) config.dump_weights = true;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maps vulnerability reports to weakness identifiers with k-gram "
               "weighting and cosine similarity, and validates the mapping against "
               "identifier searches"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags ingest_flags;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "load the corpus and write the document inventory and qualification CSVs");
  add_common_flags(ingest, ingest_flags);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand(
      "run", "run the full grid and write mapping, distribution, and precision artifacts");
  add_common_flags(run, run_flags);

  std::string report_out;
  CLI::App* report = app.add_subcommand(
      "report", "rebuild and print the precision table from persisted run artifacts");
  report->add_option("--out", report_out, "output directory of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) {
      cwemap::cmd_ingest(resolve_config(ingest_flags));
    } else if (run->parsed()) {
      cwemap::cmd_run(resolve_config(run_flags));
    } else if (report->parsed()) {
      std::cout << cwemap::build_report(report_out).table;
    }
  } catch (const cwemap::UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
