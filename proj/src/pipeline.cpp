#include "cwemap/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <sstream>

#include "json.hpp"

#include "cwemap/csv.hpp"
#include "cwemap/errors.hpp"

namespace cwemap {

namespace {

std::string flag(bool value) { return value ? "1" : "0"; }

std::string cell_suffix(WeightScheme scheme, int k, bool lsa) {
  std::string name = scheme_name(scheme) + "_k" + std::to_string(k);
  if (lsa) name += "_lsa";
  return name;
}

}  // namespace

std::string lsa_mode_name(LsaMode mode) {
  switch (mode) {
    case LsaMode::Off: return "off";
    case LsaMode::On: return "on";
    case LsaMode::Both: return "both";
  }
  return "off";
}

LsaMode parse_lsa_mode(const std::string& name) {
  if (name == "off") return LsaMode::Off;
  if (name == "on") return LsaMode::On;
  if (name == "both") return LsaMode::Both;
  throw UserError("lsa mode must be off, on, or both; got \"" + name + "\"");
}

std::string similarity_kind_name(SimilarityKind kind) {
  return kind == SimilarityKind::Cosine ? "cosine" : "jaccard";
}

SimilarityKind parse_similarity_kind(const std::string& name) {
  if (name == "cosine") return SimilarityKind::Cosine;
  if (name == "jaccard") return SimilarityKind::Jaccard;
  throw UserError("similarity must be cosine or jaccard; got \"" + name + "\"");
}

namespace {

std::vector<std::string> split_csv_flag(const std::string& value) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : value) {
    if (c == ',') {
      if (!current.empty()) parts.push_back(current);
      current.clear();
    } else if (c != ' ') {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

}  // namespace

std::vector<WeightScheme> parse_scheme_list(const std::string& csv_names) {
  std::vector<WeightScheme> schemes;
  for (const std::string& name : split_csv_flag(csv_names)) {
    schemes.push_back(parse_scheme(name));
  }
  std::sort(schemes.begin(), schemes.end());
  schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
  if (schemes.empty()) {
    throw UserError("at least one weighting scheme must be selected");
  }
  return schemes;
}

std::vector<int> parse_gram_order_list(const std::string& csv_values) {
  std::vector<int> orders;
  for (const std::string& value : split_csv_flag(csv_values)) {
    try {
      orders.push_back(std::stoi(value));
    } catch (const std::exception&) {
      throw UserError("bad gram order \"" + value + "\"");
    }
    if (orders.back() < 1 || orders.back() > 3) {
      throw UserError("gram orders must be 1, 2, or 3");
    }
  }
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  if (orders.empty()) {
    throw UserError("at least one gram order must be selected");
  }
  return orders;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw UserError("config file does not exist: " + path.string());
  }
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(csv::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw UserError("cannot parse config file " + path.string() + ": " + e.what());
  }
  if (!root.is_object()) {
    throw UserError("config file " + path.string() + " must contain a JSON object");
  }
  RunConfig config;
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
  };
  try {
    for (const auto& [key, value] : root.items()) {
      if (key == "manifest") {
        config.manifest = resolve(value.get<std::string>());
      } else if (key == "nvd_mapping") {
        config.nvd_mapping = resolve(value.get<std::string>());
      } else if (key == "stopwords") {
        config.stopwords = resolve(value.get<std::string>());
      } else if (key == "out") {
        config.out = resolve(value.get<std::string>());
      } else if (key == "schemes") {
        std::vector<WeightScheme> schemes;
        for (const auto& name : value) schemes.push_back(parse_scheme(name.get<std::string>()));
        std::sort(schemes.begin(), schemes.end());
        schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
        config.schemes = schemes;
      } else if (key == "k") {
        std::vector<int> orders;
        for (const auto& k : value) orders.push_back(k.get<int>());
        std::sort(orders.begin(), orders.end());
        orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
        config.gram_orders = orders;
      } else if (key == "lsa") {
        config.lsa = parse_lsa_mode(value.get<std::string>());
      } else if (key == "beta") {
        config.beta = value.get<double>();
      } else if (key == "lsa_threshold") {
        config.lsa_threshold = value.get<double>();
      } else if (key == "similarity") {
        config.similarity = parse_similarity_kind(value.get<std::string>());
      } else if (key == "threads") {
        config.threads = value.get<unsigned>();
      } else if (key == "dump_vocab") {
        config.dump_vocab = value.get<bool>();
      } else if (key == "dump_weights") {
        config.dump_weights = value.get<bool>();
      } else {
        throw UserError("config file " + path.string() + ": unknown key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UserError("config file " + path.string() + ": " + e.what());
  }
  return config;
}

LoadedInputs load_inputs(const RunConfig& config) {
  if (config.schemes.empty()) throw UserError("at least one weighting scheme must be selected");
  if (config.gram_orders.empty()) throw UserError("at least one gram order must be selected");
  if (config.lsa_threshold < 0.0) throw UserError("lsa threshold must be non-negative");
  if (config.manifest.empty()) throw UserError("no corpus manifest given");
  if (config.nvd_mapping.empty()) throw UserError("no vulnerability mapping file given");
  if (config.stopwords.empty()) throw UserError("no stop word list given");

  LoadedInputs inputs;
  inputs.nvd = load_nvd_mapping(config.nvd_mapping);
  inputs.allowed = allowed_cwe_set(inputs.nvd);
  inputs.corpus = load_corpus(config.manifest, inputs.allowed.cwe_ids);
  inputs.stops = StopWordList::load(config.stopwords);
  inputs.qualification = qualify_corpus(inputs.corpus, inputs.nvd, inputs.allowed);
  inputs.labels = label_map(inputs.qualification);
  return inputs;
}

namespace {

struct PerOrderData {
  Vocabulary vocab;
  std::vector<DocumentTermCounts> counts;
  CorpusStats stats;
};

void run_parallel(std::size_t jobs, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || jobs < 2) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(jobs));
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < jobs; i += workers) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

}  // namespace

RunResult compute_grid(const LoadedInputs& inputs, const RunConfig& config) {
  std::vector<std::string> doc_ids;
  doc_ids.reserve(inputs.corpus.documents.size());
  for (const RawDocument& doc : inputs.corpus.documents) doc_ids.push_back(doc.id);

  std::map<int, PerOrderData> per_order;
  for (int k : config.gram_orders) {
    PerOrderData data;
    data.vocab = build_vocabulary(inputs.corpus, k, inputs.stops);
    data.counts = count_corpus(inputs.corpus, data.vocab, inputs.stops);
    data.stats = compute_stats(data.counts, data.vocab, config.beta);
    per_order.emplace(k, std::move(data));
  }

  RunResult result;
  for (const auto& [k, data] : per_order) {
    result.stats.push_back(descriptive_stats(inputs.corpus, data.vocab, data.counts));
  }

  const bool with_plain = config.lsa != LsaMode::On;
  const bool with_lsa = config.lsa != LsaMode::Off;

  struct PairJob {
    WeightScheme scheme;
    int k;
  };
  std::vector<PairJob> jobs;
  for (WeightScheme scheme : config.schemes) {
    for (int k : config.gram_orders) {
      jobs.push_back({scheme, k});
    }
  }

  std::vector<std::vector<GridCell>> cell_results(jobs.size());
  std::vector<WeaknessGrid> grids(jobs.size());
  run_parallel(jobs.size(), config.threads, [&](std::size_t j) {
    const auto& [scheme, k] = jobs[j];
    const PerOrderData& data = per_order.at(k);
    WeightMatrix weights = weigh(data.counts, data.stats, scheme, k);
    DenseMatrix doc_similarity = config.similarity == SimilarityKind::Cosine
                                     ? cosine_matrix(weights, doc_ids)
                                     : jaccard_matrix(weights, doc_ids);
    grids[j] = {scheme, k, weakness_similarity_grid(doc_similarity, inputs.corpus)};

    auto make_cell = [&](bool lsa, const DenseMatrix& matrix) {
      GridCell cell;
      cell.scheme = scheme;
      cell.k = k;
      cell.lsa = lsa;
      MappingMatrix mapping = extract_vuln_by_weakness(matrix, inputs.corpus);
      cell.mappings = map_vulnerabilities(mapping, inputs.labels);
      cell.distribution = similarity_distribution(mapping);
      cell.precision = per_repository_precision(cell.mappings, inputs.labels, inputs.corpus);
      for (PrecisionCell& pc : cell.precision) {
        pc.scheme = scheme;
        pc.k = k;
        pc.lsa = lsa;
      }
      return cell;
    };

    if (with_plain) {
      cell_results[j].push_back(make_cell(false, doc_similarity));
    }
    if (with_lsa) {
      LsaOutput lsa_output = lsa_pipeline(doc_similarity, ReductionPolicy{config.lsa_threshold});
      GridCell cell = make_cell(true, lsa_output.reduced);
      cell.spectrum = std::move(lsa_output.spectrum);
      cell.zeroed = std::move(lsa_output.zeroed);
      cell.zeroed_fraction = lsa_output.zeroed_fraction;
      cell_results[j].push_back(std::move(cell));
    }
  });

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    for (GridCell& cell : cell_results[j]) {
      result.cells.push_back(std::move(cell));
    }
    result.weakness_grids.push_back(std::move(grids[j]));
  }
  return result;
}

std::string mapping_csv_name(WeightScheme scheme, int k, bool lsa) {
  return "mapping_" + cell_suffix(scheme, k, lsa) + ".csv";
}

std::string distribution_csv_name(WeightScheme scheme, int k, bool lsa) {
  return "maxsim_" + cell_suffix(scheme, k, lsa) + ".csv";
}

std::string spectrum_csv_name(WeightScheme scheme, int k) {
  return "spectrum_" + cell_suffix(scheme, k, false) + ".csv";
}

std::string weakness_grid_csv_name(WeightScheme scheme, int k) {
  return "weakness_grid_" + cell_suffix(scheme, k, false) + ".csv";
}

namespace {

std::string serialize_inventory(const Corpus& corpus) {
  std::string out = "id,kind,repository,segments\n";
  for (const RawDocument& doc : corpus.documents) {
    out += csv::join_row({doc.id, kind_name(doc.kind), repository_name(doc.repository),
                          std::to_string(doc.segments.size())});
  }
  return out;
}

std::string serialize_qualification(const std::vector<QualificationRecord>& records) {
  std::string out = "vulnerability_id,qualified,cwe_id,route,reason\n";
  for (const QualificationRecord& record : records) {
    const QualificationResult& result = record.result;
    if (result.label) {
      out += csv::join_row({record.vulnerability_id, "1", result.label->cwe_id,
                            route_name(result.label->route), ""});
    } else {
      out += csv::join_row({record.vulnerability_id, "0", "", "", reason_name(*result.reason)});
    }
  }
  return out;
}

std::string serialize_mappings(const GridCell& cell,
                               const std::map<std::string, GroundTruthLabel>& labels) {
  std::string out = "vulnerability_id,predicted_cwe,score,tied,tie_resolved_by,ground_truth_cwe,agree\n";
  for (const VulnMapping& mapping : cell.mappings) {
    auto label = labels.find(mapping.vulnerability_id);
    std::string ground_truth = label == labels.end() ? "" : label->second.cwe_id;
    std::string agree;
    if (!ground_truth.empty()) {
      agree = (mapping.predicted_cwe && *mapping.predicted_cwe == ground_truth) ? "1" : "0";
    }
    out += csv::join_row({mapping.vulnerability_id, mapping.predicted_cwe.value_or(""),
                          csv::format_real(mapping.score), flag(mapping.tied),
                          tie_resolution_name(mapping.tie_resolved_by), ground_truth, agree});
  }
  return out;
}

std::string serialize_distribution(const GridCell& cell) {
  std::string out = "vulnerability_id,max_similarity\n";
  for (const auto& [id, value] : cell.distribution) {
    out += csv::join_row({id, csv::format_real(value)});
  }
  return out;
}

std::string serialize_spectrum(const GridCell& cell) {
  std::string out = "index,singular_value,zeroed\n";
  for (std::size_t i = 0; i < cell.spectrum.size(); ++i) {
    out += csv::join_row({std::to_string(i), csv::format_real(cell.spectrum[i]),
                          cell.zeroed[i] ? "1" : "0"});
  }
  return out;
}

std::string serialize_grid(const DenseMatrix& grid) {
  std::string out = "cwe";
  for (const std::string& label : grid.col_labels) {
    out += ',' + csv::escape(label);
  }
  out += '\n';
  for (std::size_t r = 0; r < grid.rows; ++r) {
    std::vector<std::string> fields = {grid.row_labels[r]};
    for (std::size_t c = 0; c < grid.cols; ++c) {
      fields.push_back(csv::format_real(grid.at(r, c)));
    }
    out += csv::join_row(fields);
  }
  return out;
}

std::string serialize_stats(const std::vector<DescriptiveStatsRow>& stats) {
  static const char* kOrderName[] = {"", "unigrams", "bigrams", "trigrams"};
  std::string out = "statistic";
  for (const DescriptiveStatsRow& row : stats) out += std::string(",") + kOrderName[row.k];
  out += '\n';
  auto emit = [&](const std::string& name, auto getter) {
    out += name;
    for (const DescriptiveStatsRow& row : stats) out += ',' + getter(row);
    out += '\n';
  };
  emit("unique_kgrams",
       [](const DescriptiveStatsRow& r) { return std::to_string(r.unique_kgrams); });
  emit("avg_document_length",
       [](const DescriptiveStatsRow& r) { return csv::format_real(r.avg_document_length); });
  emit("avg_weakness_length",
       [](const DescriptiveStatsRow& r) { return csv::format_real(r.avg_weakness_length); });
  emit("avg_vulnerability_length",
       [](const DescriptiveStatsRow& r) { return csv::format_real(r.avg_vulnerability_length); });
  return out;
}

std::string serialize_vocab(const Vocabulary& vocab) {
  std::string out = "gram,index,total_count\n";
  for (std::size_t j = 0; j < vocab.m(); ++j) {
    out += csv::join_row({vocab.grams[j], std::to_string(j), std::to_string(vocab.totals[j])});
  }
  return out;
}

std::string serialize_weights(const WeightMatrix& weights) {
  std::string out = "# scheme=" + scheme_name(weights.scheme) + " k=" + std::to_string(weights.k) +
                    " n=" + std::to_string(weights.rows) + " m=" + std::to_string(weights.cols) +
                    "\n";
  out += "i,j,value\n";
  for (std::size_t i = 0; i < weights.row_entries.size(); ++i) {
    for (const auto& [column, value] : weights.row_entries[i]) {
      out += csv::join_row(
          {std::to_string(i), std::to_string(column), csv::format_real(value)});
    }
  }
  return out;
}

}  // namespace

std::string serialize_precision_cells(const std::vector<GridCell>& cells) {
  std::string out = "scheme,k,lsa,repository,same,different,precision\n";
  for (const GridCell& cell : cells) {
    for (const PrecisionCell& pc : cell.precision) {
      std::string repo = pc.repository ? repository_name(*pc.repository) : "all";
      std::optional<double> value = pc.precision();
      out += csv::join_row({scheme_name(pc.scheme), std::to_string(pc.k), flag(pc.lsa), repo,
                            std::to_string(pc.same), std::to_string(pc.different),
                            value ? csv::format_real(*value) : "NA"});
    }
  }
  return out;
}

void cmd_ingest(const RunConfig& config) {
  if (config.out.empty()) throw UserError("no output directory given");
  LoadedInputs inputs = load_inputs(config);
  std::filesystem::create_directories(config.out);
  csv::atomic_write_file(config.out / "inventory.csv", serialize_inventory(inputs.corpus));
  csv::atomic_write_file(config.out / "qualification.csv",
                         serialize_qualification(inputs.qualification));
}

void cmd_run(const RunConfig& config) {
  if (config.out.empty()) throw UserError("no output directory given");
  LoadedInputs inputs = load_inputs(config);
  RunResult result = compute_grid(inputs, config);

  std::filesystem::create_directories(config.out);
  csv::atomic_write_file(config.out / "inventory.csv", serialize_inventory(inputs.corpus));
  csv::atomic_write_file(config.out / "qualification.csv",
                         serialize_qualification(inputs.qualification));
  for (const GridCell& cell : result.cells) {
    csv::atomic_write_file(config.out / mapping_csv_name(cell.scheme, cell.k, cell.lsa),
                           serialize_mappings(cell, inputs.labels));
    csv::atomic_write_file(config.out / distribution_csv_name(cell.scheme, cell.k, cell.lsa),
                           serialize_distribution(cell));
    if (cell.lsa) {
      csv::atomic_write_file(config.out / spectrum_csv_name(cell.scheme, cell.k),
                             serialize_spectrum(cell));
    }
  }
  for (const WeaknessGrid& grid : result.weakness_grids) {
    csv::atomic_write_file(config.out / weakness_grid_csv_name(grid.scheme, grid.k),
                           serialize_grid(grid.grid));
  }
  csv::atomic_write_file(config.out / "descriptive_stats.csv", serialize_stats(result.stats));
  csv::atomic_write_file(config.out / "precision.csv", serialize_precision_cells(result.cells));

  if (config.dump_vocab || config.dump_weights) {
    for (int k : config.gram_orders) {
      Vocabulary vocab = build_vocabulary(inputs.corpus, k, inputs.stops);
      if (config.dump_vocab) {
        csv::atomic_write_file(config.out / ("vocab_k" + std::to_string(k) + ".csv"),
                               serialize_vocab(vocab));
      }
      if (config.dump_weights) {
        auto counts = count_corpus(inputs.corpus, vocab, inputs.stops);
        CorpusStats stats = compute_stats(counts, vocab, config.beta);
        for (WeightScheme scheme : config.schemes) {
          WeightMatrix weights = weigh(counts, stats, scheme, k);
          csv::atomic_write_file(
              config.out / ("weights_" + cell_suffix(scheme, k, false) + ".csv"),
              serialize_weights(weights));
        }
      }
    }
  }
}

}  // namespace cwemap
