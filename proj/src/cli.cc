#include "procnet/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "procnet/config.h"
#include "procnet/pipeline.h"

namespace procnet {

namespace fs = std::filesystem;

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Split split_of(const std::string &id, uint64_t seed) {
  uint64_t bucket = fnv1a64(std::to_string(seed) + ":" + id) % 100;
  if (bucket < 60) return Split::kTrain;
  if (bucket < 80) return Split::kDev;
  return Split::kTest;
}

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path &path, const std::string &content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

// Files and *.conllu files of directories, sorted per directory.
std::vector<fs::path> conllu_inputs(const std::vector<std::string> &inputs) {
  std::vector<fs::path> out;
  for (const auto &in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto &e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".conllu") {
          found.push_back(e.path());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      out.push_back(p);
    } else {
      throw InputError("no such file " + in);
    }
  }
  return out;
}

Document load_document(const fs::path &path) {
  Document d;
  d.name = path.stem().string();
  try {
    d.sentences = parse_conllu(read_file(path));
  } catch (const ConlluError &e) {
    throw ConlluError(e.kind(), path.string() + ": " + e.what(), e.line());
  }
  return d;
}

std::map<std::string, fs::path> pnml_files(const fs::path &dir) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto &e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".pnml") {
      out[e.path().filename().string()] = e.path();
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Options shared by classify, extract and pipeline.
struct PipelineFlags {
  std::string config_path;
  std::string classifier;
  std::string model;
  std::string predictions;
  std::string vvimp;
  double threshold = -1.0;
  int jobs = 1;
  CLI::App *app = nullptr;

  void attach(CLI::App *sub) {
    app = sub;
    sub->add_option("--config", config_path, "TOML settings file")
        ->check(CLI::ExistingFile);
    sub->add_option("--classifier", classifier, "relevance gate")
        ->check(CLI::IsMember({"rule", "logreg", "external", "none"}));
    sub->add_option("--model", model, "classifier model (logreg)");
    sub->add_option("--predictions", predictions,
                    "JSONL {\"id\", \"relevant\"} (external)");
    sub->add_option("--vvimp", vvimp, "subordinate-clause heuristic")
        ->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--threshold", threshold, "decision threshold (logreg)")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--jobs", jobs, "documents processed concurrently")
        ->check(CLI::PositiveNumber);
  }

  PipelineConfig resolve() const {
    PipelineConfig c;
    if (!config_path.empty()) c = load_config(config_path);
    if (app->count("--classifier")) c.classifier = parse_classifier_kind(classifier);
    if (app->count("--model")) c.model_path = model;
    if (app->count("--predictions")) c.predictions_path = predictions;
    if (app->count("--vvimp")) c.extraction.use_vvimp_heuristic = vvimp == "on";
    if (app->count("--threshold")) c.threshold = threshold;
    if (app->count("--jobs")) c.jobs = jobs;
    check_config(c);
    return c;
  }
};

int cmd_train(const std::string &data, const std::string &model_out,
              const PipelineConfig &config, std::ostream &out) {
  std::vector<LabeledSentence> all;
  {
    std::istringstream in(read_file(data));
    all = read_labeled_jsonl(in);
  }
  std::vector<LabeledSentence> train, dev, test;
  for (auto &s : all) {
    switch (split_of(s.id, config.hyper.seed)) {
      case Split::kTrain:
        train.push_back(std::move(s));
        break;
      case Split::kDev:
        dev.push_back(std::move(s));
        break;
      case Split::kTest:
        test.push_back(std::move(s));
        break;
    }
  }
  TextClassifier model = train_text_classifier(train, config.hyper);
  if (config.threshold >= 0.0) model.logreg.threshold = config.threshold;
  write_file(model_out, save_classifier(model));

  out << "split train=" << train.size() << " dev=" << dev.size()
      << " test=" << test.size() << "\n";
  auto report = [&](const char *name, const std::vector<LabeledSentence> &part) {
    out << name;
    if (part.empty()) {
      out << " empty\n";
      return;
    }
    std::vector<bool> pred, gold;
    for (const auto &s : part) {
      pred.push_back(model.predict(s.text).relevant);
      gold.push_back(s.label);
    }
    F1Score f = evaluate_f1(pred, gold);
    out << " precision=" << fixed(f.precision) << " recall=" << fixed(f.recall)
        << " f1=" << fixed(f.f1) << "\n";
  };
  report("dev", dev);
  report("test", test);
  return kExitOk;
}

int cmd_classify(const std::vector<std::string> &inputs,
                 const PipelineConfig &config, const std::string &out_path,
                 std::ostream &out, std::ostream &err) {
  RelevanceGate gate = RelevanceGate::from_config(config);
  std::ostringstream lines;
  auto emit = [&](const std::string &doc, const std::string &id,
                  const RelevanceGate::Decision &d) {
    nlohmann::ordered_json j;
    if (!doc.empty()) j["document"] = doc;
    j["id"] = id;
    j["relevant"] = d.relevant ? 1 : 0;
    if (d.probability) j["probability"] = *d.probability;
    lines << j.dump() << "\n";
  };
  for (const auto &in : inputs) {
    fs::path p(in);
    if (p.extension() == ".jsonl") {
      // Labeled sentences: predictions plus scores against the labels.
      std::istringstream s(read_file(p));
      std::vector<bool> pred, gold;
      for (const auto &sent : read_labeled_jsonl(s)) {
        auto d = gate.decide_text(sent.text, sent.id, "");
        emit("", sent.id, d);
        pred.push_back(d.relevant);
        gold.push_back(sent.label);
      }
      F1Score f = evaluate_f1(pred, gold);
      err << p.filename().string() << " precision=" << fixed(f.precision)
          << " recall=" << fixed(f.recall) << " f1=" << fixed(f.f1) << "\n";
      continue;
    }
    for (const auto &path : conllu_inputs({in})) {
      Document doc = load_document(path);
      for (const auto &tree : doc.sentences) {
        emit(doc.name, tree.key(), gate.decide(tree, doc.name));
      }
    }
  }
  if (out_path.empty()) {
    out << lines.str();
  } else {
    write_file(out_path, lines.str());
  }
  return kExitOk;
}

int cmd_extract(const std::vector<std::string> &inputs, const fs::path &out_dir,
                const PipelineConfig &config, std::ostream &out,
                std::ostream &err) {
  RelevanceGate gate = RelevanceGate::from_config(config);
  std::vector<fs::path> paths = conllu_inputs(inputs);
  if (paths.empty()) throw InputError("no CoNLL-U input");
  std::vector<Document> docs;
  for (const auto &p : paths) docs.push_back(load_document(p));
  std::vector<DocumentResult> results(docs.size());
  parallel_for(docs.size(), config.jobs, [&](size_t i) {
    results[i] = process_document(docs[i], config, gate);
  });

  int code = kExitOk;
  for (const DocumentResult &r : results) {
    fs::path stem = out_dir / r.name;
    if (config.outputs.json) {
      write_file(stem.string() + ".activities.json", document_json(r));
    }
    for (const auto &w : r.warnings) err << r.name << ": warning: " << w << "\n";
    if (!r.net) {
      err << r.name << ": " << (r.empty_document ? "empty document: " : "")
          << r.error << "\n";
      code = kExitValidation;
      continue;
    }
    if (config.outputs.pnml) {
      write_file(stem.string() + ".pnml", to_pnml(*r.net, r.name));
    }
    if (config.outputs.dot) write_file(stem.string() + ".dot", to_dot(*r.net, r.name));
    out << r.name << ": " << r.activities.size() << " activities, "
        << r.net->labeled_transition_count() << " labeled transitions\n";
  }
  return code;
}

WorkflowNet load_net(const fs::path &path) {
  try {
    return parse_pnml(read_file(path));
  } catch (const PetriError &e) {
    throw PetriError(e.kind(), path.string() + ": " + e.what());
  }
}

int cmd_compare(const fs::path &generated, const fs::path &gold,
                const std::string &out_path, int jobs, size_t budget,
                std::ostream &out, std::ostream &err) {
  auto left = pnml_files(generated);
  auto right = pnml_files(gold);
  std::vector<std::string> names;
  bool unmatched = false;
  for (const auto &[name, path] : left) {
    if (right.contains(name)) {
      names.push_back(name);
    } else {
      err << "no gold net for " << path.string() << "\n";
      unmatched = true;
    }
  }
  for (const auto &[name, path] : right) {
    if (!left.contains(name)) {
      err << "no generated net for " << path.string() << "\n";
      unmatched = true;
    }
  }
  if (names.empty()) {
    throw SimilarityError(SimilarityError::Kind::kEmptyCorpus,
                          "no matching .pnml files in " + generated.string() +
                              " and " + gold.string());
  }
  std::vector<CorpusReport> parts(names.size());
  parallel_for(names.size(), jobs, [&](size_t i) {
    NetPair pair{names[i], names[i], load_net(left.at(names[i])),
                 load_net(right.at(names[i]))};
    parts[i] = compare_corpus({pair}, budget);
  });
  CorpusReport report;
  double total = 0.0;
  for (auto &p : parts) {
    total += p.pairs.front().report.score;
    report.pairs.push_back(std::move(p.pairs.front()));
  }
  report.mean = total / static_cast<double>(report.pairs.size());
  std::string json = corpus_report_json(report);
  if (out_path.empty()) {
    out << json;
  } else {
    write_file(out_path, json);
    out << "mean " << fixed(report.mean) << " over " << report.pairs.size()
        << " pairs\n";
  }
  return unmatched ? kExitInput : kExitOk;
}

int exit_code_for(const PetriError &e) {
  return e.kind() == PetriError::Kind::kMalformedPnml ? kExitInput
                                                      : kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"Workflow nets from dependency-parsed instruction text"};
  app.name("procnet");
  app.require_subcommand(1);

  std::string train_data, train_out, train_config;
  uint64_t seed = 13;
  int epochs = 0;
  double lr = 0.0, l2 = -1.0, train_threshold = -1.0;
  CLI::App *train =
      app.add_subcommand("train", "fit the tf-idf logistic regression gate");
  train->add_option("data", train_data, "labeled sentences (JSONL)")->required();
  train->add_option("-o,--out", train_out, "model file to write")->required();
  train->add_option("--config", train_config, "TOML settings file")
      ->check(CLI::ExistingFile);
  train->add_option("--seed", seed, "split and training seed");
  train->add_option("--epochs", epochs)->check(CLI::PositiveNumber);
  train->add_option("--lr", lr)->check(CLI::PositiveNumber);
  train->add_option("--l2", l2)->check(CLI::NonNegativeNumber);
  train->add_option("--threshold", train_threshold)->check(CLI::Range(0.0, 1.0));

  PipelineFlags classify_flags;
  std::vector<std::string> classify_inputs;
  std::string classify_out;
  CLI::App *classify =
      app.add_subcommand("classify", "mark sentences relevant or not");
  classify
      ->add_option("inputs", classify_inputs,
                   "CoNLL-U files, directories or labeled JSONL")
      ->required();
  classify->add_option("-o,--out", classify_out, "JSONL output (default stdout)");
  classify_flags.attach(classify);

  PipelineFlags extract_flags;
  std::vector<std::string> extract_inputs;
  std::string extract_out = ".";
  CLI::App *extract =
      app.add_subcommand("extract", "build nets from CoNLL-U documents");
  extract->add_option("inputs", extract_inputs, "CoNLL-U files or directories")
      ->required();
  extract->add_option("-o,--out-dir", extract_out, "output directory");
  extract_flags.attach(extract);

  std::string cmp_generated, cmp_gold, cmp_out;
  int cmp_jobs = 1;
  size_t cmp_budget = kDefaultStateBudget;
  CLI::App *compare =
      app.add_subcommand("compare", "score generated nets against gold nets");
  compare->add_option("generated", cmp_generated, "directory of .pnml files")
      ->required()
      ->check(CLI::ExistingDirectory);
  compare->add_option("gold", cmp_gold, "directory of .pnml files")
      ->required()
      ->check(CLI::ExistingDirectory);
  compare->add_option("-o,--out", cmp_out, "report file (default stdout)");
  compare->add_option("--jobs", cmp_jobs)->check(CLI::PositiveNumber);
  compare->add_option("--budget", cmp_budget, "reachable-marking cap per net")
      ->check(CLI::PositiveNumber);

  PipelineFlags pipe_flags;
  std::vector<std::string> pipe_inputs;
  std::string pipe_out = ".", pipe_gold;
  CLI::App *pipeline =
      app.add_subcommand("pipeline", "extract, then compare against gold");
  pipeline->add_option("inputs", pipe_inputs, "CoNLL-U files or directories")
      ->required();
  pipeline->add_option("-o,--out-dir", pipe_out, "output directory");
  pipeline->add_option("--gold", pipe_gold, "directory of gold .pnml files")
      ->check(CLI::ExistingDirectory);
  pipe_flags.attach(pipeline);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (train->parsed()) {
      PipelineConfig c;
      if (!train_config.empty()) c = load_config(train_config);
      if (train->count("--seed")) c.hyper.seed = seed;
      if (train->count("--epochs")) c.hyper.epochs = epochs;
      if (train->count("--lr")) c.hyper.learning_rate = lr;
      if (train->count("--l2")) c.hyper.l2 = l2;
      if (train->count("--threshold")) c.threshold = train_threshold;
      return cmd_train(train_data, train_out, c, out);
    }
    if (classify->parsed()) {
      return cmd_classify(classify_inputs, classify_flags.resolve(),
                          classify_out, out, err);
    }
    if (extract->parsed()) {
      return cmd_extract(extract_inputs, extract_out, extract_flags.resolve(),
                         out, err);
    }
    if (compare->parsed()) {
      return cmd_compare(cmp_generated, cmp_gold, cmp_out, cmp_jobs, cmp_budget,
                         out, err);
    }
    if (pipeline->parsed()) {
      PipelineConfig c = pipe_flags.resolve();
      int code = cmd_extract(pipe_inputs, pipe_out, c, out, err);
      if (pipe_gold.empty()) return code;
      fs::path report = fs::path(pipe_out) / "report.json";
      int cmp = cmd_compare(pipe_out, pipe_gold, report.string(), c.jobs,
                            c.state_budget, out, err);
      return std::max(code, cmp);
    }
  } catch (const PetriError &e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const SimilarityError &e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == SimilarityError::Kind::kEmptyCorpus ? kExitInput
                                                           : kExitValidation;
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConlluError &e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ClassifyError &e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError &e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error &e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace procnet
