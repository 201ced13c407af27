#ifndef PROCNET_CONFIG_H_
#define PROCNET_CONFIG_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "procnet/classify.h"
#include "procnet/extract.h"
#include "procnet/order.h"
#include "procnet/petri.h"
#include "procnet/similarity.h"

namespace procnet {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string &what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// ---------------------------------------------------------------------------
// TOML subset: [table] and [table.sub] headers, key = value with basic or
// literal strings, integers, floats, booleans and (possibly multi-line)
// arrays of strings. '#' starts a comment.

using TomlValue =
    std::variant<std::string, int64_t, double, bool, std::vector<std::string>>;

// Keys are dotted paths ("extract.object_deprels"). Throws ConfigError.
std::map<std::string, TomlValue> parse_toml(std::string_view text);

// ---------------------------------------------------------------------------

enum class ClassifierKind { kRule, kLogreg, kExternal, kNone };

const char *classifier_kind_name(ClassifierKind kind);
// "rule", "logreg", "external", "none". Throws ConfigError.
ClassifierKind parse_classifier_kind(std::string_view name);

struct OutputFormats {
  bool json = true;
  bool pnml = true;
  bool dot = true;
};

struct PipelineConfig {
  ClassifierKind classifier = ClassifierKind::kRule;
  std::string model_path;
  std::string predictions_path;
  double threshold = -1.0;  // < 0: keep the model's own threshold
  RuleConfig rule;
  ExtractionConfig extraction;
  OrderingConfig ordering;
  NetConfig net;
  LogRegHyper hyper;
  OutputFormats outputs;
  size_t state_budget = kDefaultStateBudget;
  int jobs = 1;
};

// Overlays the settings in `toml` on `base`. Unknown keys and wrongly typed
// values are errors. Throws ConfigError.
PipelineConfig apply_config(std::string_view toml, PipelineConfig base = {});
PipelineConfig load_config(const std::string &path,
                           PipelineConfig base = {});

// External classification needs a predictions file, logreg a model file.
// Throws ConfigError.
void check_config(const PipelineConfig &config);

// Renders the settings back as TOML that apply_config accepts.
std::string config_to_toml(const PipelineConfig &config);

}  // namespace procnet

#endif  // PROCNET_CONFIG_H_
