#ifndef PROCNET_CLI_H_
#define PROCNET_CLI_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "procnet/classify.h"

namespace procnet {

enum ExitCode { kExitOk = 0, kExitInput = 1, kExitValidation = 2 };

// Subcommands train, classify, extract, compare and pipeline.
int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err);

enum class Split { kTrain, kDev, kTest };

// 60/20/20 by FNV-1a over "<seed>:<id>".
Split split_of(const std::string &id, uint64_t seed);
uint64_t fnv1a64(std::string_view bytes);

}  // namespace procnet

#endif  // PROCNET_CLI_H_
