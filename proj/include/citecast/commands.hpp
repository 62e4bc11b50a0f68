#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "citecast/dataset.hpp"
#include "citecast/evaluation.hpp"
#include "citecast/run_config.hpp"

namespace citecast {

// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitInput = 2, kExitUnknownEntity = 3 };

// Parses the command line, runs one subcommand and maps exceptions to exit
// codes. Messages go to `err`, results to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Maps an in-flight exception to an exit code and prints it.
int report_exception(std::ostream& err);

CohortSpec cohort_spec(const RunConfig& config);
DatasetOptions dataset_options(const RunConfig& config);
CrossValidationConfig cross_validation_config(const RunConfig& config);
Corpus load_corpus(const RunConfig& config);

// Each command writes into config.out, including resolved_config.txt, and
// throws on failure.
void cmd_synth(const RunConfig& config, std::ostream& out);
void cmd_cohort(const RunConfig& config, std::ostream& out);
void cmd_train(const RunConfig& config, std::ostream& out);
std::vector<double> cmd_predict(const RunConfig& config, std::ostream& out);
EvaluationReport cmd_evaluate(const RunConfig& config, std::ostream& out);
void cmd_ablate(const RunConfig& config, std::ostream& out);
void cmd_epoch_study(const RunConfig& config, std::ostream& out);
void cmd_hirsch_grid(const RunConfig& config, std::ostream& out);
void cmd_baseline(const RunConfig& config, std::ostream& out);

}  // namespace citecast
