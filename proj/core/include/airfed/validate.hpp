#pragma once

#include <ostream>

namespace airfed {

/// Quick module-level property suite behind the `validate` CLI subcommand.
/// Prints one ok/FAIL line per property; returns true when all pass.
bool run_validation_suite(std::ostream& out);

}  // namespace airfed
