#pragma once

#include <filesystem>
#include <iosfwd>

#include "bellsim/experiment.hpp"

namespace bellsim {

// Line-oriented text format:
//   bellsim-db v1 seed=<u64> dist=<tag> n=<count>
//   <k> <x> <y> <z>          (one line per trial, %.17g)

void write_database(std::ostream& out, const TrialDatabase& db);
TrialDatabase read_database(std::istream& in);

TrialDatabase read_database(const std::filesystem::path& path);

}  // namespace bellsim
