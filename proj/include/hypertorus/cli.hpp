#pragma once

namespace hypertorus::cli {

// Exit codes: 0 success, 1 I/O or unexpected failure, 2 usage,
// 3 resolution refusal, 4 numerical abort.
int run(int argc, char** argv);

}  // namespace hypertorus::cli
