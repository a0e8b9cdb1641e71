#ifndef KDDFS_CLI_HPP
#define KDDFS_CLI_HPP

namespace kddfs {

// Entry point for the kddfs tool. Exit status: 0 success, 1 runtime
// failure, 2 usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace kddfs

#endif
