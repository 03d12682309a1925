#ifndef ONMF_CLI_HPP_
#define ONMF_CLI_HPP_

namespace onmf {

// Experiment harness entry point. Subcommands: gen, factorize, eval, sweep.
// Returns 0 on success, 1 on module errors, 2 on usage errors.
int cli_main(int argc, const char* const* argv);

}  // namespace onmf

#endif  // ONMF_CLI_HPP_
