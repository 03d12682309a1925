#include "onmf/cli.hpp"

int main(int argc, char** argv) {
    return onmf::cli_main(argc, argv);
}
