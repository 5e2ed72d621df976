#include "nnrank/cli.hpp"

int main(int argc, char** argv) { return nnr::cli::run(argc, argv); }
