#include "qfsim_cli.hpp"

int main(int argc, char** argv) { return qfsim::cli::run(argc, argv); }
