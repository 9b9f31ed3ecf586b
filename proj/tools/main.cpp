#include "cli.hpp"

int main(int argc, char** argv) { return slitqa::cli::run_main(argc, argv); }
