#include "cli.hpp"

int main(int argc, char** argv) { return inter_mdm::cli::run_cli(argc, argv); }
