#include "cli.hpp"

int main(int argc, char** argv) { return discbal::cli::run_cli(argc, argv); }
