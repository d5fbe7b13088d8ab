#include "cli.hpp"

int main(int argc, char** argv) { return cosym::cli::run_cli(argc, argv); }
