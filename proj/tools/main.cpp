#include "tempctl/cli/commands.hpp"

int main(int argc, char** argv) { return tempctl::cli::main(argc, argv); }
