#include "qcommit/cli.hpp"

int main(int argc, char** argv) { return qcommit::cli::main_entry(argc, argv); }
