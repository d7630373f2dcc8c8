#include "rnla/cli.hpp"

int main(int argc, char** argv) { return rnla::cli::main_entry(argc, argv); }
