#include "ctb/harness.hpp"

int main(int argc, char** argv) { return ctb::cli::main_entry(argc, argv); }
