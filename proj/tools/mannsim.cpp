#include "mann/cli.hpp"

int main(int argc, char** argv) { return mann::cli::main(argc, argv); }
