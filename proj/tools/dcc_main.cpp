#include "dcc/harness.hpp"

int main(int argc, char** argv) { return dcc::cli_main(argc, argv); }
