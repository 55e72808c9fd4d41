#include "integrity/cli.hpp"

int main(int argc, char** argv) { return integrity::cli::run(argc, argv); }
