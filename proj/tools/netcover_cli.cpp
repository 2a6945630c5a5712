#include "netcover/cli.hpp"

int main(int argc, char** argv) { return netcover::cli::run(argc, argv); }
