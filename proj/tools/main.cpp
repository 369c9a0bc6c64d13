#include "climalens/cli.hpp"

int main(int argc, char** argv) { return climalens::cli::run(argc, argv); }
