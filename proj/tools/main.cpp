#include "inexact/cli.hpp"

int main(int argc, char** argv) { return inexact::cli::run(argc, argv); }
