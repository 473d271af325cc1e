#include "inveff/cli.hpp"

int main(int argc, char** argv) { return inveff::run_cli(argc, argv); }
