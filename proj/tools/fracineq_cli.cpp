#include "fracineq/cli.hpp"

int main(int argc, char** argv) { return fracineq::run_cli(argc, argv); }
