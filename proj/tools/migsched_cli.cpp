#include "migsched/cli.hpp"

int main(int argc, char** argv) { return migsched::run_cli(argc, argv); }
