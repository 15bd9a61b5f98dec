#include "qcqp_stability/cli.hpp"

int main(int argc, char** argv) { return qcqps::run_cli(argc, argv); }
