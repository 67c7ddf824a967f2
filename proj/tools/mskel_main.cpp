#include "mskel/cli.hpp"

int main(int argc, char** argv) { return mskel::run_cli(argc, argv); }
